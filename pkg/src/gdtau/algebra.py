"""Exact polynomial kernels.

Two layers, both over arbitrary-precision rationals (``fractions.Fraction``),
both canonical-printing so that string comparison is a legitimate test:

* :class:`ParamPoly` -- multivariate polynomial in an indexed parameter family
  ("alphabet"), e.g. the initial-data constants ``d1, d2, ...`` or the normal
  coordinates ``c1, c2, ...``.  The parameter with index ``a`` carries weight
  ``a + 1``.
* :class:`DiffPoly` -- polynomial in jet variables with ParamPoly
  coefficients.  The jet variable ``v{a}_{k}`` stands for the k-th
  x-derivative of the a-th dependent variable and carries weight
  ``a + 1 + k``.

No zero coefficients are ever stored, so ``p.terms == q.terms`` is exact
equality and ``str`` output is bit-stable across runs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

from .errors import AlphabetMismatch, NotExact, NotHomogeneous

Rat = Union[int, Fraction]

# --------------------------------------------------------------------------
# parameter polynomials
# --------------------------------------------------------------------------


def _trim(expts: Iterable[int]) -> tuple[int, ...]:
    t = tuple(expts)
    while t and t[-1] == 0:
        t = t[:-1]
    return t


class ParamPoly:
    """Polynomial in parameters ``<alphabet>1, <alphabet>2, ...``.

    terms maps an exponent tuple (position i = parameter index i+1, trailing
    zeros stripped) to a nonzero Fraction.
    """

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: str, terms: Mapping[tuple[int, ...], Rat] | None = None):
        self.alphabet = alphabet
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for expts, coef in terms.items():
                c = Fraction(coef)
                if c:
                    key = _trim(expts)
                    acc = clean.get(key)
                    if acc is None:
                        clean[key] = c
                    else:
                        acc += c
                        if acc:
                            clean[key] = acc
                        else:
                            del clean[key]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, alphabet: str) -> "ParamPoly":
        return cls(alphabet)

    @classmethod
    def const(cls, alphabet: str, value: Rat) -> "ParamPoly":
        return cls(alphabet, {(): Fraction(value)})

    @classmethod
    def var(cls, alphabet: str, index: int) -> "ParamPoly":
        if index < 1:
            raise ValueError("parameter indices start at 1")
        return cls(alphabet, {(0,) * (index - 1) + (1,): Fraction(1)})

    # -- basic predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {()}

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((), Fraction(0))

    def max_index(self) -> int:
        """Largest parameter index that occurs (0 for constants)."""
        return max((len(e) for e in self.terms), default=0)

    # -- ring ops -----------------------------------------------------------

    def _coerce(self, other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"cannot mix alphabets {self.alphabet!r} and {other.alphabet!r}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(self.alphabet, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            acc = out.get(e, Fraction(0)) + c
            if acc:
                out[e] = acc
            else:
                out.pop(e, None)
        res = ParamPoly(self.alphabet)
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = ParamPoly(self.alphabet)
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return ParamPoly.zero(self.alphabet)
            res = ParamPoly(self.alphabet)
            res.terms = {e: k * c for e, k in self.terms.items()}
            return res
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                n = max(len(e1), len(e2))
                key = _trim(
                    tuple(
                        (e1[i] if i < len(e1) else 0) + (e2[i] if i < len(e2) else 0)
                        for i in range(n)
                    )
                )
                acc = out.get(key, Fraction(0)) + c1 * c2
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        res = ParamPoly(self.alphabet)
        res.terms = out
        return res

    __rmul__ = __mul__

    def __truediv__(self, scalar: Rat):
        return self * (Fraction(1) / Fraction(scalar))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = ParamPoly.const(self.alphabet, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # -- grading ------------------------------------------------------------

    def degrees(self) -> set[int]:
        """Set of weights present; parameter index a weighs a + 1."""
        return {sum(e * (i + 2) for i, e in enumerate(expts)) for expts in self.terms}

    # -- substitution -------------------------------------------------------

    def substitute(self, values: Mapping[int, "ParamPoly"], alphabet: str) -> "ParamPoly":
        """Full substitution: every parameter present must be mapped to a
        polynomial over `alphabet`."""
        out = ParamPoly.zero(alphabet)
        for expts, coef in self.terms.items():
            term = ParamPoly.const(alphabet, coef)
            for i, e in enumerate(expts):
                if not e:
                    continue
                idx = i + 1
                if idx not in values:
                    raise ValueError(f"no substitution given for {self.alphabet}{idx}")
                val = values[idx]
                if val.alphabet != alphabet:
                    raise AlphabetMismatch("substitution values use the wrong alphabet")
                term = term * val**e
            out = out + term
        return out

    def evaluate(self, assignment: Mapping[int, Rat]) -> "ParamPoly":
        """Partial numeric substitution; unassigned parameters survive."""
        out = ParamPoly.zero(self.alphabet)
        for expts, coef in self.terms.items():
            c = Fraction(coef)
            rest = list(expts)
            for idx, val in assignment.items():
                i = idx - 1
                if i < len(rest) and rest[i]:
                    c *= Fraction(val) ** rest[i]
                    rest[i] = 0
            out = out + ParamPoly(self.alphabet, {_trim(rest): c})
        return out

    # -- printing -----------------------------------------------------------

    def _sorted_terms(self):
        width = max((len(e) for e in self.terms), default=0)

        def key(item):
            e = item[0]
            padded = e + (0,) * (width - len(e))
            return tuple(reversed(padded))

        return sorted(self.terms.items(), key=key, reverse=True)

    def _monomial_str(self, expts: tuple[int, ...]) -> str:
        factors = []
        for i in range(len(expts) - 1, -1, -1):
            e = expts[i]
            if not e:
                continue
            name = f"{self.alphabet}{i + 1}"
            factors.append(name if e == 1 else f"{name}^{e}")
        return "*".join(factors)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for n, (expts, coef) in enumerate(self._sorted_terms()):
            mono = self._monomial_str(expts)
            mag = abs(coef)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if n == 0:
                pieces.append(body if coef > 0 else f"-{body}")
            else:
                pieces.append(("+ " if coef > 0 else "- ") + body)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"ParamPoly({self.alphabet!r}: {self})"


# --------------------------------------------------------------------------
# differential polynomials
# --------------------------------------------------------------------------

Jet = tuple[int, int]  # (variable index a >= 1, derivative order k >= 0)
JetMono = tuple[tuple[Jet, int], ...]  # ((a,k), exponent), sorted ascending


def _mono_from_dict(d: Mapping[Jet, int]) -> JetMono:
    return tuple(sorted((jet, e) for jet, e in d.items() if e))


def jet_weight(jet: Jet) -> int:
    a, k = jet
    return a + 1 + k


class DiffPoly:
    """Differential polynomial: jet monomials with ParamPoly coefficients."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: str, terms: Mapping[JetMono, ParamPoly | Rat] | None = None):
        self.alphabet = alphabet
        clean: dict[JetMono, ParamPoly] = {}
        if terms:
            for mono, coef in terms.items():
                c = coef if isinstance(coef, ParamPoly) else ParamPoly.const(alphabet, coef)
                if c.alphabet != alphabet:
                    raise AlphabetMismatch("coefficient alphabet differs from polynomial alphabet")
                if c.is_zero():
                    continue
                acc = clean.get(mono)
                clean[mono] = c if acc is None else acc + c
                if clean[mono].is_zero():
                    del clean[mono]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, alphabet: str) -> "DiffPoly":
        return cls(alphabet)

    @classmethod
    def const(cls, alphabet: str, value: ParamPoly | Rat) -> "DiffPoly":
        return cls(alphabet, {(): value})

    @classmethod
    def jet(cls, alphabet: str, a: int, k: int = 0) -> "DiffPoly":
        if a < 1 or k < 0:
            raise ValueError("jet variables need a >= 1, k >= 0")
        return cls(alphabet, {(((a, k), 1),): 1})

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def jets(self) -> set[Jet]:
        out: set[Jet] = set()
        for mono in self.terms:
            out.update(jet for jet, _ in mono)
        return out

    # -- ring ops -------------------------------------------------------------

    def _coerce(self, other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"cannot mix alphabets {self.alphabet!r} and {other.alphabet!r}"
                )
            return other
        if isinstance(other, (int, Fraction, ParamPoly)):
            return DiffPoly.const(self.alphabet, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for mono, c in o.terms.items():
            acc = out.get(mono)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = acc
        res = DiffPoly(self.alphabet)
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = DiffPoly(self.alphabet)
        res.terms = {m: -c for m, c in self.terms.items()}
        return res

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            c = other if isinstance(other, ParamPoly) else ParamPoly.const(self.alphabet, other)
            if c.alphabet != self.alphabet:
                raise AlphabetMismatch("scalar alphabet differs")
            if c.is_zero():
                return DiffPoly.zero(self.alphabet)
            res = DiffPoly(self.alphabet)
            terms = {}
            for m, k in self.terms.items():
                prod = k * c
                if not prod.is_zero():
                    terms[m] = prod
            res.terms = terms
            return res
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out: dict[JetMono, ParamPoly] = {}
        for m1, c1 in self.terms.items():
            d1 = dict(m1)
            for m2, c2 in o.terms.items():
                merged = dict(d1)
                for jet, e in m2:
                    merged[jet] = merged.get(jet, 0) + e
                key = _mono_from_dict(merged)
                prod = c1 * c2
                acc = out.get(key)
                acc = prod if acc is None else acc + prod
                if acc.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = acc
        res = DiffPoly(self.alphabet)
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = DiffPoly.const(self.alphabet, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            other = DiffPoly.const(self.alphabet, other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # -- calculus --------------------------------------------------------------

    def partial(self, a: int, k: int) -> "DiffPoly":
        """Partial derivative with respect to the jet variable (a, k)."""
        jet = (a, k)
        out: dict[JetMono, ParamPoly] = {}
        for mono, coef in self.terms.items():
            d = dict(mono)
            e = d.get(jet)
            if not e:
                continue
            if e == 1:
                del d[jet]
            else:
                d[jet] = e - 1
            key = _mono_from_dict(d)
            term = coef * e
            acc = out.get(key)
            acc = term if acc is None else acc + term
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
        res = DiffPoly(self.alphabet)
        res.terms = out
        return res

    def evaluate(self, value: Callable[[int, int], ParamPoly]) -> ParamPoly:
        """Substitute every jet variable via ``value(a, k)`` (same alphabet)."""
        out = ParamPoly.zero(self.alphabet)
        for mono, coef in self.terms.items():
            term = coef
            for (a, k), e in mono:
                term = term * value(a, k) ** e
            out = out + term
        return out

    # -- printing ----------------------------------------------------------------

    @staticmethod
    def _mono_weight(mono: JetMono) -> int:
        return sum(e * jet_weight(jet) for jet, e in mono)

    @staticmethod
    def _desc_jets(mono: JetMono) -> tuple[Jet, ...]:
        seq: list[Jet] = []
        for jet, e in mono:
            seq.extend([jet] * e)
        return tuple(sorted(seq, reverse=True))

    def _sorted_terms(self):
        return sorted(
            self.terms.items(),
            key=lambda item: (self._mono_weight(item[0]), self._desc_jets(item[0])),
            reverse=True,
        )

    @staticmethod
    def _jet_name(jet: Jet) -> str:
        a, k = jet
        return f"v{a}" if k == 0 else f"v{a}_{k}"

    def _monomial_str(self, mono: JetMono) -> str:
        factors = []
        for jet, e in sorted(mono, reverse=True):
            name = self._jet_name(jet)
            factors.append(name if e == 1 else f"{name}^{e}")
        return "*".join(factors)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for n, (mono, coef) in enumerate(self._sorted_terms()):
            mstr = self._monomial_str(mono)
            if coef.is_constant():
                c = coef.constant_value()
                mag = abs(c)
                neg = c < 0
                if mstr:
                    body = mstr if mag == 1 else f"{mag}*{mstr}"
                else:
                    body = str(mag)
            else:
                neg = False
                body = f"({coef})*{mstr}" if mstr else f"({coef})"
            if n == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(("- " if neg else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"DiffPoly({self.alphabet!r}: {self})"


# --------------------------------------------------------------------------
# spec-level operations
# --------------------------------------------------------------------------


def poly_add(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    return p + q


def poly_mul(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    return p * q


def poly_scale(p: ParamPoly, s: Rat) -> ParamPoly:
    return p * Fraction(s)


def diff_x(p: DiffPoly) -> DiffPoly:
    """Total x-derivative: v{a}_{k} -> v{a}_{k+1} plus Leibniz."""
    out = DiffPoly.zero(p.alphabet)
    for mono, coef in p.terms.items():
        base = dict(mono)
        for (a, k), e in mono:
            d = dict(base)
            if e == 1:
                del d[(a, k)]
            else:
                d[(a, k)] = e - 1
            d[(a, k + 1)] = d.get((a, k + 1), 0) + 1
            res = DiffPoly(p.alphabet)
            res.terms = {_mono_from_dict(d): coef * e}
            out = out + res
    return out


def _peel_key(mono: JetMono) -> tuple:
    """Monomial order used by the exactness peeling: jets compared by
    (derivative order, variable index), monomials by their descending jet
    sequence."""
    seq: list[tuple[int, int]] = []
    for (a, k), e in mono:
        seq.extend([(k, a)] * e)
    return tuple(sorted(seq, reverse=True))


def integrate_x(p: DiffPoly) -> DiffPoly:
    """Inverse of :func:`diff_x` on its image; raises NotExact otherwise.

    Works by repeatedly peeling the largest monomial: if the input is a total
    derivative, that monomial's highest jet has order k >= 1, appears to the
    first power, is the only jet of its order, and no jet of order k-1 has a
    larger variable index.  Any violation certifies non-exactness.
    """
    rem = p
    out = DiffPoly.zero(p.alphabet)
    while not rem.is_zero():
        mono = max(rem.terms, key=_peel_key)
        coef = rem.terms[mono]
        if not mono:
            raise NotExact("nonzero constant term cannot be integrated")
        (k, a) = max((k, a) for (a, k), _ in mono)
        if k == 0:
            raise NotExact(f"monomial {DiffPoly(p.alphabet, {mono: 1})} is not a total derivative")
        d = dict(mono)
        if d[(a, k)] != 1:
            raise NotExact("highest jet occurs with exponent > 1")
        if any(kk == k and (aa, kk) != (a, k) for (aa, kk) in d):
            raise NotExact("two distinct jets share the highest derivative order")
        if any(kk == k - 1 and aa > a for (aa, kk) in d):
            raise NotExact("order/index pattern not reachable by differentiation")
        del d[(a, k)]
        d[(a, k - 1)] = d.get((a, k - 1), 0) + 1
        candidate = DiffPoly(p.alphabet)
        candidate.terms = {_mono_from_dict(d): coef * Fraction(1, d[(a, k - 1)])}
        out = out + candidate
        rem = rem - diff_x(candidate)
    return out


def degrees(p: DiffPoly) -> set[int]:
    """All weights present in p (jet weights plus parameter weights)."""
    out: set[int] = set()
    for mono, coef in p.terms.items():
        base = DiffPoly._mono_weight(mono)
        out.update(base + d for d in coef.degrees())
    return out


def grading(p: DiffPoly) -> int:
    """Common weight of all terms; NotHomogeneous if mixed, 0 for zero."""
    degs = degrees(p)
    if not degs:
        return 0
    if len(degs) > 1:
        raise NotHomogeneous(degs)
    return next(iter(degs))
