"""Pseudo-differential operator calculus over differential polynomials.

An operator is a formal sum ``sum_e a_e * D^e`` (``D`` = d/dx) with
:class:`~gdtau.algebra.DiffPoly` coefficients.  Truncation is explicit: an
operator either knows *all* its coefficients (``floor is None``; finitely many
are nonzero) or only those at powers ``>= floor``.  Every operation computes
the depth it can honestly guarantee and raises
:class:`~gdtau.errors.InsufficientDepth` instead of silently truncating.

Composition uses the extended Leibniz rule

    D^n  f = sum_k  C(n, k) f^(k) D^(n-k),   C(n,k) = n(n-1)...(n-k+1)/k!

which terminates for n >= 0 and produces an infinite tail for n < 0, hence
the floor bookkeeping.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Optional, Union

from .algebra import DiffPoly, ParamPoly, diff_x
from .errors import InsufficientDepth

Rat = Union[int, Fraction]

_NEG_INF = float("-inf")


def _binom(n: int, k: int) -> int:
    """Binomial coefficient with integer (possibly negative) upper index."""
    num = 1
    for t in range(k):
        num *= n - t
    return num // math.factorial(k)


class PsiDO:
    """Truncated formal sum of powers of D with DiffPoly coefficients."""

    __slots__ = ("alphabet", "coeffs", "floor")

    def __init__(
        self,
        alphabet: str,
        coeffs: Mapping[int, DiffPoly | ParamPoly | Rat] | None = None,
        floor: Optional[int] = None,
    ):
        self.alphabet = alphabet
        self.floor = floor
        clean: dict[int, DiffPoly] = {}
        if coeffs:
            for e, c in coeffs.items():
                poly = c if isinstance(c, DiffPoly) else DiffPoly.const(alphabet, c)
                if poly.is_zero():
                    continue
                if floor is not None and e < floor:
                    continue
                clean[e] = poly
        self.coeffs = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, alphabet: str) -> "PsiDO":
        return cls(alphabet)

    @classmethod
    def identity(cls, alphabet: str) -> "PsiDO":
        return cls(alphabet, {0: 1})

    @classmethod
    def d(cls, alphabet: str, power: int = 1) -> "PsiDO":
        return cls(alphabet, {power: 1})

    @classmethod
    def from_diffpoly(cls, p: DiffPoly) -> "PsiDO":
        """Multiplication operator by p."""
        return cls(p.alphabet, {0: p})

    # -- accessors --------------------------------------------------------------

    @property
    def top(self) -> Optional[int]:
        """Highest power with a nonzero stored coefficient (None if zero)."""
        return max(self.coeffs) if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, e: int) -> DiffPoly:
        got = self.coeffs.get(e)
        if got is not None:
            return got
        if self.floor is not None and e < self.floor:
            raise InsufficientDepth(
                f"coefficient at D^{e} is below the truncation floor {self.floor}"
            )
        return DiffPoly.zero(self.alphabet)

    def trim(self, floor: int) -> "PsiDO":
        """Restrict to powers >= floor (may only shallow an exact operator)."""
        if self.floor is not None and floor < self.floor:
            raise InsufficientDepth(
                f"cannot deepen a floor-{self.floor} operator to floor {floor}"
            )
        return PsiDO(self.alphabet, {e: c for e, c in self.coeffs.items() if e >= floor}, floor)

    # effective bounds used by the composition window rule ----------------------

    def _wfloor(self) -> float:
        return _NEG_INF if self.floor is None else float(self.floor)

    def _wtop(self) -> float:
        cands = [float(e) for e in self.coeffs]
        if self.floor is not None:
            cands.append(float(self.floor - 1))  # top of the unknown region
        return max(cands, default=_NEG_INF)

    # -- linear structure ---------------------------------------------------------

    def _merge_floor(self, other: "PsiDO") -> Optional[int]:
        if self.floor is None:
            return other.floor
        if other.floor is None:
            return self.floor
        return max(self.floor, other.floor)

    def __add__(self, other: "PsiDO") -> "PsiDO":
        if not isinstance(other, PsiDO):
            return NotImplemented
        floor = self._merge_floor(other)
        out: dict[int, DiffPoly] = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc = out.get(e)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(e, None)
            else:
                out[e] = acc
        return PsiDO(self.alphabet, out, floor)

    def __neg__(self) -> "PsiDO":
        return PsiDO(self.alphabet, {e: -c for e, c in self.coeffs.items()}, self.floor)

    def __sub__(self, other: "PsiDO") -> "PsiDO":
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction, ParamPoly)):
            return NotImplemented
        return PsiDO(self.alphabet, {e: c * scalar for e, c in self.coeffs.items()}, self.floor)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PsiDO):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.floor == other.floor
            and self.coeffs == other.coeffs
        )

    __hash__ = None  # type: ignore[assignment]

    # -- printing -------------------------------------------------------------------

    def dump(self) -> str:
        """One line per power, descending: ``∂^e : <coefficient>``."""
        lines = [f"∂^{e} : {self.coeffs[e]}" for e in sorted(self.coeffs, reverse=True)]
        return "\n".join(lines) if lines else "0"

    def __str__(self) -> str:
        return self.dump().replace("\n", ";  ")

    def __repr__(self) -> str:
        tag = "exact" if self.floor is None else f"floor={self.floor}"
        return f"PsiDO({tag}: {self})"


# --------------------------------------------------------------------------
# composition and derived operations
# --------------------------------------------------------------------------


def _all_constant(B: PsiDO) -> bool:
    return all(not c.jets() for c in B.coeffs.values())


def compose(A: PsiDO, B: PsiDO, floor: Optional[int] = None) -> PsiDO:
    """Operator product A B, exact at all powers >= floor.

    With ``floor=None`` the result is exact at every power, which requires
    both inputs exact and a finite Leibniz expansion (A purely differential,
    or B with constant coefficients).
    """
    if A.alphabet != B.alphabet:
        raise ValueError("operators over different alphabets")
    alphabet = A.alphabet
    if A.is_zero() and A.floor is None:
        return PsiDO.zero(alphabet)
    if B.is_zero() and B.floor is None:
        return PsiDO.zero(alphabet)

    guaranteed = max(A._wfloor() + B._wtop(), B._wfloor() + A._wtop())
    if floor is None:
        if guaranteed != _NEG_INF:
            raise InsufficientDepth(
                "truncated operands: an explicit output floor is required"
            )
        if A.coeffs and min(A.coeffs) < 0 and not _all_constant(B):
            raise InsufficientDepth(
                "composition has an infinite tail; request an explicit floor"
            )
    elif guaranteed > floor:
        raise InsufficientDepth(
            f"inputs only guarantee floor {guaranteed:.0f}, requested {floor}"
        )

    out: dict[int, DiffPoly] = {}
    for i, ai in A.coeffs.items():
        for j, bj in B.coeffs.items():
            k = 0
            deriv = bj
            while True:
                if i >= 0 and k > i:
                    break
                if floor is not None and i + j - k < floor:
                    break
                if deriv.is_zero():
                    break
                c = _binom(i, k)
                if c:
                    term = ai * deriv * c
                    e = i + j - k
                    acc = out.get(e)
                    acc = term if acc is None else acc + term
                    if acc.is_zero():
                        out.pop(e, None)
                    else:
                        out[e] = acc
                k += 1
                deriv = diff_x(deriv)
    return PsiDO(alphabet, out, floor)


def plus_part(A: PsiDO) -> PsiDO:
    """Projection onto powers >= 0.  Exact whenever A's floor reaches 0."""
    floor = None if (A.floor is None or A.floor <= 0) else A.floor
    return PsiDO(A.alphabet, {e: c for e, c in A.coeffs.items() if e >= 0}, floor)


def minus_part(A: PsiDO) -> PsiDO:
    """Projection onto powers < 0; keeps A's floor."""
    return PsiDO(A.alphabet, {e: c for e, c in A.coeffs.items() if e < 0}, A.floor)


def residue(A: PsiDO) -> DiffPoly:
    """Coefficient of D^-1."""
    return A.coeff(-1)


def commutator(A: PsiDO, B: PsiDO, floor: Optional[int] = None) -> PsiDO:
    return compose(A, B, floor) - compose(B, A, floor)


# --------------------------------------------------------------------------
# the Lax operator and its fractional powers
# --------------------------------------------------------------------------


class LaxOperator:
    """D^r + v1 D^(r-2) + ... + v(r-1), with cached root and power data."""

    def __init__(self, r: int, alphabet: str = "d"):
        if r < 2:
            raise ValueError("the operator order r must be >= 2")
        self.r = r
        self.alphabet = alphabet
        coeffs: dict[int, DiffPoly | int] = {r: 1}
        for a in range(1, r):
            coeffs[r - 1 - a] = DiffPoly.jet(alphabet, a, 0)
        self.op = PsiDO(alphabet, coeffs)
        self._root: Optional[PsiDO] = None  # deepest root computed so far
        self._powers: dict[tuple[int, int], PsiDO] = {}

    # -- r-th root ----------------------------------------------------------

    def root(self, floor: int) -> PsiDO:
        if floor > -1:
            raise InsufficientDepth("the root is only defined down to floor <= -1")
        if self._root is None or self._root.floor > floor:
            self._root = self._compute_root(floor)
        return self._root.trim(floor)

    def _compute_root(self, floor: int) -> PsiDO:
        depth = -floor
        r = self.r
        terms: dict[int, DiffPoly] = {1: DiffPoly.const(self.alphabet, 1)}
        for n in range(0, depth + 1):
            target = r - 1 - n
            partial = PsiDO(self.alphabet, terms)  # exact finite sum
            power = _sequential_power(partial, r, target)
            w = (self.op.coeff(target) - power.coeff(target)) * Fraction(1, r)
            if n == 0 and not w.is_zero():
                raise AssertionError("missing subleading term forces a zero root coefficient")
            if not w.is_zero():
                terms[-n] = w
        return PsiDO(self.alphabet, terms, floor)


def _sequential_power(R: PsiDO, m: int, floor: int) -> PsiDO:
    """R^m with output floor `floor`, planning intermediate floors so the
    window rule is met at every step (R exact, top 1)."""
    acc = R
    for step in range(2, m + 1):
        acc = compose(R, acc, floor - (m - step))
    return acc if m > 1 else compose(R, PsiDO.identity(R.alphabet), floor)


def rth_root(L: LaxOperator, floor: int) -> PsiDO:
    """The unique root D + u1 D^-1 + u2 D^-2 + ... of L, down to `floor`."""
    return L.root(floor)


def frac_power(L: LaxOperator, i: int, floor: Optional[int] = None) -> PsiDO:
    """(r-th root of L)^i.  Integer powers of L come back exact; genuinely
    fractional ones are truncated at `floor` with pre-planned root depth."""
    if i < 1:
        raise ValueError("the power index must be >= 1")
    if i % L.r == 0:
        acc = L.op
        for _ in range(i // L.r - 1):
            acc = compose(L.op, acc)  # differential x differential: exact
        return acc
    if floor is None:
        raise InsufficientDepth("fractional powers have an infinite tail; give a floor")
    key = (i, floor)
    cached = L._powers.get(key)
    if cached is None:
        cached = _planned_power(L, i, floor)
        L._powers[key] = cached
    return cached


def _planned_power(L: LaxOperator, i: int, floor: int) -> PsiDO:
    if i == 1:
        return L.root(floor)
    key = (i, floor)
    cached = L._powers.get(key)
    if cached is not None:
        return cached
    a = i // 2
    b = i - a
    left = _planned_power(L, a, floor - b)
    right = _planned_power(L, b, floor - a)
    out = compose(left, right, floor)
    L._powers[key] = out
    return out
