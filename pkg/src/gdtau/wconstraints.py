"""Symmetry constraints on the tau series and everything they pin down.

Two viewpoints are implemented and cross-checked:

* `apply_S` / `apply_Wred` act on a truncated tau series coefficient-wise.
  The reduced operator of bidegree (alpha, q) kills the tau series for
  q > alpha and reproduces it with eigenvalue (-1)^alpha rho_alpha at
  q = alpha: that is what `verify_constraints` checks window by window.

* The same identities, read off at a single coefficient, give a recursion
  that determines every disconnected correlator from lower weight.  Running
  it with formal eigenvalue constants (`sigma` alphabet) produces tables
  whose entries can then be rewritten in terms of the one-point constants
  (`c`) or the jet parameters (`d`).

The `c` alphabet comes in two normalizations.  Tables use the one-point
value itself (c_alpha = <tau_alpha>); residue formulas produce the scaled
variant (alpha * c_alpha), which is what `c_from_d`/`d_from_c` speak.  The
bridge is a plain index-wise rescaling, applied where the two meet.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional

from .algebra import ParamPoly
from .bgw import (
    CorrelatorTable,
    Index,
    TauSeries,
    connected_correlators_pde,
    connected_from_disconnected,
    disconnected_from_connected,
    index_multisets,
    initial_jets,
    series_from_correlators,
    string_residual,
    tau_exp,
    _normalize,
)
from .errors import EngineError, NotStable, WeightExceeded
from .hierarchy import lax
from .psido import frac_power, residue


@dataclass(frozen=True)
class WOperatorSpec:
    """Bidegree of one constraint operator: 1 <= alpha <= r-1, q >= alpha."""

    r: int
    alpha: int
    q: int

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("need r >= 2")
        if not 1 <= self.alpha <= self.r - 1:
            raise ValueError(f"alpha must lie in 1..{self.r - 1}")
        if self.q < self.alpha:
            raise ValueError("q must be >= alpha")

    @property
    def shift(self) -> int:
        return (self.q - self.alpha) * self.r


# --------------------------------------------------------------------------
# multiset enumeration helpers
# --------------------------------------------------------------------------


def _sub_multisets(I: Index, size: int) -> list[Index]:
    """All ascending sub-multisets of I with the given cardinality."""
    vals = sorted(set(I))
    mult = Counter(I)
    out: list[Index] = []

    def rec(idx: int, remaining: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if idx >= len(vals):
            return
        v = vals[idx]
        for take in range(min(mult[v], remaining) + 1):
            rec(idx + 1, remaining - take, prefix + [v] * take)

    rec(0, size, [])
    return out


def _fixed_multisets(r: int, length: int, total: int) -> list[Index]:
    """Ascending tuples of `length` valid indices (>=1, not divisible by r)
    summing to `total`."""
    out: list[Index] = []

    def rec(prefix: list[int], start: int, length_left: int, total_left: int) -> None:
        if length_left == 0:
            if total_left == 0:
                out.append(tuple(prefix))
            return
        for p in range(start, total_left - (length_left - 1) + 1):
            if p % r == 0:
                continue
            rec(prefix + [p], p, length_left - 1, total_left - p)

    rec([], 1, length, total)
    return out


def _bounded_multisets(r: int, length: int, max_total: int) -> list[Index]:
    """Ascending tuples of `length` valid indices with sum <= max_total."""
    out: list[Index] = []

    def rec(prefix: list[int], start: int, length_left: int, budget: int) -> None:
        if length_left == 0:
            out.append(tuple(prefix))
            return
        for p in range(start, budget - (length_left - 1) + 1):
            if p % r == 0:
                continue
            rec(prefix + [p], p, length_left - 1, budget - p)

    rec([], 1, length, max_total)
    return out


def _ordered_count(I: Index) -> int:
    """Number of distinct orderings of a multiset."""
    n = math.factorial(len(I))
    for m in Counter(I).values():
        n //= math.factorial(m)
    return n


def _falling(n: int, j: int) -> int:
    """Falling factorial n (n-1) ... (n-j+1)."""
    out = 1
    for s in range(j):
        out *= n - s
    return out


def _rising_ratio(base: Counter, K: Index) -> int:
    """prod over values m of (mult_base(m)+1)...(mult_base(m)+mult_K(m))."""
    out = 1
    for m, add in Counter(K).items():
        have = base.get(m, 0)
        for t in range(1, add + 1):
            out *= have + t
    return out


def _falling_ratio(whole: Counter, L: Index) -> int:
    """prod over values m of mult(m) (mult(m)-1) ... down mult_L(m) steps."""
    out = 1
    for m, take in Counter(L).items():
        have = whole.get(m, 0)
        for t in range(take):
            out *= have - t
    return out


# --------------------------------------------------------------------------
# the operators on tau series
# --------------------------------------------------------------------------


def apply_S(series: TauSeries, op: WOperatorSpec) -> TauSeries:
    """Image of a truncated series under the plain bidegree-(alpha, q)
    operator, exact through cap - shift - alpha."""
    alpha, q, r = op.alpha, op.q, op.r
    shift = op.shift
    out_cap = series.cap - shift - alpha
    if out_cap < 0:
        raise WeightExceeded(
            f"cap {series.cap} leaves no window for (alpha={alpha}, q={q})"
        )
    targets: list[Index] = [()] + index_multisets(r, out_cap)
    out: dict[Index, ParamPoly] = {}
    for I in targets:
        whole = Counter(I)
        acc = ParamPoly.zero(series.alphabet)
        for j in range(alpha + 2):
            for c in range(j + 1):
                pref = Fraction(
                    math.comb(alpha + 1, j) * math.comb(j, c) * (-1) ** c,
                    alpha + 1,
                )
                klen = alpha + 1 - j
                for L in _sub_multisets(I, j - c):
                    base = whole.copy()
                    base.subtract(Counter(L))
                    rest = tuple(sorted(base.elements()))
                    weight = sum(L) + shift + c
                    prod_l = math.prod(L) if L else 1
                    lfac = _ordered_count(L) * prod_l
                    for K in _fixed_multisets(r, klen, weight):
                        J = _normalize(rest + K)
                        aJ = series.get(J)
                        if aJ.is_zero():
                            continue
                        w = pref * lfac * _ordered_count(K) * _rising_ratio(base, K)
                        acc = acc + aJ * w
        if not acc.is_zero():
            out[I] = acc
    return TauSeries(series.alphabet, out_cap, out)


@lru_cache(maxsize=None)
def _current_monomials(alpha: int) -> tuple[tuple[Index, Fraction], ...]:
    """Normal-ordered monomials of the degree-(alpha+1) current power.

    Raising the degree by one multiplies by a fresh factor or differentiates
    one existing factor (product rule), so each monomial is recorded as the
    ascending tuple of per-factor derivative orders with a rational
    multiplicity.  alpha = 1 gives {(0, 0): 1, (1,): 1}; from alpha = 3 on,
    mixed monomials such as (1, 1) appear that no rebracketing removes.
    """
    P: dict[Index, Fraction] = {(0,): Fraction(1)}
    for _ in range(alpha):
        nxt: dict[Index, Fraction] = {}
        for mono, cf in P.items():
            grown = tuple(sorted(mono + (0,)))
            nxt[grown] = nxt.get(grown, Fraction(0)) + cf
            for s in range(len(mono)):
                bumped = list(mono)
                bumped[s] += 1
                key = tuple(sorted(bumped))
                nxt[key] = nxt.get(key, Fraction(0)) + cf
        P = nxt
    return tuple(sorted(P.items()))


def _apply_current(series: TauSeries, r: int, balance: int, orders: Index,
                   out_cap: int) -> TauSeries:
    """One normal-ordered current monomial, applied coefficient-wise.

    `orders` lists the derivative order j of each factor.  A factor expands
    into elementary moves: multiply by the k-th variable with weight
    k (k-1) ... (k-j), differentiate by the k-th variable with weight
    (-1)^j (k+j) ... (k+1), or (order 0 only) the constant shift sitting at
    the first variable with weight -1.  Each move carries a formal exponent
    (k-1-j, -k-1-j, or 0 respectively) and only configurations whose
    exponents plus `balance` sum to -1 survive the residue.
    """
    groups = sorted(Counter(orders).items())
    out: dict[Index, ParamPoly] = {}
    cap = series.cap
    for I in [()] + index_multisets(r, out_cap):
        acc = ParamPoly.zero(series.alphabet)

        def leaf(rest: Index, K: Index, lam: int, coef: Fraction) -> None:
            nonlocal acc
            if lam + balance != -1:
                return
            aJ = series.get(rest + K)
            if aJ.is_zero():
                return
            acc = acc + aJ * (coef * _rising_ratio(Counter(rest), K))

        def rec(gi: int, rest: Index, K: Index, lam: int, coef: Fraction) -> None:
            if gi == len(groups):
                leaf(rest, K, lam, coef)
                return
            j, n = groups[gi]
            budget = min(cap, sum(I) + balance + 1) - sum(K)
            for c in range(n + 1 if j == 0 else 1):
                for tlen in range(n - c + 1):
                    klen = n - c - tlen
                    for L in _sub_multisets(rest, tlen):
                        wl = math.prod(_falling(k, j + 1) for k in L)
                        if wl == 0:
                            continue
                        base = Counter(rest)
                        base.subtract(Counter(L))
                        kept = tuple(sorted(base.elements()))
                        lam_t = lam + sum(L) - (1 + j) * tlen
                        for Kg in _bounded_multisets(r, klen, budget):
                            wk = math.prod(_falling(k + j, j) for k in Kg)
                            count = math.factorial(n) // math.factorial(c)
                            for m in Counter(L).values():
                                count //= math.factorial(m)
                            for m in Counter(Kg).values():
                                count //= math.factorial(m)
                            rec(
                                gi + 1,
                                kept,
                                _normalize(K + Kg),
                                lam_t - sum(Kg) - (1 + j) * klen,
                                coef * Fraction(count * wl * wk * (-1) ** (c + j * klen)),
                            )
            return

        rec(0, I, (), 0, Fraction(1))
        if not acc.is_zero():
            out[I] = acc
    return TauSeries(series.alphabet, out_cap, out)


def _reduced_raw(series: TauSeries, op: WOperatorSpec) -> TauSeries:
    """Reduced operator before the lower-order normalization: the residue of
    the expanded degree-(alpha+1) current power at exponent alpha + shift."""
    out_cap = series.cap - op.shift - op.alpha
    if out_cap < 0:
        raise WeightExceeded(
            f"cap {series.cap} leaves no window for (alpha={op.alpha}, q={op.q})"
        )
    total = TauSeries(series.alphabet, out_cap)
    for orders, cf in _current_monomials(op.alpha):
        part = _apply_current(series, op.r, op.alpha + op.shift, orders, out_cap)
        total = total + part.scale(cf / (op.alpha + 1))
    return total


_eigen_cache: dict[int, dict[int, ParamPoly]] = {}


def _raw_eigenvalues(r: int) -> dict[int, ParamPoly]:
    """Diagonal eigenvalues of the un-normalized reduced operators on the
    density-built tau series, as polynomials in the jet parameters."""
    got = _eigen_cache.get(r)
    if got is None:
        conn = connected_correlators_pde(r, max(r - 1, 2))
        tau = tau_exp(series_from_correlators(conn))
        got = {
            alpha: _reduced_raw(tau, WOperatorSpec(r, alpha, alpha)).get(())
            * ((-1) ** alpha)
            for alpha in range(1, r)
        }
        _eigen_cache[r] = got
    return got


_norm_cache: dict[tuple[int, int], dict[Index, Fraction]] = {}


def _normalization(r: int, alpha: int) -> dict[Index, Fraction]:
    """Mixing constants for the lower-order pieces of the reduced operator.

    Keys are ascending multisets of lower orders; the piece for (b1, ..., bm)
    is the composition of the un-normalized reduced operators of those
    orders, the innermost carrying the whole column shift.  On the diagonal
    each piece multiplies the tau series by the product of its eigenvalues,
    so the constants are solved monomial by monomial (largest order pattern
    first) until the dictionary eigenvalue rho_alpha is matched exactly; off
    the diagonal every piece annihilates, so the mixing cannot disturb those
    windows.  Single orders suffice through r = 5; from r = 6 the mismatch
    picks up genuinely quadratic jet monomials and products enter.
    """
    key = (r, alpha)
    got = _norm_cache.get(key)
    if got is None:
        hat = _raw_eigenvalues(r)
        target = (rho_in_d(r)[alpha] - hat[alpha]) * ((-1) ** alpha)
        got = {}
        while not target.is_zero():
            expts = max(target.terms, key=lambda e: tuple(sorted(
                (i for i, m in enumerate(e, start=1) for _ in range(m)),
                reverse=True)))
            B = tuple(i for i, m in enumerate(expts, start=1) for _ in range(m))
            if not B or sum(B) > alpha or B[-1] >= alpha:
                raise EngineError(
                    f"no window-safe normalization matches rho_{alpha} at "
                    f"r={r}: left over {target}"
                )
            lead = Fraction(1)
            piece = ParamPoly.const("d", (-1) ** sum(B))
            for beta in B:
                lead *= hat[beta].terms.get((0,) * (beta - 1) + (1,), Fraction(0))
                piece = piece * hat[beta]
            if not lead:
                raise EngineError(
                    f"order pattern {B} misses its leading jet monomial"
                )
            h = target.terms[expts] / lead * ((-1) ** sum(B))
            got[B] = h
            target = target - piece * h
        _norm_cache[key] = got
    return got


def apply_Wred(series: TauSeries, op: WOperatorSpec) -> TauSeries:
    """Image under the reduced operator of bidegree (alpha, q).

    The expanded current power plus lower-order pieces whose mixing
    constants pin the diagonal (q = alpha) eigenvalues to the rho
    dictionary.  Exact through cap - shift - alpha.
    """
    out = _reduced_raw(series, op)
    qshift = op.q - op.alpha
    for B, h in sorted(_normalization(op.r, op.alpha).items()):
        if not h:
            continue
        part = _reduced_raw(series, WOperatorSpec(op.r, B[0], B[0] + qshift))
        for beta in B[1:]:
            part = _reduced_raw(part, WOperatorSpec(op.r, beta, beta))
        out = out + part.scale(h)
    return out.trim(series.cap - op.shift - op.alpha)


# --------------------------------------------------------------------------
# the weight recursion for disconnected correlators
# --------------------------------------------------------------------------


def _recursion_values(r: int, max_weight: int) -> dict[Index, ParamPoly]:
    """Disconnected correlators in the sigma alphabet, empty set included."""
    table: dict[Index, ParamPoly] = {(): ParamPoly.const("sigma", 1)}
    for M in index_multisets(r, max_weight):
        nu = M[-1]
        alpha = nu % r
        q = alpha + (nu - alpha) // r
        shift = nu - alpha
        A = M[:-1]
        whole = Counter(A)
        val = ParamPoly.zero("sigma")
        if q == alpha:
            val = val + table[A] * ParamPoly.var("sigma", alpha)
        sign = (-1) ** alpha
        for j in range(alpha + 1):
            for c in range(j + 1):
                if j == alpha and c == alpha:
                    continue
                pref = Fraction(
                    math.comb(alpha + 1, j) * math.comb(j, c) * (-1) ** c,
                    alpha + 1,
                )
                klen = alpha + 1 - j
                for L in _sub_multisets(A, j - c):
                    base = whole.copy()
                    base.subtract(Counter(L))
                    rest = tuple(sorted(base.elements()))
                    weight = sum(L) + shift + c
                    lfac = (
                        _ordered_count(L)
                        * _falling_ratio(whole, L)
                        * (math.prod(L) if L else 1)
                    )
                    for K in _fixed_multisets(r, klen, weight):
                        sub = table[_normalize(rest + K)]
                        if sub.is_zero():
                            continue
                        w = sign * pref * lfac * _ordered_count(K)
                        val = val - sub * w
        table[M] = val
    return table


def recursion_correlators(r: int, max_weight: int) -> CorrelatorTable:
    """Disconnected correlators through max_weight, sigma alphabet."""
    values = {I: v for I, v in _recursion_values(r, max_weight).items() if I}
    return CorrelatorTable(r, max_weight, "sigma", "disconnected", values)


# --------------------------------------------------------------------------
# constants: sigma, rho, c, d and the maps between them
# --------------------------------------------------------------------------


def solve_sigma_from_c(r: int) -> dict[int, ParamPoly]:
    """sigma_alpha as a polynomial in the one-point constants c (table
    normalization), solved triangularly from <tau_alpha> = c_alpha."""
    singles = _recursion_values(r, r - 1)
    out: dict[int, ParamPoly] = {}
    for alpha in range(1, r):
        expr = singles[(alpha,)]
        gamma = expr - ParamPoly.var("sigma", alpha)
        for e in gamma.terms:
            if len(e) >= alpha and e[alpha - 1]:
                raise AssertionError("one-point value is not triangular in sigma")
        mapping = {b: out[b] for b in range(1, alpha)}
        out[alpha] = ParamPoly.var("c", alpha) - gamma.substitute(mapping, "c")
    return out


def rho_from_sigma(r: int) -> dict[int, ParamPoly]:
    """Eigenvalue constants of the reduced operators in terms of sigma."""
    out: dict[int, ParamPoly] = {}
    for alpha in range(1, r):
        val = ParamPoly.var("sigma", alpha)
        for beta in range(1, alpha):
            coeff = -Fraction(math.factorial(alpha), alpha + 1) * Fraction(
                (-1) ** beta, math.factorial(beta)
            )
            val = val + ParamPoly.var("sigma", beta) * coeff
        out[alpha] = val
    return out


def c_from_d(r: int) -> dict[int, ParamPoly]:
    """Scaled one-point constants from the jet parameters:
    c_alpha (residue normalization) = res L^(alpha/r) at the initial jets."""
    jets = initial_jets(r)
    L = lax(r)
    return {
        alpha: jets.evaluate(residue(frac_power(L, alpha, -1)))
        for alpha in range(1, r)
    }


def d_from_c(r: int) -> dict[int, ParamPoly]:
    """Triangular inverse of c_from_d (residue normalization throughout)."""
    c_d = c_from_d(r)
    out: dict[int, ParamPoly] = {}
    for alpha in range(1, r):
        expr = c_d[alpha]
        lead = Fraction(alpha, r)
        rest = expr - ParamPoly.var("d", alpha) * lead
        for e in rest.terms:
            if len(e) >= alpha and e[alpha - 1]:
                raise AssertionError("residue constant is not triangular in d")
        mapping = {b: out[b] for b in range(1, alpha)}
        rest_c = rest.substitute(mapping, "c") if not rest.is_zero() else ParamPoly.zero("c")
        out[alpha] = (ParamPoly.var("c", alpha) - rest_c) / lead
    return out


def _tab_to_norm(r: int) -> dict[int, ParamPoly]:
    """c (table normalization) -> alpha * c (residue normalization)."""
    return {b: ParamPoly.var("c", b) * b for b in range(1, r)}


def _norm_to_tab(polys: Mapping[int, ParamPoly], r: int) -> dict[int, ParamPoly]:
    bridge = {b: ParamPoly.var("c", b) * Fraction(1, b) for b in range(1, r)}
    return {a: p.substitute(bridge, "c") for a, p in polys.items()}


def d_of_ctab(r: int) -> dict[int, ParamPoly]:
    """Jet parameters in terms of table-normalized one-point constants."""
    return {a: p.substitute(_tab_to_norm(r), "c") for a, p in d_from_c(r).items()}


def sigma_in_d(r: int) -> dict[int, ParamPoly]:
    c_d = c_from_d(r)
    tab_in_d = {b: c_d[b] * Fraction(1, b) for b in range(1, r)}
    return {a: p.substitute(tab_in_d, "d") for a, p in solve_sigma_from_c(r).items()}


def rho_in_d(r: int) -> dict[int, ParamPoly]:
    sig = sigma_in_d(r)
    return {a: p.substitute(sig, "d") for a, p in rho_from_sigma(r).items()}


@dataclass(frozen=True)
class ConstantsDictionary:
    """The five constant families for one hierarchy order."""

    r: int
    sigma_c: Mapping[int, ParamPoly]
    rho_sigma: Mapping[int, ParamPoly]
    rho_c: Mapping[int, ParamPoly]
    c_d: Mapping[int, ParamPoly]
    d_c: Mapping[int, ParamPoly]


_constants_cache: dict[int, ConstantsDictionary] = {}


def constants(r: int) -> ConstantsDictionary:
    got = _constants_cache.get(r)
    if got is None:
        sigma_c = solve_sigma_from_c(r)
        rho_sigma = rho_from_sigma(r)
        rho_c = {a: p.substitute(sigma_c, "c") for a, p in rho_sigma.items()}
        got = ConstantsDictionary(
            r=r,
            sigma_c=sigma_c,
            rho_sigma=rho_sigma,
            rho_c=rho_c,
            c_d=c_from_d(r),
            d_c=d_from_c(r),
        )
        _constants_cache[r] = got
    return got


# --------------------------------------------------------------------------
# table plumbing
# --------------------------------------------------------------------------


def table_substitute(table: CorrelatorTable, mapping: Mapping[int, ParamPoly],
                     alphabet: str) -> CorrelatorTable:
    values = {I: v.substitute(mapping, alphabet) for I, v in table.values.items()}
    return CorrelatorTable(table.r, table.cap, alphabet, table.kind, values)


def table_in_c(r: int, max_weight: int, path: str, kind: str = "connected") -> CorrelatorTable:
    """Correlator table in the table-normalized c alphabet, via either route.

    path="recursion": weight recursion with formal sigma, then sigma -> c.
    path="pde": densities at the initial jets (d alphabet), then d -> c.
    """
    if path == "recursion":
        disc = table_substitute(
            recursion_correlators(r, max_weight), solve_sigma_from_c(r), "c"
        )
        return disc if kind == "disconnected" else connected_from_disconnected(disc)
    if path == "pde":
        conn = table_substitute(
            connected_correlators_pde(r, max_weight), d_of_ctab(r), "c"
        )
        return conn if kind == "connected" else disconnected_from_connected(conn)
    raise ValueError(f"unknown path {path!r}")


# --------------------------------------------------------------------------
# verification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    r: int
    weight: int
    qextra: int
    ok: bool
    lines: tuple[str, ...]

    def text(self) -> str:
        return "\n".join(self.lines)


def verify_constraints(r: int, max_weight: int, qextra: int = 2,
                       tau: Optional[TauSeries] = None) -> VerificationReport:
    """Check every constraint whose window fits under max_weight.

    The tau series (d alphabet) is built from the density route unless one is
    injected.  One line per check; a negative window means there is nothing
    to compare and the check passes vacuously.
    """
    if tau is None:
        conn = connected_correlators_pde(r, max_weight)
        tau = tau_exp(series_from_correlators(conn))
    if tau.alphabet != "d":
        raise ValueError("verification expects a tau series over the d alphabet")
    rho = rho_in_d(r)
    lines: list[str] = []
    all_ok = True

    def check(label: str, window: int, series: Optional[TauSeries]) -> None:
        nonlocal all_ok
        if series is None or series.is_zero():
            lines.append(f"{label} window={window} PASS")
            return
        bad = series.first_nonzero()
        lines.append(f"{label} window={window} FAIL residual={bad[1]}")
        all_ok = False

    sres = string_residual(tau, r)
    check(f"r={r} string", max_weight - 1, sres)
    for alpha in range(1, r):
        for q in range(alpha, alpha + qextra + 1):
            window = max_weight - (q - alpha) * r - alpha
            label = f"r={r} alpha={alpha} q={q}"
            if window < 0:
                check(label, window, None)
                continue
            res = apply_Wred(tau, WOperatorSpec(r, alpha, q))
            if q == alpha:
                eig = rho[alpha] * ((-1) ** alpha)
                res = res - tau.trim(window).scale(eig)
            check(label, window, res)
    return VerificationReport(r, max_weight, qextra, all_ok, tuple(lines))


# --------------------------------------------------------------------------
# the large-r limit
# --------------------------------------------------------------------------


def _assert_stable(first: ParamPoly, second: ParamPoly, indices: Index) -> ParamPoly:
    if first != second:
        raise NotStable(
            f"correlator at {list(indices)} still moves with r: "
            f"{first} vs {second}"
        )
    return first


def stabilized_correlators(indices: Iterable[int]) -> ParamPoly:
    """Connected correlator in the stable range (r beyond the total weight),
    as a polynomial in the table-normalized c constants.  Computed from the
    density route, whose tables this limit belongs to."""
    I = _normalize(indices)
    if not I:
        raise ValueError("need at least one insertion")
    if any(i < 1 for i in I):
        raise ValueError("indices must be positive")
    weight = sum(I)
    samples = []
    for r in (weight + 1, weight + 2):
        samples.append(table_in_c(r, max(weight, 2), "pde", "connected").value(I))
    return _assert_stable(samples[0], samples[1], I)
