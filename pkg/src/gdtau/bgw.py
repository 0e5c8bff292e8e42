"""Tau data at the distinguished initial point.

The initial point fixes every jet: v_a^(k) evaluates to d_a (a+1)(a+2)...(a+k)
with one free parameter d_a per variable.  All correlators are weighted-
homogeneous-in-spirit tables of exact polynomials in whichever parameter
alphabet is in play: `d` (jet parameters), `c` (single-correlator constants),
or `sigma` (constraint eigenvalue constants).

Correlators of weight W come in two kinds:

* connected  <tau_I>  — from residues and Omega densities evaluated at the
  initial jets (the PDE route), or from the weight recursion (see
  wconstraints);
* disconnected <tau_I>* — moments of the tau function itself.

The tau function is handled as a truncated series in the times: TauSeries
stores the *monomial* coefficient a_I of prod(t_i for i in I), so the
disconnected correlator is a_I times the product of multiplicities factorial.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Union

from .algebra import DiffPoly, ParamPoly
from .errors import IndexDivisible, WeightExceeded
from .hierarchy import FlowTable, OmegaTable, t_derivative
from .psido import LaxOperator

Rat = Union[int, Fraction]
Index = tuple[int, ...]


# --------------------------------------------------------------------------
# initial jets
# --------------------------------------------------------------------------


class InitialJets:
    """Jet values at the initial point: v_a^(k) -> d_a * (a+1)...(a+k)."""

    def __init__(self, r: int, alphabet: str = "d"):
        self.r = r
        self.alphabet = alphabet
        self._cache: dict[tuple[int, int], ParamPoly] = {}

    def value(self, a: int, k: int) -> ParamPoly:
        if not 1 <= a <= self.r - 1:
            raise ValueError(f"no variable v{a} for r={self.r}")
        got = self._cache.get((a, k))
        if got is None:
            rising = math.factorial(a + k) // math.factorial(a)
            got = ParamPoly.var(self.alphabet, a) * rising
            self._cache[(a, k)] = got
        return got

    def evaluate(self, p: DiffPoly) -> ParamPoly:
        return p.evaluate(self.value)


def initial_jets(r: int, max_k: int = 0, alphabet: str = "d") -> InitialJets:
    """Jet table for the order-r hierarchy, warmed through order max_k."""
    jets = InitialJets(r, alphabet)
    for a in range(1, r):
        for k in range(max_k + 1):
            jets.value(a, k)
    return jets


# --------------------------------------------------------------------------
# index bookkeeping
# --------------------------------------------------------------------------


def index_multisets(r: int, max_weight: int) -> list[Index]:
    """Nonempty ascending tuples of valid indices with total <= max_weight,
    ordered by (weight, tuple)."""
    valid = [i for i in range(1, max_weight + 1) if i % r != 0]
    out: list[Index] = []

    def rec(prefix: Index, start: int, budget: int) -> None:
        for i in valid:
            if i < start or i > budget:
                continue
            tup = prefix + (i,)
            out.append(tup)
            rec(tup, i, budget - i)

    rec((), 1, max_weight)
    out.sort(key=lambda t: (sum(t), t))
    return out


def _normalize(indices: Iterable[int]) -> Index:
    return tuple(sorted(indices))


def _mult_factorial(I: Index) -> int:
    out = 1
    for m in Counter(I).values():
        out *= math.factorial(m)
    return out


# --------------------------------------------------------------------------
# truncated series in the times
# --------------------------------------------------------------------------


class TauSeries:
    """Series sum_I a_I t^I known exactly for all weights <= cap.

    Keys are ascending index tuples; t^I is the plain monomial (no
    multiplicity factorials — those belong to the correlator dictionary).
    """

    __slots__ = ("alphabet", "cap", "coeffs")

    def __init__(self, alphabet: str, cap: int,
                 coeffs: Optional[Mapping[Index, ParamPoly | Rat]] = None):
        if cap < 0:
            raise ValueError("the weight cap must be >= 0")
        self.alphabet = alphabet
        self.cap = cap
        clean: dict[Index, ParamPoly] = {}
        if coeffs:
            for I, c in coeffs.items():
                I = _normalize(I)
                if sum(I) > cap:
                    continue
                poly = c if isinstance(c, ParamPoly) else ParamPoly.const(alphabet, c)
                if not poly.is_zero():
                    clean[I] = poly
        self.coeffs = clean

    @classmethod
    def one(cls, alphabet: str, cap: int) -> "TauSeries":
        return cls(alphabet, cap, {(): 1})

    def get(self, indices: Iterable[int]) -> ParamPoly:
        I = _normalize(indices)
        if sum(I) > self.cap:
            raise WeightExceeded(
                f"weight {sum(I)} coefficient requested from a cap-{self.cap} series"
            )
        return self.coeffs.get(I, ParamPoly.zero(self.alphabet))

    def constant(self) -> ParamPoly:
        return self.coeffs.get((), ParamPoly.zero(self.alphabet))

    def keys(self) -> list[Index]:
        return sorted(self.coeffs, key=lambda t: (sum(t), t))

    def is_zero(self) -> bool:
        return not self.coeffs

    def first_nonzero(self) -> Optional[tuple[Index, ParamPoly]]:
        """Smallest (weight, tuple) key with a nonzero coefficient."""
        ks = self.keys()
        return (ks[0], self.coeffs[ks[0]]) if ks else None

    def trim(self, cap: int) -> "TauSeries":
        if cap > self.cap:
            raise WeightExceeded(f"cannot deepen a cap-{self.cap} series to cap {cap}")
        return TauSeries(self.alphabet, cap, self.coeffs)

    def __add__(self, other: "TauSeries") -> "TauSeries":
        cap = min(self.cap, other.cap)
        out: dict[Index, ParamPoly] = {I: c for I, c in self.coeffs.items() if sum(I) <= cap}
        for I, c in other.coeffs.items():
            if sum(I) > cap:
                continue
            acc = out.get(I)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(I, None)
            else:
                out[I] = acc
        return TauSeries(self.alphabet, cap, out)

    def __neg__(self) -> "TauSeries":
        return TauSeries(self.alphabet, self.cap, {I: -c for I, c in self.coeffs.items()})

    def __sub__(self, other: "TauSeries") -> "TauSeries":
        return self + (-other)

    def scale(self, s: ParamPoly | Rat) -> "TauSeries":
        return TauSeries(self.alphabet, self.cap,
                         {I: c * s for I, c in self.coeffs.items()})

    def __mul__(self, other: "TauSeries") -> "TauSeries":
        cap = min(self.cap, other.cap)
        out: dict[Index, ParamPoly] = {}
        for J, a in self.coeffs.items():
            wj = sum(J)
            if wj > cap:
                continue
            for K, b in other.coeffs.items():
                if wj + sum(K) > cap:
                    continue
                I = _normalize(J + K)
                acc = out.get(I)
                term = a * b
                acc = term if acc is None else acc + term
                if acc.is_zero():
                    out.pop(I, None)
                else:
                    out[I] = acc
        return TauSeries(self.alphabet, cap, out)

    def eq_through(self, other: "TauSeries", weight: int) -> bool:
        if weight > self.cap or weight > other.cap:
            raise WeightExceeded("comparison window exceeds a series cap")
        keys = {I for I in self.coeffs if sum(I) <= weight}
        keys |= {I for I in other.coeffs if sum(I) <= weight}
        return all(self.get(I) == other.get(I) for I in keys)

    def __eq__(self, other):
        if not isinstance(other, TauSeries):
            return NotImplemented
        return (self.alphabet, self.cap, self.coeffs) == (other.alphabet, other.cap, other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        parts = [f"{c}*t{list(I)}" for I, c in list(self.coeffs.items())[:4]]
        return f"TauSeries(cap={self.cap}: {' + '.join(parts)}{' + ...' if len(self.coeffs) > 4 else ''})"


def tau_exp(log_series: TauSeries) -> TauSeries:
    """exp of a series with vanishing constant term."""
    if not log_series.constant().is_zero():
        raise ValueError("exp needs a vanishing constant term")
    acc = TauSeries.one(log_series.alphabet, log_series.cap)
    power = acc
    for n in range(1, log_series.cap + 1):
        power = power * log_series
        if power.is_zero():
            break
        acc = acc + power.scale(Fraction(1, math.factorial(n)))
    return acc


def log_tau(tau_series: TauSeries) -> TauSeries:
    """log of a series with constant term 1."""
    if tau_series.constant() != 1:
        raise ValueError("log needs constant term exactly 1")
    u = tau_series - TauSeries.one(tau_series.alphabet, tau_series.cap)
    acc = TauSeries(tau_series.alphabet, tau_series.cap)
    power = TauSeries.one(tau_series.alphabet, tau_series.cap)
    for n in range(1, tau_series.cap + 1):
        power = power * u
        if power.is_zero():
            break
        acc = acc + power.scale(Fraction((-1) ** (n + 1), n))
    return acc


# --------------------------------------------------------------------------
# correlator tables
# --------------------------------------------------------------------------


class CorrelatorTable:
    """Exact correlator values <tau_I> for all valid I with weight <= cap."""

    __slots__ = ("r", "cap", "alphabet", "kind", "values")

    def __init__(self, r: int, cap: int, alphabet: str, kind: str,
                 values: Mapping[Index, ParamPoly]):
        if kind not in ("connected", "disconnected"):
            raise ValueError(f"unknown correlator kind {kind!r}")
        self.r = r
        self.cap = cap
        self.alphabet = alphabet
        self.kind = kind
        self.values = {_normalize(I): v for I, v in values.items()}

    def value(self, indices: Iterable[int]) -> ParamPoly:
        I = _normalize(indices)
        if not I:
            raise ValueError("correlators need at least one insertion")
        for i in I:
            if i < 1:
                raise ValueError(f"bad index {i}")
            if i % self.r == 0:
                raise IndexDivisible(f"index {i} is a multiple of {self.r}")
        if sum(I) > self.cap:
            raise WeightExceeded(
                f"weight {sum(I)} exceeds this table's cap {self.cap}"
            )
        return self.values.get(I, ParamPoly.zero(self.alphabet))

    def keys(self) -> list[Index]:
        return sorted(self.values, key=lambda t: (sum(t), t))


def series_from_correlators(table: CorrelatorTable) -> TauSeries:
    """Monomial-coefficient series with a_I = <tau_I> / prod(mult!).

    For a disconnected table the unit constant term is included, making the
    result the tau series itself; for a connected table this is log tau.
    """
    coeffs: dict[Index, ParamPoly] = {}
    if table.kind == "disconnected":
        coeffs[()] = ParamPoly.const(table.alphabet, 1)
    for I, v in table.values.items():
        coeffs[I] = v * Fraction(1, _mult_factorial(I))
    return TauSeries(table.alphabet, table.cap, coeffs)


def correlators_from_series(series: TauSeries, r: int, kind: str) -> CorrelatorTable:
    """Inverse of series_from_correlators (the constant term is dropped)."""
    values = {I: c * _mult_factorial(I) for I, c in series.coeffs.items() if I}
    return CorrelatorTable(r, series.cap, series.alphabet, kind, values)


def disconnected_from_connected(table: CorrelatorTable) -> CorrelatorTable:
    if table.kind != "connected":
        raise ValueError("expected a connected table")
    tau = tau_exp(series_from_correlators(table))
    return correlators_from_series(tau, table.r, "disconnected")


def connected_from_disconnected(table: CorrelatorTable) -> CorrelatorTable:
    if table.kind != "disconnected":
        raise ValueError("expected a disconnected table")
    logt = log_tau(series_from_correlators(table))
    return correlators_from_series(logt, table.r, "connected")


# --------------------------------------------------------------------------
# the PDE route: densities evaluated at the initial jets
# --------------------------------------------------------------------------


class _PdeTables:
    def __init__(self, r: int, alphabet: str = "d"):
        self.r = r
        self.flows = FlowTable(r, alphabet)
        self.omegas = OmegaTable(r, alphabet, self.flows)
        self.jets = InitialJets(r, alphabet)


_pde_cache: dict[tuple[int, str], _PdeTables] = {}


def _pde_tables(r: int, alphabet: str = "d") -> _PdeTables:
    key = (r, alphabet)
    got = _pde_cache.get(key)
    if got is None:
        got = _pde_cache[key] = _PdeTables(r, alphabet)
    return got


def pde_correlator(r: int, indices: Iterable[int],
                   seed_pair: Optional[tuple[int, int]] = None,
                   alphabet: str = "d") -> ParamPoly:
    """One connected correlator via the density route.

    For a single insertion j this is res(L^(j/r)) at the jets, divided by j.
    For more insertions, start from Omega of two of them (by default the two
    smallest; any seed pair gives the same value) and differentiate along the
    remaining times before evaluating.
    """
    I = _normalize(indices)
    if not I:
        raise ValueError("correlators need at least one insertion")
    tabs = _pde_tables(r, alphabet)
    for i in I:
        if i % r == 0:
            raise IndexDivisible(f"index {i} is a multiple of {r}")
    if len(I) == 1:
        return tabs.jets.evaluate(tabs.omegas.residue(I[0])) * Fraction(1, I[0])
    rest = list(I)
    if seed_pair is None:
        i, j = rest.pop(0), rest.pop(0)
    else:
        i, j = seed_pair
        got = Counter(rest)
        need = Counter(seed_pair)
        if any(got[v] < n for v, n in need.items()):
            raise ValueError(f"seed pair {seed_pair} is not contained in {I}")
        got.subtract(need)
        rest = sorted(got.elements())
    density = tabs.omegas.omega(i, j)
    for k in rest:
        density = t_derivative(density, k, tabs.flows)
    return tabs.jets.evaluate(density)


def connected_correlators_pde(r: int, max_weight: int, alphabet: str = "d") -> CorrelatorTable:
    """Connected correlators through the given weight, all in the d alphabet."""
    if max_weight < 2:
        raise ValueError("the table needs max_weight >= 2")
    values: dict[Index, ParamPoly] = {}
    for I in index_multisets(r, max_weight):
        values[I] = pde_correlator(r, I, alphabet=alphabet)
    return CorrelatorTable(r, max_weight, alphabet, "connected", values)


# --------------------------------------------------------------------------
# the string relation
# --------------------------------------------------------------------------


def _string_constant(alphabet: str, r: int) -> ParamPoly:
    if alphabet == "d":
        return ParamPoly.var("d", 1) * Fraction(1, r)
    if alphabet in ("c", "sigma"):
        return ParamPoly.var(alphabet, 1)
    raise ValueError(f"no string constant for alphabet {alphabet!r}")


def string_residual(tau: TauSeries, r: int) -> TauSeries:
    """Coefficients of the lowest-weight constraint applied to a tau series.

    Entry at I (any weight <= cap-1):

        (sum I) a_I  -  (mult_I(1) + 1) a_(I + [1])  +  const * a_I

    with const the alphabet's own value of the weight-one constant.  For an
    actual tau series every entry vanishes.
    """
    if tau.cap < 1:
        raise WeightExceeded("need cap >= 1 to form the string residual")
    const = _string_constant(tau.alphabet, r)
    out: dict[Index, ParamPoly] = {}
    # entries can be nonzero only where one of the two source coefficients is
    candidates = {I for I in tau.coeffs if sum(I) <= tau.cap - 1}
    for I in tau.coeffs:
        if I and I[0] == 1 and sum(I) <= tau.cap:
            candidates.add(I[1:])
    for I in sorted(candidates, key=lambda t: (sum(t), t)):
        if sum(I) > tau.cap - 1:
            continue
        m1 = sum(1 for x in I if x == 1)
        val = tau.get(I) * sum(I) - tau.get(I + (1,)) * (m1 + 1) + const * tau.get(I)
        if not val.is_zero():
            out[I] = val
    return TauSeries(tau.alphabet, tau.cap - 1, out)
