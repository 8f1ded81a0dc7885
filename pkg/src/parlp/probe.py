"""Sequence probes for continuity of V and semicontinuity of X and S.

Every probe instantiates a family at a list of N, solves each member
exactly and compares with the limit problem.  Limits of selections are
computed symbolically in ``t = 1/N`` rather than extrapolated, and the
"tends to zero" verdicts come from :func:`vanishes`, a fixed decay rule on
exact gaps.  Verdicts are evidence about the sequence, not proofs.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from parlp.errors import ConcavityViolation, NotOptimal
from parlp.fixtures import example1_family
from parlp.linalg import (
    Matrix,
    Vector,
    det,
    format_rational,
    norm_squared,
    solve_square,
    to_rational,
    vadd,
    vscale,
    vsub,
)
from parlp.model import LpProblem, ProblemFamily, instantiate
from parlp.solver import (
    SolveOutcome,
    Status,
    enumerate_basic_feasible,
    optimal_face_direction,
    solve,
)

DECAY_MIN_RATIO = 4
DECAY_GROWTH = 2  # gap*N may at most double per step; at ratio 16 this is gap(16N) <= gap(N)/8


def _vec(v) -> list[str]:
    return [format_rational(x) for x in v]


def _check_ns(Ns: Iterable[int]) -> list[int]:
    out = sorted(set(Ns))
    if not out or any(isinstance(N, bool) or not isinstance(N, int) or N < 1 for N in out):
        raise ValueError(f"N values must be positive integers, got {list(Ns)!r}")
    return out


def vanishes(samples: Sequence[tuple[int, Fraction]]) -> bool:
    """Decay rule standing in for "gap -> 0" on finitely many samples.

    All-zero gaps vanish.  Otherwise walk down from the largest N, each time
    taking the largest sample at most a quarter of the previous one, for up
    to two steps.  Each step from Na to Nb must satisfy
    ``gap(Nb) * Nb <= 2 * gap(Na) * Na``, which for Nb = 16 Na reads
    ``gap(16N) <= gap(N) / 8``.  Samples too close together give False.
    """
    pts = sorted(samples)
    if all(g == 0 for _, g in pts):
        return True
    chain = [pts[-1]]
    while len(chain) < 3:
        top = chain[-1][0]
        below = [s for s in pts if s[0] * DECAY_MIN_RATIO <= top]
        if not below:
            break
        chain.append(below[-1])
    if len(chain) < 2:
        return False
    for (Nb, gb), (Na, ga) in zip(chain, chain[1:]):
        if gb * Nb > DECAY_GROWTH * ga * Na:
            return False
    return True


def _solve_optimal(problem: LpProblem, where) -> SolveOutcome:
    outcome = solve(problem)
    if outcome.status is not Status.OPTIMAL:
        raise NotOptimal(f"member {where} is {outcome.status.value}", where=where)
    return outcome


# -- symbolic limits of basic selections ------------------------------------


def _poly_from_values(values: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (lowest first) of the polynomial through ``(k, values[k])``."""
    D = len(values)
    V = Matrix([[Fraction(k) ** e for e in range(D)] for k in range(D)], ncols=D)
    coeffs = solve_square(V, values)
    assert coeffs is not None
    return list(coeffs)


def _order(coeffs: Sequence[Fraction]) -> int | None:
    return next((i for i, c in enumerate(coeffs) if c != 0), None)


def selection_limit(family: ProblemFamily, support: Sequence[int]) -> Vector | None:
    """Limit as N -> infinity of the basic point with the given support.

    Along the family, ``x_B(t)`` solves the normal equations
    ``B(t)^T B(t) x = B(t)^T b(t)`` with ``t = 1/N``.  By Cramer's rule each
    coordinate is a ratio of polynomials in t of degree at most ``2|B|``;
    they are recovered exactly by interpolation and the limit at ``t = 0``
    read from the lowest-order terms.  Returns None when the selection
    diverges.
    """
    support = tuple(support)
    n = family.limit.n
    if not support:
        return (Fraction(0),) * n
    k = len(support)
    degree = 2 * k
    dets: list[list[Fraction]] = [[] for _ in range(k + 1)]
    for step in range(degree + 1):
        xi = family.at(step)
        B = xi.A.columns(support)
        G = B.T @ B
        h = B.T @ xi.b
        dets[0].append(det(G))
        for i in range(k):
            Gi = Matrix(
                [row[:i] + (h[r],) + row[i + 1 :] for r, row in enumerate(G.rows)],
                ncols=k,
            )
            dets[i + 1].append(det(Gi))
    den = _poly_from_values(dets[0])
    v = _order(den)
    if v is None:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(support):
        num = _poly_from_values(dets[i + 1])
        u = _order(num)
        if u is None or u > v:
            continue
        if u < v:
            return None
        x[j] = num[v] / den[v]
    return tuple(x)


@dataclass(frozen=True)
class SelectionLimit:
    support: tuple[int, ...]
    limit: Vector | None  # None: the selection diverges
    ok: bool | None  # membership of the limit; None when divergent

    def to_dict(self) -> dict[str, Any]:
        return {
            "support": list(self.support),
            "limit": None if self.limit is None else _vec(self.limit),
            "ok": self.ok,
        }


@dataclass(frozen=True)
class SelectionReport:
    """Support-stable selections, their exact limits and membership tests."""

    selections: tuple[SelectionLimit, ...]

    @property
    def no_convergent_selection(self) -> bool:
        return all(s.limit is None for s in self.selections)

    @property
    def verdict(self) -> bool:
        return all(s.ok for s in self.selections if s.limit is not None)

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "no_convergent_selection": self.no_convergent_selection,
            "selections": [s.to_dict() for s in self.selections],
        }


def _common_supports(per_n: list[list[tuple[int, ...]]]) -> list[tuple[int, ...]]:
    common = set(per_n[0])
    for supports in per_n[1:]:
        common &= set(supports)
    return sorted(common)


def probe_usc_X(family: ProblemFamily, Ns: Iterable[int]) -> SelectionReport:
    """Limits of basic feasible selections must be feasible for the limit problem."""
    Ns = _check_ns(Ns)
    per_n = [[bp.support for bp in enumerate_basic_feasible(instantiate(family, N))] for N in Ns]
    lim = family.limit
    out = []
    for support in _common_supports(per_n):
        x = selection_limit(family, support)
        out.append(SelectionLimit(support, x, None if x is None else lim.is_feasible(x)))
    return SelectionReport(tuple(out))


def probe_usc_S(family: ProblemFamily, Ns: Iterable[int]) -> SelectionReport:
    """Limits of basic optimal selections must be optimal for the limit problem."""
    Ns = _check_ns(Ns)
    per_n = [
        [bp.support for bp in _solve_optimal(instantiate(family, N), N).optimal_basics]
        for N in Ns
    ]
    lim = family.limit
    V = _solve_optimal(lim, "limit").value
    out = []
    for support in _common_supports(per_n):
        x = selection_limit(family, support)
        ok = None if x is None else lim.is_feasible(x) and lim.objective(x) == V
        out.append(SelectionLimit(support, x, ok))
    return SelectionReport(tuple(out))


@dataclass(frozen=True)
class ValueContinuity:
    limit_value: Fraction
    samples: tuple[tuple[int, Fraction, Fraction], ...]  # (N, V(N), gap)

    @property
    def vanishing(self) -> bool:
        return vanishes([(N, gap) for N, _, gap in self.samples])

    def to_dict(self) -> dict[str, Any]:
        return {
            "limit_value": format_rational(self.limit_value),
            "samples": [
                {"N": N, "value": format_rational(v), "gap": format_rational(g)}
                for N, v, g in self.samples
            ],
            "value_gap_vanishing": self.vanishing,
        }


def probe_value_continuity(family: ProblemFamily, Ns: Iterable[int]) -> ValueContinuity:
    Ns = _check_ns(Ns)
    V = _solve_optimal(family.limit, "limit").value
    rows = []
    for N in Ns:
        VN = _solve_optimal(instantiate(family, N), N).value
        rows.append((N, VN, abs(VN - V)))
    return ValueContinuity(V, tuple(rows))


@dataclass(frozen=True)
class LowerProbe:
    """Squared distance from each limit optimal vertex to the nearest
    optimal vertex of each member.  This bounds the true distance to the
    optimal set from above."""

    vertices: tuple[Vector, ...]
    Ns: tuple[int, ...]
    dist2: tuple[tuple[Fraction, ...], ...]  # dist2[i][k]: vertex i at Ns[k]

    def vertex_vanishing(self) -> list[bool]:
        return [vanishes(list(zip(self.Ns, row))) for row in self.dist2]

    @property
    def vanishing(self) -> bool:
        return all(self.vertex_vanishing())

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertices": [_vec(v) for v in self.vertices],
            "dist2": [_vec(row) for row in self.dist2],
            "vertex_vanishing": self.vertex_vanishing(),
            "lsc_gap_vanishing": self.vanishing,
            "vertex_bound_only": not self.vanishing,
        }


def probe_lsc_S(family: ProblemFamily, Ns: Iterable[int]) -> LowerProbe:
    Ns = _check_ns(Ns)
    vertices = tuple(bp.x for bp in _solve_optimal(family.limit, "limit").optimal_basics)
    members = [
        [bp.x for bp in _solve_optimal(instantiate(family, N), N).optimal_basics] for N in Ns
    ]
    dist2 = tuple(
        tuple(min(norm_squared(vsub(v, z)) for z in zs) for zs in members) for v in vertices
    )
    return LowerProbe(vertices, tuple(Ns), dist2)


@dataclass(frozen=True)
class ProbeReport:
    family: ProblemFamily
    Ns: tuple[int, ...]
    value: ValueContinuity
    usc_X: SelectionReport
    usc_S: SelectionReport
    lsc_S: LowerProbe

    @property
    def value_gap_vanishing(self) -> bool:
        return self.value.vanishing

    @property
    def lsc_gap_vanishing(self) -> bool:
        return self.lsc_S.vanishing

    @property
    def usc_limit_feasible(self) -> bool:
        return self.usc_X.verdict

    def to_dict(self) -> dict[str, Any]:
        samples = []
        for k, (N, v, g) in enumerate(self.value.samples):
            samples.append(
                {
                    "N": N,
                    "value": format_rational(v),
                    "gap": format_rational(g),
                    "dist2": [format_rational(row[k]) for row in self.lsc_S.dist2],
                }
            )
        return {
            "family": self.family.to_dict(),
            "Ns": list(self.Ns),
            "limit_value": format_rational(self.value.limit_value),
            "limit_vertices": [_vec(v) for v in self.lsc_S.vertices],
            "samples": samples,
            "value_gap_vanishing": self.value_gap_vanishing,
            "lsc_gap_vanishing": self.lsc_gap_vanishing,
            "usc_limit_feasible": self.usc_limit_feasible,
            "vertex_bound_only": not self.lsc_gap_vanishing,
            "usc_X": self.usc_X.to_dict(),
            "usc_S": self.usc_S.to_dict(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        nv = len(self.lsc_S.vertices)
        writer.writerow(["N", "V", "gap"] + [f"dist2_v{i}" for i in range(nv)])
        for k, (N, v, g) in enumerate(self.value.samples):
            writer.writerow(
                [N, format_rational(v), format_rational(g)]
                + [format_rational(row[k]) for row in self.lsc_S.dist2]
            )
        return buf.getvalue()


def probe(family: ProblemFamily, Ns: Iterable[int]) -> ProbeReport:
    """Run every probe on the family at the given N."""
    Ns = tuple(_check_ns(Ns))
    return ProbeReport(
        family,
        Ns,
        probe_value_continuity(family, Ns),
        probe_usc_X(family, Ns),
        probe_usc_S(family, Ns),
        probe_lsc_S(family, Ns),
    )


# -- concavity in the right-hand side ---------------------------------------


@dataclass(frozen=True)
class ConcavityRow:
    t: Fraction
    v1: Fraction
    v2: Fraction
    v_mix: Fraction

    @property
    def bound(self) -> Fraction:
        return self.t * self.v1 + (1 - self.t) * self.v2

    @property
    def strict(self) -> bool:
        return self.v_mix > self.bound


def check_concavity(p, A, triples) -> list[ConcavityRow]:
    """``V(t b1 + (1-t) b2) >= t V(b1) + (1-t) V(b2)`` for each ``(b1, b2, t)``."""
    if not isinstance(A, Matrix):
        A = Matrix(A)
    rows = []
    for i, (b1, b2, t) in enumerate(triples):
        t = to_rational(t)
        b1 = tuple(to_rational(v) for v in b1)
        b2 = tuple(to_rational(v) for v in b2)
        mix = vadd(vscale(t, b1), vscale(1 - t, b2))
        values = []
        for b in (b1, b2, mix):
            outcome = solve(LpProblem(p, A, b))
            if outcome.status is not Status.OPTIMAL:
                raise NotOptimal(f"triple {i} is {outcome.status.value}", where=i)
            values.append(outcome.value)
        row = ConcavityRow(t, *values)
        if row.v_mix < row.bound:
            raise ConcavityViolation(i, row.v_mix, row.bound)
        rows.append(row)
    return rows


# -- the discontinuity example ----------------------------------------------


@dataclass(frozen=True)
class Example1Report:
    Ns: tuple[int, ...]
    value: ValueContinuity
    limit_direction: Vector
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out = self.value.to_dict()
        out["Ns"] = list(self.Ns)
        out["limit_optimal_direction"] = _vec(self.limit_direction)
        out["checks"] = self.checks
        return out


def run_example1(Ns: Iterable[int] = (1, 10, 100)) -> Example1Report:
    """Rebuild the value-discontinuity example and check every claim about it.

    For each N the unique optimum is ``(N, 0)`` with value 1; the limit has
    value 0, optimal vertex ``(0, 1)`` and the optimal ray along ``(1, 0)``.
    """
    Ns = _check_ns(Ns)
    fam = example1_family()
    one, zero = Fraction(1), Fraction(0)
    for N in Ns:
        out = _solve_optimal(instantiate(fam, N), N)
        if out.value != one:
            raise AssertionError(f"V(xi({N})) = {out.value}, expected 1")
        got = [bp.x for bp in out.optimal_basics]
        if got != [(Fraction(N), zero)]:
            raise AssertionError(f"S*(xi({N})) = {got}, expected [({N}, 0)]")
    lim = _solve_optimal(fam.limit, "limit")
    if lim.value != zero:
        raise AssertionError(f"limit value {lim.value}, expected 0")
    if (zero, one) not in [bp.x for bp in lim.optimal_basics]:
        raise AssertionError("(0, 1) missing from the limit optimal set")
    d = optimal_face_direction(fam.limit)
    if d != (one, zero):
        raise AssertionError(f"limit optimal ray {d}, expected (1, 0)")
    value = probe_value_continuity(fam, Ns)
    checks = {
        "value_is_one": True,
        "vertex_is_N_0": True,
        "limit_value_zero": True,
        "limit_contains_0_1": True,
    }
    return Example1Report(tuple(Ns), value, d, checks)
