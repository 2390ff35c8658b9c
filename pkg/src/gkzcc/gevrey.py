"""Slopes along coordinate hyperplanes and Gevrey irregularity dimensions.

All weights s + e and s - e are evaluated with a symbolic positive
infinitesimal e, so "for e small enough" is exact rather than sampled.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .charcycle import generic_mult, jump, rank
from .errors import InvariantViolation, UnsupportedConfiguration
from .lattice import IntMatrix, Lattice, dot, rank_q
from .perturbed import PerturbedScalar
from .polyhedra import Polytope, facet_hyperplanes, normalized_volume
from .semigroup import Parameter, SemigroupView, ranking_data
from .umbrella import WeightSpec, compute_umbrella, is_F_homogeneous

HYPOTHESIS_FAILED = "HYPOTHESIS_FAILED"


def _shift(s, sign: int = 1) -> PerturbedScalar:
    return PerturbedScalar((Fraction(s), sign))


def weight(A: IntMatrix, j: int, s) -> WeightSpec:
    return WeightSpec.L_s(A.n, j, s)


def non_F_homogeneous_facets(A: IntMatrix, j: int, s) -> list:
    U = compute_umbrella(A, weight(A, j, s))
    return [f for f in U.facets if not is_F_homogeneous(A, f)]


@dataclass
class SlopeReport:
    j: int
    slopes: list  # [(s, (normal, offset)), ...] sorted by s

    @property
    def values(self) -> list:
        return [s for s, _ in self.slopes]


def slopes_along(A: IntMatrix, j: int) -> SlopeReport:
    """Slopes s > 1 along the hyperplane x_j = 0, each with a certifying facet
    hyperplane h . x = 1 of the hull of the origin and the other columns."""
    rest = [A.columns[i] for i in range(A.n) if i != j]
    if rank_q(rest) < A.d:
        return SlopeReport(j, [])
    delta = Polytope.hull_with_origin(rest, A.d)
    found = {}
    for h, c in facet_hyperplanes(delta):
        if c != 1:
            continue
        s = dot(h, A.columns[j])
        if s <= 1 or s in found:
            continue
        if non_F_homogeneous_facets(A, j, s):
            found[s] = (h, c)
    return SlopeReport(j, sorted(found.items()))


def _facet_volume(A: IntMatrix, tau, lattice: Lattice | None) -> Fraction:
    return normalized_volume(Polytope.hull_with_origin([A.columns[i] for i in sorted(tau)], A.d), lattice)


def _new_facet_volume(A: IntMatrix, j: int, s_hi, s_lo, G=None) -> int:
    """Volume of the facets of Phi_G^{s_hi} not in Phi_G^{s_lo} avoiding column j."""
    G = frozenset(range(A.n)) if G is None else frozenset(G)
    hi = compute_umbrella(A, weight(A, j, s_hi)).facets_in(G)
    lo = set(compute_umbrella(A, weight(A, j, s_lo)).facets_in(G))
    lat = None if len(G) == A.n else Lattice.of_columns(A, G)
    total = sum((_facet_volume(A, t, lat) for t in hi if t not in lo and j not in t), Fraction(0))
    return int(total)


def _four_term_generic(A: IntMatrix, j: int, s_hi, s_lo) -> int:
    out = 0
    for s, sign in ((s_hi, 1), (s_lo, -1)):
        L = weight(A, j, s)
        U = compute_umbrella(A, L)
        out += sign * generic_mult(A, L, ())
        if frozenset({j}) in U:
            out -= sign * generic_mult(A, L, {j})
    return out


def generic_irregularity(A: IntMatrix, j: int, s) -> int:
    """d_s(A) along x_j, from the facets gained between weights 1 + e and s + e.

    Cross-checked against the four-multiplicity expression.
    """
    s = Fraction(s)
    if s <= 1:
        raise ValueError("the order s must exceed 1")
    val = _new_facet_volume(A, j, _shift(s), _shift(1))
    alt = _four_term_generic(A, j, _shift(s), _shift(1))
    if val != alt:
        raise InvariantViolation(f"generic irregularity routes disagree: {val} vs {alt}")
    return val


def face_irregularity(A: IntMatrix, G, j: int, s) -> int:
    """d_s(G) for a face G; zero when column j is not in G."""
    G = frozenset(G)
    if j not in G:
        return 0
    return _new_facet_volume(A, j, _shift(Fraction(s)), _shift(1), G)


@dataclass
class GevreyReport:
    j: int
    s: Fraction
    generic: int
    value: int | None
    terms: dict = field(default_factory=dict)
    route: str = ""
    reason: str = ""
    warnings: list = field(default_factory=list)


def _mult_at(A, j, s, tau, beta, S, J):
    L = weight(A, j, s)
    U = compute_umbrella(A, L)
    if frozenset(tau) not in U:
        return 0
    rep = jump(A, L, tau, beta, S, J)
    return rep.total


def four_term(A: IntMatrix, j: int, s_hi, s_lo, beta: Parameter, S=None, J=None) -> tuple:
    """mu^{hi,0}(beta) - mu^{lo,0}(beta) + mu^{lo,{j}}(beta) - mu^{hi,{j}}(beta).

    Returns ``(value or None, terms)``.
    """
    terms = {
        "mu_hi_empty": _mult_at(A, j, s_hi, (), beta, S, J),
        "mu_lo_empty": _mult_at(A, j, s_lo, (), beta, S, J),
        "mu_lo_j": _mult_at(A, j, s_lo, {j}, beta, S, J),
        "mu_hi_j": _mult_at(A, j, s_hi, {j}, beta, S, J),
    }
    if any(v is None for v in terms.values()):
        return None, terms
    t = terms
    return t["mu_hi_empty"] - t["mu_lo_empty"] + t["mu_lo_j"] - t["mu_hi_j"], terms


def _shortcut(A, j, s, beta, S, J, generic) -> int | None:
    if A.d == 2:
        return generic
    if A.d == 3:
        extra = 0
        for G in J.max_faces():
            if j in G and rank_q([A.columns[i] for i in G]) == 1:
                extra += J.counts()[G] * face_irregularity(A, G, j, s)
        return generic + extra
    return None


def irregularity_at(A: IntMatrix, j: int, s, beta: Parameter, S: SemigroupView | None = None) -> GevreyReport:
    """d_s(A, beta) along x_j.

    The four-multiplicity expression is used whenever every jump in it is
    in a closed-form case; in dimensions 2 and 3 the dedicated formulas
    serve as a cross-check and as the fallback.
    """
    s = Fraction(s)
    S = S if S is not None and S.A == A else SemigroupView(A)
    generic = generic_irregularity(A, j, s)
    J = ranking_data(S, beta)
    val, terms = four_term(A, j, _shift(s), _shift(1), beta, S, J)
    short = _shortcut(A, j, s, beta, S, J, generic)
    rep = GevreyReport(j, s, generic, val, terms, route="four-term")
    if val is None:
        if short is None:
            rep.route = "unsupported"
            rep.reason = "a multiplicity jump is outside the closed-form cases"
            return rep
        rep.value, rep.route = short, f"d={A.d} formula"
    elif short is not None and short != val:
        rep.warnings.append(f"d={A.d} formula gives {short}, four-term expression gives {val}")
    if rep.value < generic:
        raise InvariantViolation(f"irregularity {rep.value} below its generic value {generic}")
    return rep


def direct_sum(A1: IntMatrix, A2: IntMatrix) -> IntMatrix:
    rows = [tuple(r) + (0,) * A2.n for r in A1.rows] + [(0,) * A1.n + tuple(r) for r in A2.rows]
    return IntMatrix(tuple(rows))


def combine_parameters(b1: Parameter, n1: int, b2: Parameter) -> Parameter:
    """Parameter of a direct sum from parameters of the summands."""
    def parts(p):
        if p.is_stratum:
            return p.b, p.face
        if any(x.denominator != 1 for x in p.beta):
            raise UnsupportedConfiguration("non-integral explicit parameters cannot be combined")
        return tuple(int(x) for x in p.beta), frozenset()

    if not b1.is_stratum and not b2.is_stratum:
        return Parameter.point(b1.beta + b2.beta)
    v1, f1 = parts(b1)
    v2, f2 = parts(b2)
    return Parameter.stratum(v1 + v2, f1 | {n1 + i for i in f2})


def product_rule(A1: IntMatrix, beta1: Parameter, j: int, s, A2: IntMatrix, beta2: Parameter) -> int:
    """d_s(A1 + A2, beta, j) = d_s(A1, beta1, j) * rank(A2, beta2), checked
    against the direct computation on the direct sum when that is supported."""
    r1 = irregularity_at(A1, j, s, beta1)
    if r1.value is None:
        raise UnsupportedConfiguration(r1.reason)
    value = r1.value * rank(A2, beta2)
    direct = irregularity_at(direct_sum(A1, A2), j, s, combine_parameters(beta1, A1.n, beta2))
    if direct.value is not None and direct.value != value:
        raise InvariantViolation(f"product rule {value} disagrees with direct computation {direct.value}")
    return value


def _in_closure(general: Parameter, special: Parameter, A: IntMatrix) -> bool:
    """True when ``special`` lies in the closure of the stratum ``general``."""
    if not general.is_stratum:
        return general == special
    span = [A.columns[i] for i in general.face]
    base = general.b
    if special.is_stratum:
        if not special.face <= general.face:
            return False
        point = special.b
    else:
        point = special.beta
    diff = tuple(Fraction(a) - b for a, b in zip(point, base))
    return not any(diff) or rank_q(span + [diff]) == rank_q(span)


def semicontinuity_scan(A: IntMatrix, j: int, strata: list, s=None, workers: int = 1,
                        S: SemigroupView | None = None) -> list:
    """Per slope (up to ``s`` when given): the hypothesis check, the values
    d(A, beta, slope) = d_{slope+e} - d_{slope-e} on each stratum, and any
    upper-semicontinuity violations found under specialization."""
    if not strata:
        return []
    S = S if S is not None and S.A == A else SemigroupView(A)
    out = []
    for slope in slopes_along(A, j).values:
        if s is not None and slope > Fraction(s):
            continue
        bad = non_F_homogeneous_facets(A, j, slope)
        entry = {"slope": slope, "hypothesis": "OK" if len(bad) == 1 else HYPOTHESIS_FAILED,
                 "values": [], "findings": []}

        def evaluate(beta, slope=slope):
            val, _ = four_term(A, j, _shift(slope), _shift(slope, -1), beta, S, ranking_data(S, beta))
            return val

        if workers > 1:
            with ThreadPoolExecutor(workers) as ex:
                values = list(ex.map(evaluate, strata))
        else:
            values = [evaluate(b) for b in strata]
        entry["values"] = list(zip(strata, values))
        for (p1, v1), (p2, v2) in ((x, y) for x in entry["values"] for y in entry["values"]):
            if p1 is p2 or v1 is None or v2 is None:
                continue
            if _in_closure(p1, p2, A) and v1 > v2:
                entry["findings"].append(
                    f"value {v1} at {p1.describe()} exceeds {v2} at its specialization {p2.describe()}")
        out.append(entry)
    return out
