"""Affine semigroup membership, holes and ranking lattices.

Membership of v in NA + ZG is decided on the canonical representative of
v modulo ZG.  A linear functional m vanishing on G and positive on every
other column drops strictly with each column subtracted, so the memoized
search below terminates and is exhaustive: no external bound is needed.
A caller may still impose a smaller bound on the number of columns used.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BoundInsufficient, NotAFace
from .lattice import (IntMatrix, Lattice, coset_reps, dot, integer_kernel, integer_solution,
                      primitive, saturate)
from .polyhedra import cone_face_lattice, cone_facets, lp_solve, pointedness_certificate


@dataclass(frozen=True)
class Parameter:
    """A rational parameter beta, or the generic point of a stratum b + CG."""

    beta: tuple | None = None
    b: tuple | None = None
    face: frozenset | None = None

    def __post_init__(self):
        if (self.beta is None) == (self.b is None):
            raise ValueError("give either an explicit beta or a stratum (b, face)")
        if self.beta is not None:
            object.__setattr__(self, "beta", tuple(Fraction(x) for x in self.beta))
        else:
            b = tuple(Fraction(x) for x in self.b)
            if any(x.denominator != 1 for x in b):
                raise ValueError("stratum base point must be integral")
            object.__setattr__(self, "b", tuple(int(x) for x in b))
            object.__setattr__(self, "face", frozenset(self.face or ()))

    @classmethod
    def point(cls, beta: Iterable) -> "Parameter":
        return cls(beta=tuple(beta))

    @classmethod
    def stratum(cls, b: Iterable[int], face: Iterable[int]) -> "Parameter":
        return cls(b=tuple(b), face=frozenset(face))

    @classmethod
    def generic(cls, d: int, A: IntMatrix) -> "Parameter":
        """Generic point of C^d: the stratum 0 + CA."""
        return cls.stratum((0,) * d, range(A.n))

    @property
    def is_stratum(self) -> bool:
        return self.b is not None

    def describe(self) -> str:
        if self.is_stratum:
            return f"generic point of {list(self.b)} + C{[j + 1 for j in sorted(self.face)]}"
        return "(" + ",".join(str(x) for x in self.beta) + ")"


@dataclass(frozen=True)
class RankingData:
    """Pairs (G, b) with b + ZG missing from NA + ZG, with maximality flags."""

    pairs: tuple  # sorted ((G, b), ...)
    maximal: frozenset

    def counts(self) -> dict:
        out = {}
        for G, _ in self.pairs:
            out[G] = out.get(G, 0) + 1
        return out

    def max_pairs(self) -> list:
        return [p for p in self.pairs if p in self.maximal]

    def max_faces(self) -> list:
        return sorted({G for G, _ in self.max_pairs()}, key=lambda g: (len(g), sorted(g)))

    def max_count(self, G) -> int:
        G = frozenset(G)
        return sum(1 for g, _ in self.max_pairs() if g == G)

    def restrict(self, tau) -> "RankingData":
        """J' = {(F, b) in J : tau contained in F}."""
        tau = frozenset(tau)
        keep = tuple(p for p in self.pairs if tau <= p[0])
        return RankingData(keep, frozenset(p for p in self.maximal if tau <= p[0]))

    def __bool__(self):
        return bool(self.pairs)


class SemigroupView:
    """Membership oracle for NA and its localizations NA + ZG.

    Decisions are cached per (face, canonical coset representative) behind
    a lock, so one view may be shared between threads.
    """

    def __init__(self, A: IntMatrix, bound: int | None = None):
        self.A = A
        self.bound = bound
        self._h = pointedness_certificate(A)
        self._faces = cone_face_lattice(A)
        self._face_set = set(self._faces)
        self._normals = [nrm for nrm, _ in cone_facets(A.columns)] if _rank(A) == A.d else None
        self._cache: dict = {}
        self._aux: dict = {}
        self._lock = threading.Lock()
        self.warnings: list = []

    @property
    def faces(self) -> list:
        return list(self._faces)

    def check_face(self, G) -> frozenset:
        G = frozenset(G)
        if G not in self._face_set:
            raise NotAFace(f"{sorted(j + 1 for j in G)} is not a face of A")
        return G

    def _face_data(self, G: frozenset):
        with self._lock:
            hit = self._aux.get(G)
        if hit is not None:
            return hit
        A = self.A
        lat = Lattice.of_columns(A, G)
        others = [j for j in range(A.n) if j not in G]
        if not G:
            m = self._h
        elif others:
            res = lp_solve([0] * A.d,
                           A_ub=[[-x for x in A.columns[j]] for j in others], b_ub=[-1] * len(others),
                           A_eq=[A.columns[j] for j in G], b_eq=[0] * len(G))
            if res.status != "optimal":
                raise NotAFace(f"{sorted(j + 1 for j in G)} is not a face of A")
            m = res.x
        else:
            m = (Fraction(0),) * A.d
        m = primitive(m) if any(m) else tuple(0 for _ in m)
        steps = [(j, lat.canonical(A.columns[j]), dot(m, A.columns[j])) for j in others]
        # facets of the cone containing G give valid inequalities on NA + ZG
        normals = []
        if self._normals is not None:
            for nrm in self._normals:
                if all(dot(nrm, A.columns[j]) == 0 for j in G):
                    normals.append(nrm)
        data = (lat, m, steps, normals)
        with self._lock:
            self._aux.setdefault(G, data)
        return data

    def contains(self, G, v, bound: int | None = None) -> bool:
        """v in NA + ZG."""
        G = frozenset(G)
        lat, m, steps, normals = self._face_data(G)
        v = lat.canonical(v)
        bound = self.bound if bound is None else bound
        if bound is None:
            return self._search(G, v, lat, m, steps, normals)
        found, truncated = self._bounded(v, lat, m, steps, normals, bound, {})
        if not found and truncated:
            raise BoundInsufficient(
                f"no witness for {v} within {bound} columns; the exhaustive search needs more")
        return found

    def _search(self, G, v, lat, m, steps, normals) -> bool:
        key = (G, v)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        stack = [v]
        # iterative depth-first evaluation to avoid deep recursion
        pending = {}
        while stack:
            w = stack[-1]
            k = (G, w)
            with self._lock:
                known = k in self._cache
            if known:
                stack.pop()
                continue
            direct = self._direct(w, m, normals)
            if direct is not None:
                with self._lock:
                    self._cache.setdefault(k, direct)
                stack.pop()
                continue
            mv = dot(m, w)
            children = pending.get(w)
            if children is None:
                children = [lat.canonical(tuple(a - b for a, b in zip(w, col)))
                            for _, col, mj in steps if mj <= mv]
                pending[w] = children
            answer = None
            unresolved = []
            for c in children:
                with self._lock:
                    r = self._cache.get((G, c))
                if r is True:
                    answer = True
                    break
                if r is None:
                    unresolved.append(c)
            if answer is None and not unresolved:
                answer = False
            if answer is not None:
                with self._lock:
                    self._cache.setdefault(k, answer)
                pending.pop(w, None)
                stack.pop()
            else:
                stack.append(unresolved[0])
        with self._lock:
            return self._cache[key]

    @staticmethod
    def _direct(w, m, normals):
        if not any(w):
            return True
        mv = dot(m, w)
        if mv <= 0:
            return False
        if any(dot(nrm, w) < 0 for nrm in normals):
            return False
        return None

    def _bounded(self, v, lat, m, steps, normals, budget, memo):
        key = (v, budget)
        if key in memo:
            return memo[key]
        d = self._direct(v, m, normals)
        if d is not None:
            return d, False
        if budget == 0:
            return False, True
        mv = dot(m, v)
        truncated = False
        for _, col, mj in steps:
            if mj > mv:
                continue
            w = lat.canonical(tuple(a - b for a, b in zip(v, col)))
            f, t = self._bounded(w, lat, m, steps, normals, budget - 1, memo)
            if f:
                memo[key] = (True, False)
                return True, False
            truncated = truncated or t
        memo[key] = (False, truncated)
        return False, truncated

    def certified_bound(self, v) -> int:
        """Number of column subtractions the exhaustive search may need for v."""
        h = self._h
        low = min(dot(h, a) for a in self.A.columns)
        return max(0, int(dot(h, v) // low))


def _rank(A: IntMatrix) -> int:
    from .lattice import rank_q
    return rank_q(A.columns)


def in_semigroup(S: SemigroupView, v: Sequence[int]) -> bool:
    """v in NA."""
    return S.contains(frozenset(), tuple(v))


def in_shifted_semigroup(S: SemigroupView, G, v: Sequence[int]) -> bool:
    """v in NA + ZG for a face G."""
    G = S.check_face(G)
    return S.contains(G, tuple(v))


def _integer_point(A: IntMatrix, beta: Parameter, G: frozenset):
    """An integer point of beta + QG (or of the stratum's span), or None."""
    d = A.d
    if beta.is_stratum:
        return beta.b if beta.face <= G else None
    gens = [A.columns[j] for j in G]
    normals = integer_kernel(gens, d) if gens else [tuple(int(i == k) for i in range(d)) for k in range(d)]
    if not normals:
        return (0,) * d
    rhs = [dot(n, beta.beta) for n in normals]
    return integer_solution(normals, rhs, d)


def ranking_lattice(S: SemigroupView, beta: Parameter, G) -> list:
    """B_G^beta: canonical representatives of the ZG-cosets of Z^d in beta + CG
    that miss NA + ZG."""
    G = S.check_face(G)
    A = S.A
    x0 = _integer_point(A, beta, G)
    if x0 is None:
        return []
    ZG = Lattice.of_columns(A, G)
    reps = coset_reps(saturate(ZG), ZG)
    out = set()
    for r in reps:
        v = ZG.canonical(tuple(a + b for a, b in zip(x0, r)))
        if not S.contains(G, v):
            out.add(v)
    return sorted(out)


def ranking_data(S: SemigroupView, beta: Parameter) -> RankingData:
    """J(beta) with max(J) flagged."""
    pairs = []
    for G in S.faces:
        for b in ranking_lattice(S, beta, G):
            pairs.append((G, b))
    pairs.sort(key=lambda p: (len(p[0]), sorted(p[0]), p[1]))
    lattices = {G: Lattice.of_columns(S.A, G) for G, _ in pairs}
    maximal = set()
    for G, b in pairs:
        dominated = any(G < G2 and lattices[G2].contains(tuple(x - y for x, y in zip(b, b2)))
                        for G2, b2 in pairs)
        if not dominated:
            maximal.add((G, b))
    return RankingData(tuple(pairs), frozenset(maximal))


def holes(S: SemigroupView, lo: Sequence[int], hi: Sequence[int]) -> list:
    """Points of the saturation (cone over A intersected with ZA) missing from
    NA, inside the box lo <= v <= hi."""
    A = S.A
    normals = S._normals or []
    ZA = Lattice.of_columns(A)
    out = []
    for v in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if any(dot(nrm, v) < 0 for nrm in normals):
            continue
        if not ZA.contains(v) or dot(S._h, v) < 0:
            continue
        if not in_semigroup(S, v):
            out.append(tuple(v))
    return out
