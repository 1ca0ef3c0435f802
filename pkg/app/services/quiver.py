"""Quivers, dimension vectors, bilinear forms and algebra presentations.

Vertices are numbered 1..n. Dimension vectors are tuples indexed from 0, so
vertex i lives at position i - 1. Paths are tuples of arrow ids composed left
to right.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

logger = logging.getLogger(__name__)

DimVector = Tuple[int, ...]


class QuiverError(Exception):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    s: int
    e: int


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: Tuple[Arrow, ...]
    dynkin_type: Optional[str] = None

    def __post_init__(self):
        if self.n < 0:
            raise QuiverError(f"Vertex count must be non-negative, got {self.n}")
        seen = set()
        for a in self.arrows:
            if a.id in seen:
                raise QuiverError(f"Arrow id {a.id!r} is not unique")
            seen.add(a.id)
            if not (1 <= a.s <= self.n and 1 <= a.e <= self.n):
                raise QuiverError(f"Arrow {a.id} joins {a.s}->{a.e} outside vertices 1..{self.n}")

    @property
    def name(self) -> str:
        return self.dynkin_type or "explicit"

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def arrow_ids(self) -> Tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise QuiverError(f"Quiver has no arrow {arrow_id!r}")

    def is_sink(self, k: int) -> bool:
        return all(a.s != k for a in self.arrows)

    def is_source(self, k: int) -> bool:
        return all(a.e != k for a in self.arrows)

    def reflect(self, k: int) -> "Quiver":
        """Reverse every arrow incident to ``k``, keeping ids."""
        flipped = tuple(Arrow(a.id, a.e, a.s) if k in (a.s, a.e) else a for a in self.arrows)
        return Quiver(self.n, flipped, self.dynkin_type)

    def is_acyclic(self) -> bool:
        remaining = set(self.vertices)
        arrows = [a for a in self.arrows]
        while remaining:
            sinks = [v for v in remaining if all(a.s != v or a.e not in remaining for a in arrows)]
            if not sinks:
                return False
            remaining -= set(sinks)
        return True

    def check_dim(self, d: Sequence[int]) -> DimVector:
        if len(d) != self.n:
            raise QuiverError(f"Dimension vector {tuple(d)} has length {len(d)}, quiver has {self.n} vertices")
        if any(x < 0 for x in d):
            raise QuiverError(f"Dimension vector {tuple(d)} has negative entries")
        return tuple(int(x) for x in d)


# ============================================================================
# Dynkin constructors
# ============================================================================


def dynkin_edges(kind: str, n: int) -> List[Tuple[int, int]]:
    kind = kind.upper()
    if kind == "A" and n >= 1:
        return [(i, i + 1) for i in range(1, n)]
    if kind == "D" and n >= 4:
        return [(1, n), (2, n)] + [(i, i + 1) for i in range(3, n)]
    if kind == "E" and n in (6, 7, 8):
        return [(i, i + 1) for i in range(1, n - 1)] + [(3, n)]
    raise QuiverError(f"No Dynkin diagram of type {kind}{n}")


def dynkin_quiver(kind: str, n: int, orientation: Optional[Iterable[Tuple[int, int]]] = None) -> Quiver:
    """Dynkin quiver with arrows a1, a2, ... in edge order.

    Default orientation sends every edge {u < v} as v -> u, which for type A
    is the chain a_i: i+1 -> i.
    """
    edges = dynkin_edges(kind, n)
    if orientation is None:
        pairs = [(v, u) for u, v in edges]
    else:
        pairs = [tuple(p) for p in orientation]
        if sorted(tuple(sorted(p)) for p in pairs) != sorted(edges):
            raise QuiverError(f"Orientation {pairs} does not orient the edges of {kind}{n}")
        by_edge = {tuple(sorted(p)): p for p in pairs}
        pairs = [by_edge[edge] for edge in edges]
    arrows = tuple(Arrow(f"a{i}", s, e) for i, (s, e) in enumerate(pairs, start=1))
    return Quiver(n, arrows, f"{kind.upper()}{n}")


_TYPE_PATTERN = re.compile(r"^([ADEade])(\d+)$")


def quiver_from_type(name: str) -> Quiver:
    match = _TYPE_PATTERN.match(name.strip())
    if not match:
        raise QuiverError(f"Unrecognised Dynkin type {name!r}")
    return dynkin_quiver(match.group(1), int(match.group(2)))


# ============================================================================
# Forms and dimension counts
# ============================================================================


def euler_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    d, e = q.check_dim(d), q.check_dim(e)
    return sum(x * y for x, y in zip(d, e)) - sum(d[a.s - 1] * e[a.e - 1] for a in q.arrows)


def sym_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    return euler_form(q, d, e) + euler_form(q, e, d)


def rep_space_dim(q: Quiver, d: Sequence[int]) -> int:
    d = q.check_dim(d)
    return sum(d[a.s - 1] * d[a.e - 1] for a in q.arrows)


def gl_dim(d: Sequence[int]) -> int:
    return sum(x * x for x in d)


def cartan_matrix(q: Quiver) -> List[List[int]]:
    c = [[2 if i == j else 0 for j in range(q.n)] for i in range(q.n)]
    for a in q.arrows:
        c[a.s - 1][a.e - 1] -= 1
        c[a.e - 1][a.s - 1] -= 1
    return c


def is_dynkin(q: Quiver) -> bool:
    """Acyclic with positive definite symmetrized Cartan form."""
    if q.n == 0 or not q.is_acyclic():
        return False
    c = sympy.Matrix(cartan_matrix(q))
    return all(c[:k, :k].det() > 0 for k in range(1, q.n + 1))


# ============================================================================
# Double quiver and relations
# ============================================================================


def bar_id(arrow_id: str) -> str:
    if len(arrow_id) > 1 and arrow_id[1:].isdigit():
        return f"{arrow_id[0]}bar{arrow_id[1:]}"
    return f"{arrow_id}bar"


def double_quiver(q: Quiver) -> Quiver:
    if not q.is_acyclic():
        raise QuiverError("Double quiver is only built from acyclic quivers")
    reversed_arrows = tuple(Arrow(bar_id(a.id), a.e, a.s) for a in q.arrows)
    return Quiver(q.n, q.arrows + reversed_arrows, q.dynkin_type)


class AlgebraKind(str, Enum):
    PATH = "path"
    PREPROJECTIVE = "preprojective"


@dataclass(frozen=True)
class Relation:
    s: int
    e: int
    terms: Tuple[Tuple[Fraction, Tuple[str, ...]], ...]

    def negated(self) -> "Relation":
        return Relation(self.s, self.e, tuple((-c, p) for c, p in self.terms))


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    relations: Tuple[Relation, ...]
    kind: AlgebraKind
    base: Quiver

    def __post_init__(self):
        if self.kind == AlgebraKind.PATH and self.relations:
            raise QuiverError("A path algebra carries no relations")
        for rel in self.relations:
            for _, path in rel.terms:
                self._check_path(rel, path)

    def _check_path(self, rel: Relation, path: Tuple[str, ...]) -> None:
        if len(path) < 2:
            raise QuiverError(f"Relation path {path} has length below two")
        arrows = [self.quiver.arrow(b) for b in path]
        if arrows[0].s != rel.s or arrows[-1].e != rel.e:
            raise QuiverError(f"Path {path} does not run from {rel.s} to {rel.e}")
        for left, right in zip(arrows, arrows[1:]):
            if left.e != right.s:
                raise QuiverError(f"Path {path} is not composable at {left.id}{right.id}")

    @property
    def forward_arrows(self) -> Tuple[str, ...]:
        return self.base.arrow_ids

    @property
    def backward_arrows(self) -> Tuple[str, ...]:
        forward = set(self.forward_arrows)
        return tuple(b for b in self.quiver.arrow_ids if b not in forward)

    @property
    def is_dynkin_preprojective(self) -> bool:
        return self.kind == AlgebraKind.PREPROJECTIVE and is_dynkin(self.base)


def path_algebra(q: Quiver) -> AlgebraPresentation:
    return AlgebraPresentation(q, (), AlgebraKind.PATH, q)


def preprojective_relations(q: Quiver) -> AlgebraPresentation:
    """Mesh relations Σ_{s(a)=i} a·ā − Σ_{e(a)=i} ā·a, one per vertex with terms."""
    doubled = double_quiver(q)
    relations = []
    for i in q.vertices:
        terms = [(Fraction(1), (a.id, bar_id(a.id))) for a in q.arrows if a.s == i]
        terms += [(Fraction(-1), (bar_id(a.id), a.id)) for a in q.arrows if a.e == i]
        if terms:
            relations.append(Relation(i, i, tuple(terms)))
    return AlgebraPresentation(doubled, tuple(relations), AlgebraKind.PREPROJECTIVE, q)


def build_algebra(q: Quiver, kind: AlgebraKind) -> AlgebraPresentation:
    if kind == AlgebraKind.PREPROJECTIVE:
        return preprojective_relations(q)
    return path_algebra(q)


def _normalized(rel: Relation) -> Dict[Tuple[str, ...], Fraction]:
    return {p: c for c, p in rel.terms if c != 0}


def relations_match_up_to_sign(given: Sequence[Relation], expected: Sequence[Relation]) -> bool:
    if len(given) != len(expected):
        return False
    remaining = list(expected)
    for rel in given:
        terms = _normalized(rel)
        negated = _normalized(rel.negated())
        match = next((r for r in remaining if (r.s, r.e) == (rel.s, rel.e)
                      and _normalized(r) in (terms, negated)), None)
        if match is None:
            return False
        remaining.remove(match)
    return True
