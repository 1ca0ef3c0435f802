"""Positive roots of Dynkin quivers and the Gabriel correspondence.

Roots are generated as the Weyl-group orbit of the simple roots and ordered
deterministically: type A by interval (i, j), everything else by total
dimension and then by descending coordinates.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import MAX_ROOT_STEPS
from app.core.field import Field, QQ_FIELD
from app.core.linalg import kernel_basis
from app.core.sampling import SamplingContext
from app.services.endomorphisms import krs_decompose
from app.services.quiver import (
    AlgebraKind,
    DimVector,
    Quiver,
    cartan_matrix,
    is_dynkin,
    path_algebra,
)
from app.services.representation import Representation, direct_sum_all, simple_module

logger = logging.getLogger(__name__)


class RootSystemError(Exception):
    pass


def _reflect(cartan: List[List[int]], v: DimVector, k: int) -> DimVector:
    """Simple reflection at 0-based vertex k."""
    pairing = sum(cartan[k][j] * v[j] for j in range(len(v)))
    return tuple(x - pairing if j == k else x for j, x in enumerate(v))


def _is_type_a(q: Quiver) -> bool:
    return bool(q.dynkin_type) and q.dynkin_type.startswith("A")


def _interval(root: DimVector) -> Tuple[int, int]:
    support = [i + 1 for i, x in enumerate(root) if x]
    return support[0], support[-1]


@dataclass(frozen=True)
class RootSystem:
    quiver: Quiver
    roots: Tuple[DimVector, ...]

    @property
    def size(self) -> int:
        return len(self.roots)

    @property
    def index(self) -> Dict[DimVector, int]:
        return {r: i for i, r in enumerate(self.roots)}

    def index_of(self, root: Sequence[int]) -> int:
        try:
            return self.index[tuple(root)]
        except KeyError:
            raise RootSystemError(f"{tuple(root)} is not a positive root of {self.quiver.name}")

    def is_root(self, d: Sequence[int]) -> bool:
        return tuple(d) in self.index

    def root_name(self, root: DimVector) -> str:
        if _is_type_a(self.quiver):
            i, j = _interval(root)
            return f"[{i},{j}]"
        return "(" + ",".join(str(x) for x in root) + ")"

    def label(self, alpha: Sequence[int]) -> "ComponentLabel":
        return ComponentLabel(self, tuple(int(x) for x in alpha))

    def zero_label(self) -> "ComponentLabel":
        return self.label((0,) * self.size)

    def root_label(self, root: Sequence[int]) -> "ComponentLabel":
        alpha = [0] * self.size
        alpha[self.index_of(root)] = 1
        return self.label(alpha)


def positive_roots(q: Quiver, max_steps: int = MAX_ROOT_STEPS) -> RootSystem:
    if not is_dynkin(q):
        raise RootSystemError(f"Quiver {q.name} is not of Dynkin type")
    cartan = cartan_matrix(q)
    simples = [tuple(1 if j == i else 0 for j in range(q.n)) for i in range(q.n)]
    seen = set(simples)
    frontier = list(simples)
    steps = 0
    while frontier:
        v = frontier.pop()
        for k in range(q.n):
            w = _reflect(cartan, v, k)
            if w not in seen:
                seen.add(w)
                frontier.append(w)
        steps += 1
        if steps > max_steps:
            raise RootSystemError(f"Root enumeration for {q.name} exceeded {max_steps} steps")
    positive = [r for r in seen if all(x >= 0 for x in r)]
    if _is_type_a(q):
        positive.sort(key=_interval)
    else:
        positive.sort(key=lambda r: (sum(r), tuple(-x for x in r)))
    logger.info(f"Enumerated {len(positive)} positive roots of {q.name}")
    return RootSystem(q, tuple(positive))


@dataclass(frozen=True)
class ComponentLabel:
    root_system: RootSystem
    alpha: Tuple[int, ...]

    def __post_init__(self):
        if len(self.alpha) != self.root_system.size:
            raise RootSystemError(
                f"Label has {len(self.alpha)} coordinates, root system has {self.root_system.size}"
            )
        if any(x < 0 for x in self.alpha):
            raise RootSystemError(f"Label {self.alpha} has negative coordinates")

    @property
    def dim_vector(self) -> DimVector:
        q = self.root_system.quiver
        return tuple(
            sum(c * root[i] for c, root in zip(self.alpha, self.root_system.roots)) for i in range(q.n)
        )

    @property
    def is_zero(self) -> bool:
        return not any(self.alpha)

    @property
    def coordinate_sum(self) -> int:
        return sum(self.alpha)

    def __add__(self, other: "ComponentLabel") -> "ComponentLabel":
        if other.root_system != self.root_system:
            raise RootSystemError("Cannot add labels over different root systems")
        return ComponentLabel(self.root_system, tuple(x + y for x, y in zip(self.alpha, other.alpha)))

    def scaled(self, k: int) -> "ComponentLabel":
        return ComponentLabel(self.root_system, tuple(k * x for x in self.alpha))

    def roots_with_multiplicity(self) -> List[DimVector]:
        out = []
        for c, root in zip(self.alpha, self.root_system.roots):
            out.extend([root] * c)
        return out

    def describe(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for c, root in zip(self.alpha, self.root_system.roots):
            if c:
                name = self.root_system.root_name(root)
                terms.append(name if c == 1 else f"{c}{name}")
        return "+".join(terms)


_INTERVAL_PATTERN = re.compile(r"(\d*)\[(\d+),(\d+)\]")


def parse_interval_sum(rs: RootSystem, text: str) -> ComponentLabel:
    """Read labels such as ``[1,2]+[2,4]+2[3,3]`` on a type A root system."""
    alpha = [0] * rs.size
    pieces = [p.strip() for p in text.split("+") if p.strip()]
    for piece in pieces:
        match = _INTERVAL_PATTERN.fullmatch(piece)
        if not match:
            raise RootSystemError(f"Malformed interval term {piece!r}")
        mult = int(match.group(1) or 1)
        i, j = int(match.group(2)), int(match.group(3))
        root = tuple(1 if i <= v <= j else 0 for v in rs.quiver.vertices)
        alpha[rs.index_of(root)] += mult
    return rs.label(alpha)


# ============================================================================
# Indecomposable path-algebra modules
# ============================================================================


def _interval_module(q: Quiver, root: DimVector, field: Field) -> Representation:
    algebra = path_algebra(q)
    mats = {}
    for a in q.arrows:
        shape = (root[a.s - 1], root[a.e - 1])
        mats[a.id] = field.eye(1) if shape == (1, 1) else field.zeros(shape)
    return Representation(algebra, field, root, mats)


def _reflect_at_source(q: Quiver, dims: List[int], mats: Dict[str, np.ndarray], k: int,
                       field: Field) -> Tuple[List[int], Dict[str, np.ndarray]]:
    """Reflection functor at a source k of ``q``; returns data on q reflected at k."""
    outgoing = [a for a in q.arrows if a.s == k]
    widths = [dims[a.e - 1] for a in outgoing]
    total = sum(widths)
    stacked = field.zeros((dims[k - 1], total))
    offset = 0
    for a, w in zip(outgoing, widths):
        stacked[:, offset:offset + w] = mats[a.id]
        offset += w
    cokernel = kernel_basis(field, stacked)
    projection = field.zeros((total, len(cokernel)))
    for c, vec in enumerate(cokernel):
        projection[:, c] = vec
    new_mats = dict(mats)
    offset = 0
    for a, w in zip(outgoing, widths):
        new_mats[a.id] = projection[offset:offset + w, :]
        offset += w
    new_dims = list(dims)
    new_dims[k - 1] = len(cokernel)
    return new_dims, new_mats


def _bgp_module(q: Quiver, root: DimVector, field: Field, max_steps: int) -> Representation:
    cartan = cartan_matrix(q)
    current, v = q, root
    visited: List[Tuple[Quiver, int]] = []
    for _ in range(max_steps):
        k = next(i for i in current.vertices if current.is_sink(i))
        if v == tuple(1 if i == k else 0 for i in current.vertices):
            break
        v = _reflect(cartan, v, k - 1)
        if any(x < 0 for x in v):
            raise RootSystemError(f"{root} is not a positive root of {q.name}")
        visited.append((current, k))
        current = current.reflect(k)
    else:
        raise RootSystemError(f"Reflection sequence for {root} exceeded {max_steps} steps")

    simple = simple_module(path_algebra(current), k, field)
    dims, mats = list(simple.dims), dict(simple.mats)
    for before, k in reversed(visited):
        dims, mats = _reflect_at_source(before.reflect(k), dims, mats, k, field)
    return Representation(path_algebra(q), field, tuple(dims), mats)


@lru_cache(maxsize=None)
def _indec_cached(q: Quiver, root: DimVector, field: Field) -> Representation:
    if _is_type_a(q):
        return _interval_module(q, root, field)
    return _bgp_module(q, root, field, MAX_ROOT_STEPS)


def indec_kq_module(rs: RootSystem, root: Sequence[int], field: Field = QQ_FIELD) -> Representation:
    root = tuple(int(x) for x in root)
    rs.index_of(root)
    return _indec_cached(rs.quiver, root, field)


def build_M_alpha(label: ComponentLabel, field: Field = QQ_FIELD) -> Representation:
    rs = label.root_system
    parts = [indec_kq_module(rs, root, field) for root in label.roots_with_multiplicity()]
    return direct_sum_all(parts, path_algebra(rs.quiver), field)


def gabriel_label(m: Representation, rs: RootSystem, ctx: Optional[SamplingContext] = None) -> ComponentLabel:
    if m.algebra.kind != AlgebraKind.PATH:
        raise RootSystemError("Gabriel labels are defined for path-algebra modules only")
    if m.quiver != rs.quiver:
        raise RootSystemError(f"Module over {m.quiver.name} does not match root system of {rs.quiver.name}")
    alpha = [0] * rs.size
    for part in krs_decompose(m, ctx):
        if not rs.is_root(part.dims):
            raise RootSystemError(f"Summand with dimension vector {part.dims} is not a root")
        alpha[rs.index_of(part.dims)] += 1
    return rs.label(alpha)
