"""Finite abelian groups presented as explicit products of cyclic factors.

A group is Z_{n_1} x ... x Z_{n_k}; elements are coordinate tuples stored
row-major as flat indices, with cached numpy tables for addition, negation
and coordinates.  The dual group is identified with the group itself
coordinate-wise, and the pairing <x, y> = exp(2 pi i sum_j x_j y_j / n_j)
is manipulated through exact integer phases (units of 1/L, L the exponent
lcm) so that membership questions -- annihilators, kernels, adjoints --
never depend on floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    GroupMismatchError,
    InvalidElementError,
    InvalidSubgroupError,
    NotAHomomorphismError,
    NotAnAutomorphismError,
    SizeLimitError,
)

__all__ = [
    "ORDER_CAP",
    "FiniteAbelianGroup",
    "GroupElement",
    "Subgroup",
    "GroupHom",
    "Automorphism",
    "pairing",
    "pairing_is_one",
    "phase_matrix",
    "annihilator",
    "adjoint",
    "multiplication_map",
    "is_corwin",
    "structural_predicates",
    "element_order",
    "primary_component",
    "quotient",
    "all_subgroups",
    "groups_up_to_order",
]

# Exhaustive O(|G|^2) tables stop being desk-scale beyond this.
ORDER_CAP = 4096


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups with the given factor orders."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if any(n < 1 for n in orders):
            raise InvalidElementError(f"cyclic orders must be >= 1, got {orders}")
        object.__setattr__(self, "orders", orders)
        if self.order > ORDER_CAP:
            raise SizeLimitError(
                f"group order {self.order} exceeds the exhaustive-operation cap {ORDER_CAP}"
            )

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def exponent(self) -> int:
        """lcm of the factor orders; the common phase denominator L."""
        return math.lcm(*self.orders) if self.orders else 1

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def index(self, coords: Sequence[int]) -> int:
        """Flat row-major index of an element given by coordinates."""
        coords = self.reduce_coords(coords)
        idx = 0
        for c, n in zip(coords, self.orders):
            idx = idx * n + c
        return idx

    def coords(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.order:
            raise InvalidElementError(f"index {index} out of range for order {self.order}")
        return tuple(int(c) for c in _coords_table(self)[index])

    def reduce_coords(self, coords) -> tuple[int, ...]:
        if isinstance(coords, GroupElement):
            coords = coords.coords
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise InvalidElementError(
                f"expected {self.rank} coordinates, got {len(coords)}"
            )
        return tuple(c % n for c, n in zip(coords, self.orders))

    def as_index(self, x) -> int:
        """Accept a flat index, coordinate sequence or GroupElement."""
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < self.order:
                raise InvalidElementError(f"index {x} out of range for order {self.order}")
            return int(x)
        return self.index(x)

    def element(self, coords) -> "GroupElement":
        return GroupElement(self.reduce_coords(coords))

    def add(self, x, y) -> tuple[int, ...]:
        a, b = self.reduce_coords(x), self.reduce_coords(y)
        return tuple((i + j) % n for i, j, n in zip(a, b, self.orders))

    def neg(self, x) -> tuple[int, ...]:
        return tuple((-c) % n for c, n in zip(self.reduce_coords(x), self.orders))

    def elements(self) -> Iterable[tuple[int, ...]]:
        for idx in range(self.order):
            yield self.coords(idx)


@dataclass(frozen=True)
class GroupElement:
    """Coordinate tuple of a group element."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))


@lru_cache(maxsize=256)
def _coords_table(group: FiniteAbelianGroup) -> np.ndarray:
    """(order, rank) int64 matrix of all coordinate tuples, row-major."""
    if group.rank == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.unravel_index(np.arange(group.order), group.orders)
    return np.stack(grids, axis=1).astype(np.int64)


@lru_cache(maxsize=256)
def _strides(group: FiniteAbelianGroup) -> np.ndarray:
    s = np.ones(group.rank, dtype=np.int64)
    for j in range(group.rank - 2, -1, -1):
        s[j] = s[j + 1] * group.orders[j + 1]
    return s


def _index_of_coords(group: FiniteAbelianGroup, coords: np.ndarray) -> np.ndarray:
    """Vectorized row-major index of reduced coordinate rows."""
    if group.rank == 0:
        return np.zeros(coords.shape[:-1], dtype=np.int64)
    return coords @ _strides(group)


@lru_cache(maxsize=64)
def _add_table(group: FiniteAbelianGroup) -> np.ndarray:
    """(order, order) int32 table of flat indices for x + y, built blockwise."""
    n = group.order
    coords = _coords_table(group)
    orders = np.asarray(group.orders, dtype=np.int64)
    out = np.empty((n, n), dtype=np.int32)
    step = max(1, (1 << 22) // max(n, 1))
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        block = (coords[lo:hi, None, :] + coords[None, :, :]) % orders
        out[lo:hi] = _index_of_coords(group, block)
    return out


@lru_cache(maxsize=256)
def _neg_table(group: FiniteAbelianGroup) -> np.ndarray:
    coords = _coords_table(group)
    orders = np.asarray(group.orders, dtype=np.int64)
    return _index_of_coords(group, (-coords) % orders)


@lru_cache(maxsize=256)
def _phase_weights(group: FiniteAbelianGroup) -> np.ndarray:
    """w_j = L / n_j so that <x,y> = exp(2 pi i (sum x_j y_j w_j) / L)."""
    L = group.exponent
    return np.asarray([L // n for n in group.orders], dtype=np.int64)


def phase_matrix(group: FiniteAbelianGroup, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Integer pairing phases (units of 1/exponent) for index arrays xs, ys."""
    coords = _coords_table(group)
    w = _phase_weights(group)
    a = coords[np.asarray(xs, dtype=np.int64)] * w
    b = coords[np.asarray(ys, dtype=np.int64)]
    return (a @ b.T) % group.exponent


def pairing(group: FiniteAbelianGroup, x, y) -> complex:
    """Value of the duality pairing <x, y> on the unit circle."""
    p = phase_matrix(group, np.array([group.as_index(x)]), np.array([group.as_index(y)]))
    return complex(np.exp(2j * np.pi * p[0, 0] / group.exponent))

def pairing_is_one(group: FiniteAbelianGroup, x, y) -> bool:
    """Exact test <x, y> = 1 via integer phases."""
    p = phase_matrix(group, np.array([group.as_index(x)]), np.array([group.as_index(y)]))
    return int(p[0, 0]) == 0


@dataclass(frozen=True)
class Subgroup:
    """Subgroup stored as the sorted tuple of its member indices."""

    group: FiniteAbelianGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        el = tuple(sorted(int(i) for i in set(self.elements)))
        object.__setattr__(self, "elements", el)
        if not el or el[0] != 0:
            raise InvalidSubgroupError("subgroup must contain the zero element")
        arr = np.asarray(el, dtype=np.int64)
        if arr[-1] >= self.group.order or arr[0] < 0:
            raise InvalidSubgroupError("subgroup element index out of range")
        add = _add_table(self.group)
        if not np.isin(add[np.ix_(arr, arr)], arr).all():
            raise InvalidSubgroupError("element set is not closed under addition")

    @classmethod
    def from_generators(cls, group: FiniteAbelianGroup, gens) -> "Subgroup":
        idx = [group.as_index(g) for g in gens]
        return cls(group, tuple(_generated(group, tuple(idx))))

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> "Subgroup":
        return cls(group, (0,))

    @classmethod
    def full(cls, group: FiniteAbelianGroup) -> "Subgroup":
        return cls(group, tuple(range(group.order)))

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, x) -> bool:
        return self.group.as_index(x) in set(self.elements)

    def coords_list(self) -> list[tuple[int, ...]]:
        return [self.group.coords(i) for i in self.elements]


def _generated(group: FiniteAbelianGroup, gens: tuple[int, ...]) -> tuple[int, ...]:
    """Closure of {0} u gens under addition, as a sorted index tuple."""
    add = _add_table(group)
    members = {0}
    frontier = [0]
    gens = tuple(dict.fromkeys(gens))
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                s = int(add[a, g])
                if s not in members:
                    members.add(s)
                    nxt.append(s)
        frontier = nxt
    return tuple(sorted(members))


def annihilator(group: FiniteAbelianGroup, subset) -> Subgroup:
    """All dual elements pairing to 1 with every element of the given set."""
    if isinstance(subset, Subgroup):
        if subset.group != group:
            raise GroupMismatchError("subgroup lives on a different group")
        idx = np.asarray(subset.elements, dtype=np.int64)
    else:
        idx = np.asarray([group.as_index(x) for x in subset], dtype=np.int64)
    if idx.size == 0:
        return Subgroup.full(group)
    phases = phase_matrix(group, idx, np.arange(group.order))
    ann = np.where((phases == 0).all(axis=0))[0]
    return Subgroup(group, tuple(int(i) for i in ann))


@dataclass(eq=False)
class GroupHom:
    """Homomorphism stored as a full index table, validated exhaustively."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        if table.shape != (self.source.order,):
            raise NotAHomomorphismError(
                f"table length {table.shape} does not match source order {self.source.order}"
            )
        if table.min(initial=0) < 0 or table.max(initial=0) >= self.target.order:
            raise NotAHomomorphismError("table value out of target range")
        self.table = table
        if table[0] != 0:
            raise NotAHomomorphismError("zero must map to zero", witness=(0, 0))
        add_s = _add_table(self.source)
        add_t = _add_table(self.target)
        n = self.source.order
        step = max(1, (1 << 22) // max(n, 1))
        for lo in range(0, n, step):
            hi = min(n, lo + step)
            lhs = table[add_s[lo:hi, :]]
            rhs = add_t[table[lo:hi, None], table[None, :]]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                a, b = int(bad[0, 0]) + lo, int(bad[0, 1])
                raise NotAHomomorphismError(
                    f"additivity fails at ({self.source.coords(a)}, {self.source.coords(b)})",
                    witness=(a, b),
                )

    @classmethod
    def from_matrix(cls, source, target, rows) -> "GroupHom":
        """Build from an integer matrix acting on coordinates, then validate."""
        mat = np.asarray(rows, dtype=np.int64)
        if mat.shape != (target.rank, source.rank):
            raise NotAHomomorphismError(
                f"matrix shape {mat.shape} does not match ranks "
                f"({target.rank}, {source.rank})"
            )
        coords = _coords_table(source)
        img = coords @ mat.T
        img %= np.asarray(target.orders, dtype=np.int64)
        return cls(source, target, _index_of_coords(target, img))

    @classmethod
    def identity(cls, group) -> "GroupHom":
        return cls(group, group, np.arange(group.order, dtype=np.int64))

    @classmethod
    def negation(cls, group) -> "GroupHom":
        return cls(group, group, _neg_table(group).copy())

    @classmethod
    def multiplication(cls, group, n: int) -> "GroupHom":
        coords = _coords_table(group) * int(n)
        coords %= np.asarray(group.orders, dtype=np.int64)
        return cls(group, group, _index_of_coords(group, coords))

    def __call__(self, x):
        return self.target.coords(int(self.table[self.source.as_index(x)]))

    def apply_index(self, i: int) -> int:
        return int(self.table[i])

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        if other.target != self.source:
            raise GroupMismatchError("composition domains do not match")
        return type(self)(other.source, self.target, self.table[other.table])

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(int(i) for i in np.where(self.table == 0)[0]))

    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(int(i) for i in np.unique(self.table)))

    @property
    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and bool(
            (np.sort(self.table) == np.arange(self.target.order)).all()
        )


@dataclass(eq=False)
class Automorphism(GroupHom):
    """Bijective homomorphism of a group onto itself."""

    def __post_init__(self):
        if self.source != self.target:
            raise NotAnAutomorphismError("automorphism requires source == target")
        super().__post_init__()
        if not self.is_bijective:
            raise NotAnAutomorphismError("table is not a bijection")

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(self.source.order)
        return Automorphism(self.source, self.target, inv)


_ADJOINT_CHECK_CAP = 64


def adjoint(hom: GroupHom) -> GroupHom:
    """Dual map: <x, adjoint(h)(y)> = <h(x), y> for all x, y.

    Coordinates of the image are recovered exactly by evaluating the pairing
    phase on the coordinate generators of the source.
    """
    src, tgt = hom.source, hom.target
    Lt = tgt.exponent
    gen_indices = []
    for j in range(src.rank):
        e = [0] * src.rank
        e[j] = 1 % src.orders[j]
        gen_indices.append(src.index(e))
    gen_images = hom.table[np.asarray(gen_indices, dtype=np.int64)] if src.rank else np.zeros(0, np.int64)
    # phases of <h(e_j), y> for every y, in units of 1/Lt
    phases = (
        phase_matrix(tgt, gen_images, np.arange(tgt.order))
        if src.rank
        else np.zeros((0, tgt.order), dtype=np.int64)
    )
    adj_coords = np.zeros((tgt.order, src.rank), dtype=np.int64)
    for j in range(src.rank):
        n_j = src.orders[j]
        t = phases[j] * n_j
        if (t % Lt).any():
            raise NotAHomomorphismError("pairing phase not divisible; invalid table")
        adj_coords[:, j] = (t // Lt) % n_j
    table = _index_of_coords(src, adj_coords)
    out_cls = Automorphism if isinstance(hom, Automorphism) else GroupHom
    out = out_cls(tgt, src, table)
    if src.order <= _ADJOINT_CHECK_CAP and tgt.order <= _ADJOINT_CHECK_CAP:
        Ls = src.exponent
        lhs = phase_matrix(src, np.arange(src.order), out.table[np.arange(tgt.order)])
        rhs = phase_matrix(tgt, hom.table[np.arange(src.order)], np.arange(tgt.order))
        if ((lhs * Lt - rhs * Ls) % (Ls * Lt)).any():
            raise NotAHomomorphismError("adjoint identity failed exhaustive check")
    return out


def multiplication_map(group: FiniteAbelianGroup, n: int) -> GroupHom:
    """The map x -> n x."""
    return GroupHom.multiplication(group, n)


def is_corwin(obj) -> bool:
    """Doubling is onto: for groups, 2G = G; for subgroups, 2K = K."""
    if isinstance(obj, Subgroup):
        add = _add_table(obj.group)
        el = np.asarray(obj.elements, dtype=np.int64)
        doubled = np.unique(add[el, el])
        return doubled.size == el.size and (doubled == el).all()
    doubled = np.unique(multiplication_map(obj, 2).table)
    return doubled.size == obj.order


def structural_predicates(group: FiniteAbelianGroup) -> dict:
    """Order-2 torsion and unique halving, decided from the doubling map."""
    doubling = multiplication_map(group, 2)
    kernel_size = int((doubling.table == 0).sum())
    return {
        "has_order_two_elements": kernel_size > 1,
        "unique_division_by_2": doubling.is_bijective,
    }


def element_order(group: FiniteAbelianGroup, x) -> int:
    coords = group.reduce_coords(x) if not isinstance(x, (int, np.integer)) else group.coords(x)
    return math.lcm(*(n // math.gcd(c, n) for c, n in zip(coords, group.orders))) if group.rank else 1


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, int(p**0.5) + 1):
        if p % d == 0:
            return False
    return True


def primary_component(group: FiniteAbelianGroup, p: int) -> Subgroup:
    """Subgroup of elements whose order is a power of the prime p."""
    if not _is_prime(p):
        raise InvalidElementError(f"{p} is not prime")
    coords = _coords_table(group)
    orders = np.asarray(group.orders, dtype=np.int64)
    if group.rank == 0:
        return Subgroup.full(group)
    per = orders // np.gcd(coords, orders)
    el_orders = reduce(np.lcm, per.T) if group.rank > 1 else per[:, 0]
    keep = []
    for i, o in enumerate(el_orders):
        o = int(o)
        while o % p == 0:
            o //= p
        if o == 1:
            keep.append(i)
    return Subgroup(group, tuple(keep))


def _diagonalize(mat: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Integer diagonalization by unimodular row/column operations.

    Returns (diagonal entries, U) with U @ mat @ V diagonal; only the row
    transform U is tracked since column operations do not affect quotient
    coordinates.
    """
    A = [[int(v) for v in row] for row in mat]
    k = len(A)
    c = len(A[0]) if k else 0
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    t = 0
    while t < k and t < c:
        piv = None
        for i in range(t, k):
            for j in range(t, c):
                if A[i][j] != 0 and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        A[t], A[i0] = A[i0], A[t]
        U[t], U[i0] = U[i0], U[t]
        for row in A:
            row[t], row[j0] = row[j0], row[t]
        clean = False
        while not clean:
            clean = True
            for i in range(t + 1, k):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                    if A[i][t] != 0:
                        A[t], A[i] = A[i], A[t]
                        U[t], U[i] = U[i], U[t]
                        clean = False
            for j in range(t + 1, c):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j] != 0:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        clean = False
        t += 1
    diag = [abs(A[i][i]) if i < c else 0 for i in range(k)]
    return diag, U


def generating_set(sub: Subgroup) -> list[int]:
    """Small generating set of a subgroup, greedy over its element list."""
    gens: list[int] = []
    covered = {0}
    for idx in sub.elements:
        if idx not in covered:
            gens.append(idx)
            covered = set(_generated(sub.group, tuple(gens)))
    return gens


def quotient(group: FiniteAbelianGroup, sub: Subgroup) -> tuple[FiniteAbelianGroup, GroupHom]:
    """Quotient group as a cyclic product plus the projection homomorphism."""
    if sub.group != group:
        raise GroupMismatchError("subgroup lives on a different group")
    k = group.rank
    cols: list[list[int]] = [[0] * k for _ in range(k)]
    for j, n in enumerate(group.orders):
        cols[j][j] = n
    for g in generating_set(sub):
        cols_g = list(group.coords(g))
        for j in range(k):
            cols[j].append(cols_g[j])
    diag, U = _diagonalize(cols) if k else ([], [])
    kept = [i for i, d in enumerate(diag) if d > 1]
    q_group = FiniteAbelianGroup(tuple(diag[i] for i in kept))
    coords = _coords_table(group)
    U_arr = np.asarray(U, dtype=np.int64).reshape(k, k) if k else np.zeros((0, 0), np.int64)
    mapped = coords @ U_arr.T
    if kept:
        q_orders = np.asarray([diag[i] for i in kept], dtype=np.int64)
        q_coords = mapped[:, kept] % q_orders
        table = _index_of_coords(q_group, q_coords)
    else:
        table = np.zeros(group.order, dtype=np.int64)
    proj = GroupHom(group, q_group, table)
    if q_group.order * sub.order != group.order or set(proj.kernel().elements) != set(sub.elements):
        raise InvalidSubgroupError("quotient construction failed internal checks")
    return q_group, proj


def all_subgroups(group: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup, found by closing each chain of added generators."""
    seen: set[tuple[int, ...]] = set()
    frontier = [(0,)]
    seen.add((0,))
    while frontier:
        nxt = []
        for el in frontier:
            members = set(el)
            for g in range(1, group.order):
                if g in members:
                    continue
                grown = _generated(group, tuple(el) + (g,))
                if grown not in seen:
                    seen.add(grown)
                    nxt.append(grown)
        frontier = nxt
    subs = [Subgroup(group, el) for el in sorted(seen, key=lambda e: (len(e), e))]
    return subs


def groups_up_to_order(max_order: int, include_trivial: bool = False) -> list[FiniteAbelianGroup]:
    """All cyclic-factor presentations with product of orders <= max_order."""
    out: list[FiniteAbelianGroup] = []
    if include_trivial:
        out.append(FiniteAbelianGroup(()))

    def factorizations(n: int, minimum: int) -> Iterable[tuple[int, ...]]:
        yield ()
        f = minimum
        while f * f <= n:
            if n % f == 0:
                for rest in factorizations(n // f, f):
                    yield (f,) + rest
            f += 1
        if n >= minimum:
            yield (n,)

    for n in range(2, max_order + 1):
        for fac in factorizations(n, 2):
            if math.prod(fac) == n:
                out.append(FiniteAbelianGroup(fac))
    return out
