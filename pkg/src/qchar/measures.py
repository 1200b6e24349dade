"""Probability distributions and characteristic functions on finite groups.

The characteristic function of mu is f(y) = sum_x <x, y> mu(x) over the
dual (identified with the group); transforms go through the kernels module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import (
    FactorizationError,
    GroupMismatchError,
    NotPositiveDefiniteError,
)
from .groups import (
    FiniteAbelianGroup,
    GroupElement,
    GroupHom,
    Subgroup,
    _add_table,
    _neg_table,
    annihilator,
)

__all__ = [
    "Distribution",
    "CharacteristicFunction",
    "JointDistribution",
    "char_fn",
    "inverse_char_fn",
    "convolve",
    "haar",
    "haar_cf",
    "degenerate",
    "shifted_haar",
    "support_bound",
    "idempotent_shift_factor",
    "push_forward",
    "product_joint",
    "linear_form_joint",
    "random_distribution",
]

_MASS_TOL = 1e-12
_CF_TOL = 1e-12
_PD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector indexed by the flat element order of the group."""

    group: FiniteAbelianGroup
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (self.group.order,):
            raise GroupMismatchError(
                f"probability vector length {probs.shape} != group order {self.group.order}"
            )
        if probs.min(initial=0.0) < -_MASS_TOL:
            i = int(probs.argmin())
            raise NotPositiveDefiniteError(
                f"negative mass {probs[i]:.3e} at {self.group.coords(i)}",
                worst_mass=float(probs[i]),
                location=self.group.coords(i),
            )
        if abs(probs.sum() - 1.0) > _MASS_TOL:
            raise ValueError(f"total mass {probs.sum()!r} is not 1")
        object.__setattr__(self, "probs", probs)

    def mass(self, x) -> float:
        return float(self.probs[self.group.as_index(x)])

    def support(self, tol: float = _MASS_TOL) -> list[tuple[int, ...]]:
        return [self.group.coords(i) for i in np.where(self.probs > tol)[0]]


@dataclass(frozen=True, eq=False)
class CharacteristicFunction:
    """Function on the dual group; normalized, Hermitian, bounded by one."""

    group: FiniteAbelianGroup
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != (self.group.order,):
            raise GroupMismatchError("value vector length does not match group order")
        if abs(values[0] - 1.0) > _CF_TOL:
            raise ValueError(f"value at zero is {values[0]!r}, expected 1")
        neg = _neg_table(self.group)
        if np.abs(values[neg] - values.conj()).max(initial=0.0) > _CF_TOL:
            raise ValueError("Hermitian symmetry f(-y) = conj f(y) fails")
        if np.abs(values).max(initial=0.0) > 1.0 + _CF_TOL:
            raise ValueError("characteristic function exceeds modulus 1")
        object.__setattr__(self, "values", values)

    def is_positive_definite(self, tol: float = _PD_TOL) -> bool:
        masses = kernels.dft(self.group, self.values, sign=-1).real / self.group.order
        return float(masses.min()) >= -tol

    def nonvanishing(self, tol: float = _MASS_TOL) -> bool:
        return float(np.abs(self.values).min()) > tol


def char_fn(dist: Distribution) -> CharacteristicFunction:
    """Direct-summation Fourier transform of the distribution."""
    values = kernels.dft(dist.group, dist.probs.astype(np.complex128))
    return CharacteristicFunction(dist.group, values)


def inverse_char_fn(cf: CharacteristicFunction, tol: float = _PD_TOL) -> Distribution:
    """Inverse transform; rejects spectra without a non-negative preimage.

    Masses within float noise below zero are clipped to keep the
    Distribution validator happy; genuine negativity past ``tol`` raises.
    """
    masses = kernels.dft(cf.group, cf.values, sign=-1).real / cf.group.order
    worst = float(masses.min())
    if worst < -tol:
        i = int(masses.argmin())
        raise NotPositiveDefiniteError(
            f"no non-negative preimage: mass {worst:.3e} at {cf.group.coords(i)}",
            worst_mass=worst,
            location=cf.group.coords(i),
        )
    return Distribution(cf.group, np.clip(masses, 0.0, None))


def convolve(a: Distribution, b: Distribution) -> Distribution:
    if a.group != b.group:
        raise GroupMismatchError("convolution operands on different groups")
    return Distribution(a.group, kernels.convolve(a.group, a.probs, b.probs))


def haar(sub: Subgroup) -> Distribution:
    """Uniform distribution on a subgroup."""
    probs = np.zeros(sub.group.order)
    probs[np.asarray(sub.elements)] = 1.0 / sub.order
    return Distribution(sub.group, probs)


def haar_cf(sub: Subgroup) -> CharacteristicFunction:
    """Indicator of the annihilator; exact by integer phases."""
    values = np.zeros(sub.group.order, dtype=np.complex128)
    values[np.asarray(annihilator(sub.group, sub).elements)] = 1.0
    return CharacteristicFunction(sub.group, values)


def degenerate(group: FiniteAbelianGroup, x) -> Distribution:
    probs = np.zeros(group.order)
    probs[group.as_index(x)] = 1.0
    return Distribution(group, probs)


def shifted_haar(group: FiniteAbelianGroup, x, sub: Subgroup) -> Distribution:
    """Uniform distribution on the coset x + K."""
    if sub.group != group:
        raise GroupMismatchError("subgroup lives on a different group")
    add = _add_table(group)
    probs = np.zeros(group.order)
    probs[add[group.as_index(x), np.asarray(sub.elements)]] = 1.0 / sub.order
    return Distribution(group, probs)


def support_bound(dist: Distribution, tol: float = _PD_TOL) -> Subgroup:
    """Coset-free support bound from the level set {f = 1} of the transform.

    Returns A(X, E) for E = {y : |f(y) - 1| <= tol} and asserts the support
    of the distribution actually lies inside it.
    """
    f = char_fn(dist).values
    E = np.where(np.abs(f - 1.0) <= tol)[0]
    bound = annihilator(dist.group, [int(i) for i in E])
    inside = np.zeros(dist.group.order, dtype=bool)
    inside[np.asarray(bound.elements)] = True
    stray = np.where(~inside & (dist.probs > _MASS_TOL))[0]
    if stray.size:
        raise FactorizationError(
            f"support escapes its annihilator bound at {dist.group.coords(int(stray[0]))}"
        )
    return bound


def idempotent_shift_factor(dist: Distribution, tol: float = _PD_TOL):
    """Recognize mu = E_x * m_K from its transform, if possible.

    Requires |f| valued in {0, 1} within tol, the set N = {f != 0} a
    subgroup, and f restricted to N a character <x, .>.  Returns the
    lexicographically smallest shift and the subgroup K = A(X, N), or None.
    """
    group = dist.group
    f = char_fn(dist).values
    mods = np.abs(f)
    if not ((mods <= tol) | (np.abs(mods - 1.0) <= tol)).all():
        return None
    N_idx = np.where(mods > 0.5)[0]
    try:
        N = Subgroup(group, tuple(int(i) for i in N_idx))
    except Exception:
        return None
    chars = kernels.dft_many(group, np.eye(group.order, dtype=np.complex128))
    errs = np.abs(chars[:, N_idx] - f[N_idx]).max(axis=1)
    hits = np.where(errs <= tol)[0]
    if hits.size == 0:
        return None
    x = int(hits[0])
    K = annihilator(group, N)
    recon = shifted_haar(group, x, K)
    if np.abs(recon.probs - dist.probs).max() > _MASS_TOL:
        return None
    return GroupElement(group.coords(x)), K


def push_forward(dist: Distribution, hom: GroupHom) -> Distribution:
    if hom.source != dist.group:
        raise GroupMismatchError("homomorphism source does not match distribution")
    probs = np.zeros(hom.target.order)
    np.add.at(probs, hom.table, dist.probs)
    return Distribution(hom.target, probs)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint law of several group-valued variables, over the product group."""

    groups: tuple[FiniteAbelianGroup, ...]
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        probs = np.asarray(self.probs, dtype=np.float64)
        order = math.prod(g.order for g in self.groups)
        if probs.shape != (order,):
            raise GroupMismatchError(
                f"joint vector length {probs.shape} != product order {order}"
            )
        Distribution(self.product_group, probs)  # reuse mass validation
        object.__setattr__(self, "probs", probs)

    @cached_property
    def product_group(self) -> FiniteAbelianGroup:
        orders: tuple[int, ...] = ()
        for g in self.groups:
            orders = orders + g.orders
        return FiniteAbelianGroup(orders)

    @property
    def arity(self) -> int:
        return len(self.groups)

    def marginal(self, i: int) -> Distribution:
        shape = tuple(g.order for g in self.groups)
        axes = tuple(j for j in range(self.arity) if j != i)
        return Distribution(self.groups[i], self.probs.reshape(shape).sum(axis=axes))

    def joint_cf(self) -> CharacteristicFunction:
        return char_fn(Distribution(self.product_group, self.probs))

    def marginal_cf_product(self) -> np.ndarray:
        """Flattened outer product of the marginal transforms."""
        out = np.ones(1, dtype=np.complex128)
        for i in range(self.arity):
            out = np.multiply.outer(out, char_fn(self.marginal(i)).values).ravel()
        return out


def product_joint(dists: list[Distribution] | tuple[Distribution, ...]) -> JointDistribution:
    probs = np.ones(1)
    for d in dists:
        probs = np.multiply.outer(probs, d.probs).ravel()
    return JointDistribution(tuple(d.group for d in dists), probs)


def linear_form_joint(joint: JointDistribution, rows) -> JointDistribution:
    """Joint law of the linear forms L_i = sum_j rows[i][j](xi_j).

    Each rows[i][j] is a GroupHom from the j-th component group into one
    common target group.
    """
    targets = {h.target for row in rows for h in row}
    if len(targets) != 1:
        raise GroupMismatchError("all linear-form coefficients need one common target")
    target = targets.pop()
    for row in rows:
        if len(row) != joint.arity:
            raise GroupMismatchError("coefficient row length does not match arity")
        for j, h in enumerate(row):
            if h.source != joint.groups[j]:
                raise GroupMismatchError(f"coefficient source mismatch at position {j}")
    m = len(rows)
    shape = tuple(g.order for g in joint.groups)
    per_factor = np.unravel_index(np.arange(joint.probs.size), shape)
    add_t = _add_table(target)
    out_idx = np.zeros(joint.probs.size, dtype=np.int64)
    t_order = target.order
    for i, row in enumerate(rows):
        acc = np.zeros(joint.probs.size, dtype=np.int64)
        for j, h in enumerate(row):
            acc = add_t[acc, h.table[per_factor[j]]]
        out_idx = out_idx * t_order + acc
    probs = np.zeros(t_order**m)
    np.add.at(probs, out_idx, joint.probs)
    return JointDistribution((target,) * m, probs)


def random_distribution(group: FiniteAbelianGroup, rng: np.random.Generator) -> Distribution:
    """Strictly positive random probability vector (sweep helper)."""
    probs = rng.random(group.order) + 1e-3
    return Distribution(group, probs / probs.sum())
