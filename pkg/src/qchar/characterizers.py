"""Degeneracy and factorization checkers driven by distributional identities.

Each checker validates its hypothesis identity numerically, runs the
elimination engine on log-modulus data where the argument calls for it, and
either certifies the structural conclusion (degenerate components, shifted
uniform factors, unit-modulus spectra) or raises a typed error naming the
hypothesis that failed.  Nothing is concluded from an identity that does
not hold to tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .circle import GaussianSpec, gaussian_check
from .elimination import EliminationProblem, EliminationTrace, run_heyde_chain, run_pexider_chain
from .errors import (
    FactorizationError,
    GroupMismatchError,
    HypothesisError,
    InvalidSubgroupError,
    KernelConditionError,
    UndefinedLogError,
)
from .groups import (
    Automorphism,
    FiniteAbelianGroup,
    GroupElement,
    Subgroup,
    _add_table,
    _neg_table,
    adjoint,
    annihilator,
    is_corwin,
    multiplication_map,
    structural_predicates,
)
from .measures import (
    CharacteristicFunction,
    JointDistribution,
    idempotent_shift_factor,
    inverse_char_fn,
)
from .polynomials import GroupFunction, WindowFunction, constancy_check
from .witnesses import QWitness, extract_q_witness

__all__ = [
    "SDInstance",
    "SDConclusion",
    "sd_equation_residual",
    "sd_conclude",
    "HeydeInstance",
    "HeydeConclusion",
    "heyde_condition",
    "heyde_symmetry_residual",
    "symmetry_witness",
    "heyde_conclude",
    "KBInstance",
    "KBFactorization",
    "kb_equation_residual",
    "kb_doubling_check",
    "kb_factorize",
    "CramerReport",
    "cramer_check",
]

CHECK_TOL = 1e-9
VANISH_TOL = 1e-9


def _square_group(group: FiniteAbelianGroup) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(group.orders + group.orders)


def _char_rows(group: FiniteAbelianGroup) -> np.ndarray:
    """Row x = transform of the point mass at x."""
    return kernels.dft_many(group, np.eye(group.order))


def _locate_character(group: FiniteAbelianGroup, values: np.ndarray,
                      tol: float = CHECK_TOL):
    rows = _char_rows(group)
    errs = np.abs(rows - np.asarray(values)[None, :]).max(axis=1)
    best = int(np.argmin(errs))
    if errs[best] > tol:
        return None
    return GroupElement(group.coords(best))


def _check_q(group: FiniteAbelianGroup, q) -> np.ndarray | None:
    if q is None:
        return None
    sq = _square_group(group)
    if not isinstance(q, GroupFunction) or q.group != sq:
        raise GroupMismatchError("witness must live on the dual product group")
    if abs(q.values[0]) > 1e-10:
        raise ValueError("witness must vanish at zero")
    return np.asarray(q.values).reshape(group.order, group.order)


def _log_sq_modulus(f: CharacteristicFunction) -> np.ndarray:
    mags = np.abs(np.asarray(f.values))
    if mags.min() <= VANISH_TOL:
        raise HypothesisError(
            "a characteristic function vanishes; the logarithmic route is unavailable"
        )
    return 2.0 * np.log(mags)


# ---- equal-argument product identities (several independent forms) --------


@dataclass(eq=False)
class SDInstance:
    """n transformed variables entering two linear statistics.

    cfs are the component transforms, alphas/betas the coefficient
    automorphisms of the two statistics; q is an optional witness on the
    dual product group.
    """

    group: FiniteAbelianGroup
    cfs: tuple
    alphas: tuple
    betas: tuple
    q: GroupFunction | None = None

    def __post_init__(self):
        self.cfs = tuple(self.cfs)
        self.alphas = tuple(self.alphas)
        self.betas = tuple(self.betas)
        if len(self.cfs) < 2:
            raise ValueError("need at least two components")
        if not (len(self.cfs) == len(self.alphas) == len(self.betas)):
            raise ValueError("component count mismatch")
        for f in self.cfs:
            if not isinstance(f, CharacteristicFunction) or f.group != self.group:
                raise GroupMismatchError("transforms must live on the instance group")
        for a in self.alphas + self.betas:
            if not isinstance(a, Automorphism) or a.source != self.group:
                raise GroupMismatchError("coefficients must be automorphisms of the group")


@dataclass(eq=False)
class SDConclusion:
    equation_residual: float
    verdicts: tuple
    trace: EliminationTrace
    constancy: dict

    def to_dict(self) -> dict:
        return {
            "equation_residual": self.equation_residual,
            "verdicts": list(self.verdicts),
            "constancy": dict(self.constancy),
            "trace": self.trace.to_dict(),
        }


def _sd_tables(inst: SDInstance):
    add = np.asarray(_add_table(inst.group), dtype=np.int64)
    abar = [np.asarray(adjoint(a).table, dtype=np.int64) for a in inst.alphas]
    bbar = [np.asarray(adjoint(b).table, dtype=np.int64) for b in inst.betas]
    return add, abar, bbar


def sd_equation_residual(inst: SDInstance) -> float:
    """Max defect of the two-statistic product identity on the dual square."""
    n = inst.group.order
    add, abar, bbar = _sd_tables(inst)
    lhs = np.ones((n, n), dtype=np.complex128)
    col = np.ones(n, dtype=np.complex128)
    row = np.ones(n, dtype=np.complex128)
    for f, A, B in zip(inst.cfs, abar, bbar):
        vals = np.asarray(f.values)
        lhs *= vals[add[np.ix_(A, B)]]
        col *= vals[A]
        row *= vals[B]
    rhs = col[:, None] * row[None, :]
    qm = _check_q(inst.group, inst.q)
    if qm is not None:
        rhs = rhs * np.exp(qm)
    return float(np.abs(lhs - rhs).max())


def sd_conclude(inst: SDInstance, tol: float = CHECK_TOL) -> SDConclusion:
    """Certify that every component is a point mass, or say what fails.

    Pipeline: check the identity, take log square-moduli, merge terms with
    equal coefficient ratio, eliminate, and read the conclusion off the
    constant target.
    """
    resid = sd_equation_residual(inst)
    if resid > tol:
        raise HypothesisError(
            f"product identity fails with residual {resid:.3e}", residual=resid
        )
    group = inst.group
    add, abar, bbar = _sd_tables(inst)
    n = group.order
    classes: dict[bytes, dict] = {}
    for f, A, B in zip(inst.cfs, abar, bbar):
        inv = np.empty(n, dtype=np.int64)
        inv[A] = np.arange(n)
        b_tab = inv[B]
        psi = _log_sq_modulus(f)[A]
        key = b_tab.tobytes()
        if key in classes:
            classes[key]["psi"] += psi
        else:
            classes[key] = {"b": b_tab, "psi": psi}
    terms = []
    for cls in classes.values():
        terms.append((GroupFunction(group, cls["psi"]),
                      Automorphism(group, group, cls["b"])))
    qm = _check_q(inst.group, inst.q)
    r_vals = np.zeros(n * n) if qm is None else 2.0 * np.real(qm).reshape(-1)
    problem = EliminationProblem(
        terms=tuple(terms), r_degree=0,
        R=GroupFunction(_square_group(group), r_vals),
    )
    trace = run_pexider_chain(problem)
    p_total = GroupFunction(group, sum(_log_sq_modulus(f) for f in inst.cfs))
    constancy = constancy_check(p_total)
    verdicts = []
    for j, f in enumerate(inst.cfs):
        flat = np.abs(np.abs(np.asarray(f.values)) - 1.0).max()
        if flat > tol:
            raise FactorizationError(
                f"component {j} should have unit modulus, defect {flat:.3e}"
            )
        point = _locate_character(group, f.values, tol)
        if point is None:
            raise FactorizationError(
                f"component {j} has unit modulus but matches no character"
            )
        verdicts.append({"index": j, "verdict": "degenerate",
                         "point": list(point.coords)})
    return SDConclusion(equation_residual=resid, verdicts=tuple(verdicts),
                        trace=trace, constancy=constancy)


# ---- conditional symmetry of a transformed pair ---------------------------


@dataclass(eq=False)
class HeydeInstance:
    """A pair with joint law, one mixing automorphism, optional witness."""

    group: FiniteAbelianGroup
    joint: JointDistribution
    alpha: Automorphism
    q: GroupFunction | None = None

    def __post_init__(self):
        if self.joint.arity != 2 or any(g != self.group for g in self.joint.groups):
            raise GroupMismatchError("joint must be a pair over the instance group")
        if not isinstance(self.alpha, Automorphism) or self.alpha.source != self.group:
            raise GroupMismatchError("alpha must be an automorphism of the group")


@dataclass(eq=False)
class HeydeConclusion:
    condition: bool
    symmetry_residual: float
    independence: QWitness
    doubled_residual: float
    verdicts: tuple
    trace: EliminationTrace
    constancy: dict

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "symmetry_residual": self.symmetry_residual,
            "independence_degree": self.independence.degree,
            "doubled_residual": self.doubled_residual,
            "verdicts": list(self.verdicts),
            "constancy": dict(self.constancy),
            "trace": self.trace.to_dict(),
        }


def heyde_condition(group: FiniteAbelianGroup, alpha: Automorphism):
    """(ok, witness): is x + alpha(x) = 0 only solved by zero?"""
    add = np.asarray(_add_table(group), dtype=np.int64)
    tab = add[np.arange(group.order), np.asarray(alpha.table, dtype=np.int64)]
    hits = np.where(tab == 0)[0]
    if hits.size > 1:
        return False, GroupElement(group.coords(int(hits[1])))
    return True, None


def heyde_symmetry_residual(inst: HeydeInstance) -> float:
    """Defect of J(u+v, u+bv) = J(u-v, u-bv) on the dual square."""
    group = inst.group
    n = group.order
    add = np.asarray(_add_table(group), dtype=np.int64)
    neg = np.asarray(_neg_table(group), dtype=np.int64)
    bb = np.asarray(adjoint(inst.alpha).table, dtype=np.int64)
    J = np.asarray(inst.joint.joint_cf().values).reshape(n, n)
    u = np.arange(n)[:, None]
    v = np.arange(n)[None, :]
    plus = J[add[u, v], add[u, bb[v]]]
    minus = J[add[u, neg[v]], add[u, neg[bb[v]]]]
    return float(np.abs(plus - minus).max())


def symmetry_witness(inst: HeydeInstance, tol: float = CHECK_TOL) -> QWitness | None:
    """Zero witness when the marginal transforms satisfy the symmetry exactly.

    On a finite group any polynomial witness collapses, so the only
    extractable witness is zero; a defect above tolerance returns None.
    """
    group = inst.group
    n = group.order
    f1 = np.asarray(kernels.dft(group, np.asarray(inst.joint.marginal(0).probs)))
    f2 = np.asarray(kernels.dft(group, np.asarray(inst.joint.marginal(1).probs)))
    if min(np.abs(f1).min(), np.abs(f2).min()) <= VANISH_TOL:
        raise UndefinedLogError("a marginal transform vanishes on the dual group")
    add = np.asarray(_add_table(group), dtype=np.int64)
    neg = np.asarray(_neg_table(group), dtype=np.int64)
    bb = np.asarray(adjoint(inst.alpha).table, dtype=np.int64)
    u = np.arange(n)[:, None]
    v = np.arange(n)[None, :]
    lhs = f1[add[u, v]] * f2[add[u, bb[v]]]
    rhs = f1[add[u, neg[v]]] * f2[add[u, neg[bb[v]]]]
    resid = float(np.abs(lhs - rhs).max())
    if resid > tol:
        return None
    sq = _square_group(group)
    return QWitness(q=GroupFunction(sq, np.zeros(n * n)), degree=0,
                    residual=resid, coefficients={})


def heyde_conclude(inst: HeydeInstance, tol: float = CHECK_TOL) -> HeydeConclusion:
    """Certify both components degenerate from conditional symmetry.

    Refuses groups with 2-torsion, demands the kernel condition on I+alpha,
    verifies symmetry and independence, then eliminates the log-modulus
    identity of the doubled transforms.
    """
    group = inst.group
    preds = structural_predicates(group)
    if preds["has_order_two_elements"]:
        raise HypothesisError(
            "group has elements of order 2; the symmetry argument needs odd order"
        )
    ok, kel = heyde_condition(group, inst.alpha)
    if not ok:
        neg = np.asarray(_neg_table(group), dtype=np.int64)
        is_negation = bool(
            np.array_equal(np.asarray(inst.alpha.table, dtype=np.int64),
                           neg[np.arange(group.order)])
        )
        hint = None
        if is_negation:
            hint = ("alpha is negation: any identically distributed independent "
                    "pair satisfies the symmetry, so no conclusion is possible")
        raise KernelConditionError(
            f"x + alpha(x) = 0 has the nonzero solution {kel.coords}",
            kernel_element=kel.coords, hint=hint,
        )
    sym = heyde_symmetry_residual(inst)
    if sym > tol:
        raise HypothesisError(
            f"conditional symmetry fails with residual {sym:.3e}", residual=sym
        )
    witness = extract_q_witness(inst.joint)
    if witness is None:
        raise HypothesisError("joint law does not factor over its marginals")
    n = group.order
    add = np.asarray(_add_table(group), dtype=np.int64)
    bb_tab = np.asarray(adjoint(inst.alpha).table, dtype=np.int64)
    one_plus_b = add[np.arange(n), bb_tab]
    two = np.asarray(multiplication_map(group, 2).table, dtype=np.int64)
    two_b = two[bb_tab]
    f1 = np.asarray(kernels.dft(group, np.asarray(inst.joint.marginal(0).probs)))
    f2 = np.asarray(kernels.dft(group, np.asarray(inst.joint.marginal(1).probs)))
    cf1 = CharacteristicFunction(group, f1)
    cf2 = CharacteristicFunction(group, f2)
    lhs = f1[add[np.ix_(one_plus_b, two)]] * f2[add[np.ix_(two_b, one_plus_b)]]
    rhs = (f1[one_plus_b] * f2[two_b])[:, None] * (f1[two] * f2[one_plus_b])[None, :]
    doubled = float(np.abs(lhs - rhs).max())
    if doubled > tol:
        raise HypothesisError(
            f"doubled product identity fails with residual {doubled:.3e}",
            residual=doubled,
        )
    psi1 = GroupFunction(group, _log_sq_modulus(cf1))
    psi2 = GroupFunction(group, _log_sq_modulus(cf2))
    bb = Automorphism(group, group, bb_tab)
    trace = run_heyde_chain(psi1, psi2, bb, r_degree=0)
    p_vals = np.asarray(psi1.values)[one_plus_b] + np.asarray(psi2.values)[two_b]
    constancy = constancy_check(GroupFunction(group, p_vals))
    verdicts = []
    for j, f in enumerate((cf1, cf2)):
        flat = float(np.abs(np.abs(f.values) - 1.0).max())
        if flat > tol:
            raise FactorizationError(
                f"component {j} should have unit modulus, defect {flat:.3e}"
            )
        point = _locate_character(group, f.values, tol)
        if point is None:
            raise FactorizationError(
                f"component {j} has unit modulus but matches no character"
            )
        verdicts.append({"index": j, "verdict": "degenerate",
                         "point": list(point.coords)})
    return HeydeConclusion(
        condition=True, symmetry_residual=sym, independence=witness,
        doubled_residual=doubled, verdicts=tuple(verdicts), trace=trace,
        constancy=constancy,
    )


# ---- sum/difference doubling and shifted-uniform factorization ------------


@dataclass(eq=False)
class KBInstance:
    """Independent pair observed through its sum and difference."""

    group: FiniteAbelianGroup
    cf1: CharacteristicFunction
    cf2: CharacteristicFunction
    q: GroupFunction | None = None

    def __post_init__(self):
        for f in (self.cf1, self.cf2):
            if not isinstance(f, CharacteristicFunction) or f.group != self.group:
                raise GroupMismatchError("transforms must live on the instance group")


@dataclass(eq=False)
class KBFactorization:
    equation_residual: float
    doubling: dict
    annihilator_subgroup: Subgroup
    factors: tuple
    shift_relation: dict

    def to_dict(self) -> dict:
        return {
            "equation_residual": self.equation_residual,
            "doubling": dict(self.doubling),
            "annihilator_subgroup": [list(c) for c in self.annihilator_subgroup.coords_list()],
            "factors": [
                {"shift": list(x.coords), "subgroup": [list(c) for c in K.coords_list()]}
                for x, K in self.factors
            ],
            "shift_relation": dict(self.shift_relation),
        }


def kb_equation_residual(inst: KBInstance) -> float:
    """Defect of f1(u+v) f2(u-v) = f1(u) f2(u) f1(v) f2(-v) e^q."""
    group = inst.group
    n = group.order
    add = np.asarray(_add_table(group), dtype=np.int64)
    neg = np.asarray(_neg_table(group), dtype=np.int64)
    f1 = np.asarray(inst.cf1.values)
    f2 = np.asarray(inst.cf2.values)
    u = np.arange(n)[:, None]
    v = np.arange(n)[None, :]
    lhs = f1[add[u, v]] * f2[add[u, neg[v]]]
    rhs = (f1 * f2)[:, None] * (f1 * f2[neg[np.arange(n)]])[None, :]
    qm = _check_q(group, inst.q)
    if qm is not None:
        rhs = rhs * np.exp(qm)
    return float(np.abs(lhs - rhs).max())


def kb_doubling_check(inst: KBInstance, iterations: int = 3) -> dict:
    """Residuals of the doubling identities and the iterated modulus law."""
    group = inst.group
    n = group.order
    two = np.asarray(multiplication_map(group, 2).table, dtype=np.int64)
    neg = np.asarray(_neg_table(group), dtype=np.int64)
    f1 = np.asarray(inst.cf1.values)
    f2 = np.asarray(inst.cf2.values)
    qm = _check_q(group, inst.q)
    q_diag = np.zeros(n, dtype=np.complex128)
    q_anti = np.zeros(n, dtype=np.complex128)
    if qm is not None:
        idx = np.arange(n)
        q_diag = qm[idx, idx]
        q_anti = qm[idx, neg[idx]]
    first = float(np.abs(f1[two] - f1 * f1 * np.abs(f2) ** 2 * np.exp(q_diag)).max())
    second = float(np.abs(f2[two] - np.abs(f1) ** 2 * f2 * f2 * np.exp(q_anti)).max())
    base = np.abs(f1 * f2)
    iterated = []
    arg = np.arange(n, dtype=np.int64)
    for m in range(1, iterations + 1):
        arg = two[arg]
        target = base ** (2 ** (2 * m - 1))
        worst = max(float(np.abs(np.abs(f1[arg]) - target).max()),
                    float(np.abs(np.abs(f2[arg]) - target).max()))
        iterated.append(worst)
    q_flat = qm is None or bool(np.abs(qm).max() <= CHECK_TOL)
    return {"first": first, "second": second, "iterated": iterated,
            "q_negligible": q_flat}


def kb_factorize(inst: KBInstance, tol: float = CHECK_TOL) -> KBFactorization:
    """Recover the common shifted uniform structure of both factors.

    Requires the sum/difference identity; concludes that each component is
    a point shift of the uniform measure on the annihilator of the common
    non-vanishing subgroup, which must be Corwin.
    """
    group = inst.group
    resid = kb_equation_residual(inst)
    if resid > tol:
        raise HypothesisError(
            f"sum/difference identity fails with residual {resid:.3e}",
            residual=resid,
        )
    doubling = kb_doubling_check(inst)
    odd = not structural_predicates(group)["has_order_two_elements"]
    n1 = set(np.where(np.abs(inst.cf1.values) > VANISH_TOL)[0].tolist())
    n2 = set(np.where(np.abs(inst.cf2.values) > VANISH_TOL)[0].tolist())
    if odd and n1 != n2:
        raise FactorizationError(
            "on an odd-order group both transforms must share one support"
        )
    common = sorted(n1 & n2)
    try:
        N = Subgroup(group, tuple(common))
    except InvalidSubgroupError as exc:
        raise FactorizationError(
            f"common non-vanishing set is not a subgroup: {exc}"
        ) from exc
    W = annihilator(group, N.elements)
    if not is_corwin(W):
        raise FactorizationError(
            "annihilator of the non-vanishing subgroup is not doubling-stable"
        )
    factors = []
    for j, f in enumerate((inst.cf1, inst.cf2)):
        dist = inverse_char_fn(f)
        fac = idempotent_shift_factor(dist)
        if fac is None:
            raise FactorizationError(
                f"component {j} is not a shifted uniform measure"
            )
        x, K = fac
        if K != W:
            raise FactorizationError(
                f"component {j} concentrates on a different subgroup than predicted"
            )
        factors.append((x, K))
    x1, x2 = factors[0][0], factors[1][0]
    add_t = np.asarray(_add_table(group), dtype=np.int64)
    neg_t = np.asarray(_neg_table(group), dtype=np.int64)
    shift = int(add_t[group.as_index(x1.coords), neg_t[group.as_index(x2.coords)]])
    chars = _char_rows(group)
    rel = float(np.abs(np.asarray(inst.cf1.values)
                       - np.asarray(inst.cf2.values) * chars[shift]).max())
    shift_relation = {"holds": bool(rel <= tol), "residual": rel,
                      "shift": list(group.coords(shift))}
    return KBFactorization(
        equation_residual=resid, doubling=doubling, annihilator_subgroup=W,
        factors=tuple(factors), shift_relation=shift_relation,
    )


# ---- factor test for unit-modulus targets ---------------------------------


@dataclass(eq=False)
class CramerReport:
    mode: str
    residual: float
    gamma: dict
    verdicts: tuple

    def to_dict(self) -> dict:
        return {"mode": self.mode, "residual": self.residual,
                "gamma": dict(self.gamma), "verdicts": list(self.verdicts)}


def _window_density_min(wf: WindowFunction, grid: int = 4096) -> float:
    N = wf.window.radius
    t = 2.0 * np.pi * np.arange(grid) / grid
    n = np.arange(-N, N + 1)
    vals = (np.exp(1j * np.outer(t, n)) @ np.asarray(wf.values, dtype=np.complex128)).real
    return float(vals.min())


def _split_window_arg(obj):
    if isinstance(obj, tuple):
        return obj[0], obj[1]
    return obj, None


def cramer_check(gamma, factor1, factor2, q=None, tol: float = CHECK_TOL) -> CramerReport:
    """Validate a two-factor decomposition of a Gaussian-type transform.

    Finite mode takes CharacteristicFunctions and a diagonal witness on the
    group; both factors must be positive definite, the product identity must
    hold, and the conclusion (each factor unit-modulus, hence a point mass)
    is certified.  Circle mode takes dim-1 window transforms, optionally
    paired with exact log windows; factors are screened for non-negative
    density and reported as Gaussian or not, without forcing a conclusion.
    """
    if isinstance(gamma, CharacteristicFunction):
        group = gamma.group
        cfs = (factor1, factor2)
        for j, f in enumerate(cfs):
            if not isinstance(f, CharacteristicFunction) or f.group != group:
                raise GroupMismatchError("factors must live on the target group")
            if not f.is_positive_definite():
                raise HypothesisError(f"factor {j} is not positive definite")
        if q is not None and (not isinstance(q, GroupFunction) or q.group != group):
            raise GroupMismatchError("diagonal witness must live on the dual group")
        rhs = np.asarray(factor1.values) * np.asarray(factor2.values)
        if q is not None:
            if abs(q.values[0]) > 1e-10:
                raise ValueError("witness must vanish at zero")
            rhs = rhs * np.exp(np.asarray(q.values))
        resid = float(np.abs(np.asarray(gamma.values) - rhs).max())
        if resid > tol:
            raise HypothesisError(
                f"factor identity fails with residual {resid:.3e}", residual=resid
            )
        gflat = float(np.abs(np.abs(gamma.values) - 1.0).max())
        if gflat > tol:
            raise HypothesisError(
                f"target is not unit-modulus (defect {gflat:.3e})", residual=gflat
            )
        gpoint = _locate_character(group, gamma.values, tol)
        verdicts = []
        for j, f in enumerate(cfs):
            flat = float(np.abs(np.abs(f.values) - 1.0).max())
            if flat > tol:
                raise FactorizationError(
                    f"factor {j} of a unit-modulus transform has defect {flat:.3e}"
                )
            point = _locate_character(group, f.values, tol)
            if point is None:
                raise FactorizationError(
                    f"factor {j} has unit modulus but matches no character"
                )
            verdicts.append({"index": j, "verdict": "degenerate",
                             "point": list(point.coords)})
        return CramerReport(
            mode="group", residual=resid,
            gamma={"point": list(gpoint.coords) if gpoint else None},
            verdicts=tuple(verdicts),
        )

    g_vals, g_logs = _split_window_arg(gamma)
    f_args = [_split_window_arg(factor1), _split_window_arg(factor2)]
    if not isinstance(g_vals, WindowFunction) or g_vals.window.dim != 1:
        raise GroupMismatchError("circle mode expects dim-1 window transforms")
    for j, (fv, _) in enumerate(f_args):
        if not isinstance(fv, WindowFunction) or fv.window != g_vals.window:
            raise GroupMismatchError("factor windows must match the target window")
        dmin = _window_density_min(fv)
        if dmin < -1e-9:
            raise HypothesisError(
                f"factor {j} fails positive-definiteness: density minimum {dmin:.3e}",
                residual=dmin,
            )
    rhs = np.asarray(f_args[0][0].values) * np.asarray(f_args[1][0].values)
    if q is not None:
        qv, _ = _split_window_arg(q)
        if not isinstance(qv, WindowFunction) or qv.window != g_vals.window:
            raise GroupMismatchError("diagonal witness window must match the target")
        rhs = rhs * np.exp(np.asarray(qv.values))
    resid = float(np.abs(np.asarray(g_vals.values) - rhs).max())
    if resid > tol:
        raise HypothesisError(
            f"factor identity fails with residual {resid:.3e}", residual=resid
        )
    gspec = gaussian_check(g_vals, logs=g_logs)
    if gspec is None:
        raise HypothesisError("target fails the Gaussian window test")
    verdicts = []
    for j, (fv, fl) in enumerate(f_args):
        try:
            spec = gaussian_check(fv, logs=fl)
        except UndefinedLogError:
            spec = None
        if spec is None:
            verdicts.append({"index": j, "verdict": "not-gaussian"})
        else:
            verdicts.append({"index": j, "verdict": "gaussian",
                             "shift": spec.shift, "sigma": spec.sigma})
    return CramerReport(
        mode="circle", residual=resid,
        gamma={"shift": gspec.shift, "sigma": gspec.sigma},
        verdicts=tuple(verdicts),
    )
