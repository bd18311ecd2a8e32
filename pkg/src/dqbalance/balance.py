"""Balance / feasibility checking for weighted digraphs.

Three decision procedures are provided:

* `direct_method` -- solves the weighted Laplacian null system in two real
  least-squares stages (standard part, then dual part) and certifies the
  verdict by conjugating the Laplacian onto the unweighted one.
* `gain_graph_method` -- symmetrizes the digraph into a gain graph with a
  Hermitian Laplacian and runs the same pipeline there.
* `cycle_oracle` -- brute force: enumerates every simple cycle and tests the
  oriented weight product (identity for unit weights, a positive real for
  general ones).  Intended as a desk-scale reference, not a production path.

For general (non-unit) weights, `build_potential` / `wdg_similarity_check`
implement the potential-function route: balance is equivalent to weights
factoring as ``theta(i)^-1 theta(j) c_ij`` with positive real ``c_ij``.

All checkers are pure functions of an immutable graph; distinct graphs may
be checked concurrently.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .algebra import DualQuaternion
from . import linalg
from .graphs import (
    Digraph,
    OrientedCycle,
    WeightedDigraph,
    build,
    enumerate_cycles,
    is_weakly_connected,
    laplacian,
    orient_cycle,
    unweighted_laplacian,
    weighted_magnitude_laplacian,
    walk_weight,
)

# Residual threshold below which a similarity / neutrality certificate is
# accepted as balanced.
BALANCE_TOL = 1e-8

# Componentwise tolerances for the intermediate checks of the pipeline.
SYMMETRY_TOL = 1e-8
UNIT_CHECK_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-8


class NotConnectedError(ValueError):
    """The method requires a weakly connected graph."""


class NotUnitWeightTypeError(ValueError):
    """The method applies to unit weight types only."""


class NonInvertibleThetaError(ValueError):
    """A potential value is not appreciable, hence not invertible."""


class Verdict(str, Enum):
    BALANCED = "balanced"
    UNBALANCED = "unbalanced"
    INDETERMINATE = "indeterminate"


class Method(str, Enum):
    DIRECT = "direct"
    GAIN_GRAPH = "gain_graph"
    CYCLE_ORACLE = "cycle_oracle"
    WDG_SIMILARITY = "wdg_similarity"


class FailureStage(str, Enum):
    SYMMETRY_CHECK = "symmetry_check"
    STANDARD_SOLVE = "standard_solve"
    UNIT_CHECK = "unit_check"
    DUAL_SOLVE = "dual_solve"
    ORTHOGONALITY_CHECK = "orthogonality_check"
    SIMILARITY_CHECK = "similarity_check"
    ASSUMPTION_RANK = "assumption_rank"
    CYCLE_FOUND = "cycle_found"


@dataclass(frozen=True)
class BalanceReport:
    """Outcome of a balance check.

    ``formation`` is present on balanced verdicts: for the unit-weight
    methods it is the recovered formation vector (satisfying
    ``weight(i,j) == conj(f_i) * f_j`` on every arc), for the general route
    the inverse-potential vector.  ``err`` is the similarity residual of the
    certificate; ``witness`` carries a non-neutral cycle when one is known.
    """

    verdict: Verdict
    method: Method
    formation: tuple[DualQuaternion, ...] | None = None
    err: float | None = None
    failure_stage: FailureStage | None = None
    witness: OrientedCycle | None = None
    seconds: float | None = None


@dataclass(frozen=True)
class PotentialAssignment:
    """Vertex potential ``theta`` and positive arc scalars ``c``.

    Valid when ``weight(i,j) == theta(i)^-1 * theta(j) * c[(i,j)]`` on every
    arc within tolerance.
    """

    theta: dict[int, DualQuaternion]
    c: dict[tuple[int, int], float]


@dataclass(frozen=True)
class StandardSolveResult:
    x: np.ndarray                 # (n, 4); first entry pinned to 1
    consistent: bool
    unit: bool
    reduced_full_rank: bool
    solver: linalg.QuatLeastSquares


@dataclass(frozen=True)
class DualSolveResult:
    x: np.ndarray                 # (n, 4); first entry pinned to 0
    consistent: bool
    orthogonal: bool


# ---------------------------------------------------------------------------
# Pipeline pieces
# ---------------------------------------------------------------------------

def check_symmetry_pairs(g: WeightedDigraph,
                         tol: float = SYMMETRY_TOL) -> tuple[int, int] | None:
    """First antiparallel pair whose weights are not mutual conjugates, if any."""
    for (i, j) in g.arcs:
        if i < j and (j, i) in g.weights:
            defect = g.weights[(i, j)] - g.weights[(j, i)].conjugate()
            if linalg.fr_norm(defect.to_array()) > tol:
                return (i, j)
    return None


def solve_standard_part(L: np.ndarray) -> StandardSolveResult:
    """Stage one: pin the first entry to 1 and solve the reduced standard system.

    Splitting the standard part into its first column ``c1`` and remainder
    ``C``, solves ``C x2 = -c1`` by minimum-norm least squares; the full
    vector is ``[1; x2]``.  ``unit`` records whether every entry has unit
    magnitude (a non-unit entry cannot be repaired by the residual
    right-multiplication freedom of the null space).
    """
    Ls = linalg.dq_standard(L)
    c1 = Ls[:, 0, :]
    solver = linalg.QuatLeastSquares(Ls[:, 1:, :])
    x2, residual = solver.solve(-c1)
    consistent = linalg.is_consistent(residual, c1)
    x = np.vstack([np.array([[1.0, 0.0, 0.0, 0.0]]), x2])
    mags = np.linalg.norm(x, axis=1)
    unit = bool(np.max(np.abs(mags - 1.0)) <= UNIT_CHECK_TOL)
    return StandardSolveResult(x, consistent, unit, solver.full_column_rank, solver)


def solve_dual_part(L: np.ndarray, x_s: np.ndarray,
                    solver: linalg.QuatLeastSquares | None = None) -> DualSolveResult:
    """Stage two: pin the first dual entry to 0 and solve for the dual part.

    The right-hand side is ``-(dual part of L) @ x_s``; the coefficient
    matrix is the same reduced standard block as in stage one, so the
    factorization can be reused.  ``orthogonal`` records whether
    ``2 Re(x_sj * conj(x_dj)) == 0`` for every entry.
    """
    Ls = linalg.dq_standard(L)
    Ld = linalg.dq_dual(L)
    rhs = -linalg.qmat_mul(Ld, x_s[:, None, :])[:, 0, :]
    if solver is None:
        solver = linalg.QuatLeastSquares(Ls[:, 1:, :])
    x2, residual = solver.solve(rhs)
    consistent = linalg.is_consistent(residual, rhs)
    x = np.vstack([np.zeros((1, 4)), x2])
    ortho = bool(np.max(np.abs(2.0 * np.sum(x_s * x, axis=1))) <= ORTHOGONALITY_TOL)
    return DualSolveResult(x, consistent, ortho)


def similarity_residual(L_hat: np.ndarray, x: np.ndarray, L: np.ndarray) -> float:
    """Residual of conjugating the weighted Laplacian onto a real one.

    ``x`` is the null-system solution with unit entries; the diagonal
    conjugation uses its entrywise conjugate:
    ``err = | diag(conj(x)) L_hat diag(x) - L |`` over all real components.
    """
    q = linalg.dqconj(np.asarray(x, dtype=np.float64))
    inner = linalg.dqmul(q[:, None, :], L_hat)
    outer = linalg.dqmul(inner, linalg.dqconj(q)[None, :, :])
    target = np.zeros_like(outer)
    target[:, :, 0] = L
    return linalg.fr_norm(outer - target)


def _require_unit_connected(g: WeightedDigraph, method: str) -> None:
    if not g.weight_type.is_unit:
        raise NotUnitWeightTypeError(f"{method} requires a unit weight type")
    if not is_weakly_connected(g.graph):
        raise NotConnectedError(f"{method} requires a weakly connected graph")


def _null_space_pipeline(L_hat: np.ndarray, L_real: np.ndarray,
                         method: Method) -> BalanceReport:
    """Shared stages 2-3: reduced solves, unit/orthogonality gates, similarity."""
    n = L_hat.shape[0]
    std = solve_standard_part(L_hat)
    if not std.reduced_full_rank:
        if linalg.rank(linalg.dq_standard(L_hat)) < n - 1:
            return BalanceReport(Verdict.INDETERMINATE, method,
                                 failure_stage=FailureStage.ASSUMPTION_RANK)
        return BalanceReport(Verdict.UNBALANCED, method,
                             failure_stage=FailureStage.STANDARD_SOLVE)
    if not std.consistent:
        return BalanceReport(Verdict.UNBALANCED, method,
                             failure_stage=FailureStage.STANDARD_SOLVE)
    if not std.unit:
        return BalanceReport(Verdict.UNBALANCED, method,
                             failure_stage=FailureStage.UNIT_CHECK)
    dual = solve_dual_part(L_hat, std.x, std.solver)
    if not dual.consistent:
        return BalanceReport(Verdict.UNBALANCED, method,
                             failure_stage=FailureStage.DUAL_SOLVE)
    if not dual.orthogonal:
        return BalanceReport(Verdict.UNBALANCED, method,
                             failure_stage=FailureStage.ORTHOGONALITY_CHECK)
    x = linalg.dq_join(std.x, dual.x)
    err = similarity_residual(L_hat, x, L_real)
    if err > BALANCE_TOL:
        return BalanceReport(Verdict.UNBALANCED, method, err=err,
                             failure_stage=FailureStage.SIMILARITY_CHECK)
    formation = tuple(linalg.dqvec_to_scalars(linalg.dqconj(x)))
    return BalanceReport(Verdict.BALANCED, method, formation=formation, err=err)


# ---------------------------------------------------------------------------
# The decision methods
# ---------------------------------------------------------------------------

def direct_method(g: WeightedDigraph) -> BalanceReport:
    """Decide balance of a unit-weighted connected digraph via its Laplacian.

    Steps: (1) antiparallel weights must be mutual conjugates; (2) solve the
    reduced standard and dual systems of ``L x = 0`` with the first entry
    pinned; (3) certify by the similarity residual against the unweighted
    Laplacian.  A rank-deficient standard part (below n-1) leaves the null
    space structure unknown and yields an indeterminate verdict.
    """
    _require_unit_connected(g, "direct_method")
    violation = check_symmetry_pairs(g)
    if violation is not None:
        return BalanceReport(Verdict.UNBALANCED, Method.DIRECT,
                             failure_stage=FailureStage.SYMMETRY_CHECK,
                             witness=OrientedCycle(violation, (True, True)))
    return _null_space_pipeline(laplacian(g), unweighted_laplacian(g.graph),
                                Method.DIRECT)


def symmetrized_gain_graph(g: WeightedDigraph) -> WeightedDigraph:
    """Both-orientation closure: every arc gains its reverse with the inverse weight.

    For unit weight types the reverse weight is the conjugate, which makes
    the resulting Laplacian exactly Hermitian.  Call only after the
    antiparallel symmetry check has passed; existing reverse arcs keep their
    own weights.
    """
    unit = g.weight_type.is_unit
    weights = dict(g.weights)
    for (i, j) in g.arcs:
        if (j, i) not in weights:
            w = g.weights[(i, j)]
            weights[(j, i)] = w.conjugate() if unit else w.inverse()
    return build(g.n, tuple(weights.keys()), weights, g.weight_type)


def gain_graph_method(g: WeightedDigraph) -> BalanceReport:
    """Decide balance by passing to the symmetrized (Hermitian) gain graph.

    A potential function transfers between the digraph and its
    symmetrization, so the verdict there is the verdict here.
    """
    _require_unit_connected(g, "gain_graph_method")
    violation = check_symmetry_pairs(g)
    if violation is not None:
        return BalanceReport(Verdict.UNBALANCED, Method.GAIN_GRAPH,
                             failure_stage=FailureStage.SYMMETRY_CHECK,
                             witness=OrientedCycle(violation, (True, True)))
    g1 = symmetrized_gain_graph(g)
    return _null_space_pipeline(laplacian(g1), unweighted_laplacian(g1.graph),
                                Method.GAIN_GRAPH)


def is_neutral(w: DualQuaternion, tol: float = BALANCE_TOL) -> bool:
    """True when ``w`` is a positive real with zero dual part, within tolerance."""
    vec = np.array([w.s.x, w.s.y, w.s.z])
    return (w.s.w > 0.0
            and float(np.linalg.norm(vec)) <= tol
            and w.d.norm() <= tol)


def cycle_deviation(g: WeightedDigraph, cycle: OrientedCycle) -> float:
    """How far the oriented cycle product is from neutrality.

    Distance to 1 for unit weight types, distance to the nearest
    nonnegative real otherwise (so a negative real scores its whole
    magnitude).
    """
    w = walk_weight(g, cycle)
    if g.weight_type.is_unit:
        return linalg.fr_norm((w - DualQuaternion.from_real(1.0)).to_array())
    pos = max(w.s.w, 0.0)
    return linalg.fr_norm((w - DualQuaternion.from_real(pos)).to_array())


def cycle_oracle(g: WeightedDigraph, max_cycles: int = 10 ** 6) -> BalanceReport:
    """Brute-force verdict: every simple cycle's oriented product must be neutral.

    Unit weight types require the product to equal 1; general weights a
    positive real dual number.  Returns the first offending cycle as a
    witness.  If enumeration hits ``max_cycles`` the verdict is
    indeterminate.
    """
    enum = enumerate_cycles(g.graph, max_cycles)
    if enum.truncated:
        return BalanceReport(Verdict.INDETERMINATE, Method.CYCLE_ORACLE)
    for cycle in enum.cycles:
        w = walk_weight(g, cycle)
        if g.weight_type.is_unit:
            ok = linalg.fr_norm((w - DualQuaternion.from_real(1.0)).to_array()) <= BALANCE_TOL
        else:
            ok = is_neutral(w)
        if not ok:
            return BalanceReport(Verdict.UNBALANCED, Method.CYCLE_ORACLE,
                                 failure_stage=FailureStage.CYCLE_FOUND,
                                 witness=cycle)
    theta, _ = _spanning_forest_theta(g)
    thetas = [theta[v] for v in range(1, g.n + 1)]
    if g.weight_type.is_unit:
        x = np.array([t.conjugate().to_array() for t in thetas])
        err = similarity_residual(laplacian(g), x, unweighted_laplacian(g.graph))
        formation = tuple(thetas)
    else:
        pa = PotentialAssignment(theta, _arc_scalars(g, theta))
        err, _ = wdg_similarity_check(g, pa)
        formation = tuple(_inverse_potential(thetas))
    return BalanceReport(Verdict.BALANCED, Method.CYCLE_ORACLE,
                         formation=formation, err=err)


# ---------------------------------------------------------------------------
# Potential functions (general weight groups)
# ---------------------------------------------------------------------------

def _spanning_forest_theta(g: WeightedDigraph):
    """Vertex potentials propagated over a BFS spanning forest.

    Roots get potential 1, children ``theta(parent) * weight`` along forward
    tree arcs and ``theta(parent) * weight^-1`` along backward ones.  BFS
    starts at vertex 1 (smallest unvisited vertex per component) and explores
    incident arcs in ascending (tail, head) order.  Also returns the tree as
    a parent map for witness-path reconstruction.
    """
    unit = g.weight_type.is_unit
    adj: dict[int, list[tuple[tuple[int, int], int]]] = {v: [] for v in range(1, g.n + 1)}
    for (i, j) in g.arcs:
        adj[i].append(((i, j), j))
        adj[j].append(((i, j), i))
    for v in adj:
        adj[v].sort(key=lambda item: item[0])
    theta: dict[int, DualQuaternion] = {}
    parent: dict[int, int] = {}
    for root in range(1, g.n + 1):
        if root in theta:
            continue
        theta[root] = DualQuaternion.from_real(1.0)
        queue = [root]
        while queue:
            v = queue.pop(0)
            for (arc, u) in adj[v]:
                if u in theta:
                    continue
                w = g.weights[arc]
                if arc == (v, u):
                    theta[u] = theta[v] * w
                else:
                    theta[u] = theta[v] * (w.conjugate() if unit else w.inverse())
                parent[u] = v
                queue.append(u)
    return theta, parent


def _arc_scalars(g: WeightedDigraph, theta) -> dict[tuple[int, int], float]:
    """Positive scalars forced by magnitudes: |w_s(i,j)| |theta_s(i)| / |theta_s(j)|."""
    return {(i, j): g.weights[(i, j)].s.norm() * theta[i].s.norm() / theta[j].s.norm()
            for (i, j) in g.arcs}


def _potential_defect(g: WeightedDigraph, theta, c) -> tuple[int, int] | None:
    """First arc where the weight fails to factor through the potential, if any."""
    for (i, j) in g.arcs:
        w = g.weights[(i, j)]
        predicted = theta[i].inverse() * theta[j] * c[(i, j)]
        defect = linalg.fr_norm((w - predicted).to_array())
        if defect > BALANCE_TOL * (1.0 + linalg.fr_norm(w.to_array())):
            return (i, j)
    return None


def build_potential(g: WeightedDigraph) -> PotentialAssignment | None:
    """Construct and verify a potential function, or report that none exists.

    The potential is seeded over a BFS spanning tree rooted at vertex 1 (tree
    arcs get scalar 1 by construction); every remaining arc is then checked
    against the factorization with its magnitude-forced scalar.  Absence of a
    potential is equivalent to some cycle being non-neutral.
    """
    if not is_weakly_connected(g.graph):
        raise NotConnectedError("build_potential requires a weakly connected graph")
    theta, _ = _spanning_forest_theta(g)
    c = _arc_scalars(g, theta)
    if _potential_defect(g, theta, c) is not None:
        return None
    return PotentialAssignment(theta, c)


def _inverse_potential(thetas) -> list[DualQuaternion]:
    """Entries ``theta^-1 * |theta_s|`` (unit standard magnitude by construction)."""
    return [t.inverse() * t.s.norm() for t in thetas]


def wdg_similarity_check(g: WeightedDigraph,
                         assignment: PotentialAssignment) -> tuple[float, float]:
    """Certify a potential: conjugation onto the magnitude Laplacian and null residual.

    Returns ``(err, null_residual)`` where ``err`` is the deviation of
    ``diag(y)^-1 L_hat diag(y)`` from the real Laplacian with entries
    ``|standard part|``, and ``null_residual = |L_hat y|``, for the
    inverse-potential vector ``y``.  Both are below the balance threshold
    exactly when the assignment is a genuine potential.
    """
    thetas = []
    for v in range(1, g.n + 1):
        t = assignment.theta[v]
        if not t.is_appreciable():
            raise NonInvertibleThetaError(f"theta({v}) is not appreciable")
        thetas.append(t)
    y = np.array([e.to_array() for e in _inverse_potential(thetas)])
    L_hat = laplacian(g)
    y_inv = linalg.dqinv(y)
    inner = linalg.dqmul(y_inv[:, None, :], L_hat)
    outer = linalg.dqmul(inner, y[None, :, :])
    target = np.zeros_like(outer)
    target[:, :, 0] = weighted_magnitude_laplacian(g)
    err = linalg.fr_norm(outer - target)
    null_residual = linalg.fr_norm(linalg.dqmat_apply(L_hat, y))
    return err, null_residual


def wdg_similarity_method(g: WeightedDigraph) -> BalanceReport:
    """Balance verdict for arbitrary weight groups via the potential route.

    Builds the spanning-tree potential; a failing arc closes a non-neutral
    cycle with its tree path, which is returned as the witness.  On success
    the similarity certificate provides the residual.
    """
    if not is_weakly_connected(g.graph):
        raise NotConnectedError("wdg_similarity_method requires a weakly connected graph")
    theta, parent = _spanning_forest_theta(g)
    c = _arc_scalars(g, theta)
    bad = _potential_defect(g, theta, c)
    if bad is not None:
        witness = _closing_cycle(g.graph, parent, bad)
        return BalanceReport(Verdict.UNBALANCED, Method.WDG_SIMILARITY,
                             failure_stage=FailureStage.CYCLE_FOUND,
                             witness=witness)
    pa = PotentialAssignment(theta, c)
    err, null_residual = wdg_similarity_check(g, pa)
    if max(err, null_residual) > BALANCE_TOL:
        return BalanceReport(Verdict.UNBALANCED, Method.WDG_SIMILARITY, err=err,
                             failure_stage=FailureStage.SIMILARITY_CHECK)
    thetas = [theta[v] for v in range(1, g.n + 1)]
    return BalanceReport(Verdict.BALANCED, Method.WDG_SIMILARITY,
                         formation=tuple(_inverse_potential(thetas)), err=err)


def _closing_cycle(graph: Digraph, parent: dict[int, int],
                   arc: tuple[int, int]) -> OrientedCycle | None:
    """The simple cycle formed by an arc plus the tree path between its ends."""
    u, v = arc
    up_u = [u]
    while up_u[-1] in parent:
        up_u.append(parent[up_u[-1]])
    index_u = {vert: k for k, vert in enumerate(up_u)}
    up_v = [v]
    while up_v[-1] not in index_u:
        if up_v[-1] not in parent:
            return None  # different BFS components; no closing cycle
        up_v.append(parent[up_v[-1]])
    meet = up_v[-1]
    # u -> v along the arc, v up to the meeting vertex, then down to u.
    meet_to_u = list(reversed(up_u[:index_u[meet] + 1]))  # [meet, ..., u]
    vertices = [u] + up_v[:-1] + meet_to_u[:-1]
    return orient_cycle(vertices, graph)


def relative_configuration_residual(g: WeightedDigraph, formation) -> float:
    """Worst-arc deviation of ``weight(i,j)`` from ``conj(f_i) * f_j``."""
    worst = 0.0
    for (i, j) in g.arcs:
        predicted = formation[i - 1].conjugate() * formation[j - 1]
        defect = linalg.fr_norm((g.weights[(i, j)] - predicted).to_array())
        worst = max(worst, defect)
    return worst


def check_balance(g: WeightedDigraph, method: Method | str) -> BalanceReport:
    """Dispatch to one of the balance methods, recording wall time."""
    method = Method(method)
    dispatch = {
        Method.DIRECT: direct_method,
        Method.GAIN_GRAPH: gain_graph_method,
        Method.CYCLE_ORACLE: cycle_oracle,
        Method.WDG_SIMILARITY: wdg_similarity_method,
    }
    start = time.perf_counter()
    report = dispatch[method](g)
    return replace(report, seconds=time.perf_counter() - start)
