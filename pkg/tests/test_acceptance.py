"""Acceptance suite: one test per release criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria complete.
"""

import time

import numpy as np

from dqbalance import linalg
from dqbalance.algebra import DualQuaternion, Quaternion, random_udq
from dqbalance.balance import (
    Verdict,
    cycle_deviation,
    cycle_oracle,
    direct_method,
    gain_graph_method,
    relative_configuration_residual,
    wdg_similarity_check,
    wdg_similarity_method,
    build_potential,
)
from dqbalance.bench import run_benchmark
from dqbalance.generate import cycle_arc, gen_cycle, gen_random_balanced, perturb
from dqbalance.graphs import (
    Digraph,
    WeightType,
    build,
    has_directed_spanning_tree,
    laplacian,
    unweighted_laplacian,
    weighted_magnitude_laplacian,
)

from conftest import I, J, K, balanced_cycle3, make_cycle3, make_tree


def _finish(num, name, failures):
    ok = not failures
    print(f"[acceptance {num}] {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {num} ({name}):\n" + "\n".join(failures)


def test_criterion_1_cycle_benchmark_grid():
    failures = []
    start = time.perf_counter()
    records = run_benchmark(seed=0)  # 6 sizes x 2 unit types x 2 methods
    elapsed = time.perf_counter() - start
    if len(records) != 24:
        failures.append(f"expected 24 grid cells, got {len(records)}")
    for r in records:
        if r.verdict != "balanced":
            failures.append(f"cell n={r.n} {r.weight_type}/{r.method}: {r.verdict}")
        if not r.err <= 1e-8:
            failures.append(f"cell n={r.n} {r.weight_type}/{r.method}: err={r.err:.3e}")
    if elapsed >= 60.0:
        failures.append(f"grid took {elapsed:.1f}s (budget 60s)")
    _finish(1, f"benchmark grid (24 cells, {elapsed:.1f}s)", failures)


def test_criterion_2_worked_examples():
    failures = []
    rng = np.random.default_rng(2)

    # Laplacian fixtures of the two 3-vertex examples, entrywise.
    w21, w31 = random_udq(rng), random_udq(rng)
    L1 = laplacian(make_tree(w21, w31))
    expected1 = np.zeros((3, 3, 8))
    expected1[1, 1, 0] = expected1[2, 2, 0] = 1.0
    expected1[1, 0] = -w21.to_array()
    expected1[2, 0] = -w31.to_array()
    if not np.array_equal(L1, expected1):
        failures.append("tree Laplacian mismatch")

    w13, w21c, w32 = random_udq(rng), random_udq(rng), random_udq(rng)
    L2 = laplacian(make_cycle3(w13, w21c, w32))
    expected2 = np.zeros((3, 3, 8))
    for t in range(3):
        expected2[t, t, 0] = 1.0
    expected2[0, 2] = -w13.to_array()
    expected2[1, 0] = -w21c.to_array()
    expected2[2, 1] = -w32.to_array()
    if not np.array_equal(L2, expected2):
        failures.append("cycle Laplacian mismatch")

    # Tree solve: null vector [1, w21, w31] for any unit weights.
    report = direct_method(make_tree(w21, w31))
    x = [f.conjugate().to_array() for f in report.formation]
    want = [np.array([1, 0, 0, 0, 0, 0, 0, 0], dtype=float),
            w21.to_array(), w31.to_array()]
    if report.verdict is not Verdict.BALANCED:
        failures.append("tree not balanced")
    for k, (got, exp) in enumerate(zip(x, want)):
        if not np.allclose(got, exp, atol=1e-10):
            failures.append(f"tree solution entry {k} off by "
                            f"{np.abs(got - exp).max():.2e}")

    # 3-cycle feasibility condition: conj(w13) == w32 * w21, both directions.
    g_bal, (b13, b21, b32) = balanced_cycle3(rng)
    rep_bal = direct_method(g_bal)
    if rep_bal.verdict is not Verdict.BALANCED:
        failures.append("cycle satisfying the closure condition not balanced")
    xs = [f.conjugate() for f in rep_bal.formation]
    if not np.allclose(xs[2].to_array(), b13.conjugate().to_array(), atol=1e-10):
        failures.append("cycle solution third entry is not conj(w13)")
    g_bad = g_bal.with_weight((3, 2), random_udq(rng))
    if direct_method(g_bad).verdict is not Verdict.UNBALANCED:
        failures.append("cycle violating the closure condition not rejected")

    # Standard-part ranks of the i/j/k example: 2 balanced, 3 perturbed.
    g_ijk = make_cycle3(I, J, K)
    r_bal = linalg.rank(linalg.dq_standard(laplacian(g_ijk)))
    g_pert = perturb(g_ijk, (3, 2), rng)
    r_pert = linalg.rank(linalg.dq_standard(laplacian(g_pert)))
    if r_bal != 2:
        failures.append(f"balanced example rank {r_bal} != 2")
    if r_pert != 3:
        failures.append(f"perturbed example rank {r_pert} != 3")
    _finish(2, "worked examples", failures)


def _mixed_graph_pool(count, rng):
    """Graphs of every weight type, about half perturbed on a cycle arc."""
    pool = []
    types = list(WeightType)
    for t in range(count):
        wt = types[t % len(types)]
        n = int(rng.integers(3, 31))
        density = 3.0 / (n * (n - 1))  # a few extra arcs beyond the tree
        g = gen_random_balanced(n, density, wt, rng)
        perturbed = False
        if t % 2 == 1:
            arc = cycle_arc(g)
            if arc is not None:
                g = perturb(g, arc, rng)
                perturbed = True
        pool.append((g, perturbed))
    return pool


def test_criterion_3_method_agreement():
    failures = []
    rng = np.random.default_rng(3)
    pool = _mixed_graph_pool(220, rng)
    n_unbalanced = 0
    for idx, (g, perturbed) in enumerate(pool):
        verdicts = {}
        if g.weight_type.is_unit:
            verdicts["direct"] = direct_method(g).verdict
            verdicts["gain"] = gain_graph_method(g).verdict
        verdicts["oracle"] = cycle_oracle(g).verdict
        verdicts["wdg"] = wdg_similarity_method(g).verdict
        definite = {v for v in verdicts.values() if v is not Verdict.INDETERMINATE}
        if len(definite) != 1:
            failures.append(f"graph {idx} ({g.weight_type.value}, n={g.n}): {verdicts}")
            continue
        verdict = definite.pop()
        if perturbed and verdict is not Verdict.UNBALANCED:
            failures.append(f"graph {idx}: perturbed but judged {verdict.value}")
        if not perturbed and verdict is not Verdict.BALANCED:
            failures.append(f"graph {idx}: constructed balanced but judged {verdict.value}")
        if verdict is Verdict.UNBALANCED:
            n_unbalanced += 1
    if n_unbalanced < 60:
        failures.append(f"only {n_unbalanced} unbalanced instances; pool not mixed")
    _finish(3, f"method agreement over {len(pool)} graphs", failures)


def test_criterion_4_soundness():
    failures = []
    rng = np.random.default_rng(4)
    for idx in range(60):
        wt = (WeightType.UNIT_DUAL_QUATERNION, WeightType.UNIT_COMPLEX)[idx % 2]
        n = int(rng.integers(3, 16))
        g = gen_random_balanced(n, 4.0 / (n * (n - 1)), wt, rng)
        if idx % 2 == 1:
            arc = cycle_arc(g)
            if arc is not None:
                g = perturb(g, arc, rng)
        for checker in (direct_method, gain_graph_method, cycle_oracle):
            report = checker(g)
            if report.verdict is Verdict.BALANCED:
                res = relative_configuration_residual(g, report.formation)
                if res > 1e-8:
                    failures.append(
                        f"graph {idx} {checker.__name__}: formation residual {res:.2e}")
            elif report.verdict is Verdict.UNBALANCED:
                # confirm by an explicit witness cycle
                witness = report.witness or cycle_oracle(g).witness
                if witness is None:
                    failures.append(f"graph {idx} {checker.__name__}: no witness cycle")
                elif cycle_deviation(g, witness) <= 1e-6:
                    failures.append(
                        f"graph {idx} {checker.__name__}: witness deviation "
                        f"{cycle_deviation(g, witness):.2e}")
    _finish(4, "balanced formations sound, unbalanced verdicts witnessed", failures)


def test_criterion_5_algebraic_suites():
    failures = []
    rng = np.random.default_rng(5)

    for t in range(100):
        m, n, k = rng.integers(1, 6, size=3)
        A = rng.normal(size=(m, n, 4))
        B = rng.normal(size=(n, k, 4))
        C = rng.normal(size=(m, n, 4))
        scale = 1.0 + linalg.fr_norm(A) * linalg.fr_norm(B)
        if np.abs(linalg.real_expand(linalg.qmat_mul(A, B))
                  - linalg.real_expand(A) @ linalg.real_expand(B)).max() > 1e-12 * scale:
            failures.append(f"product homomorphism failed at trial {t}")
        if np.abs(linalg.real_expand(A + C)
                  - (linalg.real_expand(A) + linalg.real_expand(C))).max() > 1e-12:
            failures.append(f"sum homomorphism failed at trial {t}")
        if np.abs(linalg.real_expand(linalg.qmat_conj_transpose(A))
                  - linalg.real_expand(A).T).max() > 1e-12:
            failures.append(f"conjugate-transpose identity failed at trial {t}")

    for t in range(1000):
        p = DualQuaternion.from_array(rng.normal(size=8))
        q = DualQuaternion.from_array(rng.normal(size=8))
        lhs = (p * q).conjugate().to_array()
        rhs = (q.conjugate() * p.conjugate()).to_array()
        if np.abs(lhs - rhs).max() > 1e-10:
            failures.append(f"conjugate anti-homomorphism failed at trial {t}")
        if p.s.norm() > 1e-2 and q.s.norm() > 1e-2:
            got = (p * q).magnitude()
            want = p.magnitude() * q.magnitude()
            scale = 1.0 + abs(want.s) + abs(want.d)
            if abs(got.s - want.s) > 1e-10 * scale or abs(got.d - want.d) > 1e-10 * scale:
                failures.append(f"magnitude multiplicativity failed at trial {t}")

    for t in range(1000):
        prod = random_udq(rng) * random_udq(rng)
        if not prod.is_unit(1e-10):
            failures.append(f"unit closure failed at trial {t}")
    _finish(5, "algebraic identity suites", failures)


def test_criterion_6_general_weight_theory():
    failures = []
    rng = np.random.default_rng(6)
    general = (WeightType.DUAL_QUATERNION, WeightType.COMPLEX, WeightType.REAL)

    for t in range(100):
        wt = general[t % 3]
        n = int(rng.integers(3, 13))
        g = gen_random_balanced(n, 0.15, wt, rng)
        pa = build_potential(g)
        if pa is None:
            failures.append(f"trial {t}: potential missing on a balanced graph")
            continue
        err, null_residual = wdg_similarity_check(g, pa)
        if err > 1e-8 or null_residual > 1e-8:
            failures.append(f"trial {t}: residuals {err:.2e}, {null_residual:.2e}")
        y = np.array([(pa.theta[v].inverse() * pa.theta[v].s.norm()).to_array()
                      for v in range(1, n + 1)])
        L_hat = laplacian(g)
        lams, vecs = np.linalg.eig(weighted_magnitude_laplacian(g))
        for col in range(n):
            x = np.zeros((n, 8))
            x[:, 0], x[:, 1] = vecs[:, col].real, vecs[:, col].imag
            lam = np.zeros(8)
            lam[0], lam[1] = lams[col].real, lams[col].imag
            z = linalg.dqmul(y, x)
            gap = linalg.fr_norm(linalg.dqmat_apply(L_hat, z) - linalg.dqmul(z, lam))
            if gap > 1e-6:
                failures.append(f"trial {t}: eigenpair {col} transfer gap {gap:.2e}")
                break

    for t in range(20):
        wt = general[t % 3]
        g = gen_cycle(int(rng.integers(3, 9)), wt, rng)
        arc = g.arcs[0]
        flipped = g.with_weight(arc, g.weights[arc] * -1.0)
        if build_potential(flipped) is not None:
            failures.append(f"negative-product cycle {t} still has a potential")
    _finish(6, "general weight theory (potentials, similarity, eigenpairs)", failures)


def test_criterion_7_spanning_tree_vs_zero_eigenvalue():
    failures = []
    rng = np.random.default_rng(7)
    for t in range(50):
        n = int(rng.integers(2, 9))
        arcs = tuple((i, j) for i in range(1, n + 1) for j in range(1, n + 1)
                     if i != j and rng.random() < 0.3)
        g = Digraph(n, arcs)
        L = unweighted_laplacian(g)
        eigs = np.linalg.eigvals(L)
        scale = max(1.0, float(np.abs(eigs).max()))
        simple_zero = int(np.sum(np.abs(eigs) <= 1e-7 * scale)) == 1
        ones_in_null = float(np.linalg.norm(L @ np.ones(n))) <= 1e-12
        if not ones_in_null:
            failures.append(f"trial {t}: all-ones vector not in the null space")
        if has_directed_spanning_tree(g) != simple_zero:
            failures.append(
                f"trial {t} (n={n}, {len(arcs)} arcs): reachability says "
                f"{has_directed_spanning_tree(g)}, spectrum says {simple_zero}")
    _finish(7, "directed spanning tree matches simple zero eigenvalue", failures)
