"""Acceptance criteria, one test each, at the stated tolerances and time budgets.

Every test prints a single ``CRITERION k: PASS|FAIL`` line; the lines are also
collected in ``RESULTS`` and repeated in the terminal summary (see conftest.py).
"""

import itertools
import json
import math
import time
from contextlib import contextmanager

import numpy as np
import sympy

from satake_bly.bly import (
    DiscreteMeasure,
    bly_eval,
    bly_gram,
    jacobian_fd,
    solve_balanced,
    torus_component,
    weight_basis_measure,
)
from satake_bly.cli import main
from satake_bly.models import (
    fundamental_field,
    hermitian_sqrt,
    infinitesimal_action,
    lie_basis,
    lie_images,
    parse_model,
    plucker_residual,
    polar_rho,
    predicted_subset,
    project_to_subspace,
    random_sl,
    sample_orbit,
    satake_ray_limit,
)
from satake_bly.orbitope import (
    affine_distance,
    cone_containment_check,
    cone_system,
    face_of_subset,
    moment_polytope,
    tight_vertices,
)
from satake_bly.roots import build_root_system, fundamental_weight
from satake_bly.satake import enumerate_boundary_components, support
from satake_bly.spectral import (
    eigenfunction_residual,
    kahler_form_identity,
    lambda1_bound,
    moment_norm_identity,
    preset,
    random_chart_grid,
)
from satake_bly.weights import dim_V_I, weight_diagram

RESULTS = []


@contextmanager
def criterion(number, title, budget):
    """Time the body; the body fills ``state`` with ``ok`` and ``detail``."""
    state = {"ok": False, "detail": ""}
    t0 = time.perf_counter()
    try:
        yield state
    finally:
        elapsed = time.perf_counter() - t0
        ok = bool(state["ok"]) and elapsed < budget
        line = (f"CRITERION {number:2d}: {'PASS' if ok else 'FAIL'}  {title}  "
                f"[{state['detail']}; {elapsed:.2f}s of {budget:g}s]")
        RESULTS.append(line)
        print(line)
        state["passed"] = ok


def cli_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def connected_by_search(rank, cartan, subset, mu):
    """Each Dynkin component of ``subset``, found by graph search, meets supp(mu)."""
    left = set(subset)
    while left:
        comp, frontier = set(), [left.pop()]
        while frontier:
            i = frontier.pop()
            comp.add(i)
            nbrs = {j for j in left if cartan[i][j] != 0}
            left -= nbrs
            frontier.extend(nbrs)
        if all(mu[i] == 0 for i in comp):
            return False
    return True


def small_weights(rank):
    out = {tuple(fundamental_weight(rank, i)) for i in range(rank)}
    for i, j in itertools.combinations_with_replacement(range(rank), 2):
        out.add(tuple(int(k == i) + int(k == j) for k in range(rank)))
    return sorted(out)


MATRIX_TYPES = ("A2", "A3", "B2", "G2")


def dominant_rays(n):
    """Diagonal traceless dominant H for every pattern of vanishing simple roots."""
    for mask in range(2 ** (n - 1)):
        gaps = np.array([0.0 if mask >> i & 1 else 1.0 for i in range(n - 1)])
        H = np.concatenate([[0.0], -np.cumsum(gaps)])
        yield H - H.mean()


def test_criterion_01_boundary_enumeration(capsys):
    with criterion(1, "A_n, mu = w1: n+1 connected subsets, brute-force oracle", 1.0) as st:
        bad = []
        for n in range(1, 6):
            mu = ",".join(["1"] + ["0"] * (n - 1))
            code, doc = cli_json(capsys, "satake", "--type", f"A{n}", "--weight", mu)
            got = {frozenset(i - 1 for i in c["I"]) for c in doc["components"]}
            rs = build_root_system(f"A{n}")
            oracle = {
                frozenset(s)
                for r in range(n + 1)
                for s in itertools.combinations(range(n), r)
                if connected_by_search(n, rs.cartan, s, fundamental_weight(n, 0))
            }
            if code != 0 or got != oracle or len(got) != n + 1:
                bad.append(n)
        st["ok"] = not bad
        st["detail"] = f"mismatches {bad}" if bad else "n = 1..5 agree"
    assert st["passed"]


def test_criterion_02_supports_equal_connected_subsets():
    with criterion(2, "connected subsets = Freudenthal weight supports", 10.0) as st:
        bad, count = [], 0
        for t in MATRIX_TYPES:
            rs = build_root_system(t)
            for mu in small_weights(rs.rank):
                supports = {support(rs, lam, mu) for lam in weight_diagram(rs, mu)}
                connected = {c.I for c in enumerate_boundary_components(rs, mu)}
                count += 1
                if supports != connected:
                    bad.append((t, mu))
        st["ok"] = not bad
        st["detail"] = f"mismatches {bad}" if bad else f"{count} (type, weight) pairs agree"
    assert st["passed"]


def _span_contains(rs, vec, subset):
    # exact: vec lies in span of simple roots in ``subset`` iff the rank does not grow
    rows = [list(rs.simple_roots[i]) for i in sorted(subset)]
    base = sympy.Matrix(rows) if rows else sympy.zeros(0, rs.rank)
    return sympy.Matrix(rows + [list(vec)]).rank() == base.rank()


def test_criterion_03_face_oracle():
    with criterion(3, "conv(W_I mu) = P meet (mu + span I), exact", 10.0) as st:
        bad, count = [], 0
        for t in MATRIX_TYPES:
            rs = build_root_system(t)
            for mu in small_weights(rs.rank):
                P = moment_polytope(rs, mu)
                for c in enumerate_boundary_components(rs, mu):
                    orbit = rs.weyl_orbit(mu, generators=sorted(c.I))
                    slice_ = {v for v in P.vertices
                              if _span_contains(rs, [a - b for a, b in zip(v, mu)], c.I)}
                    count += 1
                    if not (face_of_subset(P, c.I).vertex_set == orbit == slice_):
                        bad.append((t, mu, sorted(c.I)))
        st["ok"] = not bad
        st["detail"] = f"mismatches {bad}" if bad else f"{count} faces agree"
    assert st["passed"]


def test_criterion_04_cone_containment():
    with criterion(4, "vertices satisfy every cone inequality, tight exactly on the face", 5.0) as st:
        bad, count = [], 0
        for t in MATRIX_TYPES:
            rs = build_root_system(t)
            for mu in small_weights(rs.rank):
                P = moment_polytope(rs, mu)
                for c in enumerate_boundary_components(rs, mu):
                    cone = cone_system(rs, c.I)
                    ok, _ = cone_containment_check(P, cone)
                    count += 1
                    if not ok or tight_vertices(P, cone) != face_of_subset(P, c.I).vertex_set:
                        bad.append((t, mu, sorted(c.I)))
        st["ok"] = not bad
        st["detail"] = f"failures {bad}" if bad else f"{count} cones checked"
    assert st["passed"]


def test_criterion_05_ray_limits():
    with criterion(5, "ray limits: rank = dim V_I, projector error <= 1e-8 at t = 40", 5.0) as st:
        worst, bad = 0.0, []
        for spec in ("defining:3", "defining:4", "exterior:4,2"):
            m = parse_model(spec)
            diagram = weight_diagram(m.root_system, m.highest_weight)
            for H in dominant_rays(m.n):
                lim = satake_ray_limit(m, H, t=40)
                if lim.rank != dim_V_I(diagram, lim.I) or lim.numeric_rank != lim.rank:
                    bad.append((spec, sorted(lim.I)))
                worst = max(worst, lim.error)
        st["ok"] = not bad and worst <= 1e-8
        st["detail"] = f"rank mismatches {bad}, max error {worst:.2e}"
    assert st["passed"]


def test_criterion_06_projection_stays_on_orbit():
    with criterion(6, "Gr(2,4): projections satisfy the Plucker quadrics to 1e-8", 5.0) as st:
        m = parse_model("exterior:4,2")
        subsets = [c.I for c in enumerate_boundary_components(m.root_system, m.highest_weight)]
        subsets.append(frozenset({0}))
        worst = 0.0
        for x in sample_orbit(m, 100, seed=0):
            for I in subsets:
                worst = max(worst, plucker_residual(m, project_to_subspace(m, I, x)))
        st["ok"] = worst <= 1e-8
        st["detail"] = f"{len(subsets)} subsets x 100 points, max residual {worst:.2e}"
    assert st["passed"]


def test_criterion_07_exact_recovery():
    with criterion(7, "pushed weight basis: residual <= 1e-8 in <= 30 steps, rho(exp u) = target to 1e-6", 10.0) as st:
        rows, ok = [], True
        for n in (3, 4):
            m = parse_model(f"defining:{n}")
            B = lie_basis(n)
            g0 = random_sl(n, np.random.default_rng(n))
            res = solve_balanced(m, B, weight_basis_measure(m).pushforward(m, g0))
            ginv = np.linalg.inv(g0)
            target = hermitian_sqrt(ginv @ ginv.conj().T)
            err = float(np.linalg.norm(polar_rho(res.p)[0] - target))
            ok &= res.converged and res.residual <= 1e-8 and res.iterations <= 30 and err <= 1e-6
            rows.append(f"n={n}: residual {res.residual:.1e} in {res.iterations} steps, target error {err:.2e}")
        st["ok"] = ok
        st["detail"] = "; ".join(rows)
    assert st["passed"]


def test_criterion_08_symmetric_measure():
    with criterion(8, "Haar sample on P^2, N = 2e4: |Psi(e)| <= 5/sqrt(N)", 30.0) as st:
        m = parse_model("defining:3")
        N = 20000
        gam = DiscreteMeasure.uniform(sample_orbit(m, N, seed=0))
        r = float(np.linalg.norm(bly_eval(m, lie_basis(3), gam, np.eye(3))))
        st["ok"] = r <= 5 / math.sqrt(N)
        st["detail"] = f"|Psi(e)| = {r:.2e}, bound {5 / math.sqrt(N):.2e}"
    assert st["passed"]


def test_criterion_09_jacobian():
    with criterion(9, "finite-difference Jacobian = -Gram to 1e-5 at step 1e-4, 20 triples", 10.0) as st:
        rng = np.random.default_rng(9)
        worst = 0.0
        specs = ("defining:3", "exterior:4,2", "sym:2,3", "defining:4")
        for k in range(20):
            m = parse_model(specs[k % len(specs)])
            B = lie_basis(m.n)
            images = lie_images(m, B)
            gam = DiscreteMeasure(sample_orbit(m, 12, seed=100 + k), rng.dirichlet(np.ones(12)))
            g = random_sl(m.n, rng)
            v = rng.normal(size=len(B))
            v /= np.linalg.norm(v)
            J = jacobian_fd(m, B, gam, g, step=1e-4, images=images)
            G = bly_gram(m, B, gam, g, images)
            worst = max(worst, float(np.abs(J @ v + G @ v).max()))
        st["ok"] = worst <= 1e-5
        st["detail"] = f"max deviation {worst:.2e}"
    assert st["passed"]


def test_criterion_10_lambda1_bound(capsys):
    with criterion(10, "lambda1 presets pn:1..5 give exactly 2; sphere gives 8 pi", 1.0) as st:
        exact = []
        for k in range(1, 6):
            code, doc = cli_json(capsys, "lambda1", "--preset", f"pn:{k}")
            exact.append(code == 0 and doc["exact"] == "2" and doc["bound"] == 2.0)
        td = preset("pn:1")
        hersch = sympy.simplify(lambda1_bound(td) * td.volume - 8 * sympy.pi) == 0
        st["ok"] = all(exact) and hersch
        st["detail"] = f"exact {exact}, lambda1 * vol = {lambda1_bound(td) * td.volume}"
    assert st["passed"]


def test_criterion_11_eigenfunctions():
    with criterion(11, "P^1, P^2: max |Delta_KE f + 2 f| <= 1e-5 over 100 chart points", 30.0) as st:
        rows, worst = [], 0.0
        for n in (2, 3):
            m = parse_model(f"defining:{n}")
            r = eigenfunction_residual(m, lie_basis(n), random_chart_grid(n - 1, 100, seed=11, h=1e-3))
            rows.append(f"P^{n - 1}: {r:.2e}")
            worst = max(worst, r)
        st["ok"] = worst <= 1e-5
        st["detail"] = ", ".join(rows)
    assert st["passed"]


def test_criterion_12_moment_identities():
    with criterion(12, "|kappa Phi|^2 = dim M to 1e-8 (1e3 points); alpha = omega_KE to 1e-6 (50 draws)", 60.0) as st:
        specs = ("defining:2", "defining:3", "defining:4", "defining:5", "exterior:4,2")
        norm_dev = 0.0
        for spec in specs:
            m = parse_model(spec)
            norm_dev = max(norm_dev, moment_norm_identity(m, lie_basis(m.n), sample_orbit(m, 1000, seed=12)))
        rng = np.random.default_rng(12)
        form_dev = 0.0
        for k in range(50):
            m = parse_model(specs[k % len(specs)])
            B = lie_basis(m.n)
            x = sample_orbit(m, 1, seed=1000 + k)[0]
            w = []
            for _ in range(2):
                Z = rng.normal(size=(m.n, m.n)) + 1j * rng.normal(size=(m.n, m.n))
                w.append(fundamental_field(infinitesimal_action(m, Z - np.trace(Z) / m.n * np.eye(m.n)), x))
            form_dev = max(form_dev, kahler_form_identity(m, B, x, w[0], w[1]))
        st["ok"] = norm_dev <= 1e-8 and form_dev <= 1e-6
        st["detail"] = f"norm deviation {norm_dev:.2e}, 2-form deviation {form_dev:.2e}"
    assert st["passed"]


def test_criterion_13_boundary_behaviour():
    with criterion(13, "torus part of Psi at t = 30 within 1e-4 of the predicted face", 10.0) as st:
        worst, count = 0.0, 0
        for spec in ("defining:3", "defining:4", "exterior:4,2"):
            m = parse_model(spec)
            B = lie_basis(m.n)
            images = lie_images(m, B)
            gam = DiscreteMeasure.uniform(sample_orbit(m, 50, seed=13))
            for H in dominant_rays(m.n):
                psi = bly_eval(m, B, gam, np.diag(np.exp(30 * H)), images)
                I = predicted_subset(m, H)
                worst = max(worst, affine_distance(m.root_system, torus_component(B, psi), m.highest_weight, I))
                count += 1
        st["ok"] = worst <= 1e-4
        st["detail"] = f"{count} rays, max distance {worst:.2e}"
    assert st["passed"]
