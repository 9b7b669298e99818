"""Compact invariant suite run by ``satake-bly verify``."""

from __future__ import annotations

import inspect
import time
from dataclasses import dataclass

import numpy as np

from .bly import DiscreteMeasure, bly_gram, jacobian_fd, solve_balanced
from .models import (
    fundamental_field,
    infinitesimal_action,
    lie_basis,
    lie_images,
    parse_model,
    random_sl,
    sample_orbit,
    satake_ray_limit,
)
from .orbitope import (
    cone_containment_check,
    cone_system,
    face_by_brute_force,
    face_of_subset,
    moment_polytope,
    theta_shift_oracle,
    tight_vertices,
)
from .roots import build_root_system
from .satake import enumerate_boundary_components, support
from .spectral import kahler_form_identity, lambda1_bound, moment_norm_identity, preset
from .weights import dim_V_I, weight_diagram, weyl_dimension


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _small_weights(rank):
    seen = set()
    for i in range(rank):
        for j in range(rank):
            seen.add(tuple(int(k == i) + int(k == j) for k in range(rank)))
    return sorted(seen)


TYPES = ("A2", "A3", "B2", "G2")


def check_root_counts():
    expected = {"A4": 10, "B3": 9, "C3": 9, "D4": 12, "E6": 36, "F4": 24, "G2": 6}
    bad = [t for t, c in expected.items() if len(build_root_system(t).positive_roots) != c]
    return not bad, f"mismatch: {bad}" if bad else "positive-root counts match"


def check_weyl_orders():
    bad = []
    for t in ("A3", "B3", "C3", "D4", "G2"):
        rs = build_root_system(t)
        if len(rs.weyl_orbit(rs.rho)) != rs.weyl_group_order():
            bad.append(t)
    return not bad, f"mismatch: {bad}" if bad else "|W rho| = |W|"


def check_freudenthal():
    bad = []
    for t in TYPES:
        rs = build_root_system(t)
        for mu in _small_weights(rs.rank):
            if weight_diagram(rs, mu).dimension != weyl_dimension(rs, mu):
                bad.append((t, mu))
    return not bad, f"mismatch: {bad}" if bad else "diagram dimension = Weyl dimension"


def check_supports():
    bad = []
    for t in TYPES:
        rs = build_root_system(t)
        for mu in _small_weights(rs.rank):
            supports = {support(rs, lam, mu) for lam in weight_diagram(rs, mu)}
            connected = {c.I for c in enumerate_boundary_components(rs, mu)}
            if supports != connected:
                bad.append((t, mu))
    return not bad, f"mismatch: {bad}" if bad else "connected subsets = weight supports"


def check_faces_and_cones():
    bad = []
    for t in TYPES:
        rs = build_root_system(t)
        for mu in _small_weights(rs.rank):
            P = moment_polytope(rs, mu)
            diagram = weight_diagram(rs, mu)
            for c in enumerate_boundary_components(rs, mu):
                face = face_of_subset(P, c.I)
                cone = cone_system(rs, c.I)
                ok = (
                    face.vertex_set == face_by_brute_force(P, c.I)
                    and cone_containment_check(P, cone)[0]
                    and tight_vertices(P, cone) == face.vertex_set
                    and theta_shift_oracle(rs, mu, c.I)
                    and c.dim_VI == dim_V_I(diagram, c.I)
                )
                if not ok:
                    bad.append((t, mu, sorted(c.I)))
    return not bad, f"failures: {bad}" if bad else "faces, cones and shifts agree"


def check_ray_limits():
    worst = 0.0
    for spec in ("defining:3", "exterior:4,2"):
        m = parse_model(spec)
        diagram = weight_diagram(m.root_system, m.highest_weight)
        r = m.n - 1
        for mask in range(2 ** r):
            gaps = np.array([0.0 if mask >> i & 1 else 1.0 for i in range(r)])
            H = np.concatenate([[0.0], -np.cumsum(gaps)])
            lim = satake_ray_limit(m, H - H.mean())
            if lim.rank != dim_V_I(diagram, lim.I):
                return False, f"rank mismatch for {spec}"
            worst = max(worst, lim.error)
    return worst < 1e-8, f"max projector error {worst:.2e}"


def check_moment_identities(seed: int = 0):
    worst_norm, worst_form = 0.0, 0.0
    rng = np.random.default_rng(seed)
    for spec in ("defining:2", "defining:4", "exterior:4,2"):
        m = parse_model(spec)
        B = lie_basis(m.n)
        xs = sample_orbit(m, 100, seed=seed)
        worst_norm = max(worst_norm, moment_norm_identity(m, B, xs))
        images = lie_images(m, B)
        for x in xs[:10]:
            Z1, Z2 = (rng.normal(size=(m.n, m.n)) + 1j * rng.normal(size=(m.n, m.n)) for _ in range(2))
            w1 = fundamental_field(infinitesimal_action(m, Z1 - np.trace(Z1) / m.n * np.eye(m.n)), x)
            w2 = fundamental_field(infinitesimal_action(m, Z2 - np.trace(Z2) / m.n * np.eye(m.n)), x)
            worst_form = max(worst_form, kahler_form_identity(m, B, x, w1, w2, images))
    ok = worst_norm < 1e-8 and worst_form < 1e-6
    return ok, f"norm deviation {worst_norm:.2e}, 2-form deviation {worst_form:.2e}"


def check_solver(seed: int = 0):
    m = parse_model("defining:3")
    B = lie_basis(3)
    rng = np.random.default_rng(seed)
    gam = DiscreteMeasure.uniform(sample_orbit(m, 30, seed=seed))
    g = random_sl(3, rng)
    jac = float(np.abs(jacobian_fd(m, B, gam, g) + bly_gram(m, B, gam, g)).max())
    res = solve_balanced(m, B, gam)
    ok = jac < 1e-5 and res.residual <= 1e-8
    return ok, f"jacobian error {jac:.2e}, residual {res.residual:.2e} in {res.iterations} steps"


def check_lambda1():
    vals = [lambda1_bound(preset(f"pn:{k}")) for k in range(1, 6)]
    vals += [lambda1_bound(preset(p)) for p in ("gr:2,4", "gr:2,5")]
    return all(v == 2 for v in vals), f"bounds {[str(v) for v in vals]}"


CHECKS = (
    ("root-counts", check_root_counts),
    ("weyl-orders", check_weyl_orders),
    ("freudenthal", check_freudenthal),
    ("supports", check_supports),
    ("faces-cones", check_faces_and_cones),
    ("ray-limits", check_ray_limits),
    ("moment-identities", check_moment_identities),
    ("solver", check_solver),
    ("lambda1", check_lambda1),
)


def run_all(seed: int = 0) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            kwargs = {"seed": seed} if "seed" in inspect.signature(fn).parameters else {}
            ok, detail = fn(**kwargs)
        except Exception as exc:  # report, do not abort the suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return out
