"""End-to-end acceptance suite.

Every test prints one PASS/FAIL line (run with ``pytest -s`` to see them all)
and pins its tolerance and runtime budget explicitly.
"""

import math
import time

import numpy as np

import eprb.estimators
from eprb.bell import (
    CANONICAL_SETTINGS,
    ChshSettings,
    chsh_S,
    decompose_conditional,
    factorizability_check,
    lhv_max_S,
    reconstruct_coincidence,
)
from eprb.cli import main
from eprb.estimators import (
    MonteCarloConfig,
    QuadratureConfig,
    coherence_coincidence,
    factorized_coincidence,
    mc_average,
    scan_curve,
)
from eprb.models import (
    FURRY,
    HBT,
    closed_form,
    furry_closed_form,
    furry_integrand,
    hbt_closed_form,
    qm_reference,
)

PI = math.pi
QUAD64 = QuadratureConfig(64)


def _report(label: str, ok: bool) -> None:
    print(f"[acceptance] {label}: {'PASS' if ok else 'FAIL'}")
    assert ok, label


def test_1_factorized_quadrature_reproduces_closed_form():
    start = time.perf_counter()
    grid = np.linspace(0.0, 2 * PI, 50)
    worst = max(
        abs(factorized_coincidence(FURRY, phi, QUAD64).mean - furry_closed_form(phi))
        for phi in grid
    )
    elapsed = time.perf_counter() - start
    _report(
        f"1 factorized model: 64-node quadrature matches 1/4 + cos(2phi)/8 "
        f"on 50 angles (max err {worst:.2e} <= 1e-12, {elapsed:.2f}s < 1s)",
        worst <= 1e-12 and elapsed < 1.0,
    )


def test_2_coherence_ratio_reproduces_closed_form():
    start = time.perf_counter()
    grid = np.linspace(0.0, 2 * PI, 50)
    worst = max(
        abs(coherence_coincidence(HBT, phi, QUAD64).mean - hbt_closed_form(phi))
        for phi in grid
    )
    at_parallel = coherence_coincidence(HBT, 0.0, QUAD64).mean
    elapsed = time.perf_counter() - start
    _report(
        f"2 coherence ratio: quadrature matches sin^2(phi)/2 on 50 angles "
        f"(max err {worst:.2e} <= 1e-12) and is {at_parallel!r} at phi=0 "
        f"(|.| <= 1e-15, {elapsed:.2f}s < 1s)",
        worst <= 1e-12 and abs(at_parallel) <= 1e-15 and elapsed < 1.0,
    )


def test_3_minima_discriminate_the_models():
    grid = np.linspace(0.0, PI, 201)  # includes 0 and pi/2 exactly
    furry_curve = scan_curve(FURRY, grid, QUAD64).means
    hbt_curve = scan_curve(HBT, grid, QUAD64).means
    qm_curve = np.asarray(qm_reference(grid), dtype=float)
    furry_min = float(np.min(furry_curve))
    hbt_min = float(np.min(hbt_curve))
    gap = float(np.max(np.abs(hbt_curve - qm_curve)))
    _report(
        f"3 discriminator: min(furry)={furry_min!r} (0.125 +- 1e-12), "
        f"min(hbt)={hbt_min!r} (0 +- 1e-12), max|hbt-qm|={gap:.2e} <= 1e-12",
        abs(furry_min - 0.125) <= 1e-12 and abs(hbt_min) <= 1e-12 and gap <= 1e-12,
    )


def test_4_chsh_separates_the_models():
    start = time.perf_counter()
    hbt_result = chsh_S(HBT, CANONICAL_SETTINGS)
    furry_result = chsh_S(FURRY, CANONICAL_SETTINGS)
    rng = np.random.default_rng(2026)
    bounds_exact = all(
        lhv_max_S(ChshSettings(*rng.uniform(-2 * PI, 2 * PI, 4))) == 2.0 for _ in range(100)
    )
    elapsed = time.perf_counter() - start
    ok = (
        abs(hbt_result.abs_s - 2.0 * math.sqrt(2.0)) <= 1e-9
        and hbt_result.violates_lhv
        and abs(furry_result.abs_s - math.sqrt(2.0)) <= 1e-9
        and not furry_result.violates_lhv
        and bounds_exact
        and elapsed < 1.0
    )
    _report(
        f"4 chsh: |S|(hbt)={hbt_result.abs_s:.10f} (2*sqrt2 +- 1e-9, violates), "
        f"|S|(furry)={furry_result.abs_s:.10f} (sqrt2 +- 1e-9, local), "
        f"deterministic bound exactly 2 for 100 random settings ({elapsed:.2f}s < 1s)",
        ok,
    )


def test_5_monte_carlo_statistical_soundness():
    start = time.perf_counter()
    phi = PI / 3
    target = float(furry_closed_form(phi))
    integrand = lambda t: furry_integrand(t, phi)

    hits = 0
    for seed in range(1, 101):
        est = mc_average(integrand, MonteCarloConfig(samples=100_000, seed=seed))
        hits += abs(est.mean - target) <= 3.0 * est.std_error

    decades = (1_000, 10_000, 100_000, 1_000_000)
    mean_se = []
    for samples in decades:
        ses = [
            mc_average(integrand, MonteCarloConfig(samples=samples, seed=s)).std_error
            for s in range(1, 21)
        ]
        mean_se.append(float(np.mean(ses)))
    slope = float(np.polyfit(np.log10(decades), np.log10(mean_se), deg=1)[0])
    elapsed = time.perf_counter() - start
    _report(
        f"5 monte carlo: closed form inside mean +- 3*std_error in {hits}/100 "
        f"seeded runs (>= 95); std-error decade slope {slope:.3f} in [-0.6, -0.4] "
        f"({elapsed:.1f}s < 30s)",
        hits >= 95 and -0.6 <= slope <= -0.4 and elapsed < 30.0,
    )


def test_6_conditional_decomposition_machinery():
    furry_decomp = decompose_conditional(FURRY, 0.0, 0.5, lambda_nodes=360)
    furry_report = factorizability_check(furry_decomp, tol=1e-9)
    furry_recon_err = abs(
        reconstruct_coincidence(furry_decomp) - float(closed_form(FURRY, 0.5))
    )

    hbt_decomp = decompose_conditional(HBT, 0.0, PI / 8, lambda_nodes=360)
    hbt_report = factorizability_check(hbt_decomp, tol=1e-9)
    hbt_recon_err = abs(
        reconstruct_coincidence(hbt_decomp) - float(closed_form(HBT, PI / 8))
    )
    ok = (
        furry_report.factorizable
        and furry_report.max_deviation <= 1e-10
        and not hbt_report.factorizable
        and furry_recon_err <= 1e-10
        and hbt_recon_err <= 1e-10
    )
    _report(
        f"6 decomposition: furry factorizable (max dev {furry_report.max_deviation:.2e} "
        f"<= 1e-10), hbt not factorizable at (0, pi/8) (dev {hbt_report.max_deviation:.4f}), "
        f"reconstruction errors {furry_recon_err:.2e}/{hbt_recon_err:.2e} <= 1e-10",
        ok,
    )


def test_7_monte_carlo_commands_are_byte_deterministic(tmp_path, monkeypatch):
    scan_path = tmp_path / "scan.csv"
    conv_path = tmp_path / "conv.json"
    scan_argv = [
        "scan", "--model", "hbt", "--estimator", "mc",
        "--samples", "20000", "--seed", "7", "--grid", "0:pi:9",
        "--output", str(scan_path),
    ]
    converge_argv = ["converge", "--model", "furry", "--seeds", "2", "--output", str(conv_path)]

    outputs = []
    for chunk in (None, None, 4096):
        if chunk is not None:
            # different internal work partition must not change any byte
            monkeypatch.setattr(eprb.estimators, "DEFAULT_CHUNK_SIZE", chunk)
        assert main(scan_argv) == 0
        assert main(converge_argv) == 0
        outputs.append((scan_path.read_bytes(), conv_path.read_bytes()))

    identical = all(pair == outputs[0] for pair in outputs[1:])
    _report(
        "7 determinism: identical mc scan and converge invocations are "
        "byte-identical, including across a different internal chunk partition",
        identical,
    )
