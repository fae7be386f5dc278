"""End-to-end acceptance experiments, shared by the CLI and the test suite.

Each ``criterion_<k>`` returns a plain dict with ``criterion``, ``name``,
``passed`` and ``measured``.  All randomness is seeded, and nothing
time-dependent is reported, so reruns are byte-identical.
"""

from __future__ import annotations

import math

import numpy as np

from qkgsec.fock.channels import LossChannel, apply_loss
from qkgsec.fock.linalg import jacobi_eigh
from qkgsec.fock.metrology import (
    Generator,
    coherent_and_incoherent,
    decoherence_curve,
    photon_number_variance,
    qfi,
    trace_distance,
)
from qkgsec.fock.states import Coherent, DensityOp, NumberSuperposition, SqueezedVacuum, make_state
from qkgsec.pamp import collision_counts, pa_experiment
from qkgsec.profile import (
    ProductBernoulli,
    SpikeUniform,
    UniformSubset,
    analyze,
    check_bounds,
    normalize_and_sort,
)
from qkgsec.worstcase import solve_spike_for_mutual_info

MEASURE_FIELDS = (
    "p1",
    "min_entropy",
    "shannon_entropy",
    "mutual_info",
    "trial_complexity",
    "kolmogorov_distance",
    "renyi2_entropy",
)
CHAIN_TOL = 1e-9
ORACLE_TOL = 1e-9


def _result(k: int, name: str, passed: bool, **measured) -> dict:
    return {"criterion": k, "name": name, "passed": bool(passed), "measured": measured}


def random_dense_corpus(count: int = 1000, max_bits: int = 12, seed: int = 2006):
    """Random dense profiles of assorted shapes: flat, peaked, sparse, heavy-tailed."""
    rng = np.random.default_rng(seed)
    profiles = []
    for i in range(count):
        n = int(rng.integers(1, max_bits + 1))
        size = 2**n
        style = i % 4
        if style == 0:
            w = rng.dirichlet(np.full(size, 10.0 ** rng.uniform(-2, 2)))
        elif style == 1:
            w = rng.random(size) ** rng.uniform(1, 40)
        elif style == 2:
            w = rng.random(size) * (rng.random(size) < rng.uniform(0.01, 1))
            if not w.any():
                w[rng.integers(size)] = 1.0
        else:
            w = np.exp(-rng.exponential(10.0 ** rng.uniform(-1, 1.5), size))
        profiles.append(normalize_and_sort(w, n))
    return profiles


def criterion_1() -> dict:
    n = 1000
    target = n * 2.0**-10
    delta = solve_spike_for_mutual_info(n, target)
    report = analyze(SpikeUniform(n, delta))
    scaled = delta * 2.0**10
    rel = abs(report.mutual_info - target) / target
    return _result(
        1,
        "worst-case spike: p1 * 2**10 for 1e-3 bit per bit at n = 1000",
        1.0 <= scaled <= 1.05 and rel <= 1e-6,
        delta=delta,
        p1_times_2_pow_l=scaled,
        mutual_info=report.mutual_info,
        relative_error=rel,
    )


def _bound_violations(report, ls):
    bad = 0
    checked = 0
    for l in ls:
        bc = check_bounds(report, l)
        if not bc.applicable:
            continue
        checked += 1
        if not (bc.trial_ok and bc.info_ok):
            bad += 1
    return bad, checked


def criterion_2(corpus=None) -> dict:
    corpus = random_dense_corpus() if corpus is None else corpus
    violations = checks = 0
    for p in corpus:
        rep = analyze(p)
        ls = list(range(0, int(math.floor(rep.min_entropy)) + 1)) + [rep.min_entropy]
        v, c = _bound_violations(rep, ls)
        violations += v
        checks += c
    exact_misses = 0
    for n in range(1, 13):
        for k in range(0, n + 1):
            for prof in (UniformSubset(n, k), UniformSubset(n, k).materialize()):
                rep = analyze(prof)
                v, c = _bound_violations(rep, range(0, k + 1))
                violations += v
                checks += c
                if rep.trial_complexity != (2.0**k + 1.0) / 2.0:
                    exact_misses += 1
    return _result(
        2,
        "trial-complexity and information bounds under p1 <= 2**-l",
        violations == 0 and exact_misses == 0,
        checks=checks,
        violations=violations,
        uniform_subset_exact_misses=exact_misses,
    )


def _chain_ok(rep) -> bool:
    t = CHAIN_TOL
    return (
        rep.min_entropy <= rep.renyi2_entropy + t
        and rep.renyi2_entropy <= rep.shannon_entropy + t
        and rep.shannon_entropy <= rep.n + t
        and rep.min_entropy <= rep.shannon_entropy + t  # p1 >= 2**-H
        and rep.min_entropy <= rep.n + t  # p1 >= 2**-n
    )


def criterion_3(corpus=None) -> dict:
    corpus = random_dense_corpus() if corpus is None else corpus
    reports = [analyze(p) for p in corpus]
    reports += [analyze(UniformSubset(n, k)) for n in range(1, 13) for k in range(n + 1)]
    violations = sum(not _chain_ok(r) for r in reports)
    return _result(
        3,
        "measure chain H_min <= R2 <= H <= n and p1 >= 2**-H",
        violations == 0,
        profiles=len(reports),
        violations=violations,
    )


def _field_gap(a, b) -> float:
    worst = 0.0
    for f in MEASURE_FIELDS:
        x, y = getattr(a, f), getattr(b, f)
        if x is None or y is None:
            return math.inf
        worst = max(worst, abs(x - y) / max(1.0, abs(y)))
    return worst


def criterion_4(draws: int = 100, seed: int = 1996) -> dict:
    rng = np.random.default_rng(seed)
    worst = {}
    for family in ("spike", "uniform_subset", "product_bernoulli"):
        gap = 0.0
        for _ in range(draws):
            n = int(rng.integers(1, 17))
            if family == "spike":
                prof = SpikeUniform(n, 2.0 ** rng.uniform(-n, 0))
            elif family == "uniform_subset":
                prof = UniformSubset(n, int(rng.integers(0, n + 1)))
            else:
                prof = ProductBernoulli(n, rng.uniform(0.5, 1.0, n))
            gap = max(gap, _field_gap(analyze(prof), analyze(prof.materialize())))
        worst[family] = gap
    return _result(
        4,
        "closed-form measures equal brute-force summation (n <= 16)",
        all(g <= ORACLE_TOL for g in worst.values()),
        draws_per_family=draws,
        worst_scaled_gap=worst,
    )


def criterion_5(seed_count: int = 1000, rng_seed: int = 2007) -> dict:
    universal = True
    worst = 0.0
    for n in range(1, 7):
        for r in range(1, n + 1):
            counts = collision_counts(n, r)
            total = 2 ** (n + r - 1)
            off = counts[~np.eye(2**n, dtype=bool)]
            prob = off / total
            worst = max(worst, float(np.max(np.abs(prob - 2.0**-r))) if off.size else 0.0)
            universal &= bool(np.all(off * 2**r == total))
    rec = pa_experiment(ProductBernoulli(16, 0.75).materialize(), 4, seed_count, rng_seed)
    return _result(
        5,
        "Toeplitz universality and Renyi-2 leakage bound",
        universal and rec.bound_holds,
        universality_exact=universal,
        worst_collision_deviation=worst,
        avg_mutual_info=rec.avg_mutual_info,
        bound_value=rec.bound_value,
        renyi2_input=rec.renyi2_input,
        avg_p1=rec.avg_p1,
        achieved_exponent=rec.achieved_exponent,
        bound_exponent=rec.bound_exponent,
        exponent_gap=rec.exponent_gap,
        seeds_above_bound=rec.seeds_above_bound,
    )


NOON_NS = (1, 2, 5, 10, 20)
ETAS = tuple(round(0.1 * i, 1) for i in range(1, 10))


def criterion_6() -> dict:
    worst_abs = 0.0
    worst_ratio = 0.0
    worst_operator = 0.0
    for N in NOON_NS:
        rows = decoherence_curve(N, 0, ETAS)
        rho, rho_inc = coherent_and_incoherent(N, 0)
        for row in rows:
            eta = row["eta"]
            worst_abs = max(worst_abs, abs(row["trace_distance"] - eta**N))
            worst_ratio = max(worst_ratio, abs(row["ratio"] - 0.5))
            ch = LossChannel(eta, "both")
            d = trace_distance(apply_loss(rho, ch), apply_loss(rho_inc, ch))
            worst_operator = max(worst_operator, abs(d - eta**N))
    return _result(
        6,
        "NOON decoherence: Tr|rho - rho'| = eta**N, half the 2 eta**N prediction",
        worst_abs <= 1e-10 and worst_operator <= 1e-10 and worst_ratio <= 1e-12,
        worst_abs_error=worst_abs,
        worst_abs_error_separate_channels=worst_operator,
        worst_ratio_minus_half=worst_ratio,
    )


def criterion_7(N: int = 20) -> dict:
    rows = decoherence_curve(N, 0, [1.0, 1.0 - 1.0 / N])
    ratio = rows[1]["trace_distance"] / rows[0]["trace_distance"]
    return _result(
        7,
        "loss of 1/N destroys NOON coherence (ratio near 1/e)",
        0.34 <= ratio <= 0.38,
        N=N,
        eta=1.0 - 1.0 / N,
        ratio=ratio,
        inverse_e=math.exp(-1.0),
    )


ALPHAS = (0.5, 1.0, 1.5, 2.0, 3.0)
SQUEEZES = (0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5)


def criterion_8() -> dict:
    noon_err = 0.0
    for N in range(1, 31):
        val = qfi(make_state(NumberSuperposition(N, 0)), Generator.NUMBER_MODE1).qfi
        noon_err = max(noon_err, abs(val - N * N) / (N * N))
    coh_err = 0.0
    for a in ALPHAS:
        val = qfi(make_state(Coherent(a)), Generator.NUMBER_MODE1).qfi
        coh_err = max(coh_err, abs(val - 4.0 * a * a))
    sq_err = 0.0
    for r in SQUEEZES:
        var = photon_number_variance(make_state(SqueezedVacuum(r)))
        sh2 = math.sinh(r) ** 2
        sq_err = max(sq_err, abs(var / (2.0 * sh2 * (1.0 + sh2)) - 1.0))
    return _result(
        8,
        "phase resolution: NOON qfi = N**2, coherent 4|alpha|**2, squeezed variance",
        noon_err <= 1e-12 and coh_err <= 1e-8 and sq_err <= 1e-3,
        noon_worst_relative_error=noon_err,
        coherent_worst_abs_error=coh_err,
        squeezed_worst_relative_error=sq_err,
    )


def random_density(cutoff1: int, cutoff2: int, rng) -> DensityOp:
    dim = (cutoff1 + 1) * (cutoff2 + 1)
    rank = int(rng.integers(1, dim + 1))
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m = m / np.trace(m).real
    return DensityOp(cutoff1, cutoff2, 0.5 * (m + m.conj().T))


def criterion_9(instances: int = 100, seed: int = 1985) -> dict:
    rng = np.random.default_rng(seed)
    comp = trace_err = recon = eig_sum = 0.0
    min_eig = math.inf
    for _ in range(instances):
        c1, c2 = (int(v) for v in rng.integers(1, 9, size=2))
        rho = random_density(c1, c2, rng)
        sigma = random_density(c1, c2, rng)
        mode = (1, 2, "both")[int(rng.integers(3))]
        e1, e2 = rng.random(2)
        once = apply_loss(apply_loss(rho, LossChannel(e1, mode)), LossChannel(e2, mode))
        direct = apply_loss(rho, LossChannel(e1 * e2, mode))
        comp = max(comp, float(np.max(np.abs(once.matrix - direct.matrix))))
        trace_err = max(trace_err, abs(np.trace(direct.matrix).real - 1.0), abs(np.trace(once.matrix).real - 1.0))
        w, _ = jacobi_eigh(direct.matrix, vectors=False)
        min_eig = min(min_eig, float(w.min()))
        diff = rho.matrix - sigma.matrix
        w, v = jacobi_eigh(diff)
        recon = max(recon, float(np.max(np.abs(v @ np.diag(w) @ v.conj().T - diff))))
        eig_sum = max(eig_sum, abs(float(w.sum())))
    return _result(
        9,
        "loss composition, trace/PSD preservation, eigensolver residuals",
        comp <= 1e-10 and trace_err <= 1e-12 and min_eig >= -1e-9 and recon <= 1e-10 and eig_sum <= 1e-10,
        instances=instances,
        composition_error=comp,
        trace_error=trace_err,
        min_eigenvalue=min_eig,
        reconstruction_residual=recon,
        eigenvalue_sum=eig_sum,
    )


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run(ids=None) -> list:
    ids = sorted(CRITERIA) if ids is None else ids
    return [CRITERIA[k]() for k in ids]
