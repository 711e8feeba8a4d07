"""Seeded property suites over random spectra and weights.

Each check draws gap-respecting spectra and nondegenerate gamma sets from
a seeded generator, measures worst-case residuals, and reports them with
a pass flag at the pinned tolerance.  ``run_all`` drives every suite and
is what the CLI's verify command executes.
"""

from __future__ import annotations

import numpy as np

from . import canonical, deformation, dynamics, poisson, spectrum

# Sampling bounds.  The hard invariant is the 1e-6 squared-gap floor; the
# sampler keeps a much wider margin so that residue factors stay O(1) and
# the pinned residual tolerances have headroom.
FREQ_LO, FREQ_HI = 0.5, 3.0
MIN_SQ_GAP = 0.3
GAMMA_LO, GAMMA_HI = 0.5, 2.0


def random_spectrum(rng, n: int) -> spectrum.FrequencySpectrum:
    while True:
        w = np.sort(rng.uniform(FREQ_LO, FREQ_HI, size=n))
        w2 = w * w
        if n == 1 or np.min(np.diff(w2)) >= MIN_SQ_GAP:
            return spectrum.FrequencySpectrum(tuple(w))


def random_gamma(rng, spec: spectrum.FrequencySpectrum) -> poisson.GammaWeights:
    """Random weights, resampled until safely nondegenerate."""
    while True:
        mags = rng.uniform(GAMMA_LO, GAMMA_HI, size=(spec.n, 2))
        signs = rng.choice([-1.0, 1.0], size=(spec.n, 2))
        g = poisson.GammaWeights(tuple(map(tuple, mags * signs)))
        rhos = np.array([spectrum.rho(spec, k) for k in range(spec.n)])
        w2 = np.array(spec.omega_sq)
        scale = float(np.sum(np.abs(rhos * g.alpha_minus) / w2))
        if abs(poisson.degeneracy_scalar(spec, g)) > 0.05 * scale:
            return g


def _result(name, worst, tol, extra=None):
    out = {"worst_residual": float(worst), "tolerance": tol, "pass": bool(worst <= tol)}
    if extra:
        out.update(extra)
    return {name: out}


def check_identities(n_max=6, trials=20, seed=42) -> dict:
    """Criterion 1: identity suite, relative residuals <= 1e-8."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(1, n_max + 1):
        for _ in range(trials):
            spec = random_spectrum(rng, n)
            report = spectrum.verify_identities(spec, range(-n + 1, 7))
            worst = max(worst, max(r.max_residual for r in report.results.values()))
    return _result("identities", worst, 1e-8)


def check_hamilton_closure(n_max=4, trials=20, seed=42) -> dict:
    """Criterion 2: Omega A_H reproduces the companion matrix, both
    structures, relative 1e-9."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(1, n_max + 1):
        for _ in range(trials):
            spec = random_spectrum(rng, n)
            M = dynamics.companion_matrix(spec)
            scale = np.abs(M).max()
            S = poisson.dirac_structure(spec)
            H = canonical.energy_observable(spec)
            worst = max(worst, np.abs(S.omega @ H.A - M).max() / scale)
            g = random_gamma(rng, spec)
            Sg = poisson.alt_structure(spec, g)
            Hg = canonical.alt_hamiltonian_observable(spec, g)
            worst = max(worst, np.abs(Sg.omega @ Hg.A - M).max() / scale)
    return _result("hamilton_closure", worst, 1e-9)


def check_dirac_recovery(n_max=5, trials=20, seed=42) -> dict:
    """Criterion 3: the alternative family at the alternating unit weights
    equals the Dirac structure entrywise, relative 1e-9."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(1, n_max + 1):
        for _ in range(trials):
            spec = random_spectrum(rng, n)
            dirac = poisson.dirac_structure(spec).omega
            alt = poisson.alt_structure(spec, poisson.dirac_equivalent_gamma(n)).omega
            worst = max(worst, np.abs(alt - dirac).max() / np.abs(dirac).max())
    return _result("dirac_recovery", worst, 1e-9)


def _canonical_block(n: int) -> np.ndarray:
    """Expected bracket matrix of (q,p) pairs plus the z/pi pair."""
    J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    blocks = [J2] * (2 * n + 1)
    out = np.zeros((4 * n + 2, 4 * n + 2))
    for b, blk in enumerate(blocks):
        out[2 * b:2 * b + 2, 2 * b:2 * b + 2] = blk
    return out


def check_canonical_form(n_max=4, trials=20, seed=42) -> dict:
    """Criterion 4: scaled canonical map conjugates the alternative
    structure to block form (off-block <= 1e-9) and the energy equals the
    alternating oscillator sum pointwise (1e-10 relative)."""
    rng = np.random.default_rng(seed)
    worst_block = 0.0
    worst_energy = 0.0
    for n in range(1, n_max + 1):
        J = _canonical_block(n)
        for _ in range(trials):
            spec = random_spectrum(rng, n)
            g = random_gamma(rng, spec)
            T = canonical.scaled_canonical_map(spec, g).matrix
            Om = poisson.alt_structure(spec, g).omega
            worst_block = max(worst_block, np.abs(T @ Om @ T.T - J).max())
            # Dirac structure under the unscaled map, same block target
            Tc = canonical.canonical_map(spec).matrix
            Omd = poisson.dirac_structure(spec).omega
            worst_block = max(worst_block, np.abs(Tc @ Omd @ Tc.T - J).max())
            H = canonical.energy_observable(spec)
            cmap = canonical.canonical_map(spec)
            for u in rng.uniform(-1, 1, size=(100 // trials + 1, spec.jet_dim)):
                coords = cmap.labeled(u)
                hsum = 0.0
                for k in range(n):
                    w2 = spec.omega_sq[k]
                    hsum += 0.5 * (-1.0) ** k * (
                        coords["p[%d][1]" % k] ** 2 + w2 * coords["q[%d][1]" % k] ** 2
                        - coords["p[%d][2]" % k] ** 2 - w2 * coords["q[%d][2]" % k] ** 2)
                worst_energy = max(worst_energy,
                                   abs(H.value(u) - hsum) / max(1.0, abs(hsum)))
    out = _result("canonical_block_form", worst_block, 1e-9)
    out.update(_result("energy_oscillator_sum", worst_energy, 1e-10))
    return out


def check_conservation(n_max=4, trials=3, seed=42) -> dict:
    """Criterion 5: H, the gamma Hamiltonian, and every J_{k,i} drift at
    most 1e-9 * (1 + |value at t=0|) over t in [0, 100], 1000 samples."""
    rng = np.random.default_rng(seed)
    grid = np.linspace(0.0, 100.0, 1000)
    worst = 0.0
    for n in range(1, n_max + 1):
        for _ in range(trials):
            spec = random_spectrum(rng, n)
            g = random_gamma(rng, spec)
            observables = ([("H", canonical.energy_observable(spec)),
                            ("Hcal", canonical.alt_hamiltonian_observable(spec, g))]
                           + [("J_%d_%d" % ki, obs)
                              for ki, obs in canonical.mode_integrals(spec)])
            state = dynamics.PhaseState(rng.uniform(-1, 1, size=spec.jet_dim))
            flow = dynamics.modal_flow(spec, state)
            table = dynamics.trajectory(flow, state, grid, observables)
            v0 = table.observable_values[0]
            drift = np.abs(table.observable_values - v0).max(axis=0)
            worst = max(worst, float((drift / (1.0 + np.abs(v0))).max()))
    return _result("conservation", worst, 1e-9)


def check_degeneracy_rank(n_max=4, trials=10, seed=42) -> dict:
    """Criterion 6: rank 4n at s = 0 (all-equal weights), 4n+2 otherwise."""
    rng = np.random.default_rng(seed)
    failures = []
    for n in range(1, n_max + 1):
        spec = random_spectrum(rng, n)
        flat = poisson.GammaWeights(tuple((1.0, 1.0) for _ in range(n)))
        r = poisson.alt_structure(spec, flat).rank()
        if r != 4 * n:
            failures.append(("degenerate", n, r))
        for _ in range(trials):
            g = random_gamma(rng, spec)
            r = poisson.alt_structure(spec, g).rank()
            if r != 4 * n + 2:
                failures.append(("nondegenerate", n, r))
    return {"degeneracy_rank": {"failures": failures, "pass": not failures}}


def check_uniqueness() -> dict:
    """Criterion 7: the n = 1 structure exists iff c = b w0^2."""
    worst_good = 0.0
    worst_drift = 0.0
    best_bad = np.inf
    # (b, f) from gamma pairs (2,1), (1,-1), (1,3) via
    # b = (g1+g2)/(4 w0), f = -(g1-g2)/2
    for w0 in (1.0, 2.0):
        samples = [(3.0 / (4 * w0), -0.5), (0.0, -1.0), (1.0 / w0, 1.0)]
        for b, f in samples:
            rep = canonical.uniqueness_check(w0, b, b * w0 ** 2, f)
            worst_good = max(worst_good, rep.structure_residual)
            worst_drift = max(worst_drift, rep.conserved_residual)
            rep_bad = canonical.uniqueness_check(w0, b, b * w0 ** 2 + 0.1, f)
            best_bad = min(best_bad, rep_bad.structure_residual)
            worst_drift = max(worst_drift, rep_bad.conserved_residual)
    out = _result("uniqueness_structure_exists", worst_good, 1e-10)
    out.update(_result("uniqueness_conserved", worst_drift, 1e-9))
    out["uniqueness_structure_fails"] = {
        "best_residual": float(best_bad), "threshold": 1e-3, "pass": bool(best_bad >= 1e-3)}
    return out


def _subspace_gap(B1: np.ndarray, B2: np.ndarray) -> float:
    """Distance between spans via orthogonal projectors."""
    q1, _ = np.linalg.qr(B1.T)
    q2, _ = np.linalg.qr(B2.T)
    return float(np.abs(q1 @ q1.T - q2 @ q2.T).max())


def check_deformation(n_max=3, trials=10, seed=42) -> dict:
    """Criterion 8: constraint rank/null dimensions, the n = 1 closed-form
    null space, and order-4 conservation of the deformed flow."""
    rng = np.random.default_rng(seed)
    failures = []
    worst_angle = 0.0
    for n in range(1, n_max + 1):
        for _ in range(trials):
            spec = random_spectrum(rng, n)
            g = random_gamma(rng, spec)
            system = deformation.deformation_system(spec, g)
            rank, basis = deformation.null_space_complete_pivot(system.C)
            if rank != 4 * n or basis.shape[0] != 2:
                failures.append((n, rank, basis.shape[0]))
                continue
            if n == 1:
                closed = np.array([deformation.closed_form_direction_n1(spec, g, i)
                                   for i in (1, 2)])
                worst_angle = max(worst_angle, _subspace_gap(basis, closed))
    # order-4 signature of the conserved total energy
    spec1 = spectrum.FrequencySpectrum((1.0,))
    g1 = poisson.GammaWeights(((1.0, -1.0),))
    # modest amplitude: the total energy is indefinite here, so large
    # quartic forcing can escape in finite time
    quartic = deformation.PotentialSpec(((4, 0, 0.05), (2, 2, 0.1), (0, 4, 0.05)))
    field, v1, v2 = deformation.deformed_field(spec1, g1, quartic)
    total = deformation.deformed_energy(spec1, g1, quartic, v1, v2)
    state0 = dynamics.PhaseState(0.4 * np.array([1.0, 0.5, -0.3, 0.8, 0.2, -0.6]))
    drifts = []
    for h in (1e-2, 5e-3, 2.5e-3):
        state = state0
        e0 = total(state.u)
        drift = 0.0
        steps = int(round(10.0 / h))
        for _ in range(steps):
            state = dynamics.rk4_step(field, state, h)
            drift = max(drift, abs(total(state.u) - e0))
        drifts.append(drift)
    orders = [float(np.log2(drifts[i] / drifts[i + 1])) for i in range(2)]
    out = {"deformation_rank_null": {"failures": failures, "pass": not failures}}
    out.update(_result("deformation_closed_form_n1", worst_angle, 1e-9))
    out["deformation_rk4_order"] = {
        "drifts": [float(d) for d in drifts], "orders": orders,
        "pass": bool(min(orders) >= 3.8)}
    return out


def check_eom_fidelity(n_max=4, trials=10, seed=42) -> dict:
    """Criterion 9: the companion matrix satisfies its characteristic
    polynomial and exact trajectories satisfy the (2n+1)-order EOM."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(1, n_max + 1):
        for _ in range(trials):
            spec = random_spectrum(rng, n)
            M = dynamics.companion_matrix(spec)
            terms = []
            acc = np.zeros_like(M)
            power = M.copy()          # M^1
            M2 = M @ M
            for k in range(n + 1):
                term = spectrum.elementary_sigma(spec, k) * power
                terms.append(np.abs(term).max())
                acc += term
                power = power @ M2
            worst = max(worst, np.abs(acc).max() / max(terms))
            # trajectory spot-check of the scalar EOM
            state = dynamics.PhaseState(rng.uniform(-1, 1, size=spec.jet_dim))
            sol = dynamics.ModalSolution(spec, state)
            for t in rng.uniform(0.0, 20.0, size=5):
                stacks = sol.derivatives(t, 2 * n + 1)
                for i in (0, 1):
                    tvals = [spectrum.elementary_sigma(spec, k) * stacks[2 * k + 1, i]
                             for k in range(n + 1)]
                    scale = max(max(abs(v) for v in tvals), 1e-30)
                    worst = max(worst, abs(sum(tvals)) / scale)
    return _result("eom_fidelity", worst, 1e-8)


def run_all(n_max=6, trials=20, seed=42) -> dict:
    """Run every suite (capped per criterion) and summarize."""
    checks = {}
    checks.update(check_identities(min(6, n_max), trials, seed))
    checks.update(check_hamilton_closure(min(4, n_max), trials, seed))
    checks.update(check_dirac_recovery(min(5, n_max), trials, seed))
    checks.update(check_canonical_form(min(4, n_max), trials, seed))
    checks.update(check_conservation(min(4, n_max), min(3, trials), seed))
    checks.update(check_degeneracy_rank(min(4, n_max), min(10, trials), seed))
    checks.update(check_uniqueness())
    checks.update(check_deformation(min(3, n_max), min(10, trials), seed))
    checks.update(check_eom_fidelity(min(4, n_max), min(10, trials), seed))
    return {"seed": seed, "n_max": n_max, "trials": trials,
            "checks": checks,
            "pass": all(c["pass"] for c in checks.values())}
