"""Frequency-spectrum combinatorics for the odd-order Pais-Uhlenbeck oscillator.

Everything downstream (equations of motion, Poisson structures, canonical
maps) is built from symmetric polynomials in the squared frequencies:

* ``elementary_sigma``  -- coefficients of prod_k (X + w_k^2),
* ``reduced_sigma``     -- the same with one frequency omitted,
* ``rho``               -- residue factors (-1)^k / prod_{m!=k} (w_m^2 - w_k^2),
* ``complete_homog``    -- complete homogeneous symmetric polynomials P_{2k}.

``verify_identities`` numerically checks the interlocking identities these
quantities satisfy and reports worst-case residuals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Minimum allowed gap between squared frequencies.  The residue factors
#: rho_k diverge as two frequencies coalesce, so degenerate spectra are
#: rejected at construction.
GAP_FLOOR = 1e-6


def passes_tolerance(residual: float, scale: float) -> bool:
    """Global tolerance policy: |r| <= 1e-12 + 1e-9 * |scale|."""
    return abs(residual) <= 1e-12 + 1e-9 * abs(scale)


@dataclass(frozen=True)
class FrequencySpectrum:
    """The n distinct positive frequencies defining the model.

    Frequencies are stored sorted ascending.  Unsorted input is accepted
    and sorted, with ``was_sorted`` flagging that this happened (the sign
    bookkeeping of ``rho`` depends on the ordering convention).
    """

    omegas: tuple
    was_sorted: bool = field(default=False, compare=False)

    def __post_init__(self):
        om = tuple(float(w) for w in self.omegas)
        if not om:
            raise ValueError("spectrum needs at least one frequency")
        if any(not np.isfinite(w) or w <= 0.0 for w in om):
            raise ValueError("all frequencies must be finite and strictly positive")
        srt = tuple(sorted(om))
        object.__setattr__(self, "was_sorted", srt != om)
        object.__setattr__(self, "omegas", srt)
        w2 = self.omega_sq
        for a in range(len(w2)):
            for b in range(a + 1, len(w2)):
                if w2[b] - w2[a] < GAP_FLOOR:
                    raise ValueError(
                        "squared-frequency gap %.3g below floor %.1g"
                        % (w2[b] - w2[a], GAP_FLOOR)
                    )

    @property
    def n(self) -> int:
        return len(self.omegas)

    @property
    def omega_sq(self) -> tuple:
        return tuple(w * w for w in self.omegas)

    @property
    def jet_dim(self) -> int:
        """Dimension of the jet phase space: 4n + 2."""
        return 4 * self.n + 2


def _elementary_coeffs(w2) -> np.ndarray:
    """Coefficients of prod (X + v) over v in w2, highest degree first."""
    c = np.array([1.0])
    for v in w2:
        c = np.convolve(c, [1.0, v])
    return c


def elementary_sigma(spec: FrequencySpectrum, k: int) -> float:
    """Elementary symmetric polynomial of degree n-k in the squared
    frequencies (the coefficient of the (2k+1)-th derivative in the
    equation of motion).  sigma_n = 1, sigma_0 = prod w_k^2."""
    if not 0 <= k <= spec.n:
        raise ValueError("k=%d out of range 0..%d" % (k, spec.n))
    return float(_elementary_coeffs(spec.omega_sq)[spec.n - k])


def reduced_sigma(spec: FrequencySpectrum, m: int, k: int) -> float:
    """Elementary symmetric polynomial of degree n-m-1 in the squared
    frequencies with w_k^2 omitted.  reduced_sigma(n-1, k) = 1."""
    n = spec.n
    if not 0 <= m <= n - 1:
        raise ValueError("m=%d out of range 0..%d" % (m, n - 1))
    if not 0 <= k <= n - 1:
        raise ValueError("k=%d out of range 0..%d" % (k, n - 1))
    w2 = [v for idx, v in enumerate(spec.omega_sq) if idx != k]
    return float(_elementary_coeffs(w2)[(n - 1) - m])


def rho(spec: FrequencySpectrum, k: int) -> float:
    """Residue factor (-1)^k / prod_{m != k} (w_m^2 - w_k^2).

    For n = 1 the empty product gives exactly 1 (the convention used by
    the single-mode deformation formulas).  Strictly positive for a
    sorted spectrum.
    """
    n = spec.n
    if not 0 <= k <= n - 1:
        raise ValueError("k=%d out of range 0..%d" % (k, n - 1))
    w2 = spec.omega_sq
    prod = 1.0
    for m in range(n):
        if m != k:
            prod *= w2[m] - w2[k]
    return (-1.0) ** k / prod


def complete_homogeneous(values, k: int) -> float:
    """Complete homogeneous symmetric polynomial of degree k over ``values``.

    Zero for k < 0, one for k = 0.  Computed by the stable one-variable-
    at-a-time recursion h_d(..., v) = h_d(...) + v * h_{d-1}(..., v); the
    multi-index enumeration stays in the tests as the oracle.
    """
    if k < 0:
        return 0.0
    h = np.zeros(k + 1)
    h[0] = 1.0
    for v in values:
        for d in range(1, k + 1):
            h[d] += v * h[d - 1]
    return float(h[k])


def complete_homog(spec: FrequencySpectrum, k: int) -> float:
    """P_{2k}(w_0^2, ..., w_{n-1}^2); zero for k < 0."""
    return complete_homogeneous(spec.omega_sq, k)


@dataclass(frozen=True)
class IdentityResult:
    max_residual: float
    location: tuple
    passed: bool


@dataclass(frozen=True)
class IdentityReport:
    """Per-identity worst relative residual and where it occurred."""

    results: dict

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def to_json_dict(self) -> dict:
        return {
            name: {
                "max_residual": r.max_residual,
                "location": list(r.location),
                "pass": r.passed,
            }
            for name, r in self.results.items()
        }


def _track(worst, residual, scale, location):
    rel = abs(residual) / max(abs(scale), 1e-300)
    if worst is None or rel > worst[0]:
        return (rel, abs(residual), scale, location)
    return worst


def verify_identities(spec: FrequencySpectrum, k_range=None) -> IdentityReport:
    """Numerically check the symmetric-polynomial identities.

    Checked, over all index combinations:

    * ``id1_first``:   sum_k (-1)^k w_p^{2k} reduced_sigma(k, s)
                       = (-1)^s delta_{sp} / rho_s
    * ``id1_second``:  sum_k (-1)^k (-w_k^2)^s reduced_sigma(p, k) rho_k
                       = delta_{sp} (s < n), -sigma_p (s = n)
    * ``id2``:         P_{2k} = (-1)^{n-1} sum_s (-1)^s w_s^{2n+2k-2} rho_s
                       for k in ``k_range`` (default -n+1 .. 6)
    * ``power_diff``:  w_a^{2s} - w_b^{2s}
                       = (w_a^2 - w_b^2) P_{2s-2}(w_a^2, w_b^2)
    * ``p_diff``:      P_{2s}(S, w_a^2) - P_{2s}(S, w_b^2)
                       = (w_a^2 - w_b^2) P_{2s-2}(S, w_a^2, w_b^2)

    Residuals are relative to the largest term magnitude in each sum.
    Failures are reported, never raised.
    """
    n = spec.n
    w = spec.omegas
    w2 = spec.omega_sq
    if k_range is None:
        k_range = range(-n + 1, 7)
    rhos = [rho(spec, k) for k in range(n)]

    worst_a = worst_b = worst_c = worst_d = worst_e = None

    # id1, first form
    for s in range(n):
        for p in range(n):
            terms = [(-1.0) ** k * w[p] ** (2 * k) * reduced_sigma(spec, k, s)
                     for k in range(n)]
            rhs = (-1.0) ** s / rhos[s] if s == p else 0.0
            scale = max([abs(t) for t in terms] + [abs(rhs)])
            worst_a = _track(worst_a, sum(terms) - rhs, scale, (s, p))

    # id1, second form
    for s in range(n + 1):
        for p in range(n):
            terms = [(-1.0) ** k * (-w2[k]) ** s * reduced_sigma(spec, p, k) * rhos[k]
                     for k in range(n)]
            if s == n:
                rhs = -elementary_sigma(spec, p)
            else:
                rhs = 1.0 if s == p else 0.0
            scale = max([abs(t) for t in terms] + [abs(rhs)])
            worst_b = _track(worst_b, sum(terms) - rhs, scale, (s, p))

    # id2
    for k in k_range:
        if k < -n + 1:
            continue
        terms = [(-1.0) ** (n - 1) * (-1.0) ** s * w[s] ** (2 * n + 2 * k - 2) * rhos[s]
                 for s in range(n)]
        rhs = complete_homog(spec, k)
        scale = max([abs(t) for t in terms] + [abs(rhs)])
        worst_c = _track(worst_c, sum(terms) - rhs, scale, (k,))

    # difference-of-powers helper
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            for s in range(1, 7):
                lhs = w[a] ** (2 * s) - w[b] ** (2 * s)
                rhs = (w2[a] - w2[b]) * complete_homogeneous([w2[a], w2[b]], s - 1)
                scale = max(abs(w[a] ** (2 * s)), abs(w[b] ** (2 * s)), abs(rhs), 1.0)
                worst_d = _track(worst_d, lhs - rhs, scale, (a, b, s))
    if worst_d is None:  # n = 1: check against sampled fixed second arguments
        for v in (0.25, 2.0):
            for s in range(1, 7):
                lhs = w2[0] ** s - v ** s
                rhs = (w2[0] - v) * complete_homogeneous([w2[0], v], s - 1)
                worst_d = _track(worst_d, lhs - rhs,
                                 max(abs(lhs), abs(rhs), 1.0), (v, s))

    # difference-of-P helper, over sampled argument subsets
    pool = list(w2) + [0.3, 1.7]  # pad so n = 1 still exercises the identity
    for a in range(len(pool)):
        for b in range(a + 1, len(pool)):
            rest = [pool[j] for j in range(len(pool)) if j not in (a, b)][:2]
            for s in range(1, 5):
                lhs = (complete_homogeneous(rest + [pool[a]], s)
                       - complete_homogeneous(rest + [pool[b]], s))
                rhs = (pool[a] - pool[b]) * complete_homogeneous(
                    rest + [pool[a], pool[b]], s - 1)
                scale = max(abs(complete_homogeneous(rest + [pool[a]], s)),
                            abs(complete_homogeneous(rest + [pool[b]], s)),
                            abs(rhs), 1.0)
                worst_e = _track(worst_e, lhs - rhs, scale, (a, b, s))

    results = {}
    for name, worst in (("id1_first", worst_a), ("id1_second", worst_b),
                        ("id2", worst_c), ("power_diff", worst_d),
                        ("p_diff", worst_e)):
        rel, absres, scale, loc = worst
        results[name] = IdentityResult(rel, loc, passes_tolerance(absres, scale))
    return IdentityReport(results)
