"""Admissible nonlinear deformations of the odd-order oscillator.

A potential U may be added to the gamma-weighted Hamiltonian without
breaking the lower jet-chain equations iff its gradient is annihilated by
the lower 4n rows of the alternative structure.  Those rows form a linear
homogeneous system on the 4n+2 gradient components whose null space is
two-dimensional for nondegenerate weights; potentials are polynomials in
the two resulting invariant scalars.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import alt_hamiltonian_observable
from .poisson import DegeneracyError, GammaWeights, alt_structure
from .spectrum import FrequencySpectrum, rho

MAX_POTENTIAL_DEGREE = 8


@dataclass(frozen=True)
class DeformationSystem:
    """Coefficient matrix C (4n x (4n+2)) acting on grad U in jet order."""

    C: np.ndarray
    spec: FrequencySpectrum
    gamma: GammaWeights

    def rank(self) -> int:
        rank, _ = null_space_complete_pivot(self.C)
        return rank


def null_space_complete_pivot(C: np.ndarray, tol: float = None):
    """Rank and orthonormal null-space basis by Gauss-Jordan elimination
    with complete pivoting; pivot threshold 1e-10 * ||C||_inf.

    Returns (rank, basis) with basis of shape (n - rank, n).
    """
    A = np.array(C, dtype=float)
    m, n = A.shape
    if tol is None:
        tol = 1e-10 * max(np.linalg.norm(A, np.inf), 1.0)
    perm = list(range(n))
    r = 0
    while r < min(m, n):
        sub = np.abs(A[r:, r:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= tol:
            break
        i, j = i + r, j + r
        A[[r, i]] = A[[i, r]]
        A[:, [r, j]] = A[:, [j, r]]
        perm[r], perm[j] = perm[j], perm[r]
        for k in range(m):
            if k != r and A[k, r] != 0.0:
                A[k] -= A[k, r] / A[r, r] * A[r]
        r += 1
    basis = []
    for free in range(r, n):
        x = np.zeros(n)
        x[perm[free]] = 1.0
        for lead in range(r):
            x[perm[lead]] = -A[lead, free] / A[lead, lead]
        basis.append(x)
    if basis:
        q, _ = np.linalg.qr(np.array(basis).T)
        basis = q.T
    else:
        basis = np.empty((0, n))
    return r, basis


def deformation_system(spec: FrequencySpectrum, g: GammaWeights) -> DeformationSystem:
    """Assemble the constraint system on the potential gradient.

    For p = 0..n-1 and i = 1,2, two equation families on dU/dx_i^{(m)}:

      sum_{k,m<n} (-1)^m rho_k w_k^{2p+2m-1} a_k^+ dU/dx_i^{(2m+1)}
        + sum_{m=delta_{p0}}^{n} sum_k (-1)^m rho_k w_k^{2p+2m-2} a_k^-
          eps_{ij} dU/dx_j^{(2m)} = 0

      sum_{m<=n} sum_k (-1)^m rho_k w_k^{2p+2m-1} a_k^+ dU/dx_i^{(2m)}
        - sum_{k,m<n} (-1)^m rho_k w_k^{2p+2m} a_k^- eps_{ij}
          dU/dx_j^{(2m+1)} = 0

    The m = 0 term of the even sum is skipped exactly at p = 0 (the
    Kronecker guard), matching the vanishing {x_i, x_j} entry.
    """
    n = spec.n
    if g.n != n:
        raise ValueError("gamma weights sized for n=%d, spectrum has n=%d" % (g.n, n))
    rhos = np.array([rho(spec, k) for k in range(n)])
    w = np.array(spec.omegas)
    ap, am = g.alpha_plus, g.alpha_minus
    dim = spec.jet_dim
    other = {1: 2, 2: 1}
    eps_sign = {1: 1.0, 2: -1.0}  # eps_{ij} with j the other index
    rows = []
    for p in range(n):
        for i in (1, 2):
            row = np.zeros(dim)
            for m in range(n):
                row[2 * (2 * m + 1) + i - 1] += (-1.0) ** m * float(
                    (rhos * w ** (2 * p + 2 * m - 1)) @ ap)
            for m in range(1 if p == 0 else 0, n + 1):
                coef = (-1.0) ** m * float((rhos * w ** (2 * p + 2 * m - 2)) @ am)
                row[2 * (2 * m) + other[i] - 1] += eps_sign[i] * coef
            rows.append(row)
    for p in range(n):
        for i in (1, 2):
            row = np.zeros(dim)
            for m in range(n + 1):
                row[2 * (2 * m) + i - 1] += (-1.0) ** m * float(
                    (rhos * w ** (2 * p + 2 * m - 1)) @ ap)
            for m in range(n):
                coef = (-1.0) ** m * float((rhos * w ** (2 * p + 2 * m)) @ am)
                row[2 * (2 * m + 1) + other[i] - 1] -= eps_sign[i] * coef
            rows.append(row)
    return DeformationSystem(np.array(rows), spec, g)


def invariant_directions(spec: FrequencySpectrum, g: GammaWeights):
    """Orthonormal basis (v1, v2) of the constraint null space.

    Potentials built over w_a = v_a . u leave the lower jet-chain
    equations intact.  Raises if the null space is not two-dimensional.
    """
    system = deformation_system(spec, g)
    rank, basis = null_space_complete_pivot(system.C)
    if basis.shape[0] != 2:
        raise DegeneracyError(
            "null space dimension %d != 2 (rank %d); degenerate gamma weights"
            % (basis.shape[0], rank))
    return basis[0], basis[1]


def closed_form_direction_n1(spec: FrequencySpectrum, g: GammaWeights, i: int) -> np.ndarray:
    """The single-mode invariant combination, written out in jet order:
    ((a^-)^2 - (a^+)^2) x_i + (a^- a^+ / w) eps_{ij} dx_j - (a^+/w)^2 ddx_i."""
    if spec.n != 1:
        raise ValueError("closed form applies to n = 1 only")
    ap, am = float(g.alpha_plus[0]), float(g.alpha_minus[0])
    w = spec.omegas[0]
    v = np.zeros(6)
    j = 2 if i == 1 else 1
    eps_ij = 1.0 if i == 1 else -1.0
    v[2 * 0 + i - 1] = am * am - ap * ap
    v[2 * 1 + j - 1] = eps_ij * am * ap / w
    v[2 * 2 + i - 1] = -(ap / w) ** 2
    return v


@dataclass(frozen=True)
class PotentialSpec:
    """Polynomial potential sum_t value * w1^i * w2^j over the invariant
    scalars, total degree 1..8."""

    terms: tuple  # ((i, j, value), ...)

    def __post_init__(self):
        terms = tuple((int(i), int(j), float(v)) for i, j, v in self.terms)
        if not terms:
            raise ValueError("potential needs at least one term")
        for i, j, v in terms:
            if i < 0 or j < 0 or not np.isfinite(v):
                raise ValueError("bad potential term (%d, %d, %r)" % (i, j, v))
        if self.degree_of(terms) < 1:
            raise ValueError("potential degree must be >= 1")
        if self.degree_of(terms) > MAX_POTENTIAL_DEGREE:
            raise ValueError("potential degree capped at %d" % MAX_POTENTIAL_DEGREE)
        object.__setattr__(self, "terms", terms)

    @staticmethod
    def degree_of(terms) -> int:
        return max(i + j for i, j, _ in terms)

    @property
    def degree(self) -> int:
        return self.degree_of(self.terms)

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PotentialSpec":
        terms = tuple((t["i"], t["j"], t["value"]) for t in obj["coeffs"])
        pot = cls(terms)
        if "degree" in obj and int(obj["degree"]) != pot.degree:
            raise ValueError("declared degree %r does not match terms" % obj["degree"])
        return pot

    def to_json_dict(self) -> dict:
        return {"degree": self.degree,
                "coeffs": [{"i": i, "j": j, "value": v} for i, j, v in self.terms]}

    def value(self, w1: float, w2: float) -> float:
        return float(sum(v * w1 ** i * w2 ** j for i, j, v in self.terms))

    def grad(self, w1: float, w2: float):
        d1 = sum(v * i * w1 ** (i - 1) * w2 ** j for i, j, v in self.terms if i > 0)
        d2 = sum(v * j * w1 ** i * w2 ** (j - 1) for i, j, v in self.terms if j > 0)
        return float(d1), float(d2)


def deformed_field(spec: FrequencySpectrum, g: GammaWeights, potential: PotentialSpec):
    """State-derivative function of the deformed flow
    du/dt = Omega_alt (A_H u + grad U(u)).

    grad U lies in the constraint null space, so the lower chain equations
    du_{(s,i)}/dt = u_{(s+1,i)} (s < 2n) survive exactly; only the top
    derivative acquires the force term.  Returns (field, v1, v2).
    """
    omega = alt_structure(spec, g).omega
    A = alt_hamiltonian_observable(spec, g).A
    v1, v2 = invariant_directions(spec, g)

    def field(_t, u):
        g1, g2 = potential.grad(float(v1 @ u), float(v2 @ u))
        return omega @ (A @ u + g1 * v1 + g2 * v2)

    return field, v1, v2


def deformed_energy(spec: FrequencySpectrum, g: GammaWeights, potential: PotentialSpec,
                    v1: np.ndarray, v2: np.ndarray):
    """Callable u -> H_gamma(u) + U(u), conserved along the deformed flow."""
    H = alt_hamiltonian_observable(spec, g)

    def total(u):
        return H.value(u) + potential.value(float(v1 @ u), float(v2 @ u))

    return total
