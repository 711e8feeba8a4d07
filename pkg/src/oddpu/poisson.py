"""Poisson structures on the jet phase space.

Two families of constant antisymmetric structure matrices are built:

* ``dirac_structure``  -- the bracket inherited from the constrained
  first-order formulation, with entries built from the complete
  homogeneous polynomials P_{2k};
* ``alt_structure``    -- the two-parameter-per-mode family weighted by
  nonzero constants gamma_{k,i}, which renders the positive-definite
  Hamiltonians canonical.

Because the matrices are constant, the Jacobi identity holds identically;
the interesting checks are antisymmetry, rank, and closure of Hamilton's
equations, which live in :mod:`oddpu.verify`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectrum import FrequencySpectrum, complete_homog, rho

#: Levi-Civita sign, eps[i-1][j-1] with eps_{12} = +1.
EPS = ((0.0, 1.0), (-1.0, 0.0))

GAMMA_FLOOR = 1e-9


class DegeneracyError(ValueError):
    """Requested an operation needing a nondegenerate structure."""


@dataclass(frozen=True)
class GammaWeights:
    """The 2n nonzero weights gamma_{k,i} of the alternative family."""

    gamma: tuple  # ((g_{0,1}, g_{0,2}), ..., (g_{n-1,1}, g_{n-1,2}))

    def __post_init__(self):
        g = tuple((float(a), float(b)) for a, b in self.gamma)
        if any(abs(v) < GAMMA_FLOOR for pair in g for v in pair):
            raise ValueError("every gamma weight must satisfy |gamma| >= %g" % GAMMA_FLOOR)
        object.__setattr__(self, "gamma", g)

    @classmethod
    def from_flat(cls, values) -> "GammaWeights":
        values = list(values)
        if len(values) % 2 != 0:
            raise ValueError("need an even number of gamma values")
        return cls(tuple((values[2 * k], values[2 * k + 1])
                         for k in range(len(values) // 2)))

    @property
    def n(self) -> int:
        return len(self.gamma)

    @property
    def alpha_plus(self) -> np.ndarray:
        g = np.array(self.gamma)
        return 0.5 * (1.0 / g[:, 0] + 1.0 / g[:, 1])

    @property
    def alpha_minus(self) -> np.ndarray:
        g = np.array(self.gamma)
        return 0.5 * (1.0 / g[:, 0] - 1.0 / g[:, 1])

    def flat(self) -> list:
        return [v for pair in self.gamma for v in pair]


def dirac_equivalent_gamma(n: int) -> GammaWeights:
    """The weights gamma_{k,1} = (-1)^k, gamma_{k,2} = (-1)^{k+1} at which
    the alternative family reproduces the Dirac structure."""
    return GammaWeights(tuple(((-1.0) ** k, (-1.0) ** (k + 1)) for k in range(n)))


@dataclass(frozen=True)
class StructureMatrix:
    """Constant antisymmetric matrix encoding a Poisson structure."""

    omega: np.ndarray
    spec: FrequencySpectrum
    provenance: str                      # "dirac" | "alternative"
    gamma: GammaWeights = field(default=None)

    def __post_init__(self):
        m = np.asarray(self.omega, dtype=float)
        if np.abs(m + m.T).max() > 1e-12:
            raise ValueError("structure matrix must be antisymmetric to 1e-12")
        object.__setattr__(self, "omega", m)

    @property
    def dim(self) -> int:
        return self.omega.shape[0]

    def rank(self) -> int:
        scale = max(np.abs(self.omega).max(), 1.0)
        return int(np.linalg.matrix_rank(self.omega, tol=1e-8 * scale))

    def degeneracy_scalar(self) -> float:
        g = self.gamma if self.gamma is not None else dirac_equivalent_gamma(self.spec.n)
        return degeneracy_scalar(self.spec, g)

    def is_degenerate(self) -> bool:
        g = self.gamma if self.gamma is not None else dirac_equivalent_gamma(self.spec.n)
        return gamma_is_degenerate(self.spec, g)

    def to_json_dict(self) -> dict:
        return {
            "n": self.spec.n,
            "omegas": list(self.spec.omegas),
            "gamma": ([list(pair) for pair in self.gamma.gamma]
                      if self.gamma is not None else None),
            "matrix": self.omega.tolist(),
            "degeneracy_scalar": self.degeneracy_scalar(),
        }


def dirac_structure(spec: FrequencySpectrum) -> StructureMatrix:
    """Structure with {x_i^{(s)}, x_j^{(m)}} = 0 for s+m odd and
    (-1)^{(s-m)/2 + n + 1} P_{s+m-2n} eps_{ij} for s+m even."""
    n = spec.n
    dim = spec.jet_dim
    omega = np.zeros((dim, dim))
    for s in range(2 * n + 1):
        for m in range(2 * n + 1):
            if (s + m) % 2 != 0:
                continue
            coef = (-1.0) ** ((s - m) // 2 + n + 1) * complete_homog(spec, (s + m - 2 * n) // 2)
            for i in (1, 2):
                for j in (1, 2):
                    omega[2 * s + i - 1, 2 * m + j - 1] = coef * EPS[i - 1][j - 1]
    return StructureMatrix(omega, spec, "dirac")


def alt_structure(spec: FrequencySpectrum, g: GammaWeights) -> StructureMatrix:
    """Structure of the gamma-weighted family.

    Entries: zero at s = m = 0; for s+m odd a delta_{ij} block weighted by
    (-1)^{(s-m+1)/2} sum_k rho_k w_k^{s+m-2} alpha_k^+; for s+m even and
    nonzero an eps_{ij} block weighted by
    (-1)^{(s-m)/2} sum_k rho_k w_k^{s+m-2} alpha_k^-.

    The matrix is constructed even when the family is degenerate; only
    flows that need invertibility reject degenerate weights.
    """
    n = spec.n
    if g.n != n:
        raise ValueError("gamma weights sized for n=%d, spectrum has n=%d" % (g.n, n))
    dim = spec.jet_dim
    rhos = np.array([rho(spec, k) for k in range(n)])
    w = np.array(spec.omegas)
    ap, am = g.alpha_plus, g.alpha_minus
    omega = np.zeros((dim, dim))
    for s in range(2 * n + 1):
        for m in range(2 * n + 1):
            if s == 0 and m == 0:
                continue
            moments = rhos * w ** (s + m - 2)
            if (s + m) % 2 == 1:
                coef = (-1.0) ** ((s - m + 1) // 2) * float(moments @ ap)
                for i in (1, 2):
                    omega[2 * s + i - 1, 2 * m + i - 1] = coef
            else:
                coef = (-1.0) ** ((s - m) // 2) * float(moments @ am)
                for i in (1, 2):
                    for j in (1, 2):
                        omega[2 * s + i - 1, 2 * m + j - 1] = coef * EPS[i - 1][j - 1]
    return StructureMatrix(omega, spec, "alternative", g)


def degeneracy_scalar(spec: FrequencySpectrum, g: GammaWeights) -> float:
    """s = sum_k rho_k alpha_k^- / w_k^2; the alternative structure drops
    rank (by 2, in the z-sector) exactly where this vanishes."""
    if g.n != spec.n:
        raise ValueError("gamma weights sized for n=%d, spectrum has n=%d" % (g.n, spec.n))
    rhos = np.array([rho(spec, k) for k in range(spec.n)])
    w2 = np.array(spec.omega_sq)
    return float(np.sum(rhos * g.alpha_minus / w2))


def gamma_is_degenerate(spec: FrequencySpectrum, g: GammaWeights) -> bool:
    """Scale-relative degeneracy test: |s| <= 1e-10 * sum |rho_k a_k^-| / w_k^2."""
    rhos = np.array([rho(spec, k) for k in range(spec.n)])
    w2 = np.array(spec.omega_sq)
    scale = float(np.sum(np.abs(rhos * g.alpha_minus) / w2))
    return abs(degeneracy_scalar(spec, g)) <= 1e-10 * scale


@dataclass(frozen=True)
class QuadraticObservable:
    """Phase-space function u -> u.A.u/2 + b.u + c with A symmetric.

    Houses every function the model brackets: the Hamiltonians, the mode
    integrals, and coordinate functionals (A = 0, b a unit vector).
    """

    A: np.ndarray
    b: np.ndarray = None
    c: float = 0.0

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if np.abs(A - A.T).max() > 1e-12:
            raise ValueError("quadratic part must be symmetric to 1e-12")
        b = np.zeros(A.shape[0]) if self.b is None else np.asarray(self.b, dtype=float)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @classmethod
    def zero(cls, dim: int) -> "QuadraticObservable":
        return cls(np.zeros((dim, dim)))

    @classmethod
    def coordinate(cls, dim: int, s: int, i: int) -> "QuadraticObservable":
        """The jet-entry functional x_i^{(s)}."""
        b = np.zeros(dim)
        b[2 * s + i - 1] = 1.0
        return cls(np.zeros((dim, dim)), b)

    def value(self, u) -> float:
        u = np.asarray(u, dtype=float)
        return float(0.5 * u @ self.A @ u + self.b @ u + self.c)

    def grad(self, u) -> np.ndarray:
        return self.A @ np.asarray(u, dtype=float) + self.b

    def __add__(self, other):
        return QuadraticObservable(self.A + other.A, self.b + other.b, self.c + other.c)

    def __mul__(self, scalar):
        return QuadraticObservable(scalar * self.A, scalar * self.b, scalar * self.c)

    __rmul__ = __mul__


def bracket(S: StructureMatrix, f: QuadraticObservable,
            g: QuadraticObservable) -> QuadraticObservable:
    """{f, g} = grad(f) . Omega . grad(g); closes on quadratic observables."""
    if f.dim != S.dim or g.dim != S.dim:
        raise ValueError("observable dimensions do not match the structure")
    Om = S.omega
    A = f.A @ Om @ g.A - g.A @ Om @ f.A
    b = f.A @ Om @ g.b - g.A @ Om @ f.b
    c = float(f.b @ Om @ g.b)
    return QuadraticObservable(0.5 * (A + A.T), b, c)


def hamiltonian_vector_field(S: StructureMatrix, H: QuadraticObservable) -> np.ndarray:
    """Matrix of the linear flow du/dt = Omega A_H u generated by H."""
    if H.dim != S.dim:
        raise ValueError("observable dimension does not match the structure")
    if np.abs(H.b).max() > 0.0:
        raise ValueError("Hamiltonian must be a homogeneous quadratic (b = 0)")
    return S.omega @ H.A
