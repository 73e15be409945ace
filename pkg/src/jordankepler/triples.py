"""Hermitian Jordan triple of complex rectangular matrices.

The ambient space is V = C^{r x s} (r <= s) with triple product
{u;v;w} = u v* w + w v* u and the trace inner product (z|w) = tr(z w*).
Elements are plain complex numpy arrays of shape (r, s); the structure
constants live on :class:`TripleSpace`.  All operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RankMismatchError

DEFAULT_ATOL = 1e-12
DEFAULT_RTOL = 1e-10
RANK_TOL = 1e-10

__all__ = [
    "TripleSpace",
    "Tripotent",
    "inner",
    "spectral_norm",
    "elements_close",
    "triple_product",
    "quadratic_rep",
    "bergman_apply",
    "bergman_apply_expanded",
    "bergman_det",
    "delta",
    "matrix_rank",
    "is_tripotent",
    "haar_unitary",
    "random_element",
    "random_rank_element",
    "random_tripotent",
    "standard_tripotent",
    "peirce_project",
    "pseudo_inverse",
    "jordan_det",
]


@dataclass(frozen=True)
class TripleSpace:
    """Structure constants of C^{r x s} with a marked Kepler rank ``lam``.

    Multiplicities for the rectangular type: a = 2, b = s - r, genus
    p = r + s = 2 + a(r-1) + b.  The Kepler variety of rank <= lam is
    square-free only when (lam, b) != (r, 0); that excluded combination is
    rejected here.
    """

    r: int
    s: int
    lam: int = 1

    def __post_init__(self):
        if self.r < 1 or self.s < self.r:
            raise DomainError(f"need 1 <= r <= s, got r={self.r}, s={self.s}")
        if not 1 <= self.lam <= self.r:
            raise DomainError(f"need 1 <= lam <= r, got lam={self.lam}")
        if self.lam == self.r and self.b == 0:
            raise DomainError(
                "square matrices with lam == r are excluded (codimension-one singular set)"
            )

    @property
    def a(self) -> int:
        return 2

    @property
    def b(self) -> int:
        return self.s - self.r

    @property
    def d(self) -> int:
        return self.r * self.s

    @property
    def p(self) -> int:
        """Genus r + s."""
        return self.r + self.s

    @property
    def d2(self) -> int:
        """Dimension lam^2 of the Peirce 2-space of a rank-lam tripotent."""
        return self.lam * (1 + (self.a * (self.lam - 1)) // 2)

    @property
    def d1(self) -> int:
        """Dimension lam(r + s - 2 lam) of the Peirce 1-space."""
        return self.lam * (self.a * (self.r - self.lam) + self.b)

    @property
    def d_lam(self) -> int:
        """Dimension of the rank-lam Kepler manifold."""
        return self.d2 + self.d1

    @property
    def shape(self) -> tuple[int, int]:
        return (self.r, self.s)

    def element(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=complex)
        if arr.shape != self.shape:
            raise DomainError(f"expected shape {self.shape}, got {arr.shape}")
        if not np.all(np.isfinite(arr.view(float))):
            raise DomainError("non-finite entries")
        return arr

    def zero(self) -> np.ndarray:
        return np.zeros(self.shape, dtype=complex)

    def __str__(self):
        return f"C^({self.r}x{self.s})[lam={self.lam}]"


def _check_shapes(*elems):
    shape = elems[0].shape
    for e in elems[1:]:
        if e.shape != shape:
            raise DomainError(f"shape mismatch: {shape} vs {e.shape}")


def inner(z: np.ndarray, w: np.ndarray) -> complex:
    """K-invariant inner product (z|w) = tr(z w*)."""
    _check_shapes(z, w)
    return complex(np.sum(z * np.conj(w)))


def spectral_norm(z: np.ndarray) -> float:
    return float(np.linalg.norm(z, 2)) if z.size else 0.0


def elements_close(x, y, atol: float = DEFAULT_ATOL, rtol: float = DEFAULT_RTOL) -> bool:
    """Equality of elements with explicit absolute + relative tolerance."""
    scale = max(np.linalg.norm(x), np.linalg.norm(y))
    return float(np.linalg.norm(np.asarray(x) - np.asarray(y))) <= atol + rtol * scale


def triple_product(u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Jordan triple product {u;v;w} = u v* w + w v* u."""
    _check_shapes(u, v, w)
    t = u @ v.conj().T @ w
    return t + w @ v.conj().T @ u


def quadratic_rep(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Quadratic representation Q_z w = z w* z."""
    _check_shapes(z, w)
    return z @ w.conj().T @ z


def bergman_apply(z: np.ndarray, w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Bergman operator B_{z,w} v = (I - z w*) v (I - w* z)."""
    _check_shapes(z, w, v)
    r, s = z.shape
    left = np.eye(r, dtype=complex) - z @ w.conj().T
    right = np.eye(s, dtype=complex) - w.conj().T @ z
    return left @ v @ right


def bergman_apply_expanded(z: np.ndarray, w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """B_{z,w} v through the operator identity I - D(z,w) + Q_z Q_w.

    Independent route used to cross-check :func:`bergman_apply`; the
    quarter factor enters as Q_z Q_w v = (1/4) {z;{w;v;w};z}.
    """
    return v - triple_product(z, w, v) + quadratic_rep(z, quadratic_rep(w, v))


def bergman_det(z: np.ndarray, w: np.ndarray) -> complex:
    """det of B_{z,w} as an operator on the matrix space.

    B_{z,w} acts by v -> A v C, so the operator determinant factors as
    det(A)^s det(C)^r.
    """
    _check_shapes(z, w)
    r, s = z.shape
    da = np.linalg.det(np.eye(r, dtype=complex) - z @ w.conj().T)
    dc = np.linalg.det(np.eye(s, dtype=complex) - w.conj().T @ z)
    return complex(da**s * dc**r)


def delta(z: np.ndarray, w: np.ndarray) -> complex:
    """Jordan triple determinant det(I_r - z w*); det B_{z,w} = delta^p."""
    _check_shapes(z, w)
    r = z.shape[0]
    return complex(np.linalg.det(np.eye(r, dtype=complex) - z @ w.conj().T))


def matrix_rank(z: np.ndarray, tol: float = RANK_TOL) -> int:
    """Number of singular values above tol * (largest singular value)."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    sv = np.linalg.svd(z, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * sv[0]))


def is_tripotent(c: np.ndarray, tol: float = RANK_TOL) -> bool:
    """Partial-isometry test ||Q_c c - c|| <= tol."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    return float(np.linalg.norm(quadratic_rep(c, c) - c)) <= tol


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of U(n) (QR of a Ginibre matrix, phases fixed)."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, rmat = np.linalg.qr(g)
    ph = np.diag(rmat).copy()
    ph /= np.abs(ph)
    return q * ph[np.newaxis, :]


def random_element(space: TripleSpace, rng: np.random.Generator, spectral: float | None = None) -> np.ndarray:
    """Gaussian element, optionally rescaled to a given spectral norm."""
    z = rng.standard_normal(space.shape) + 1j * rng.standard_normal(space.shape)
    if spectral is not None:
        z *= spectral / spectral_norm(z)
    return z


def random_rank_element(
    space: TripleSpace, rng: np.random.Generator, rank: int, spectral: float | None = None
) -> np.ndarray:
    """Gaussian element of exact rank ``rank`` (generically), rescaled if asked."""
    if not 0 <= rank <= space.r:
        raise DomainError(f"rank {rank} out of range for {space}")
    if rank == 0:
        return space.zero()
    za = rng.standard_normal((space.r, rank)) + 1j * rng.standard_normal((space.r, rank))
    zb = rng.standard_normal((rank, space.s)) + 1j * rng.standard_normal((rank, space.s))
    z = za @ zb
    if spectral is not None:
        z *= spectral / spectral_norm(z)
    return z


@dataclass(frozen=True)
class Tripotent:
    """A partial isometry c (Q_c c = c) together with an SVD frame.

    The frame (u, w) satisfies c = u diag(1,..,1,0,..,0) w* with exactly
    ``rank`` ones; it backs the Peirce-2 determinant and the blow-up
    charts.  Frame choice is immaterial for every quantity exposed here.
    """

    matrix: np.ndarray
    rank: int
    u: np.ndarray
    w: np.ndarray

    @classmethod
    def from_matrix(cls, c: np.ndarray, tol: float = 1e-10) -> "Tripotent":
        c = np.asarray(c, dtype=complex)
        if not is_tripotent(c, tol):
            raise RankMismatchError("matrix is not a tripotent within tolerance")
        u, sv, vh = np.linalg.svd(c)
        rank = int(np.count_nonzero(sv > 0.5))
        return cls(matrix=c, rank=rank, u=u, w=vh.conj().T)

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))


def standard_tripotent(space: TripleSpace, rank: int) -> Tripotent:
    """The identity-block tripotent of the requested rank, exact frame."""
    if not 0 <= rank <= space.r:
        raise DomainError(f"rank {rank} out of range for {space}")
    c = space.zero()
    for i in range(rank):
        c[i, i] = 1.0
    return Tripotent(
        matrix=c,
        rank=rank,
        u=np.eye(space.r, dtype=complex),
        w=np.eye(space.s, dtype=complex),
    )


def random_tripotent(space: TripleSpace, rank: int, rng: np.random.Generator) -> Tripotent:
    """Haar-random tripotent of the given rank: U diag(1..1,0..0) W*."""
    if not 0 <= rank <= space.r:
        raise DomainError(f"rank {rank} out of range for {space}")
    u = haar_unitary(space.r, rng)
    w = haar_unitary(space.s, rng)
    core = np.zeros(space.shape, dtype=complex)
    for i in range(rank):
        core[i, i] = 1.0
    return Tripotent(matrix=u @ core @ w.conj().T, rank=rank, u=u, w=w)


def peirce_project(c: Tripotent, v: np.ndarray, k: int) -> np.ndarray:
    """Projection of v onto the eigenspace of D(c,c) with eigenvalue k in {0,1,2}.

    With q = c c* and q' = c* c: P2 v = q v q', P0 v = (I-q) v (I-q'),
    P1 = id - P2 - P0.
    """
    if k not in (0, 1, 2):
        raise DomainError(f"Peirce index must be 0, 1 or 2, got {k}")
    cm = c.matrix
    _check_shapes(cm, v)
    q = cm @ cm.conj().T
    qp = cm.conj().T @ cm
    p2 = q @ v @ qp
    if k == 2:
        return p2
    r, s = cm.shape
    p0 = (np.eye(r, dtype=complex) - q) @ v @ (np.eye(s, dtype=complex) - qp)
    if k == 0:
        return p0
    return v - p2 - p0


def pseudo_inverse(z: np.ndarray) -> np.ndarray:
    """The Jordan pseudo-inverse: the unique element with
    Q_z zt = z, Q_zt z = zt and commuting quadratic representations.

    For matrices this is the conjugate-transposed Moore-Penrose inverse,
    so it lives in the same space as z.
    """
    if np.linalg.norm(z) == 0.0:
        raise DomainError("zero element has no pseudo-inverse")
    return np.linalg.pinv(z).conj().T


def peirce_inverse(c: Tripotent, x: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Jordan-algebra inverse of x in the Peirce-2 algebra of c (unit c).

    In the frame of c this inverts the leading rank x rank block.  Fails
    if x lies outside the Peirce 2-space or the block is singular.
    """
    lam = c.rank
    if lam == 0:
        raise DomainError("rank-0 tripotent has a trivial Peirce 2-space")
    resid = np.linalg.norm(x - peirce_project(c, x, 2))
    if resid > tol * max(1.0, float(np.linalg.norm(x))):
        raise DomainError(f"element not in the Peirce 2-space (residual {resid:.2e})")
    coords = c.u.conj().T @ x @ c.w
    block = coords[:lam, :lam]
    sv = np.linalg.svd(block, compute_uv=False)
    if sv[-1] <= 1e-13 * max(1.0, sv[0]):
        raise DomainError("element not invertible in the Peirce 2-algebra")
    out = np.zeros_like(coords)
    out[:lam, :lam] = np.linalg.inv(block)
    return c.u @ out @ c.w.conj().T


def jordan_det(c: Tripotent, x: np.ndarray, tol: float = 1e-9) -> complex:
    """Determinant N_c(x) of the Peirce-2 Jordan algebra, normalized N_c(c) = 1.

    Realized as the determinant of the leading rank x rank block of
    u* x w in the frame of c, rescaled so that N_c(c) is exactly one;
    this makes the value independent of the frame choice.  Requires x to
    lie in the Peirce 2-space of c.
    """
    lam = c.rank
    if lam == 0:
        return 1.0 + 0.0j
    resid = np.linalg.norm(x - peirce_project(c, x, 2))
    if resid > tol * max(1.0, float(np.linalg.norm(x))):
        raise DomainError(f"element not in the Peirce 2-space (residual {resid:.2e})")
    coords = c.u.conj().T @ x @ c.w
    base = np.linalg.det((c.u.conj().T @ c.matrix @ c.w)[:lam, :lam])
    return complex(np.linalg.det(coords[:lam, :lam]) / base)
