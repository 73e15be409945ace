"""Partition combinatorics and partition-indexed special functions.

Everything downstream (kernel series, beta integrals, recovery) is indexed
by integer partitions.  This module provides the index set, the
multivariate Pochhammer symbol and Koecher-Gindikin Gamma function for a
general characteristic multiplicity ``a``, and the Fischer-Fock components
``E^mu(z, w)`` of the expansion ``exp((z|w)) = sum_mu E^mu(z, w)`` for the
rectangular matrix triple (``a = 2``), where they reduce to normalized
Schur polynomials in the spectrum of ``z w*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "Partition",
    "EMPTY",
    "ones",
    "enumerate_partitions",
    "rising_factorial",
    "pochhammer",
    "log_gamma_lambda",
    "num_syt",
    "homogeneous_from_power_sums",
    "schur_from_power_sums",
    "weyl_dim_gl",
    "dim_P_mu",
    "E_mu",
    "fischer_components",
]


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of nonnegative integers, trailing zeros trimmed."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(m) for m in self.parts)
        if any(m < 0 for m in parts):
            raise DomainError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise DomainError(f"parts not weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def padded(self, n: int) -> tuple[int, ...]:
        if n < self.length:
            raise DomainError(f"cannot pad {self} to length {n}")
        return self.parts + (0,) * (n - self.length)

    def shifted(self, k: int, length: int) -> "Partition":
        """Add ``k`` to every one of the first ``length`` parts (mu + (k,..,k))."""
        return Partition(tuple(m + k for m in self.padded(length)))

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(
            tuple(sum(1 for m in self.parts if m > j) for j in range(self.parts[0]))
        )

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return "(" + ",".join(str(m) for m in self.parts) + ")"


EMPTY = Partition(())


def ones(length: int) -> Partition:
    """The partition (1,...,1) with ``length`` ones."""
    return Partition((1,) * length)


def enumerate_partitions(length_bound: int, weight_bound: int) -> list[Partition]:
    """All partitions of length <= length_bound and weight <= weight_bound.

    Ordered by weight, then reverse-lexicographically within each weight,
    so the list starts (), (1), (2), (1,1), (3), ...
    """
    if length_bound < 0 or weight_bound < 0:
        raise DomainError("bounds must be nonnegative")
    out: list[tuple[int, ...]] = []

    def grow(prefix: list[int], maxpart: int, budget: int):
        out.append(tuple(prefix))
        if len(prefix) >= length_bound:
            return
        for m in range(min(maxpart, budget), 0, -1):
            prefix.append(m)
            grow(prefix, m, budget - m)
            prefix.pop()

    grow([], weight_bound, weight_bound)
    out.sort(key=lambda p: (sum(p), tuple(-m for m in p)))
    return [Partition(p) for p in out]


def rising_factorial(x, n: int):
    """Classical Pochhammer (x)_n = x (x+1) ... (x+n-1)."""
    result = 1.0 if not isinstance(x, complex) else complex(1.0)
    for i in range(n):
        result = result * (x + i)
    return result


def pochhammer(nu, mu: Partition, a: float = 2.0):
    """Multivariate Pochhammer (nu)_mu = prod_j (nu - (a/2)(j-1))_{m_j}."""
    result = 1.0 if not isinstance(nu, complex) else complex(1.0)
    for j, m in enumerate(mu.parts):
        result = result * rising_factorial(nu - 0.5 * a * j, m)
    return result


def log_gamma_lambda(nu: float, lam: int, a: float = 2.0, shift: Partition = EMPTY) -> float:
    """log of the rank-``lam`` Gamma function at ``nu``, partition shift optional.

    Convention: Gamma_lam(nu + mu) = pi^((a/2) lam(lam-1)/2)
    * prod_{j=1}^{lam} Gamma(nu + m_j - (a/2)(j-1)).  For a = 2 this is the
    complex multivariate Gamma, which matches Lebesgue measure on the
    hermitian matrix interval in the beta integral.  Only ratios of values
    are convention-independent; the constant is fixed so that absolute
    integrals against Lebesgue measure come out right.
    """
    if lam < 1:
        raise DomainError("lam must be >= 1")
    parts = shift.padded(lam)
    total = 0.5 * a * (lam * (lam - 1) / 2) * math.log(math.pi)
    for j in range(lam):
        arg = nu + parts[j] - 0.5 * a * j
        if arg <= 0:
            raise DomainError(f"Gamma pole: argument {arg} at slot {j + 1}")
        total += math.lgamma(arg)
    return total


@lru_cache(maxsize=None)
def num_syt(mu: Partition) -> int:
    """Number of standard Young tableaux of shape mu (hook length formula)."""
    if mu.weight == 0:
        return 1
    conj = mu.conjugate().parts
    hooks = 1
    for i, m in enumerate(mu.parts):
        for j in range(m):
            hooks *= m - j + conj[j] - i - 1
    return math.factorial(mu.weight) // hooks


def homogeneous_from_power_sums(p, kmax: int) -> np.ndarray:
    """Complete homogeneous h_0..h_kmax from power sums p[0]=p_1, p[1]=p_2, ...

    Newton's identity k h_k = sum_{i=1}^{k} p_i h_{k-i}.
    """
    if len(p) < kmax:
        raise DomainError(f"need {kmax} power sums, got {len(p)}")
    h = np.zeros(kmax + 1, dtype=complex)
    h[0] = 1.0
    for k in range(1, kmax + 1):
        h[k] = sum(p[i - 1] * h[k - i] for i in range(1, k + 1)) / k
    return h


def _schur_from_h(mu: Partition, h: np.ndarray) -> complex:
    ell = mu.length
    if ell == 0:
        return 1.0 + 0.0j
    if ell == 1:
        return complex(h[mu.parts[0]])
    mat = np.zeros((ell, ell), dtype=complex)
    for i, m in enumerate(mu.parts):
        for j in range(ell):
            idx = m - i + j
            if idx >= 0:
                mat[i, j] = h[idx]
    return complex(np.linalg.det(mat))


def schur_from_power_sums(mu: Partition, p) -> complex:
    """Schur polynomial s_mu evaluated from power sums, via the
    Jacobi-Trudi determinant in complete homogeneous functions."""
    if len(p) < mu.weight:
        raise DomainError(f"need {mu.weight} power sums for {mu}")
    hmax = (mu.parts[0] + mu.length - 1) if mu.parts else 0
    return _schur_from_h(mu, homogeneous_from_power_sums(p, hmax))


@lru_cache(maxsize=None)
def weyl_dim_gl(n: int, mu: Partition) -> int:
    """Dimension of the GL_n irreducible with highest weight mu (= s_mu(1^n))."""
    if mu.length > n:
        return 0
    parts = mu.padded(n)
    dim = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            dim *= Fraction(parts[i] - parts[j] + j - i, j - i)
    assert dim.denominator == 1
    return int(dim)


def dim_P_mu(space, mu: Partition) -> int:
    """Dimension of the polynomial component with signature mu on C^{r x s}."""
    if mu.length > space.r:
        raise DomainError(f"{mu} longer than rank {space.r}")
    return weyl_dim_gl(space.r, mu) * weyl_dim_gl(space.s, mu)


def _power_sums(z: np.ndarray, w: np.ndarray, kmax: int) -> np.ndarray:
    gram = z @ w.conj().T
    p = np.zeros(kmax, dtype=complex)
    acc = np.eye(gram.shape[0], dtype=complex)
    for k in range(kmax):
        acc = acc @ gram
        p[k] = np.trace(acc)
    return p


def E_mu(space, mu: Partition, z: np.ndarray, w: np.ndarray) -> complex:
    """Fischer-Fock component E^mu(z, w) for the matrix triple.

    Equals (f^mu / |mu|!) s_mu(spectrum of z w*), evaluated through power
    sums so that no eigendecomposition of the non-normal matrix z w* is
    needed.  Vanishes whenever length(mu) exceeds rank(z w*), and the
    partial sums over |mu| <= M converge to exp((z|w)).
    """
    if mu.length > space.r:
        raise DomainError(f"{mu} longer than rank {space.r}")
    if mu.weight == 0:
        return 1.0 + 0.0j
    p = _power_sums(z, w, mu.weight)
    return num_syt(mu) / math.factorial(mu.weight) * schur_from_power_sums(mu, p)


def fischer_components(space, mus, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """E^mu(z, w) for many partitions at once, sharing one power-sum pass."""
    mus = list(mus)
    if any(mu.length > space.r for mu in mus):
        raise DomainError("partition longer than the rank of the space")
    kmax = max((mu.parts[0] + mu.length - 1 for mu in mus if mu.parts), default=0)
    wmax = max((mu.weight for mu in mus), default=0)
    h = homogeneous_from_power_sums(_power_sums(z, w, max(kmax, wmax)), kmax)
    out = np.empty(len(mus), dtype=complex)
    for i, mu in enumerate(mus):
        out[i] = (
            num_syt(mu) / math.factorial(mu.weight) * _schur_from_h(mu, h)
            if mu.parts
            else 1.0
        )
    return out
