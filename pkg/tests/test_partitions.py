import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jordankepler.errors import DomainError
from jordankepler.partitions import (
    EMPTY,
    E_mu,
    Partition,
    dim_P_mu,
    enumerate_partitions,
    fischer_components,
    log_gamma_lambda,
    num_syt,
    ones,
    pochhammer,
    rising_factorial,
    schur_from_power_sums,
    weyl_dim_gl,
)
from jordankepler.triples import TripleSpace, haar_unitary, inner, random_element

partitions_st = st.lists(st.integers(0, 6), min_size=0, max_size=4).map(
    lambda xs: Partition(tuple(sorted(xs, reverse=True)))
)


# ---------------------------------------------------------------- Partition

def test_partition_trims_and_validates():
    assert Partition((3, 1, 0, 0)).parts == (3, 1)
    assert Partition(()).parts == ()
    with pytest.raises(DomainError):
        Partition((1, 2))
    with pytest.raises(DomainError):
        Partition((2, -1))


def test_partition_shift_and_conjugate():
    mu = Partition((2, 1))
    assert mu.shifted(1, 3).parts == (3, 2, 1)
    assert mu.conjugate().parts == (2, 1)
    assert Partition((3, 1)).conjugate().parts == (2, 1, 1)
    assert ones(3).parts == (1, 1, 1)


def test_enumerate_small():
    assert [p.parts for p in enumerate_partitions(1, 3)] == [(), (1,), (2,), (3,)]
    assert [p.parts for p in enumerate_partitions(2, 2)] == [(), (1,), (2,), (1, 1)]


def test_enumerate_count_matches_brute_force():
    # independent count: weakly decreasing pairs (m1, m2) of weight <= 12
    brute = sum(
        1
        for m1 in range(13)
        for m2 in range(m1 + 1)
        if m1 + m2 <= 12
    )
    got = enumerate_partitions(2, 12)
    assert len(got) == brute == 49


@given(st.integers(0, 4), st.integers(0, 8))
def test_enumerate_properties(length_bound, weight_bound):
    ps = enumerate_partitions(length_bound, weight_bound)
    assert len(set(ps)) == len(ps)
    weights = [p.weight for p in ps]
    assert weights == sorted(weights)
    assert all(p.length <= length_bound and p.weight <= weight_bound for p in ps)


# --------------------------------------------------------------- Pochhammer

def test_pochhammer_examples():
    assert pochhammer(4.2, EMPTY, 2.0) == 1.0
    assert pochhammer(3.0, Partition((2,)), 2.0) == 12.0
    assert pochhammer(3.0, Partition((2,)), 0.7) == 12.0  # single row ignores a
    # two rows: (nu)_mu = (nu)_{m1} (nu - a/2)_{m2}
    val = pochhammer(2.5, Partition((2, 1)), 2.0)
    assert val == pytest.approx(2.5 * 3.5 * 1.5)


@settings(max_examples=60)
@given(
    partitions_st,
    st.integers(1, 4),
    st.floats(0.25, 6.0),
    st.floats(-3.0, 8.0),
)
def test_pochhammer_shift_identity(mu, lam, a, nu):
    """(nu)_{mu + 1} = (nu + 1)_mu (nu)_1 with 1 = (1,..,1) of length lam."""
    if mu.length > lam:
        mu = Partition(mu.parts[:lam])
    lhs = pochhammer(nu, mu.shifted(1, lam), a)
    rhs = pochhammer(nu + 1.0, mu, a) * pochhammer(nu, ones(lam), a)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_log_gamma_lambda_rank_one_is_lgamma():
    for nu in (0.5, 1.0, 3.7):
        assert log_gamma_lambda(nu, 1) == pytest.approx(math.lgamma(nu))


def test_log_gamma_lambda_convention_value():
    # rank 2, a = 2: Gamma_2(3) = pi * Gamma(3) Gamma(2) = 2 pi
    assert math.exp(log_gamma_lambda(3.0, 2)) == pytest.approx(2.0 * math.pi)


@pytest.mark.parametrize("a", [1.0, 2.0, 3.0])
@pytest.mark.parametrize("mu", [Partition((1, 1)), Partition((3,)), Partition((2, 2, 1))])
def test_gamma_ratio_equals_pochhammer(a, mu):
    lam = max(mu.length, 2)
    nu = 5.25
    ratio = math.exp(log_gamma_lambda(nu, lam, a, shift=mu) - log_gamma_lambda(nu, lam, a))
    assert ratio == pytest.approx(pochhammer(nu, mu, a), rel=1e-10)


def test_log_gamma_pole():
    with pytest.raises(DomainError):
        log_gamma_lambda(0.5, 2, 2.0)  # second slot hits Gamma(-0.5 + 0) <= 0


# ---------------------------------------------------------------------- SYT

def _count_syt_brute(mu: Partition) -> int:
    """Fill cells 1..n one at a time, keeping rows/columns increasing."""
    target = mu.parts
    rows = len(target)

    def grow(filled):
        if sum(filled) == mu.weight:
            return 1
        total = 0
        for i in range(rows):
            if filled[i] < target[i] and (i == 0 or filled[i - 1] > filled[i]):
                total += grow(filled[:i] + (filled[i] + 1,) + filled[i + 1 :])
        return total

    return grow((0,) * rows)


def test_num_syt_examples():
    assert num_syt(Partition((5,))) == 1
    assert num_syt(Partition((1, 1, 1))) == 1
    assert num_syt(Partition((2, 1))) == 2


@pytest.mark.parametrize(
    "mu", [Partition((2, 1)), Partition((3, 2)), Partition((2, 2, 1)), Partition((4, 1, 1))]
)
def test_num_syt_against_brute_force(mu):
    assert num_syt(mu) == _count_syt_brute(mu)


# -------------------------------------------------------------------- Schur

def test_schur_low_degree_closed_forms():
    p = [0.37 - 0.2j, -1.1 + 0.45j, 0.8j]
    p1, p2 = p[0], p[1]
    assert schur_from_power_sums(Partition((1,)), p) == pytest.approx(p1)
    assert schur_from_power_sums(Partition((2,)), p) == pytest.approx((p1**2 + p2) / 2)
    assert schur_from_power_sums(Partition((1, 1)), p) == pytest.approx((p1**2 - p2) / 2)


def _schur_bialternant(mu: Partition, xs) -> complex:
    n = len(xs)
    parts = mu.padded(n)
    num = np.array([[x ** (parts[j] + n - 1 - j) for j in range(n)] for x in xs])
    den = np.array([[x ** (n - 1 - j) for j in range(n)] for x in xs])
    return complex(np.linalg.det(num) / np.linalg.det(den))


@pytest.mark.parametrize("mu", [Partition((2,)), Partition((2, 1)), Partition((3, 1)), Partition((2, 2))])
def test_schur_against_bialternant(mu):
    xs = [0.9 - 0.3j, -0.55 + 0.7j, 0.4 + 0.1j]
    p = [sum(x**k for x in xs) for k in range(1, mu.weight + 1)]
    assert schur_from_power_sums(mu, p) == pytest.approx(_schur_bialternant(mu, xs), rel=1e-12)


def test_weyl_dim_is_schur_at_ones():
    for n in (2, 3, 4):
        for mu in enumerate_partitions(n, 4):
            p = [float(n)] * max(mu.weight, 1)
            want = schur_from_power_sums(mu, p).real
            assert weyl_dim_gl(n, mu) == pytest.approx(want, rel=1e-10)


# ----------------------------------------------------------- K-module dims

def test_dim_P_mu_examples(space23):
    assert dim_P_mu(space23, EMPTY) == 1
    square = TripleSpace(2, 2, 1)
    assert dim_P_mu(square, Partition((1,))) == 4
    one_dim = TripleSpace(1, 1 + 3, 1)
    assert dim_P_mu(one_dim, Partition((5,))) == weyl_dim_gl(4, Partition((5,)))
    with pytest.raises(DomainError):
        dim_P_mu(space23, Partition((1, 1, 1)))


@pytest.mark.parametrize("r,s,lam", [(2, 3, 1), (2, 3, 2), (3, 4, 2), (3, 4, 3)])
def test_dim_ratio_identity(r, s, lam):
    """d_mu / d_mu^c = (d/r)_mu (ra/2)_mu / [(d2/lam)_mu (lam a/2)_mu]."""
    space = TripleSpace(r, s, lam)
    for mu in enumerate_partitions(lam, 4):
        d_mu = dim_P_mu(space, mu)
        d_mu_c = weyl_dim_gl(lam, mu) ** 2
        lhs = d_mu / d_mu_c
        rhs = (
            pochhammer(space.d / space.r, mu, 2.0)
            * pochhammer(space.r, mu, 2.0)
            / (pochhammer(space.d2 / lam, mu, 2.0) * pochhammer(float(lam), mu, 2.0))
        )
        assert lhs == pytest.approx(rhs, rel=1e-11)


# --------------------------------------------------------------------- E_mu

def test_E_mu_empty_and_length_guard(space23, rng):
    z = random_element(space23, rng)
    w = random_element(space23, rng)
    assert E_mu(space23, EMPTY, z, w) == 1.0
    with pytest.raises(DomainError):
        E_mu(space23, Partition((1, 1, 1)), z, w)


def test_E_mu_rank_one_is_exponential_term(space14, rng):
    z = random_element(space14, rng, spectral=0.8)
    w = random_element(space14, rng, spectral=0.8)
    x = inner(z, w)
    for m in range(6):
        got = E_mu(space14, Partition((m,)), z, w)
        assert got == pytest.approx(x**m / math.factorial(m), rel=1e-12)


def test_E_mu_against_eigenvalue_oracle(space23_full, rng):
    z = random_element(space23_full, rng)
    w = random_element(space23_full, rng)
    eigs = np.linalg.eigvals(z @ w.conj().T)
    for mu in [Partition((2,)), Partition((1, 1)), Partition((3, 1)), Partition((2, 2))]:
        want = num_syt(mu) / math.factorial(mu.weight) * _schur_bialternant(mu, list(eigs))
        assert E_mu(space23_full, mu, z, w) == pytest.approx(want, rel=1e-10)


def test_E_mu_K_invariance_and_conjugate_symmetry(space23_full, rng):
    z = random_element(space23_full, rng)
    w = random_element(space23_full, rng)
    u = haar_unitary(2, rng)
    v = haar_unitary(3, rng)
    for mu in [Partition((1,)), Partition((2, 1)), Partition((3,))]:
        val = E_mu(space23_full, mu, z, w)
        assert E_mu(space23_full, mu, u @ z @ v, u @ w @ v) == pytest.approx(val, abs=1e-10)
        assert E_mu(space23_full, mu, w, z) == pytest.approx(np.conj(val), rel=1e-12)


def test_E_mu_vanishes_beyond_rank(space23_full, rng):
    from jordankepler.triples import random_rank_element

    z = random_rank_element(space23_full, rng, 1, spectral=1.0)
    w = random_element(space23_full, rng, spectral=1.0)
    assert abs(E_mu(space23_full, Partition((1, 1)), z, w)) < 1e-14
    assert abs(E_mu(space23_full, Partition((2, 1)), z, w)) < 1e-14


def test_E_mu_partial_sums_converge_to_exponential(space23_full, rng):
    mus = enumerate_partitions(2, 12)
    for _ in range(5):
        z = random_element(space23_full, rng, spectral=0.5)
        w = random_element(space23_full, rng, spectral=0.5)
        total = np.sum(fischer_components(space23_full, mus, z, w))
        target = np.exp(inner(z, w))
        assert abs(total - target) / abs(target) < 1e-8


def test_E_mu_tube_type_value_at_identity():
    """E^mu(e, e) = d_mu / (d/r)_mu on the square triple."""
    square = TripleSpace(2, 2, 1)
    e = np.eye(2, dtype=complex)
    for mu in enumerate_partitions(2, 4):
        want = dim_P_mu(square, mu) / pochhammer(2.0, mu, 2.0)
        assert E_mu(square, mu, e, e) == pytest.approx(want, rel=1e-11)


def test_unital_determinant_shift_identity(rng):
    """On a square triple: E^{mu+1}(z,w) = (d/r)_mu/(d/r)_{mu+1} det z conj(det w) E^mu."""
    square = TripleSpace(3, 3, 1)
    z = random_element(square, rng)
    w = random_element(square, rng)
    dz = np.linalg.det(z)
    dw = np.linalg.det(w)
    for mu in enumerate_partitions(3, 3):
        lhs = E_mu(square, mu.shifted(1, 3), z, w)
        ratio = pochhammer(3.0, mu, 2.0) / pochhammer(3.0, mu.shifted(1, 3), 2.0)
        rhs = ratio * dz * np.conj(dw) * E_mu(square, mu, z, w)
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_rising_factorial_complex():
    assert rising_factorial(2.0 + 1.0j, 3) == (2 + 1j) * (3 + 1j) * (4 + 1j)
