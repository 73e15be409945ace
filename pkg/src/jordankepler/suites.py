"""Named verification suites behind the command-line harness.

Each suite turns one family of identities into a list of case records
(dictionaries with lhs, rhs, residual, tolerance and a pass flag).  All
randomness is drawn from a generator seeded by the run configuration, so
a rerun with the same configuration reproduces the report byte for byte.
Case inputs are generated sequentially; suites are independent of each
other, so a worker pool may run them concurrently and the records are
canonically ordered afterwards.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import partitions as pt
from .blowup import (
    BundleGerm,
    ChartPoint,
    chart_inverse,
    embedding_check,
    random_chart_point,
    sigma_c,
    theta_c,
    transition_germ,
)
from .errors import ConfigError, OutOfChartError, RankMismatchError
from .kernels import (
    CoefficientSequence,
    KernelSpec,
    kernel_eval,
    q_kernel_eval,
    recover_coefficients,
    truncated_kernel_eval,
)
from .measures import beta_integral_check
from .partitions import EMPTY, Partition
from .triples import (
    bergman_apply,
    bergman_apply_expanded,
    bergman_det,
    delta,
    inner,
    jordan_det,
    peirce_project,
    pseudo_inverse,
    quadratic_rep,
    random_element,
    random_rank_element,
    random_tripotent,
    TripleSpace,
)

SUITES = (
    "bergman",
    "peirce",
    "fischer-fock",
    "faraut-koranyi",
    "beta-integral",
    "charts",
    "cocycle",
    "lemma-e",
    "prop-d",
    "prop-h",
    "embedding",
    "recovery",
)


@dataclass
class RunConfig:
    """Resolved parameters of a harness run; embedded in every report."""

    r: int = 2
    s: int = 3
    lam: int = 1
    nu: float = 6.0
    weight_bound: int | None = None
    vanishing_order: int = 1
    seed: int = 0
    trials: int | None = None
    samples: int | None = None
    workers: int = 1

    def space(self, lam: int | None = None) -> TripleSpace:
        try:
            return TripleSpace(self.r, self.s, self.lam if lam is None else lam)
        except Exception as exc:
            raise ConfigError(str(exc)) from exc

    def as_dict(self) -> dict:
        return asdict(self)


def _scalar(x):
    if x is None:
        return None
    x = complex(x)
    if x.imag == 0.0:
        return x.real
    return [x.real, x.imag]


def _case(suite, name, lhs, rhs, residual, tol):
    return {
        "record": "case",
        "suite": suite,
        "case": name,
        "lhs": _scalar(lhs),
        "rhs": _scalar(rhs),
        "residual": float(residual),
        "tolerance": float(tol),
        "pass": bool(residual <= tol),
    }


def _rel(lhs, rhs):
    denom = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / denom


def _d_cc(c: np.ndarray, v: np.ndarray) -> np.ndarray:
    return c @ c.conj().T @ v + v @ c.conj().T @ c


def _bergman_adjoint(t: np.ndarray, c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Adjoint of v -> (I + t c*) v (I + c* t) for the trace inner product."""
    r, s = t.shape
    return (np.eye(r) + c @ t.conj().T) @ z @ (np.eye(s) + t.conj().T @ c)


def suite_bergman(cfg: RunConfig) -> list[dict]:
    """det B = delta^p and agreement of the two Bergman operator routes."""
    space = cfg.space()
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 200
    cases = []
    for i in range(trials):
        z = random_element(space, rng, spectral=0.7)
        w = random_element(space, rng, spectral=0.7)
        v = random_element(space, rng)
        lhs = bergman_det(z, w)
        rhs = delta(z, w) ** space.p
        cases.append(
            _case("bergman", f"detB-vs-delta^p/{i:03d}", lhs, rhs, abs(lhs - rhs) / abs(rhs), 1e-10)
        )
        resid = float(np.linalg.norm(bergman_apply(z, w, v) - bergman_apply_expanded(z, w, v)))
        resid /= max(1.0, float(np.linalg.norm(v)))
        cases.append(_case("bergman", f"operator-routes/{i:03d}", None, None, resid, 1e-12))
    return cases


def suite_peirce(cfg: RunConfig) -> list[dict]:
    """Peirce projections: algebra relations, spectrum of D(c,c), dimensions."""
    space = cfg.space()
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 25
    cases = []
    for i in range(trials):
        rank = 1 + (i % space.r)
        c = random_tripotent(space, rank, rng)
        v = random_element(space, rng)
        projs = [peirce_project(c, v, k) for k in (0, 1, 2)]
        resid = float(np.linalg.norm(sum(projs) - v)) / float(np.linalg.norm(v))
        cases.append(_case("peirce", f"sum-identity/{i:03d}", None, None, resid, 1e-12))
        worst = 0.0
        for k, pk in zip((0, 1, 2), projs):
            worst = max(worst, float(np.linalg.norm(peirce_project(c, pk, k) - pk)))
            for k2 in (0, 1, 2):
                if k2 != k:
                    worst = max(worst, float(np.linalg.norm(peirce_project(c, pk, k2))))
        cases.append(_case("peirce", f"idempotent-orthogonal/{i:03d}", None, None, worst, 1e-12))
        spectral = 2.0 * projs[2] + projs[1]
        resid = float(np.linalg.norm(_d_cc(c.matrix, v) - spectral)) / float(np.linalg.norm(v))
        cases.append(_case("peirce", f"spectral/{i:03d}", None, None, resid, 1e-12))
    for rank in range(1, space.r + 1):
        if rank == space.r and space.b == 0:
            continue
        c = random_tripotent(space, rank, rng)
        want2 = rank * rank
        want1 = rank * (space.r + space.s - 2 * rank)
        got2 = _projection_dim(space, c, 2)
        got1 = _projection_dim(space, c, 1)
        cases.append(_case("peirce", f"dim-P2/rank{rank}", got2, want2, abs(got2 - want2), 0.5))
        cases.append(_case("peirce", f"dim-P1/rank{rank}", got1, want1, abs(got1 - want1), 0.5))
    return cases


def _projection_dim(space, c, k):
    cols = []
    for i in range(space.r):
        for j in range(space.s):
            e = space.zero()
            e[i, j] = 1.0
            cols.append(peirce_project(c, e, k).ravel())
    return int(np.linalg.matrix_rank(np.array(cols).T, tol=1e-8))


def suite_fischer_fock(cfg: RunConfig) -> list[dict]:
    """Partial sums of the component series against exp((z|w))."""
    space = cfg.space()
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 100
    weight = cfg.weight_bound or 12
    mus = pt.enumerate_partitions(space.r, weight)
    cases = []
    for i in range(trials):
        z = random_element(space, rng, spectral=0.5 * (0.1 + 0.9 * rng.random()))
        w = random_element(space, rng, spectral=0.5 * (0.1 + 0.9 * rng.random()))
        total = complex(np.sum(pt.fischer_components(space, mus, z, w)))
        target = np.exp(inner(z, w))
        cases.append(
            _case(
                "fischer-fock",
                f"exp-series/{i:03d}",
                total,
                target,
                abs(total - target) / abs(target),
                1e-8,
            )
        )
    return cases


def suite_faraut_koranyi(cfg: RunConfig) -> list[dict]:
    """Closed hypergeometric form of the maximal-rank kernel.

    Uses lam = r regardless of the configured Kepler rank.  For r = 1 a
    tighter radius and a higher weight bound pin the binomial-series
    oracle at 1e-10; the matrix case is checked at 1e-6.
    """
    space = cfg.space(lam=cfg.r)
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 100
    rank_one = space.r == 1
    radius = 0.25 if rank_one else 0.35
    weight = max(cfg.weight_bound or 16, 24 if rank_one else 16)
    tol = 1e-10 if rank_one else 1e-6
    spec = KernelSpec(space, CoefficientSequence.nu_rule(space, cfg.nu), weight, 0)
    cases = []
    for i in range(trials):
        z = random_element(space, rng, spectral=radius * (0.3 + 0.7 * rng.random()))
        w = random_element(space, rng, spectral=radius * (0.3 + 0.7 * rng.random()))
        val = kernel_eval(spec, z, w).value
        target = delta(z, w) ** (-cfg.nu)
        cases.append(_case("faraut-koranyi", f"closed-form/{i:03d}", val, target, abs(val - target), tol))
    return cases


def suite_beta_integral(cfg: RunConfig) -> list[dict]:
    """Cone beta integral against the Gamma/Pochhammer closed form."""
    space = cfg.space()
    cases = []
    if space.lam == 1:
        for mu in (EMPTY, Partition((1,)), Partition((3,))):
            chk = beta_integral_check(space, cfg.nu, mu, method="quadrature")
            cases.append(
                _case("beta-integral", f"quadrature/mu={mu}", chk.lhs, chk.rhs, chk.rel_error, 1e-10)
            )
    elif space.lam == 2:
        n = cfg.samples or 2_000_000
        for mu in (EMPTY, Partition((1,)), Partition((1, 1)), Partition((2, 1))):
            chk = beta_integral_check(
                space, cfg.nu, mu, method="monte-carlo", seed=cfg.seed, n_samples=n
            )
            tol = max(0.02 * abs(chk.rhs), 3.0 * chk.std_error)
            cases.append(
                _case("beta-integral", f"monte-carlo/mu={mu}", chk.lhs, chk.rhs, chk.abs_error, tol)
            )
    else:
        raise ConfigError("beta-integral suite runs for lam in {1, 2}")
    return cases


def suite_charts(cfg: RunConfig) -> list[dict]:
    """Chart round trips and the two pseudo-inverse routes."""
    space = cfg.space()
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 50
    cases = []
    for i in range(trials):
        point = random_chart_point(space, rng)
        w = sigma_c(point)
        back = chart_inverse(space, point.c, w)
        resid = float(np.linalg.norm(sigma_c(back) - w)) / max(1.0, float(np.linalg.norm(w)))
        cases.append(_case("charts", f"round-trip/{i:03d}", None, None, resid, 1e-10))
        z, zt = theta_c(point)
        gap = float(np.linalg.norm(zt - pseudo_inverse(z))) / max(1.0, float(np.linalg.norm(zt)))
        cases.append(_case("charts", f"pseudo-inverse-formulas/{i:03d}", None, None, gap, 1e-9))
        worst = max(
            float(np.linalg.norm(quadratic_rep(z, zt) - z)),
            float(np.linalg.norm(quadratic_rep(zt, z) - zt)),
            float(
                np.linalg.norm(
                    quadratic_rep(z, quadratic_rep(zt, w)) - quadratic_rep(zt, quadratic_rep(z, w))
                )
            ),
        )
        cases.append(_case("charts", f"pseudo-inverse-identities/{i:03d}", None, None, worst, 1e-9))
    return cases


def suite_cocycle(cfg: RunConfig) -> list[dict]:
    """Cocycle property of the determinant-bundle transition factors."""
    space = cfg.space()
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 50
    cases = []
    attempts = 0
    i = 0
    while i < trials and attempts < 50 * trials:
        attempts += 1
        point = random_chart_point(space, rng)
        c2 = random_tripotent(space, space.lam, rng)
        c3 = random_tripotent(space, space.lam, rng)
        germ = BundleGerm(chart=point, coefficient=1.0 + 0.0j)
        try:
            step2 = transition_germ(space, germ, c2)
            step3 = transition_germ(space, step2, c3)
            direct = transition_germ(space, germ, c3)
        except (OutOfChartError, RankMismatchError):
            continue  # the sampled point misses one of the charts
        resid = abs(step3.coefficient - direct.coefficient) / abs(direct.coefficient)
        cases.append(_case("cocycle", f"triple/{i:03d}", None, None, resid, 1e-10))
        identity = transition_germ(space, germ, point.c)
        cases.append(
            _case(
                "cocycle",
                f"identity/{i:03d}",
                identity.coefficient,
                1.0,
                abs(identity.coefficient - 1.0),
                1e-10,
            )
        )
        i += 1
    if i < trials:
        raise ConfigError("could not sample enough mutually visible chart triples")
    return cases


def suite_lemma_e(cfg: RunConfig) -> list[dict]:
    """Peirce determinant of B*_{t,-c} B_{t,-c} c equals det(I + t t*)."""
    space = cfg.space()
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 100
    cases = []
    for i in range(trials):
        point = random_chart_point(space, rng)
        cmat = point.c.matrix
        z = sigma_c(ChartPoint(c=point.c, s=cmat, t=point.t))
        bstar = _bergman_adjoint(point.t, cmat, z)
        lhs = jordan_det(point.c, peirce_project(point.c, bstar, 2))
        rhs = delta(point.t, -point.t)
        cases.append(_case("lemma-e", f"determinant/{i:03d}", lhs, rhs, _rel(lhs, rhs), 1e-10))
    return cases


def _identity_setup(cfg: RunConfig):
    space = cfg.space()
    weight = cfg.weight_bound or 14
    coeffs = CoefficientSequence.nu_rule(space, cfg.nu)
    spec = KernelSpec(space, coeffs, weight, max(cfg.vanishing_order, 1))
    return space, spec


def suite_prop_d(cfg: RunConfig) -> list[dict]:
    """Off-diagonal factorization of the truncated kernel through Q."""
    space, spec = _identity_setup(cfg)
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 100
    cases = []
    for i in range(trials):
        point = random_chart_point(space, rng)
        w = sigma_c(point)
        z = random_rank_element(space, rng, space.lam, spectral=0.5)
        lhs = truncated_kernel_eval(spec, z, w).value
        bz = _bergman_adjoint(point.t, point.c.matrix, z)
        factor = jordan_det(point.c, peirce_project(point.c, bz, 2)) * np.conj(
            jordan_det(point.c, point.s)
        )
        rhs = factor * q_kernel_eval(spec, z, w).value
        cases.append(_case("prop-d", f"factorization/{i:03d}", lhs, rhs, _rel(lhs, rhs), 1e-8))
    return cases


def suite_prop_h(cfg: RunConfig) -> list[dict]:
    """Diagonal metric factorization of the truncated kernel."""
    space, spec = _identity_setup(cfg)
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 100
    cases = []
    for i in range(trials):
        point = random_chart_point(space, rng)
        w = sigma_c(point)
        lhs = truncated_kernel_eval(spec, w, w).value.real
        nc = abs(jordan_det(point.c, point.s)) ** 2
        rhs = delta(point.t, -point.t).real * nc * q_kernel_eval(spec, w, w).value.real
        cases.append(_case("prop-h", f"diagonal/{i:03d}", lhs, rhs, _rel(lhs, rhs), 1e-8))
    return cases


def suite_embedding(cfg: RunConfig) -> list[dict]:
    """Isometry residual of the bundle embedding, plus scale invariance."""
    space, spec = _identity_setup(cfg)
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials or 50
    cases = []
    for i in range(trials):
        point = random_chart_point(space, rng)
        resid = embedding_check(spec, point)
        cases.append(_case("embedding", f"isometry/{i:03d}", None, None, resid, 1e-8))
        for alpha in (0.3, 0.7):
            scaled = ChartPoint(c=point.c, s=alpha * point.s, t=point.t)
            resid = embedding_check(spec, scaled)
            cases.append(
                _case("embedding", f"isometry-scaled-{alpha}/{i:03d}", None, None, resid, 1e-8)
            )
    return cases


def suite_recovery(cfg: RunConfig) -> list[dict]:
    """Round-trip coefficient recovery and the distinctness witness."""
    space = cfg.space()
    weight = cfg.weight_bound or 6
    gen_weight = weight + space.lam
    cases = []
    tables = {}
    for name, coeffs in (
        ("nu-rule", CoefficientSequence.nu_rule(space, cfg.nu)),
        ("hardy", CoefficientSequence.hardy()),
    ):
        spec = KernelSpec(space, coeffs, gen_weight, 1)
        result = recover_coefficients(
            space, lambda x, s=spec: q_kernel_eval(s, x, x).value, weight
        )
        tables[name] = result.table
        worst = max(
            abs(rho - coeffs.rho(mu)) / abs(coeffs.rho(mu)) for mu, rho in result.table.items()
        )
        cases.append(_case("recovery", f"round-trip/{name}", None, None, worst, 1e-8))
        cases.append(
            _case(
                "recovery",
                f"collocation-condition/{name}",
                result.condition_number,
                None,
                result.condition_number / 1e12,
                1.0,
            )
        )
    gap = max(abs(tables["nu-rule"][mu] - tables["hardy"][mu]) for mu in tables["nu-rule"])
    # distinct sequences must stay distinguishable: gap above 1e-3
    cases.append(_case("recovery", "distinct-tables", gap, None, 1e-3 / gap, 1.0))
    return cases


_SUITE_FUNCS = {
    "bergman": suite_bergman,
    "peirce": suite_peirce,
    "fischer-fock": suite_fischer_fock,
    "faraut-koranyi": suite_faraut_koranyi,
    "beta-integral": suite_beta_integral,
    "charts": suite_charts,
    "cocycle": suite_cocycle,
    "lemma-e": suite_lemma_e,
    "prop-d": suite_prop_d,
    "prop-h": suite_prop_h,
    "embedding": suite_embedding,
    "recovery": suite_recovery,
}


def run_suites(names, cfg: RunConfig) -> list[dict]:
    """Run the named suites (possibly concurrently) and return the records
    in canonical order, followed by a summary record."""
    for name in names:
        if name not in _SUITE_FUNCS:
            raise ConfigError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    records: list[dict] = []
    if cfg.workers > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            for recs in pool.map(lambda n: _SUITE_FUNCS[n](cfg), names):
                records.extend(recs)
    else:
        for name in names:
            records.extend(_SUITE_FUNCS[name](cfg))
    records.sort(key=lambda rec: (rec["suite"], rec["case"]))
    failed = [r for r in records if not r["pass"]]
    summary = {
        "record": "summary",
        "suites": sorted(set(names)),
        "config": cfg.as_dict(),
        "n_cases": len(records),
        "n_failed": len(failed),
        "max_residual": max((r["residual"] for r in records), default=0.0),
        "all_pass": not failed,
    }
    return records + [summary]
