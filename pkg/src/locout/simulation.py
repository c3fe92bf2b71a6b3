"""Synthetic three-group benchmarks with injected scatter outliers.

Each group is multivariate normal with a randomly rotated equicorrelation
covariance on the informative coordinates and independent unit-variance noise
coordinates. Group means follow a cyclic pattern so that every informative
coordinate separates one group from the other two. A fixed fraction of every
group is replaced by scatter outliers: same mean, inflated diagonal covariance.
The log-normal variant exponentiates the normal draws elementwise.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from locout.data import DataMatrix
from locout.errors import ParameterError

DISTRIBUTIONS = ("normal", "lognormal")


@dataclass(frozen=True)
class SimulationConfig:
    group_sizes: tuple[int, ...] = (150, 150, 100)
    p_inf: int = 50
    p_noise: int = 0
    rho_range: tuple[float, float] = (0.1, 0.9)
    mu_range: tuple[float, float] = (3.0, 6.0)
    outlier_fraction: float = 0.05
    outlier_sigma_range: tuple[float, float] = (3.0, 9.0)
    distribution: str = "normal"
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "group_sizes", tuple(int(g) for g in self.group_sizes))
        if len(self.group_sizes) != 3:
            raise ParameterError("the mean pattern is defined for exactly 3 groups")
        if any(g < 1 for g in self.group_sizes):
            raise ParameterError(f"group sizes must be positive: {self.group_sizes}")
        if self.p_inf < 1 or self.p_noise < 0:
            raise ParameterError("need p_inf >= 1 and p_noise >= 0")
        if not 0 <= self.outlier_fraction < 1:
            raise ParameterError("outlier_fraction must lie in [0, 1)")
        for name in ("rho_range", "mu_range", "outlier_sigma_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ParameterError(f"{name} is not ordered: ({lo}, {hi})")
        lo, hi = self.mu_range
        if lo < 0:
            raise ParameterError("mu_range gives the positive half of a symmetric union")
        if self.outlier_sigma_range[0] <= 0:
            raise ParameterError("outlier variances must be positive")
        if self.distribution not in DISTRIBUTIONS:
            raise ParameterError(f"distribution must be one of {DISTRIBUTIONS}")

    @property
    def p(self) -> int:
        return self.p_inf + self.p_noise

    @property
    def n(self) -> int:
        return sum(self.group_sizes)


@dataclass(frozen=True)
class LabeledDataset:
    X: DataMatrix
    labels: np.ndarray
    group_ids: np.ndarray
    provenance: SimulationConfig
    rho: tuple[float, ...] = ()
    mu: float = 0.0
    outlier_sigma: tuple[float, ...] = ()
    outlier_counts: tuple[int, ...] = field(default=())
    # p_inf x p_inf covariance of each group's informative coordinates
    inf_covariances: tuple[np.ndarray, ...] = field(default=(), repr=False)

    def provenance_line(self) -> str:
        cfg = asdict(self.provenance)
        parts = [f"{k}={v}" for k, v in cfg.items()]
        parts.append("rho=" + ",".join(f"{r:.6g}" for r in self.rho))
        parts.append(f"mu={self.mu:.6g}")
        parts.append("outlier_sigma=" + ",".join(f"{s:.6g}" for s in self.outlier_sigma))
        return " ".join(parts)


def outlier_count(fraction: float, size: int) -> int:
    """round-half-up(fraction * size), exact in decimal arithmetic."""
    value = Decimal(repr(float(fraction))) * size
    return int(value.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def random_rotation(d: int, rng: np.random.Generator) -> np.ndarray:
    """Random orthonormal d x d matrix (Haar distributed).

    QR of a standard normal matrix, with column signs fixed by the diagonal of
    R so the result does not depend on the LAPACK sign convention.
    """
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}")
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def group_covariance(rho: float, Omega: np.ndarray, p_inf: int, p_noise: int = 0) -> np.ndarray:
    if p_inf > 1:
        lower = -1.0 / (p_inf - 1)
        if not lower < rho < 1:
            raise ParameterError(
                f"rho = {rho} outside ({lower:.6g}, 1); covariance not positive definite"
            )
    elif not rho < 1:
        raise ParameterError(f"rho must be < 1, got {rho}")
    if Omega.shape != (p_inf, p_inf):
        raise ParameterError(f"rotation must be {p_inf} x {p_inf}, got {Omega.shape}")
    equi = np.full((p_inf, p_inf), rho)
    np.fill_diagonal(equi, 1.0)
    inf = Omega @ equi @ Omega.T
    inf = (inf + inf.T) / 2
    cov = np.zeros((p_inf + p_noise, p_inf + p_noise))
    cov[:p_inf, :p_inf] = inf
    cov[p_inf:, p_inf:] = np.eye(p_noise)
    return cov


def group_means(n_groups: int, p_inf: int, mu: float, p_noise: int = 0) -> np.ndarray:
    """Row g holds ``mu`` on informative coordinates j with j % 3 == g."""
    if n_groups != 3:
        raise ParameterError(f"mean pattern defined for 3 groups, got {n_groups}")
    means = np.zeros((n_groups, p_inf + p_noise))
    for g in range(n_groups):
        means[g, g:p_inf:3] = mu
    return means


def _sample_informative(rng, mean, cov, size):
    L = np.linalg.cholesky(cov)
    return mean + rng.standard_normal((size, len(mean))) @ L.T


def generate(config: SimulationConfig) -> LabeledDataset:
    """Draw one labeled dataset; identical configs give identical data.

    Random streams are split per purpose from the master seed: one for the
    shared separation ``mu``, and per group one for the informative draws,
    one for the noise coordinates and one for outlier placement. Changing
    ``p_noise`` therefore leaves all informative coordinates unchanged.
    """
    cfg = config
    master = np.random.SeedSequence(cfg.seed)
    mu_seq, *group_seqs = master.spawn(1 + len(cfg.group_sizes))
    mu_rng = np.random.default_rng(mu_seq)
    lo, hi = cfg.mu_range
    mu = mu_rng.uniform(lo, hi) * (1.0 if mu_rng.random() < 0.5 else -1.0)
    means = group_means(len(cfg.group_sizes), cfg.p_inf, mu)

    blocks, labels, groups = [], [], []
    rhos, sigmas, counts, covs = [], [], [], []
    for g, (size, seq) in enumerate(zip(cfg.group_sizes, group_seqs)):
        inf_rng, noise_rng, out_rng = (np.random.default_rng(s) for s in seq.spawn(3))
        rho = inf_rng.uniform(*cfg.rho_range)
        Omega = random_rotation(cfg.p_inf, inf_rng)
        cov = group_covariance(rho, Omega, cfg.p_inf)
        inf = _sample_informative(inf_rng, means[g], cov, size)

        n_out = outlier_count(cfg.outlier_fraction, size)
        if cfg.outlier_fraction > 0 and n_out == 0:
            warnings.warn(f"group {g} of size {size} too small for any outlier",
                          stacklevel=2)
        sigma = out_rng.uniform(*cfg.outlier_sigma_range)
        rows = np.sort(out_rng.choice(size, size=n_out, replace=False))
        inf[rows] = means[g] + np.sqrt(sigma) * out_rng.standard_normal((n_out, cfg.p_inf))

        noise = noise_rng.standard_normal((size, cfg.p_noise))
        block = np.hstack([inf, noise])
        if cfg.distribution == "lognormal":
            block = np.exp(block)
        lab = np.zeros(size, dtype=int)
        lab[rows] = 1
        blocks.append(block)
        labels.append(lab)
        groups.append(np.full(size, g, dtype=int))
        rhos.append(float(rho))
        sigmas.append(float(sigma))
        counts.append(n_out)
        covs.append(cov)

    col_ids = [f"inf{j + 1}" for j in range(cfg.p_inf)]
    col_ids += [f"noise{j + 1}" for j in range(cfg.p_noise)]
    return LabeledDataset(
        X=DataMatrix(np.vstack(blocks), col_ids=tuple(col_ids)),
        labels=np.concatenate(labels),
        group_ids=np.concatenate(groups),
        provenance=cfg,
        rho=tuple(rhos),
        mu=float(mu),
        outlier_sigma=tuple(sigmas),
        outlier_counts=tuple(counts),
        inf_covariances=tuple(covs),
    )
