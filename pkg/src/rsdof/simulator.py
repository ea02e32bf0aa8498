"""Monte Carlo check of DoF claims at finite SNR.

Channels follow the partial-CSIT model ``h_i = h_hat_i + h_err_i`` with
error variance ``min(1, P**-alpha_i)``.  Private symbols are zero-forced on
the estimates, the common symbol uses a random unit precoder, and ergodic
rates are regressed against ``log2 P`` to estimate DoF slopes.

Randomness is drawn per trial from a stream keyed by
``(seed, stream, snr_index, trial)``, so results do not depend on the
order in which trials are evaluated.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import DimensionError, SimulationError
from .region import CsitProfile
from .scheme import RsScheme, common_dof, total_dof
from .synthesizer import TimeSharingPlan

__all__ = [
    "DEFAULT_SNR_GRID",
    "COND_LIMIT",
    "SimConfig",
    "ChannelRealization",
    "SlopeFit",
    "SweepResult",
    "LeakageResult",
    "error_variance",
    "sample_channel",
    "zf_precoders",
    "power_allocation",
    "received_gains",
    "instantaneous_rates",
    "run_sweep",
    "run_plan_sweep",
    "zf_leakage",
    "fit_slope",
]

DEFAULT_SNR_GRID = (1e6, 1e8, 1e10, 1e12, 1e14)
COND_LIMIT = 1e8
MAX_RESAMPLE = 20


class _RankDeficient(Exception):
    pass


@dataclass(frozen=True)
class ChannelRealization:
    h: np.ndarray  # (K, M), row i is h_i
    h_hat: np.ndarray
    h_err: np.ndarray
    sigma2: np.ndarray  # (K,) error variance per user


def _alphas(profile) -> np.ndarray:
    if isinstance(profile, CsitProfile):
        return np.array([float(a) for a in profile.alphas])
    return np.asarray(profile, dtype=float)


def error_variance(alphas, P: float) -> np.ndarray:
    return np.minimum(1.0, float(P) ** (-_alphas(alphas)))


def _cn(rng: np.random.Generator, var, shape) -> np.ndarray:
    scale = np.sqrt(np.asarray(var, dtype=float) / 2)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_channel(profile, M: int, P: float, rng: np.random.Generator) -> ChannelRealization:
    if P <= 1:
        raise ValueError("SNR P must exceed 1")
    sigma2 = error_variance(profile, P)
    K = sigma2.size
    h_hat = _cn(rng, (1 - sigma2)[:, None], (K, M))
    h_err = _cn(rng, sigma2[:, None], (K, M))
    return ChannelRealization(h_hat + h_err, h_hat, h_err, sigma2)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def zf_precoders(h_hat: np.ndarray, active: Sequence[bool], rng: np.random.Generator,
                 cond_limit: float = COND_LIMIT) -> tuple[np.ndarray, np.ndarray]:
    """Unit-norm ZF private precoders (columns of an (M, K) array) and a common precoder.

    The private precoder of user i is the normalized projection of its own
    estimate onto the orthogonal complement of the other active users'
    estimates.  A user whose estimate is identically zero (no CSIT) gets a
    random direction in that complement.  Inactive users get a zero column.
    """
    K, M = h_hat.shape
    idx = [i for i in range(K) if active[i]]
    if len(idx) > M:
        raise SimulationError(f"{len(idx)} active users exceed M={M} antennas")
    norms = np.linalg.norm(h_hat, axis=1)
    informative = [i for i in idx if norms[i] > 0]
    if len(informative) > 1:
        s = np.linalg.svd(h_hat[informative], compute_uv=False)
        if s[-1] == 0 or s[0] / s[-1] > cond_limit:
            raise _RankDeficient
    V = np.zeros((M, K), dtype=complex)
    for i in idx:
        others = [l for l in informative if l != i]
        target = h_hat[i] if norms[i] > 0 else _cn(rng, 1.0, M)
        if others:
            Q, _ = np.linalg.qr(h_hat[others].T)
            target = target - Q @ (Q.conj().T @ target)
        V[:, i] = _unit(target)
    v_common = _unit(_cn(rng, 1.0, M))
    return V, v_common


def power_allocation(scheme: RsScheme, P: float) -> tuple[float, np.ndarray]:
    """``P_i = P**a_i / (K + 1)`` for active users; the common symbol takes the rest."""
    K = scheme.K
    private = np.array(
        [P ** float(a) / (K + 1) if on else 0.0 for a, on in zip(scheme.levels, scheme.active)]
    )
    return P - private.sum(), private


def received_gains(realization: ChannelRealization, V: np.ndarray, v_common: np.ndarray):
    """``G[j, i] = |h_j^H v_i|^2`` and ``g[j] = |h_j^H v_c|^2``."""
    Hc = realization.h.conj()
    return np.abs(Hc @ V) ** 2, np.abs(Hc @ v_common) ** 2


def instantaneous_rates(realization: ChannelRealization, scheme: RsScheme, P: float,
                        precoders: tuple[np.ndarray, np.ndarray]):
    """Per-user (common, private) rates in bits for one channel use.

    The common symbol is decoded treating every private stream as noise; the
    private symbol is decoded after the common one is cancelled.
    """
    V, v_common = precoders
    p_common, p_private = power_allocation(scheme, P)
    G, g = received_gains(realization, V, v_common)
    rx = G * p_private[None, :]
    all_private = rx.sum(axis=1)
    own = np.diag(rx)
    cross = (rx * (1 - np.eye(scheme.K))).sum(axis=1)
    common = np.log2(1 + p_common * g / (1 + all_private))
    private = np.where(np.array(scheme.active), np.log2(1 + own / (1 + cross)), 0.0)
    return common, private


@dataclass(frozen=True)
class SimConfig:
    profile: CsitProfile
    M: int
    scheme: RsScheme
    snr_grid: tuple = DEFAULT_SNR_GRID
    trials: int = 1000
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        K = self.profile.K
        if self.scheme.K != K:
            raise DimensionError(f"scheme has K={self.scheme.K}, profile has K={K}")
        if self.M < K:
            raise ValueError(f"need M >= K antennas, got M={self.M}, K={K}")
        grid = tuple(float(p) for p in self.snr_grid)
        object.__setattr__(self, "snr_grid", grid)
        if len(grid) < 3:
            raise ValueError("SNR grid needs at least 3 points")
        if any(p <= 1 for p in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("SNR grid must be strictly increasing with every P > 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class SlopeFit:
    slope: np.ndarray
    intercept: np.ndarray
    halfwidth: np.ndarray  # 95% confidence half-width
    residuals: np.ndarray  # (n_points, n_series)


def fit_slope(x, Y, confidence: float = 0.95) -> SlopeFit:
    """Least-squares line per column of ``Y`` against ``x``."""
    x = np.asarray(x, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    n = x.size
    tq = stats.t.ppf(0.5 + confidence / 2, n - 2)
    slopes, intercepts, half, resid = [], [], [], []
    for col in Y.T:
        fit = stats.linregress(x, col)
        slopes.append(fit.slope)
        intercepts.append(fit.intercept)
        half.append(tq * fit.stderr)
        resid.append(col - (fit.intercept + fit.slope * x))
    return SlopeFit(np.array(slopes), np.array(intercepts), np.array(half), np.array(resid).T)


@dataclass
class SweepResult:
    snr: np.ndarray
    common_rate: np.ndarray  # (n,) min over users of the ergodic common rate
    private_rate: np.ndarray  # (n, K)
    common_share: np.ndarray  # (n, K)
    total_rate: np.ndarray  # (n, K)
    predicted: tuple = ()
    fit: SlopeFit = field(init=False)
    common_fit: SlopeFit = field(init=False)

    def __post_init__(self):
        x = np.log2(self.snr)
        self.fit = fit_slope(x, self.total_rate)
        self.common_fit = fit_slope(x, self.common_rate)

    @property
    def slopes(self) -> np.ndarray:
        return self.fit.slope

    @property
    def K(self) -> int:
        return self.total_rate.shape[1]

    def to_csv(self, labels: Sequence | None = None) -> str:
        labels = list(labels) if labels is not None else list(range(1, self.K + 1))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["P", "user", "private_rate", "common_share", "total_rate"])
        for n, P in enumerate(self.snr):
            for j in range(self.K):
                w.writerow([repr(float(P)), labels[j], repr(float(self.private_rate[n, j])),
                            repr(float(self.common_share[n, j])), repr(float(self.total_rate[n, j]))])
        return buf.getvalue()

    def summary(self, labels: Sequence | None = None) -> dict:
        labels = list(labels) if labels is not None else list(range(1, self.K + 1))
        return {
            "snr": [float(p) for p in self.snr],
            "users": labels,
            "slopes": [float(s) for s in self.fit.slope],
            "halfwidths": [float(h) for h in self.fit.halfwidth],
            "rms_residuals": [float(r) for r in np.sqrt((self.fit.residuals ** 2).mean(axis=0))],
            "predicted": [float(p) for p in self.predicted],
            "sum_slope": float(self.fit.slope.sum()),
            "common_slope": float(self.common_fit.slope[0]),
        }

    def summary_json(self, labels: Sequence | None = None) -> str:
        return json.dumps(self.summary(labels), indent=2)


def _trial_rng(seed: int, stream: int, snr_index: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream, snr_index, trial])


def _draw(profile, M, P, active, rng):
    for _ in range(MAX_RESAMPLE):
        real = sample_channel(profile, M, P, rng)
        try:
            return real, zf_precoders(real.h_hat, active, rng)
        except _RankDeficient:
            continue
    raise SimulationError(f"estimate matrix stayed ill-conditioned after {MAX_RESAMPLE} draws")


def run_sweep(config: SimConfig) -> SweepResult:
    scheme, profile = config.scheme, config.profile
    K = profile.K
    grid = np.array(config.snr_grid)
    dc = common_dof(scheme)
    if scheme.is_silence or dc == 0:
        weights = np.zeros(K)
    else:
        weights = np.array([float(s / dc) for s in scheme.common_split])
    common_rate = np.empty(grid.size)
    private_rate = np.empty((grid.size, K))
    for n, P in enumerate(grid):
        common = np.empty((config.trials, K))
        private = np.empty((config.trials, K))
        for t in range(config.trials):
            rng = _trial_rng(config.seed, config.stream, n, t)
            real, precoders = _draw(profile, config.M, P, scheme.active, rng)
            common[t], private[t] = instantaneous_rates(real, scheme, P, precoders)
        if not (np.all(np.isfinite(common)) and np.all(np.isfinite(private))):
            raise SimulationError(f"non-finite rate samples at P={P:g}")
        common_rate[n] = common.mean(axis=0).min()
        private_rate[n] = private.mean(axis=0)
    share = common_rate[:, None] * weights[None, :]
    predicted = tuple(float(x) for x in total_dof(scheme, profile).total)
    return SweepResult(grid, common_rate, private_rate, share, private_rate + share, predicted)


def run_plan_sweep(profile: CsitProfile, M: int, plan: TimeSharingPlan,
                   snr_grid=DEFAULT_SNR_GRID, trials: int = 1000, seed: int = 0) -> SweepResult:
    """Time-share the sweeps of each plan component with the plan weights."""
    parts = []
    for m, (w, scheme) in enumerate(plan.components):
        cfg = SimConfig(profile, M, scheme, tuple(snr_grid), trials, seed, stream=m)
        parts.append((float(w), run_sweep(cfg)))
    grid = parts[0][1].snr
    combine = lambda attr: sum(w * getattr(r, attr) for w, r in parts)
    predicted = tuple(float(x) for x in plan.achieved)
    return SweepResult(grid, combine("common_rate"), combine("private_rate"),
                       combine("common_share"), combine("total_rate"), predicted)


@dataclass
class LeakageResult:
    snr: np.ndarray
    mean_leakage: np.ndarray  # (n, K, K): [n, i, j] = E|h_i^H v_j|^2, NaN on the diagonal
    slopes: np.ndarray  # (K, K) slope of log mean leakage against log P


def zf_leakage(profile: CsitProfile, M: int, snr_grid=DEFAULT_SNR_GRID, trials: int = 1000,
               seed: int = 0) -> LeakageResult:
    """Residual power of each ZF precoder at the users it is meant to null."""
    K = profile.K
    grid = np.array([float(p) for p in snr_grid])
    active = (True,) * K
    off = ~np.eye(K, dtype=bool)
    means = np.full((grid.size, K, K), np.nan)
    for n, P in enumerate(grid):
        acc = np.zeros((K, K))
        for t in range(trials):
            rng = _trial_rng(seed, 0, n, t)
            real, (V, v_common) = _draw(profile, M, P, active, rng)
            G, _ = received_gains(real, V, v_common)
            acc += G
        means[n][off] = (acc / trials)[off]
    slopes = np.full((K, K), np.nan)
    x = np.log10(grid)
    for i in range(K):
        for j in range(K):
            if i != j:
                slopes[i, j] = fit_slope(x, np.log10(means[:, i, j])).slope[0]
    return LeakageResult(grid, means, slopes)
