"""Metropolis sampling of the measure e^{-S(D)} dD over Dirac operators of a
fixed signature, with batch-means error estimates.

Only differences of S enter the acceptance ratio, so the normalization of dD
never matters.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .action import ActionSpec, closed_form_trace, evaluate_action, observable_F, oracle_trace
from .clifford import Signature
from .dirac import DiracData, check_dims, project, random_dirac_data

log = logging.getLogger(__name__)

EVAL_PATHS = {"closed_form": "auto", "generated": "generated", "oracle": "oracle"}


@dataclass
class ChainConfig:
    signature: Signature
    N: int
    action: ActionSpec
    step_size: float
    n_steps: int
    burn_in: int = 0
    thinning: int = 1
    seed: int | None = None
    traceless_L: bool = False
    eval_path: str = "closed_form"
    init_scale: float | None = None  # None: 1/sqrt(N); 0 starts from D = 0
    check_every: int = 1000  # recorded samples between from-scratch S checks; 0 disables

    def __post_init__(self):
        if isinstance(self.signature, str):
            self.signature = Signature.parse(self.signature)
        elif not isinstance(self.signature, Signature):
            self.signature = Signature(*self.signature)
        if isinstance(self.action, str):
            self.action = ActionSpec.parse(self.action)
        elif isinstance(self.action, dict):
            self.action = ActionSpec(self.action)
        self.validate()

    def validate(self):
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        if self.step_size < 0:
            raise ValueError(f"step_size must be non-negative, got {self.step_size}")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be positive, got {self.n_steps}")
        if not 0 <= self.burn_in < self.n_steps:
            raise ValueError(f"burn_in must lie in [0, n_steps), got {self.burn_in}")
        if self.thinning < 1:
            raise ValueError(f"thinning must be positive, got {self.thinning}")
        if self.eval_path not in EVAL_PATHS:
            raise ValueError(f"eval_path must be one of {sorted(EVAL_PATHS)}, got {self.eval_path!r}")
        self.action.check_confining()

    def to_json(self) -> dict:
        return {
            "signature": [self.signature.p, self.signature.q],
            "N": self.N,
            "action": {str(m): c for m, c in self.action.coefficients.items()},
            "step_size": self.step_size,
            "n_steps": self.n_steps,
            "burn_in": self.burn_in,
            "thinning": self.thinning,
            "seed": self.seed,
            "traceless_L": self.traceless_L,
            "eval_path": self.eval_path,
            "init_scale": self.init_scale,
            "check_every": self.check_every,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ChainConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown chain config keys: {sorted(extra)}")
        missing = {"signature", "N", "action", "step_size", "n_steps"} - set(obj)
        if missing:
            raise ValueError(f"chain config is missing {sorted(missing)}")
        return cls(**obj)

    @classmethod
    def load(cls, path) -> "ChainConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass
class ChainStats:
    config: ChainConfig
    seed: int
    steps: list = field(default_factory=list)
    samples: dict = field(default_factory=dict)
    acceptance: list = field(default_factory=list)  # acceptance rate so far at each recorded step
    accepted: int = 0
    energy_drift: float = 0.0
    wall_time: float = 0.0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.config.n_steps

    @property
    def n_samples(self) -> int:
        return len(self.steps)

    def series(self, name: str) -> np.ndarray:
        if name not in self.samples:
            raise KeyError(f"unknown observable {name!r}; recorded: {sorted(self.samples)}")
        return np.asarray(self.samples[name], dtype=float)


def batch_means(x, n_batches: int | None = None) -> tuple[float, float]:
    """Mean and batch-means standard error with ceil(sqrt(n)) batches by default."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n == 0:
        raise ValueError("no samples")
    mean = float(x.mean())
    if n < 2:
        return mean, float("nan")
    b = n_batches or math.ceil(math.sqrt(n))
    size = n // b
    if size < 1:
        raise ValueError(f"{n} samples cannot fill {b} batches")
    means = x[: b * size].reshape(b, size).mean(axis=1)
    return mean, float(np.sqrt(means.var(ddof=1) / b))


def estimate(stats: ChainStats, name: str) -> tuple[float, float]:
    return batch_means(stats.series(name))


def propose(data: DiracData, step_size: float, rng: np.random.Generator, traceless: bool | None = None) -> DiracData:
    """Symmetric Gaussian move: every coefficient matrix gets an independent
    complex Gaussian kick projected onto its hermiticity class."""
    if traceless is None:
        traceless = data.traceless_L
    N = data.N
    out = {}
    for label, K in data.coefficients.items():
        g = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        out[label] = K + step_size * project(g, data.letter_type(label), traceless)
    return data._replace(out)


def _observables(data: DiracData, S: float) -> dict:
    try:
        F = observable_F(data)
    except ValueError:
        F = float("nan")
    obs = {"S": S, "F": F, "TrD2": closed_form_trace(data, 2)}
    for label, K in data.coefficients.items():
        tr = np.trace(K)
        name = "".join(map(str, label))
        # anti-Hermitian traces are imaginary; record the real coordinate
        obs[f"TrK{name}"] = tr.real if data.letter_type(label) == "H" else tr.imag
        obs[f"TrK{name}^2"] = np.einsum("ij,ji->", K, K).real
    return obs


def run(config: ChainConfig) -> ChainStats:
    """Metropolis chain; bit-reproducible from ``config`` and its seed."""
    config.validate()
    sig, N = config.signature, config.N
    if config.eval_path == "oracle" or config.check_every:
        check_dims(sig, N)
    seed = config.seed if config.seed is not None else int(np.random.SeedSequence().entropy % (2 ** 63))
    rng = np.random.default_rng(seed)
    path = EVAL_PATHS[config.eval_path]
    start = time.perf_counter()

    scale = config.init_scale
    if scale == 0:
        data = DiracData(sig, N, {}, config.traceless_L)
    else:
        data = random_dirac_data(sig, N, rng, scale=scale, traceless_L=config.traceless_L)

    def action(d: DiracData) -> float:
        val = evaluate_action(config.action, d, path).value
        if not np.isfinite(val):
            raise FloatingPointError(f"non-finite action {val} at step {step}")
        return val

    step = 0
    S = action(data)
    stats = ChainStats(config, seed)
    recorded = 0
    for step in range(1, config.n_steps + 1):
        cand = propose(data, config.step_size, rng, config.traceless_L)
        S_new = action(cand)
        dS = S_new - S
        if dS <= 0 or rng.random() < math.exp(-dS):
            data, S = cand, S_new
            stats.accepted += 1
        if step > config.burn_in and (step - config.burn_in) % config.thinning == 0:
            obs = _observables(data, S)
            for k, v in obs.items():
                stats.samples.setdefault(k, []).append(v)
            stats.steps.append(step)
            stats.acceptance.append(stats.accepted / step)
            if config.check_every and recorded % config.check_every == 0:
                fresh = sum(c * oracle_trace(data, m) for m, c in config.action.coefficients.items()
                            if m % 2 == 0 or sig.d % 2)
                drift = abs(fresh - S) / max(abs(fresh), 1e-12)
                stats.energy_drift = max(stats.energy_drift, drift)
            recorded += 1
    stats.wall_time = time.perf_counter() - start
    if stats.energy_drift > 1e-8:
        log.warning("tracked action drifted from a fresh evaluation by %.3e", stats.energy_drift)
    return stats


def run_chains(configs, workers: int | None = None) -> list[ChainStats]:
    """Independent chains in separate processes, returned in input order."""
    configs = list(configs)
    if workers == 1 or len(configs) < 2:
        return [run(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, configs))


def write_csv(stats: ChainStats, path):
    with open(path, "w", newline="") as fh:
        fh.write(f"# seed={stats.seed}\n")
        w = csv.writer(fh)
        w.writerow(["step", "S", "F", "TrD2", "acceptance_so_far"])
        cols = [stats.samples.get(k, []) for k in ("S", "F", "TrD2")]
        for i, step in enumerate(stats.steps):
            w.writerow([step, *(repr(float(c[i])) for c in cols), repr(stats.acceptance[i])])


def read_csv(path) -> tuple[int, dict]:
    """Seed and columns of a chain CSV written by :func:`write_csv`."""
    with open(path) as fh:
        head = fh.readline().strip()
        if not head.startswith("# seed="):
            raise ValueError(f"{path}: missing seed header")
        seed = int(head.split("=", 1)[1])
        rows = list(csv.DictReader(fh))
    cols = {k: np.array([float(r[k]) for r in rows]) for k in ("step", "S", "F", "TrD2", "acceptance_so_far")}
    return seed, cols


def direct_gaussian_d1(N: int, n_samples: int, seed=None) -> np.ndarray:
    """Exact samples of Hermitian H with density proportional to exp(-N Tr H^2 - (Tr H)^2).

    Off-diagonal real and imaginary parts are independent with variance
    1/(4N); the diagonal is Gaussian with covariance (2(N I + 1 1^T))^{-1}.
    """
    rng = np.random.default_rng(seed)
    cov = np.linalg.inv(2 * (N * np.eye(N) + np.ones((N, N))))
    diag = rng.multivariate_normal(np.zeros(N), cov, size=n_samples)
    sd = math.sqrt(1 / (4 * N))
    re = rng.normal(0, sd, (n_samples, N, N))
    im = rng.normal(0, sd, (n_samples, N, N))
    upper = np.triu(re + 1j * im, 1)
    H = upper + upper.conj().transpose(0, 2, 1)
    H[:, np.arange(N), np.arange(N)] = diag
    return H
