"""Dense ground truth for traces of powers of D, and batch verification of the
closed-form and generated-functional evaluators against it."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

DEFAULT_RTOL = 1e-10
ABS_FLOOR = 1e-12


def trace_power(D: np.ndarray, m: int, method: str = "multiply") -> complex:
    """Tr(D^m) by repeated squaring (``multiply``) or from the spectrum of a
    self-adjoint D (``eigh``)."""
    D = np.asarray(D)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {D.shape}")
    if m < 1:
        raise ValueError(f"power must be positive, got {m}")
    if method == "eigh":
        w = np.linalg.eigvalsh(D)
        return complex(np.sum(w ** m))
    if method != "multiply":
        raise ValueError(f"unknown method {method!r}")
    # D^m = D^(m - k) D^k with the final product folded into the trace
    half = np.linalg.matrix_power(D, m // 2)
    other = half if m % 2 == 0 else half @ D
    return complex(np.einsum("ij,ji->", half, other))


def relative_error(value, reference, floor: float = ABS_FLOOR) -> float:
    return float(abs(value - reference) / max(abs(reference), floor))


@dataclass
class PowerRecord:
    t: int
    oracle: float
    oracle_eigh: float
    closed_form: float | None
    generated: float | None
    err_closed_form: float | None
    err_generated: float | None
    err_eigh: float


@dataclass
class SeedRecord:
    seed: int
    powers: list = field(default_factory=list)


@dataclass
class VerificationReport:
    signature: tuple
    N: int
    t_max: int
    seeds: list
    tolerance: float
    records: list = field(default_factory=list)
    passed: bool = True
    wall_time: float = 0.0
    max_error: float = 0.0
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, obj) -> "VerificationReport":
        recs = [SeedRecord(r["seed"], [PowerRecord(**p) for p in r["powers"]]) for r in obj["records"]]
        fields = {k: v for k, v in obj.items() if k != "records"}
        fields["signature"] = tuple(fields["signature"])
        return cls(records=recs, **fields)

    def table(self) -> str:
        lines = [
            f"signature ({self.signature[0]},{self.signature[1]})  N={self.N}  t_max={self.t_max}  tol={self.tolerance:.1e}",
            f"{'seed':>6} {'t':>3} {'oracle Tr D^2t':>22} {'closed form':>12} {'generated':>12} {'eigh':>12}",
        ]

        def fmt(x):
            return f"{x:12.2e}" if x is not None else f"{'-':>12}"

        for rec in self.records:
            for p in rec.powers:
                lines.append(f"{rec.seed:>6} {p.t:>3} {p.oracle:>22.12g} {fmt(p.err_closed_form)} {fmt(p.err_generated)} {fmt(p.err_eigh)}")
        lines.append(f"max relative error {self.max_error:.3e}  {'PASS' if self.passed else 'FAIL'}  ({self.wall_time:.2f} s)")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def _verify_seed(sig, N: int, t_max: int, seed: int, tolerance: float):
    from .action import closed_form_trace, generated_trace
    from .clifford import build_gamma
    from .dirac import assemble_dense, random_dirac_data

    rep = build_gamma(sig)
    data = random_dirac_data(sig, N, seed)
    D = assemble_dense(data, rep)
    rec = SeedRecord(seed)
    passed, worst = True, 0.0
    for t in range(1, t_max + 1):
        oracle = trace_power(D, 2 * t)
        eig = trace_power(D, 2 * t, method="eigh")
        closed = closed_form_trace(data, 2 * t)
        gen = generated_trace(data, 2 * t)
        errs = [relative_error(eig, oracle)]
        ec = eg = None
        if closed is not None:
            ec = relative_error(closed, oracle)
            errs.append(ec)
        if gen is not None:
            eg = relative_error(gen, oracle)
            errs.append(eg)
        passed = passed and max(errs) < tolerance
        worst = max(worst, *errs)
        rec.powers.append(PowerRecord(
            t,
            oracle.real,
            eig.real,
            None if closed is None else float(np.real(closed)),
            gen,
            ec,
            eg,
            errs[0],
        ))
    return rec, passed, worst


def verify(sig, N: int, t_max: int, seeds, tolerance: float = DEFAULT_RTOL, workers: int | None = 1) -> VerificationReport:
    """Compare closed forms, generated functionals and the dense oracle on
    random data for t = 1..t_max. Failures are reported, never raised.

    Seeds run in ``workers`` processes; records stay sorted by seed.
    """
    from .clifford import Signature
    from .dirac import check_dims
    from .ncpoly import generate_trace_functionals

    if isinstance(sig, str):
        sig = Signature.parse(sig)
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    seeds = sorted(seeds)
    check_dims(sig, N)
    start = time.perf_counter()
    report = VerificationReport((sig.p, sig.q), N, t_max, list(seeds), tolerance)
    for t in range(1, t_max + 1):
        try:
            generate_trace_functionals(sig, t)
        except ValueError as exc:
            report.notes.append(f"t={t}: no generated functional ({exc})")
    args = [(sig, N, t_max, seed, tolerance) for seed in seeds]
    if workers == 1 or len(seeds) < 2:
        results = [_verify_seed(*a) for a in args]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_verify_seed, *zip(*args)))
    for rec, passed, worst in results:
        report.records.append(rec)
        report.passed = report.passed and passed
        report.max_error = max(report.max_error, worst)
    report.wall_time = time.perf_counter() - start
    return report
