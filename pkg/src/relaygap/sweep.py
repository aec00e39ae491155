"""Parameter sweeps over rho_z, constant-gap certification, and CSV/SVG output."""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Iterable, Optional, Sequence

import numpy as np

from .af_isi import af_rate
from .channel import ChannelParams, DomainError, params_from_db
from .cutset import exact_cutset, relaxed_cutset
from .optimize import golden_section_min
from .rates import HALF_LOG2_3, cf_rate, df_rate, gap_report, nnc_rates, q_star

__all__ = [
    "CURVES",
    "CSV_HEADER",
    "CERTIFY_SLACK",
    "SweepSpec",
    "SweepRow",
    "GapCertificate",
    "TouchPoint",
    "FIG2",
    "FIG3",
    "rho_grid",
    "compute_row",
    "run_sweep",
    "certify_channels",
    "certify_gap",
    "find_df_touch_point",
    "emit_csv",
    "write_rows",
    "read_csv",
    "emit_svg",
]

logger = logging.getLogger(__name__)

CURVES = ("cutset_relaxed", "cutset_exact", "nnc", "cf", "df", "af")
CSV_HEADER = ("rho_z",) + CURVES
#: Rounding allowance on top of ½log₂3 when certifying gaps.
CERTIFY_SLACK = 1e-5

# columns whose formulas blow up or are undefined at |rho_z| = 1
_OPEN_RHO_ONLY = {"cutset_relaxed", "cutset_exact", "nnc", "cf"}


@dataclass(frozen=True)
class SweepSpec:
    hsd_db: float
    hsr_db: float
    hrd_db: float
    rho_lo: float = -1.0
    rho_hi: float = 1.0
    steps: int = 101
    curves: tuple = CURVES
    af_grid: int = 4096
    af_flat: bool = False
    seed: int = 0
    epsilon: float = 1e-6
    unit_rho: bool = False

    def __post_init__(self):
        unknown = set(self.curves) - set(CURVES)
        if unknown:
            raise DomainError(f"unknown curves: {sorted(unknown)}")
        if self.steps < 1:
            raise DomainError("steps must be >= 1")
        if self.steps == 1 and self.rho_lo != self.rho_hi:
            raise DomainError("a single-step sweep needs rho_lo == rho_hi")
        if not -1.0 <= self.rho_lo <= self.rho_hi <= 1.0:
            raise DomainError(f"need -1 <= rho_lo <= rho_hi <= 1, got {self.rho_lo}, {self.rho_hi}")
        if not 0.0 <= self.epsilon < 1.0:
            raise DomainError("epsilon must lie in [0, 1)")

    def channel(self, rho_z: float) -> ChannelParams:
        return params_from_db(self.hsd_db, self.hsr_db, self.hrd_db, rho_z)


#: Reference gain sets for the two comparison sweeps (squared gains in dB).
FIG2 = dict(hsd_db=20.0, hsr_db=40.0, hrd_db=60.0)
FIG3 = dict(hsd_db=5.0, hsr_db=10.0, hrd_db=10.0)


@dataclass(frozen=True)
class SweepRow:
    rho_z: float
    cutset_relaxed: Optional[float] = None
    cutset_exact: Optional[float] = None
    nnc: Optional[float] = None
    cf: Optional[float] = None
    df: Optional[float] = None
    af: Optional[float] = None

    def get(self, curve: str) -> Optional[float]:
        return getattr(self, curve)


@dataclass(frozen=True)
class GapCertificate:
    n_draws: int
    max_gap_nnc: float
    max_gap_cf: float
    max_gap_df: float
    worst_nnc: Optional[ChannelParams]
    threshold: float
    passed: bool


@dataclass(frozen=True)
class TouchPoint:
    rho_z: float
    min_gap: float
    touches: bool


def rho_grid(spec: SweepSpec) -> np.ndarray:
    lo, hi = spec.rho_lo, spec.rho_hi
    if not spec.unit_rho:
        edge = 1.0 - spec.epsilon
        lo, hi = max(lo, -edge), min(hi, edge)
    if spec.steps == 1:
        return np.array([lo])
    return np.linspace(lo, hi, spec.steps)


def _curve_value(curve: str, p: ChannelParams, spec: SweepSpec) -> float:
    if curve == "cutset_relaxed":
        return min(relaxed_cutset(p))
    if curve == "cutset_exact":
        return exact_cutset(p).exact_bound
    if curve == "nnc":
        return nnc_rates(p, q_star(p)).rate
    if curve == "cf":
        return cf_rate(p)
    if curve == "df":
        return df_rate(p)
    return af_rate(p, spec.af_grid, flat=spec.af_flat)


def compute_row(spec: SweepSpec, rho_z: float) -> SweepRow:
    """One sweep row; a curve that cannot be evaluated is left empty with a logged diagnostic."""
    p = spec.channel(rho_z)
    values = {}
    for curve in spec.curves:
        if curve in _OPEN_RHO_ONLY and abs(rho_z) > 1.0 - spec.epsilon:
            logger.warning("rho_z=%.17g: %s skipped, |rho_z| > 1 - %g", rho_z, curve, spec.epsilon)
            continue
        try:
            values[curve] = _curve_value(curve, p, spec)
        except DomainError as exc:
            logger.warning("rho_z=%.17g: %s not evaluated: %s", rho_z, curve, exc)
    return SweepRow(rho_z=float(rho_z), **values)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Rows in increasing rho_z. NNC uses the correlation-aware quantizer q*.

    With ``workers > 1`` rows are evaluated in a process pool; the output is
    identical to the serial result.
    """
    rhos = [float(r) for r in rho_grid(spec)]
    if workers <= 1 or len(rhos) < 2:
        return [compute_row(spec, r) for r in rhos]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(partial(compute_row, spec), rhos))


def certify_channels(channels: Iterable[ChannelParams]) -> GapCertificate:
    """Worst-case gaps to the relaxed cut-set bound over the given channels."""
    threshold = HALF_LOG2_3 + CERTIFY_SLACK
    n = 0
    max_nnc = max_cf = max_df = -math.inf
    worst = None
    for p in channels:
        rep = gap_report(p)
        n += 1
        if rep.gap_nnc > max_nnc:
            max_nnc, worst = rep.gap_nnc, p
        if rep.gap_cf is not None:
            max_cf = max(max_cf, rep.gap_cf)
        max_df = max(max_df, rep.gap_df)
    passed = n > 0 and max_nnc < threshold and max_cf < threshold
    return GapCertificate(n, max_nnc, max_cf, max_df, worst, threshold, passed)


def certify_gap(n_draws: int, seed: int, db_range: Sequence[float] = (-60.0, 60.0),
                rho_max: float = 0.999) -> GapCertificate:
    """Certify the ½log₂3 gap for NNC at q* and for CF over random channels.

    Squared gains are uniform in ``db_range`` (dB) and rho_z uniform in
    ``[-rho_max, rho_max]``.
    """
    if n_draws < 1:
        raise DomainError("n_draws must be >= 1")
    lo, hi = db_range
    rng = np.random.default_rng(seed)
    dbs = rng.uniform(lo, hi, size=(n_draws, 3))
    rhos = rng.uniform(-rho_max, rho_max, size=n_draws)
    return certify_channels(
        params_from_db(float(d[0]), float(d[1]), float(d[2]), float(r)) for d, r in zip(dbs, rhos)
    )


def find_df_touch_point(spec: SweepSpec, tol: float = 1e-6,
                        threshold: float = 1e-3) -> TouchPoint:
    """Locate the rho_z where the DF rate comes closest to the exact cut-set bound.

    A grid prescan over the sweep's rho_z values picks a bracket that is then
    refined by golden-section search.
    """
    edge = 1.0 - max(spec.epsilon, 1e-12)
    base = spec.channel(0.0)
    df = df_rate(base)

    def gap(rho):
        return exact_cutset(base.with_rho(rho)).exact_bound - df

    grid = np.clip(rho_grid(spec), -edge, edge)
    gaps = [gap(float(r)) for r in grid]
    k = int(np.argmin(gaps))
    a = float(grid[max(k - 1, 0)])
    b = float(grid[min(k + 1, len(grid) - 1)])
    rho, g = golden_section_min(gap, a, b, tol)
    if gaps[k] < g:
        rho, g = float(grid[k]), gaps[k]
    return TouchPoint(rho_z=rho, min_gap=g, touches=g < threshold)


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else format(x, ".17g")


def emit_csv(rows: Sequence[SweepRow], path) -> None:
    """Write rows with header ``rho_z,cutset_relaxed,cutset_exact,nnc,cf,df,af`` (LF endings)."""
    try:
        with open(path, "w", newline="") as fh:
            write_rows(rows, fh)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror}") from exc


def write_rows(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(row.rho_z)] + [_fmt(row.get(c)) for c in CURVES])


def read_csv(path) -> list[SweepRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            SweepRow(**{k: (float(v) if v != "" else None) for k, v in rec.items()})
            for rec in reader
        ]


def emit_svg(rows: Sequence[SweepRow], path, title: str = "") -> None:
    """Single-panel line chart of every non-empty curve against rho_z."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.fonttype": "none", "svg.hashsalt": "relaygap"}):
        _draw_svg(plt, rows, path, title)


def _draw_svg(plt, rows, path, title):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    rho = np.array([r.rho_z for r in rows])
    for curve in CURVES:
        vals = np.array([np.nan if r.get(curve) is None else r.get(curve) for r in rows])
        if np.all(np.isnan(vals)):
            continue
        ax.plot(rho, vals, label=curve)
    ax.set_xlabel("rho_z")
    ax.set_ylabel("rate (bits/channel use)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc.strerror}") from exc
    finally:
        plt.close(fig)
