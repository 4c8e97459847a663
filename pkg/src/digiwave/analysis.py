"""Checks on solution traces: conservation, periods and the two-point reduction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .wave import Trace


class DegenerateError(ValueError):
    """The two-point recurrence has |B| >= 2 and does not oscillate."""


class AperiodicError(ValueError):
    """No significant autocorrelation peak was found."""


@dataclass(frozen=True)
class PeriodEstimate:
    period: float
    residual: float
    method: str  # "closed_form" or "autocorrelation"


def closed_form_period(c11: float, c12: float) -> PeriodEstimate:
    """Period ``2*pi / arccos(B/2)`` of the two-point wave recurrence, ``B = 1 + c11 - c12``."""
    b = 1.0 + c11 - c12
    if abs(b) >= 2.0:
        raise DegenerateError(f"|B| = {abs(b)!r} >= 2, no oscillation")
    return PeriodEstimate(2.0 * math.pi / math.acos(b / 2.0), 0.0, "closed_form")


@dataclass(frozen=True)
class TwoPointClosedForm:
    """``f^n = mean + a cos(omega n) + b sin(omega n)`` for one point of a two-point graph."""

    mean: float
    a: float
    b: float
    omega: float

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def predict(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        return self.mean + self.a * np.cos(self.omega * n) + self.b * np.sin(self.omega * n)


def fit_two_point(trace: Trace, point: int) -> TwoPointClosedForm:
    """Closed form of the trace at ``point`` on a two-point graph.

    With the other point q eliminated through the conserved sum A, the
    series obeys ``f^{n+1} = c_pq A + B f^n - f^{n-1}`` with
    ``B = 1 + c_pp - c_pq``. Its fixed point is ``c_pq A / (2 - B)``.
    """
    c = trace.scheme.coefficients
    if trace.graph.n != 2:
        raise ValueError("fit_two_point needs a two-point graph")
    if trace.steps < 1:
        raise ValueError("need at least rows 0 and 1")
    p = int(point)
    q = 1 - p
    s0, s1 = math.fsum(trace.values[0]), math.fsum(trace.values[1])
    if abs(s0 - s1) > 1e-12 * max(1.0, abs(s0)):
        raise ValueError(f"initial sums differ ({s0!r} vs {s1!r})")
    b_coef = 1.0 + c[p, p] - c[p, q]
    if abs(b_coef) >= 2.0:
        raise DegenerateError(f"|B| = {abs(b_coef)!r} >= 2, no oscillation")
    omega = math.acos(b_coef / 2.0)
    mean = c[p, q] * s0 / (2.0 - b_coef)
    x0 = trace.values[0, p] - mean
    x1 = trace.values[1, p] - mean
    b = (x1 - x0 * math.cos(omega)) / math.sin(omega)
    return TwoPointClosedForm(mean, x0, b, omega)


def autocorrelation(series, max_lag: Optional[int] = None) -> np.ndarray:
    """Normalized (biased) autocorrelation of the mean-removed series, ``r[0] = 1``."""
    x = np.asarray(series, dtype=float)
    x = x - x.mean()
    n = len(x)
    if max_lag is None:
        max_lag = n
    spec = np.fft.rfft(x, n=2 * n)
    r = np.fft.irfft(spec * np.conj(spec), n=2 * n)[:max_lag]
    if r[0] <= 0:
        raise AperiodicError("series is constant")
    return r / r[0]


def _parabolic_peak(r: np.ndarray, i: int) -> tuple[float, float]:
    y0, y1, y2 = r[i - 1], r[i], r[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0:
        return float(i), float(y1)
    d = 0.5 * (y0 - y2) / denom
    return i + d, y1 - 0.25 * (y0 - y2) * d


def _local_maxima(r: np.ndarray, lo: int, hi: int) -> list[int]:
    return [i for i in range(max(lo, 1), min(hi, len(r) - 1)) if r[i - 1] < r[i] >= r[i + 1]]


def estimate_period(series, min_cycles: int = 3, ladder: int = 10) -> PeriodEstimate:
    """Dominant period of a series from its autocorrelation.

    Lags up to ``len(series) // min_cycles`` are searched. The dominant peak
    is the first local maximum reaching half the height of the tallest one;
    peaks near its multiples (up to ``ladder`` of them) are refined by a
    3-point parabola and the period is the least-squares slope of their
    positions. The residual is ``1 - r`` at the dominant peak.
    """
    x = np.asarray(series, dtype=float)
    if len(x) < 8:
        raise AperiodicError("series too short")
    scale = max(np.abs(x).max(), 1e-300)
    if np.ptp(x) <= 1e-12 * scale:
        raise AperiodicError("series is constant")
    max_lag = len(x) // max(min_cycles, 1)
    r = autocorrelation(x, max_lag + 1)
    peaks = [i for i in _local_maxima(r, 2, max_lag) if r[i] > 0]
    if not peaks:
        raise AperiodicError("no positive autocorrelation peak")
    tallest = max(r[i] for i in peaks)
    first = next(i for i in peaks if r[i] >= 0.5 * tallest)
    t1, height = _parabolic_peak(r, first)

    orders, positions = [1], [t1]
    period = t1
    for k in range(2, ladder + 1):
        centre = k * period
        half = max(1, int(period // 4))
        lo, hi = int(round(centre)) - half, int(round(centre)) + half + 1
        if hi >= max_lag:
            break
        cands = _local_maxima(r, lo, hi)
        if not cands:
            break
        best = max(cands, key=lambda i: r[i])
        pos, _ = _parabolic_peak(r, best)
        orders.append(k)
        positions.append(pos)
        ks = np.array(orders, dtype=float)
        period = float(np.dot(ks, positions) / np.dot(ks, ks))
    return PeriodEstimate(period, float(max(0.0, 1.0 - height)), "autocorrelation")


@dataclass(frozen=True)
class AggregateReduction:
    """Series at v and summed over the rest, with the two-point check when it applies."""

    f_v: np.ndarray
    f_h: np.ndarray
    applicable: bool
    residual: Optional[float] = None
    c_vh: Optional[float] = None
    c_hv: Optional[float] = None


def aggregate_reduction(trace: Trace, v: int, tol: float = 1e-12) -> AggregateReduction:
    """Collapse everything except ``v`` into one aggregate point.

    When ``v`` is adjacent to every other point with one common off-diagonal
    weight w in its row, the pair (f_v, f_H) is itself a two-point wave
    system with ``c_vH = w`` and ``c_Hv = 1 - c_vv``; the residual is the
    largest violation of that recurrence over the trace.
    """
    g = trace.graph
    if g.n < 2:
        raise ValueError("need at least two points")
    v = int(v)
    g.neighbors(v)
    others = [p for p in g.points if p != v]
    f_v = np.array(trace.values[:, v])
    f_h = np.array([math.fsum(row[others]) for row in trace.values])
    c = trace.scheme.coefficients
    row = c[v, others]
    applicable = (
        trace.problem == "ivp"
        and len(g.neighbors(v)) == len(others)
        and np.ptp(row) <= tol
    )
    if not applicable:
        return AggregateReduction(f_v, f_h, False)
    w = float(row.mean())
    c_vv = float(c[v, v])
    c_hv = 1.0 - c_vv
    if trace.steps < 2:
        return AggregateReduction(f_v, f_h, True, 0.0, w, c_hv)
    pred_v = c_vv * f_v[1:-1] + w * f_h[1:-1] + f_v[1:-1] - f_v[:-2]
    pred_h = c_hv * f_v[1:-1] + (1.0 - w) * f_h[1:-1] + f_h[1:-1] - f_h[:-2]
    residual = float(max(np.abs(pred_v - f_v[2:]).max(), np.abs(pred_h - f_h[2:]).max()))
    return AggregateReduction(f_v, f_h, True, residual, w, c_hv)


@dataclass(frozen=True)
class ConservationReport:
    """``A = S^0``; ``max_dev`` is measured against the drift law ``S^0 + n (S^1 - S^0)``.

    When ``S^0 == S^1`` the law is plain conservation and ``max_dev`` is
    ``max |S^n - A|``.
    """

    a: float
    conserved: bool
    max_dev: float
    slope: float

    def lines(self) -> list[str]:
        return [
            f"A={self.a!r}",
            f"conserved={str(self.conserved).lower()}",
            f"max_dev={self.max_dev!r}",
            f"drift_slope={self.slope!r}",
        ]


def conservation_report(trace: Trace) -> ConservationReport:
    s = trace.sums()
    a = float(s[0])
    if len(s) == 1:
        return ConservationReport(a, True, 0.0, 0.0)
    gap = float(s[1] - s[0])
    conserved = abs(gap) <= 1e-12 * max(1.0, abs(a))
    n = np.arange(len(s), dtype=float)
    law = a + n * (0.0 if conserved else gap)
    max_dev = float(np.abs(s - law).max())
    slope = float(np.polyfit(n, s, 1)[0]) if len(s) > 1 else 0.0
    return ConservationReport(a, conserved, max_dev, slope)


def write_autocorrelation_csv(fh, series, max_lag: Optional[int] = None) -> None:
    r = autocorrelation(series, max_lag)
    fh.write("lag,autocorrelation\n")
    for lag, value in enumerate(r):
        fh.write(f"{lag},{float(value)!r}\n")
