"""N-term thresholding, error curves, rate fits, and decay diagnostics.

The thresholding error is accounted on the coefficient side: for a
Parseval frame the energy of the dropped coefficients upper-bounds the
reconstruction error and decays at the same rate, and it is computable
from one sort.  ``error_curve`` therefore reports dropped-tail sums by
default and can verify selected points against full synthesis.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import bessel
from .tiling import wedge_geometry
from .transform import CoefficientSet, DigitalCurveletFrame, analyze, curvelet_atom, grid_norms, synthesize

__all__ = [
    "ErrorCurve",
    "RateReport",
    "threshold",
    "error_curve",
    "fit_rate",
    "weak_lp_norm",
    "apriori_decay_check",
    "bound1_tail_estimator",
    "generator_decay_check",
    "geometric_schedule",
    "level_window",
    "atom_l1_decay",
    "fit_scale_slope",
]


@dataclass
class ErrorCurve:
    """Squared-error-vs-N curve with run metadata.

    ``err2[i]`` is the squared quadrature-norm error at ``n_terms[i]``;
    strictly increasing ``n_terms``, nonincreasing ``err2``.
    """

    n_terms: list[int]
    err2: list[float]
    metadata: dict = field(default_factory=dict)
    err2_synthesis: dict[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = np.asarray(self.n_terms)
        if len(n) and np.any(np.diff(n) <= 0):
            raise ValueError("n_terms must be strictly increasing")
        e = np.asarray(self.err2)
        if len(e) and np.any(np.diff(e) > 1e-12 * max(e.max(), 1.0)):
            raise ValueError("err2 must be nonincreasing in N")

    def to_csv(self, path: str) -> str:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["N", "err2"])
            for n, e in zip(self.n_terms, self.err2):
                w.writerow([n, repr(e)])
        return path

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_terms": self.n_terms,
                "err2": self.err2,
                "metadata": self.metadata,
                "err2_synthesis": {str(k): v for k, v in self.err2_synthesis.items()},
            },
            indent=2,
        )


@dataclass
class RateReport:
    """Fitted log-log slope of an error curve over a window."""

    slope: float
    intercept: float
    window: tuple[int, int]
    residual: float
    n_points: int
    target: float | None = None
    tolerance: float | None = None
    verdict: str | None = None

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2)

    def to_csv(self, path: str) -> str:
        cols = ["slope", "intercept", "window_lo", "window_hi", "residual", "n_points", "target", "tolerance", "verdict"]
        row = [self.slope, self.intercept, self.window[0], self.window[1], self.residual, self.n_points, self.target, self.tolerance, self.verdict]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            w.writerow(row)
        return path


def threshold(coeffs: CoefficientSet, n_keep: int) -> CoefficientSet:
    """Keep exactly the ``n_keep`` largest-magnitude coefficients.

    Ties are broken by the stable flat order (scale-major, then angle,
    then lattice position), so runs are bit-for-bit reproducible.
    """
    total = coeffs.total_count
    if not 1 <= n_keep <= total:
        raise ValueError(f"n_keep must be in [1, {total}], got {n_keep}")
    mags = coeffs.flat_magnitudes()
    order = np.argsort(-mags, kind="stable")
    keep = np.zeros(total, dtype=bool)
    keep[order[:n_keep]] = True
    return coeffs.copy_with_flat_mask(keep)


def geometric_schedule(start: int, stop: int, ratio: float = math.sqrt(2.0)) -> list[int]:
    """Strictly increasing integer schedule, geometric with given ratio."""
    if start < 1 or stop < start:
        raise ValueError("need 1 <= start <= stop")
    out = []
    x = float(start)
    while x <= stop:
        v = int(round(x))
        if not out or v > out[-1]:
            out.append(v)
        x *= ratio
    if out[-1] != stop:
        out.append(stop)
    return out


def error_curve(
    image: np.ndarray,
    frame: DigitalCurveletFrame,
    n_list: list[int],
    coeffs: CoefficientSet | None = None,
    verify_at: tuple[int, ...] = (),
) -> ErrorCurve:
    """Thresholding error curve from dropped-coefficient tail sums.

    ``verify_at`` lists N values at which the true synthesis error
    ``||f - synth(threshold(analyze(f), N))||^2`` is also computed and
    stored in ``err2_synthesis`` (it never exceeds the tail sum).
    """
    n_list = sorted(set(int(n) for n in n_list))
    if coeffs is None:
        coeffs = analyze(image, frame)
    total = coeffs.total_count
    if n_list and n_list[-1] > total:
        raise ValueError(f"schedule exceeds coefficient count {total}")
    mags2 = np.sort(coeffs.flat_magnitudes() ** 2)[::-1]
    cum = np.cumsum(mags2)
    energy = float(cum[-1])
    err2 = [max(energy - float(cum[n - 1]), 0.0) for n in n_list]
    curve = ErrorCurve(
        n_terms=n_list,
        err2=err2,
        metadata={
            "grid_n": frame.params.grid_n,
            "s": frame.params.s,
            "alpha": frame.params.alpha,
            "total_coefficients": total,
            "signal_energy": energy,
        },
    )
    for n in verify_at:
        rec = synthesize(threshold(coeffs, int(n)), frame)
        _, err = grid_norms(np.asarray(image, float) - rec, frame.params.grid_n)
        tail = err2[n_list.index(int(n))] if int(n) in n_list else None
        if tail is not None and err > tail * (1.0 + 1e-9) + 1e-18 * energy:
            # synthesis of masked coefficients is a contraction; exceeding
            # the dropped tail would mean the frame lost tightness
            raise AssertionError(
                f"synthesis error {err:.6e} exceeds dropped tail {tail:.6e} at N={n}"
            )
        curve.err2_synthesis[int(n)] = err
    return curve


def fit_rate(
    curve: ErrorCurve,
    window: tuple[int, int] | None = None,
    target: float | None = None,
    tolerance: float | None = None,
) -> RateReport:
    """Least-squares line through ``(log N, log err2)`` over the window.

    The default window drops ``N < 32`` and all N within a factor 4 of
    the total coefficient count (grid-resolution saturation guard).
    """
    n = np.asarray(curve.n_terms, dtype=float)
    e = np.asarray(curve.err2, dtype=float)
    if window is None:
        total = curve.metadata.get("total_coefficients", int(n[-1]) * 4)
        window = (32, max(32, total // 4))
    lo, hi = window
    sel = (n >= lo) & (n <= hi)
    if np.count_nonzero(sel) < 5:
        raise ValueError(f"fit window {window} selects fewer than 5 points")
    if np.any(e[sel] <= 0):
        raise ValueError("zero squared errors inside the fit window")
    x = np.log(n[sel])
    y = np.log(e[sel])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    verdict = None
    if target is not None and tolerance is not None:
        verdict = "pass" if abs(slope - target) <= tolerance else "fail"
    return RateReport(
        slope=float(slope),
        intercept=float(intercept),
        window=(int(lo), int(hi)),
        residual=resid,
        n_points=int(np.count_nonzero(sel)),
        target=target,
        tolerance=tolerance,
        verdict=verdict,
    )


def level_window(
    curve: ErrorCurve, rel_hi: float = 5e-3, rel_lo: float = 1e-5
) -> tuple[int, int]:
    """Fit window anchored at relative squared-error levels.

    Returns the N range over which ``err2 / signal_energy`` descends from
    ``rel_hi`` to ``rel_lo``.  A finite frame's error curve has a shallow
    head (coarse scales plus the sampling-redundancy plateau) and an
    artificially steep saturation tail (the last coefficients are zeros);
    anchoring the window between fixed error levels selects the power-law
    regime between the two in a grid- and redundancy-independent way.
    """
    if rel_lo >= rel_hi:
        raise ValueError("need rel_lo < rel_hi")
    energy = curve.metadata.get("signal_energy")
    if not energy:
        raise ValueError("curve lacks signal_energy metadata")
    n = np.asarray(curve.n_terms)
    rel = np.asarray(curve.err2) / energy
    above = n[rel >= rel_hi]
    below = n[rel >= rel_lo]
    lo = int(above[-1]) if len(above) else int(n[0])
    hi = int(below[-1]) if len(below) else int(n[-1])
    if hi <= lo:
        raise ValueError(f"degenerate level window [{lo}, {hi}]")
    return lo, hi


def weak_lp_norm(values, p: float) -> float:
    """``sup_n n**(1/p) |c*_n|`` over the nonincreasing rearrangement."""
    if p <= 0:
        raise ValueError("p must be positive")
    a = np.abs(np.asarray(values, dtype=float)).ravel()
    if a.size == 0:
        return 0.0
    a = np.sort(a)[::-1]
    n = np.arange(1, a.size + 1, dtype=float)
    return float(np.max(n ** (1.0 / p) * a))


def apriori_decay_check(
    coeffs: CoefficientSet,
    f_sup: float,
    fit_scales: tuple[int, int] | None = None,
) -> dict:
    """Per-scale max-coefficient table and its log2 regression slope.

    Reports, per corona scale, the largest coefficient magnitude and the
    implied constant ``max / (f_sup * 2**(-j*s*(1+alpha)/2))``; the slope
    of ``log2 max`` against ``j`` over the mid scales is compared
    downstream with ``-s*(1+alpha)/2``.
    """
    scales = sorted({j for (j, _, _, _) in coeffs.wedge_table})
    maxima = {j: 0.0 for j in scales}
    for (j, _ell, _p1, _p2), block in zip(coeffs.wedge_table, coeffs.blocks):
        if block.size:
            maxima[j] = max(maxima[j], float(np.abs(block).max()))
    closure_scale = max(scales)
    rows = [(j, maxima[j]) for j in scales if j != closure_scale]
    if all(m == 0.0 for _, m in rows) or f_sup == 0.0:
        return {"rows": rows, "slope": None, "verdict": "vacuous", "constants": []}
    decay = coeffs.s * (1.0 + coeffs.alpha) / 2.0
    constants = [
        (j, m / (f_sup * 2.0 ** (-j * decay))) for j, m in rows if m > 0
    ]
    if fit_scales is None:
        fit_scales = (2, closure_scale - 1)
    lo, hi = fit_scales
    pts = [(j, m) for j, m in rows if lo <= j <= hi and m > 0]
    if len(pts) < 3:
        raise ValueError(f"fewer than 3 usable scales in {fit_scales}")
    x = np.array([j for j, _ in pts], dtype=float)
    y = np.log2([m for _, m in pts])
    slope = float(np.polyfit(x, y, 1)[0])
    return {
        "rows": rows,
        "slope": slope,
        "fit_scales": (lo, hi),
        "constants": constants,
        "target": -decay,
    }


def bound1_tail_estimator(
    frame: DigitalCurveletFrame,
    n_list: list[int] | None = None,
    resolution: float = 1.0,
) -> ErrorCurve:
    """Certified lower bounds on the disc's N-term error from tile cores.

    For each N the N tiles with the largest analytic core energies are
    granted to the approximant (most favorable selection); the summed
    core energies of every unselected tile lower-bound the squared error
    of ANY N-term approximant built from the frame.  Tiles beyond the
    layout's top scale are not counted, so for N at or above the tile
    count the bound degenerates to zero and the point is flagged.
    """
    params = frame.params
    energies = []
    counts = []
    for j in range(params.j_max + 1):
        spec = wedge_geometry(params, j, 0)
        e = bessel.wedge_energy_quadrature(spec, region="core", resolution=resolution)
        energies.append(e)
        counts.append(params.tile_count(j))
    order = np.argsort(-np.asarray(energies), kind="stable")
    per_tile = np.concatenate(
        [np.full(counts[i], energies[i]) for i in order]
    )
    total = float(per_tile.sum())
    cum = np.cumsum(per_tile)
    n_tiles = len(per_tile)
    if n_list is None:
        n_list = list(range(1, n_tiles + 1))
    n_list = sorted(set(int(n) for n in n_list))
    err2 = []
    degenerate = []
    for n in n_list:
        if n >= n_tiles:
            err2.append(0.0)
            degenerate.append(n)
        else:
            err2.append(max(total - float(cum[n - 1]), 0.0))
    return ErrorCurve(
        n_terms=n_list,
        err2=err2,
        metadata={
            "kind": "tile-core lower bound",
            "s": params.s,
            "alpha": params.alpha,
            "j_max": params.j_max,
            "tile_count": n_tiles,
            "degenerate_n": degenerate,
            "scale_energies": energies,
            "scale_tile_counts": counts,
        },
    )


def generator_decay_check(
    frame: DigitalCurveletFrame, probe_step: float = 1e-3, probe_extent: float = 0.6
) -> list[dict]:
    """Probe the rescaled scale generators on a dense frequency grid.

    The spectrum of the scale-``j`` generator is the horizontal window
    evaluated at anisotropically rescaled frequencies,
    ``W_{j,0}(2**(j*s) xi_1, 2**(j*s*alpha) xi_2)``.  Checks per scale:
    support inside ``[-1/2, 1/2]^2`` (exact zeros outside), sup equal to
    the window peak, and exact vanishing on the inner rectangle
    ``|xi_1| <= 2**(-2s-5)``, ``|xi_2| <= 2**(j*s*(1-alpha)) * 2**(-2s-5)``
    for ``j >= 1``.
    """
    p = frame.params
    ax = np.arange(-probe_extent, probe_extent + probe_step / 2, probe_step)
    X1, X2 = np.meshgrid(ax, ax, indexing="ij")
    out = []
    inner = 2.0 ** (-2.0 * p.s - 5.0)
    for j in range(p.j_max + 1):
        U1 = 2.0**(j * p.s) * X1
        U2 = 2.0**(j * p.s * p.alpha) * X2
        pts = np.stack([U1.ravel(), U2.ravel()], axis=-1)
        vals = frame.profile.window(j, 0, pts).reshape(X1.shape)
        outside = (np.abs(X1) > 0.5) | (np.abs(X2) > 0.5)
        support_ok = bool(np.all(vals[outside] == 0.0))
        sup = float(vals.max())
        if j >= 1:
            win = (np.abs(X1) <= inner) & (np.abs(X2) <= inner * 2.0 ** (j * p.s * (1.0 - p.alpha)))
            inner_ok = bool(np.all(vals[win] == 0.0))
        else:
            inner_ok = True
        out.append(
            {"j": j, "sup": sup, "support_ok": support_ok, "inner_zero_ok": inner_ok}
        )
    return out


def fit_scale_slope(
    scales: list[int],
    values: list[float],
    onset: int | None = None,
    resid_tol: float = 0.45,
    min_points: int = 4,
) -> dict:
    """Fit ``log2 value`` against scale, auto-detecting the onset scale.

    When ``onset`` is not given, the smallest scale is chosen from which
    the least-squares fit over the remaining scales has max absolute
    residual below ``resid_tol`` (in log2 units); floor-induced stair
    patterns in the tile counts stay within that band while the
    pre-asymptotic head does not.
    """
    scales = list(scales)
    y = np.log2(np.asarray(values, dtype=float))
    if onset is not None:
        starts = [onset]
    else:
        starts = [j for j in scales if sum(s >= j for s in scales) >= min_points]
    last = None
    for j0 in starts:
        sel = [i for i, j in enumerate(scales) if j >= j0]
        x = np.asarray([scales[i] for i in sel], dtype=float)
        yy = y[sel]
        slope, intercept = np.polyfit(x, yy, 1)
        resid = float(np.max(np.abs(yy - (slope * x + intercept))))
        last = {
            "onset": int(j0),
            "slope": float(slope),
            "max_residual": resid,
            "n_points": len(sel),
        }
        if onset is not None or resid <= resid_tol:
            return last
    return last


def atom_l1_decay(frame: DigitalCurveletFrame) -> dict:
    """Quadrature L1 norms of one horizontal atom per corona scale.

    Returns per-scale L1 and L2 norms of the atom at the center of the
    wrap box, plus the log2 slope of the L1 norms over the mid scales.
    Scales whose tile support is empty on the lattice are skipped.
    """
    p = frame.params
    rows = []
    for j in range(p.j_max + 1):
        i = frame.wedge_index(j, 0)
        c = frame._caches[i]
        if len(c.k1) == 0:
            continue
        atom = curvelet_atom(frame, (j, 0, (c.P1 // 2, c.P2 // 2)))
        l1, l2sq = grid_norms(atom, p.grid_n)
        rows.append({"j": j, "l1": l1, "l2": math.sqrt(l2sq)})
    usable = [r for r in rows if 2 <= r["j"] <= p.j_max - 1]
    slope = None
    if len(usable) >= 3:
        x = np.array([r["j"] for r in usable], dtype=float)
        y = np.log2([r["l1"] for r in usable])
        slope = float(np.polyfit(x, y, 1)[0])
    return {"rows": rows, "l1_slope": slope}
