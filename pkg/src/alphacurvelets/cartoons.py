"""Rasterizable test signals: disc, half-space edges, smooth bumps, stars.

Pixels are corner-anchored cells of ``[-1, 1]^2`` (``x_p = -1 + 2p/n``)
and every signal is rendered as the cell average over an ``antialias**2``
sub-grid, so rasterization is deterministic and binary signals take
values in ``[0, 1]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bessel import DiscSpectrum

__all__ = [
    "CartoonSpec",
    "SmoothFactor",
    "smooth_factor",
    "render",
    "analytic_spectrum",
    "star_class_report",
    "cartoon_to_json",
    "cartoon_from_json",
    "write_pgm",
]

_KINDS = ("disc", "half_space", "smooth_bump", "star")


def _smoothstep_poly(order: int) -> np.polynomial.Polynomial:
    """Polynomial smoothstep of the given smoothness order on [0, 1]."""
    coeffs = np.zeros(2 * order + 2)
    for n in range(order + 1):
        coeffs[order + n + 1] = (
            (-1.0) ** n
            * math.comb(order + n, n)
            * math.comb(2 * order + 1, order - n)
        )
    return np.polynomial.Polynomial(coeffs)


class SmoothFactor:
    """Compactly supported tensor bump with controlled derivatives.

    The 1-D profile is flat on ``[-1/2, 1/2]`` and descends to zero at
    ``|t| = 1`` through a polynomial smoothstep of smoothness ``beta``.
    The product is scaled so that every partial derivative of combined
    order up to ``beta`` stays below ``nu`` in absolute value; the
    attained flat-top value is ``flat_value``.
    """

    def __init__(self, beta: int, nu: float):
        if beta < 1 or beta != int(beta):
            raise ValueError("beta must be a positive integer")
        if nu <= 0:
            raise ValueError("nu must be positive")
        self.beta = int(beta)
        self.nu = float(nu)
        self._ramp = _smoothstep_poly(self.beta)
        self._half = 0.5  # flat plateau half-width; ramp occupies [1/2, 1]
        width = 1.0 - self._half
        grid = np.linspace(0.0, 1.0, 4097)
        sups = [1.0]
        poly = self._ramp
        for _ in range(self.beta):
            poly = poly.deriv()
            sups.append(float(np.max(np.abs(poly(grid)))))
        self._deriv_sups = [sups[i] / width**i for i in range(self.beta + 1)]
        norm = sum(
            self._deriv_sups[m1] * self._deriv_sups[m2]
            for m1 in range(self.beta + 1)
            for m2 in range(self.beta + 1)
            if m1 + m2 <= self.beta
        )
        self.flat_value = self.nu / norm

    def profile(self, t: np.ndarray) -> np.ndarray:
        a = np.abs(np.asarray(t, dtype=float))
        x = np.clip((1.0 - a) / (1.0 - self._half), 0.0, 1.0)
        return self._ramp(x)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.flat_value * self.profile(x[..., 0]) * self.profile(x[..., 1])


def smooth_factor(beta: int, nu: float) -> SmoothFactor:
    """Bump supported in ``[-1, 1]^2`` with derivative sups below ``nu``."""
    return SmoothFactor(beta, nu)


@dataclass(frozen=True)
class CartoonSpec:
    """Declarative test-signal description.

    kind ``disc``: indicator of the radius-1/2 disc at the origin.
    kind ``half_space``: ``g(x) * indicator(x1*cos(phi) - x2*sin(phi) >= c)``
    with ``g`` the smooth factor of regularity ``beta`` and budget ``nu``
    (``beta = 0`` means ``g`` is constant 1).
    kind ``smooth_bump``: the smooth factor alone, no edge.
    kind ``star``: indicator of the star-shaped set with radius function
    ``rho(t) = rho0 + sum_k cos_coeffs[k] cos((k+1) t) + sin_coeffs[k] sin((k+1) t)``.
    """

    kind: str
    phi: float = 0.0
    c: float = 0.0
    beta: int = 0
    nu: float = 1.0
    rho0: float = 0.5
    cos_coeffs: tuple[float, ...] = ()
    sin_coeffs: tuple[float, ...] = ()
    antialias: int = 4

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown cartoon kind {self.kind!r}")
        if self.antialias < 1:
            raise ValueError("antialias factor must be >= 1")
        if self.kind == "star":
            rho = self.radius_function(np.linspace(0.0, 2.0 * math.pi, 4096))
            if np.min(rho) <= 0:
                raise ValueError("star radius function must be positive everywhere")
            if np.max(rho) > 1.0:
                raise ValueError("star must stay inside [-1, 1]^2")

    def radius_function(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        rho = np.full_like(t, self.rho0)
        for k, a in enumerate(self.cos_coeffs):
            rho += a * np.cos((k + 1) * t)
        for k, b in enumerate(self.sin_coeffs):
            rho += b * np.sin((k + 1) * t)
        return rho


def _evaluate(spec: CartoonSpec, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    if spec.kind == "disc":
        return (x1 * x1 + x2 * x2 <= 0.25).astype(float)
    if spec.kind == "half_space":
        side = (x1 * math.cos(spec.phi) - x2 * math.sin(spec.phi) >= spec.c).astype(float)
        if spec.beta >= 1:
            g = smooth_factor(spec.beta, spec.nu)
            pts = np.stack([x1, x2], axis=-1)
            return side * g(pts)
        return side
    if spec.kind == "smooth_bump":
        g = smooth_factor(max(spec.beta, 1), spec.nu)
        pts = np.stack([x1, x2], axis=-1)
        return g(pts)
    # star
    t = np.arctan2(x2, x1)
    return (np.hypot(x1, x2) <= spec.radius_function(t)).astype(float)


def render(spec: CartoonSpec, grid_n: int) -> np.ndarray:
    """Cell-averaged rasterization on the ``grid_n`` x ``grid_n`` grid."""
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    n, a = grid_n, spec.antialias
    h = 2.0 / n
    base = -1.0 + h * np.arange(n)
    out = np.zeros((n, n))
    # row blocks keep the supersampled workspace bounded
    block = max(1, (1 << 22) // (n * a * a))
    offsets = h * (np.arange(a) + 0.5) / a
    for r0 in range(0, n, block):
        r1 = min(n, r0 + block)
        rows = base[r0:r1]
        acc = np.zeros((r1 - r0, n))
        for o1 in offsets:
            for o2 in offsets:
                X1, X2 = np.broadcast_arrays((rows + o1)[:, None], (base + o2)[None, :])
                acc += _evaluate(spec, X1, X2)
        out[r0:r1] = acc / (a * a)
    return out


def analytic_spectrum(spec: CartoonSpec) -> DiscSpectrum | None:
    """Closed-form spectrum where one exists (the disc); else ``None``."""
    if spec.kind == "disc":
        return DiscSpectrum()
    return None


def star_class_report(spec: CartoonSpec, samples: int = 8192) -> dict:
    """Implied regularity-class membership of a star-shaped set.

    The declared ``(beta, nu)`` are metadata; this reports the smallest
    budget the radius function actually requires at integer ``beta`` --
    the oscillation of the beta-th derivative relative to the minimal
    radius, and the reciprocal-radius floor -- rather than enforcing it.
    """
    if spec.kind != "star":
        raise ValueError("class report is defined for star cartoons only")
    t = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    rho = spec.radius_function(t)
    rho0 = float(rho.min())
    beta = max(int(spec.beta), 0)
    # derivatives of the trigonometric polynomial are exact
    d = np.zeros_like(t)
    for k, a in enumerate(spec.cos_coeffs):
        w = k + 1.0
        d += a * w**beta * np.cos(w * t + beta * math.pi / 2.0)
    for k, b in enumerate(spec.sin_coeffs):
        w = k + 1.0
        d += b * w**beta * np.sin(w * t + beta * math.pi / 2.0)
    if beta == 0:
        d = rho
    oscillation = float(d.max() - d.min())
    implied = max(oscillation / rho0, 1.0 / rho0)
    return {
        "rho0": rho0,
        "beta": beta,
        "declared_nu": spec.nu,
        "implied_nu": implied,
        "member": spec.nu >= implied,
    }


def cartoon_to_json(spec: CartoonSpec) -> str:
    doc = {
        "kind": spec.kind,
        "phi": spec.phi,
        "c": spec.c,
        "beta": spec.beta,
        "nu": spec.nu,
        "rho0": spec.rho0,
        "cos_coeffs": list(spec.cos_coeffs),
        "sin_coeffs": list(spec.sin_coeffs),
        "antialias": spec.antialias,
    }
    return json.dumps(doc, indent=2)


def cartoon_from_json(text: str) -> CartoonSpec:
    doc = json.loads(text)
    doc["cos_coeffs"] = tuple(doc.get("cos_coeffs", ()))
    doc["sin_coeffs"] = tuple(doc.get("sin_coeffs", ()))
    return CartoonSpec(**doc)


def write_pgm(grid: np.ndarray, path: str) -> str:
    """Plain (ASCII) PGM dump, rescaled to 0..255, for quick inspection."""
    grid = np.asarray(grid, dtype=float)
    lo, hi = float(grid.min()), float(grid.max())
    scale = 255.0 / (hi - lo) if hi > lo else 0.0
    pix = np.round((grid - lo) * scale).astype(int)
    with open(path, "w") as fh:
        fh.write(f"P2\n{grid.shape[1]} {grid.shape[0]}\n255\n")
        for row in pix:
            fh.write(" ".join(str(v) for v in row) + "\n")
    return path
