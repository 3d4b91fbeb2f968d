"""Uniformized spectral plane: z <-> (k, lambda), regions, phase, contour.

Everything lives on the z-plane through the rational maps
k = (z + sigma k0^2/z)/2 and lambda = (z - sigma k0^2/z)/2, so no square
roots (and hence no sheet or branch-cut bookkeeping) appear anywhere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import BadContour, ZeroArgument
from .matrices import CMat2, dagger


class Region(enum.Enum):
    D_PLUS = "D+"
    D_MINUS = "D-"
    SIGMA = "Sigma"
    BRANCH_POINT = "branch"


_BG_TOL = 1e-12


@dataclass(frozen=True)
class Background:
    """Problem constants and validated boundary matrices.

    sigma = +1 is defocusing, sigma = -1 focusing; k0 > 0 is the background
    amplitude; alpha and beta are the second- and third-order flow
    coefficients.  Qplus/Qminus must be symmetric with Q Q^dag = k0^2 I.
    """

    sigma: int
    k0: float
    alpha: float
    beta: float
    Qplus: CMat2
    Qminus: CMat2

    def __post_init__(self):
        if self.sigma not in (-1, 1):
            raise ValueError("sigma must be +1 or -1")
        if not self.k0 > 0:
            raise ValueError("k0 must be a positive real constant")
        object.__setattr__(self, "Qplus", np.asarray(self.Qplus, dtype=complex))
        object.__setattr__(self, "Qminus", np.asarray(self.Qminus, dtype=complex))
        for name in ("Qplus", "Qminus"):
            Q = getattr(self, name)
            if Q.shape != (2, 2):
                raise ValueError(f"{name} must be 2x2")
            scale = max(1.0, self.k0**2)
            if np.max(np.abs(Q @ dagger(Q) - self.k0**2 * np.eye(2))) > _BG_TOL * scale:
                raise ValueError(f"{name} violates Q Q^dag = k0^2 I")
            if np.max(np.abs(dagger(Q) @ Q - self.k0**2 * np.eye(2))) > _BG_TOL * scale:
                raise ValueError(f"{name} violates Q^dag Q = k0^2 I")
            if np.max(np.abs(Q - Q.T)) > _BG_TOL * scale:
                raise ValueError(f"{name} must be symmetric")
            # Entrywise boundary-value constraints (equivalent to the above
            # for a symmetric matrix; kept as an explicit cross-check).
            q1, q0, qm1 = Q[0, 0], Q[0, 1], Q[1, 1]
            if abs(abs(q1) ** 2 - abs(qm1) ** 2) > _BG_TOL * scale:
                raise ValueError(f"{name}: |q1| != |q-1|")
            if abs(q1 * np.conj(q0) + q0 * np.conj(qm1)) > _BG_TOL * scale:
                raise ValueError(f"{name}: off-diagonal balance violated")
            if abs(abs(q1) ** 2 + abs(q0) ** 2 - self.k0**2) > _BG_TOL * scale:
                raise ValueError(f"{name}: row norm differs from k0^2")

    @property
    def delta_reg(self) -> float:
        """Classification tolerance around Sigma and the branch points."""
        return 1e-9 * max(1.0, self.k0**2)

    def branch_points(self) -> tuple[complex, complex]:
        if self.sigma == -1:
            return (1j * self.k0, -1j * self.k0)
        return (self.k0 + 0j, -self.k0 + 0j)


@dataclass(frozen=True)
class SpectralPoint:
    z: complex
    k: complex
    lam: complex
    gamma: complex
    region: Region


def _check_nonzero(z: complex) -> complex:
    z = complex(z)
    if z == 0 or abs(z) < 1e-150:
        raise ZeroArgument("spectral maps are singular at z = 0")
    return z


def classify_region(z: complex, bg: Background) -> Region:
    z = _check_nonzero(z)
    tol = bg.delta_reg
    if min(abs(z - b) for b in bg.branch_points()) <= tol:
        return Region.BRANCH_POINT
    s = (abs(z) ** 2 + bg.sigma * bg.k0**2) * z.imag
    if s > tol:
        return Region.D_PLUS
    if s < -tol:
        return Region.D_MINUS
    return Region.SIGMA


def uniformize(z: complex, bg: Background) -> SpectralPoint:
    """Attach k(z), lambda(z), gamma(z) and the region label to z."""
    z = _check_nonzero(z)
    w = bg.sigma * bg.k0**2 / z
    k = 0.5 * (z + w)
    lam = z - k  # keeps k + lam = z to the last bit
    gamma = 1.0 - bg.sigma * bg.k0**2 / z**2
    return SpectralPoint(z=z, k=k, lam=lam, gamma=gamma, region=classify_region(z, bg))


def theta(x: float, t: float, z: complex, bg: Background) -> complex:
    """Phase of the plane-wave factors, theta = lambda(z) (-x - w(z) t).

    w(z) = beta (4 k^2 - 2 k0^2) + 2 alpha k is the dispersion of the
    combined second/third-order flow.
    """
    sp = uniformize(z, bg)
    w = bg.beta * (4.0 * sp.k**2 - 2.0 * bg.k0**2) + 2.0 * bg.alpha * sp.k
    return sp.lam * (-x - w * t)


@dataclass(frozen=True)
class ContourNode:
    z: complex
    weight: complex
    part: str = field(default="real")  # "real" or "circle"


def contour_samples(bg: Background, n_real: int, n_circle: int, L: float) -> list[ContourNode]:
    """Quadrature nodes and signed complex weights along the spectrum contour.

    The real segment [-L, L] gets composite Gauss-Legendre panels split at
    0 and +-k0 (so nodes never land on z = 0, the branch points, or the
    circle crossings); in the focusing case the inner segments carry the
    reversed orientation and the circle |z| = k0 is a closed trapezoid loop
    whose signed weights cancel.  Nodes within delta_reg of a branch point
    are displaced along the contour.
    """
    if n_real < 2 or (bg.sigma == -1 and n_circle < 2):
        raise BadContour("need at least 2 nodes per contour part")
    if not L > bg.k0:
        raise BadContour("truncation L must exceed k0")
    k0 = bg.k0
    nodes: list[ContourNode] = []

    if bg.sigma == -1:
        segments = [(-L, -k0, +1.0), (-k0, 0.0, -1.0), (0.0, k0, -1.0), (k0, L, +1.0)]
    else:
        segments = [(-L, -k0, +1.0), (-k0, 0.0, +1.0), (0.0, k0, +1.0), (k0, L, +1.0)]
    total_len = 2.0 * L
    for a, b, orient in segments:
        n_seg = max(2, int(round(n_real * (b - a) / total_len)))
        xg, wg = leggauss(n_seg)
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        for xi, wi in zip(xg, wg):
            nodes.append(ContourNode(z=complex(mid + half * xi), weight=complex(orient * half * wi), part="real"))

    if bg.sigma == -1:
        bps = bg.branch_points()
        dphi = 2.0 * math.pi / n_circle
        for m in range(n_circle):
            phi = m * dphi
            z = k0 * complex(math.cos(phi), math.sin(phi))
            if min(abs(z - b) for b in bps) <= bg.delta_reg:
                # displace along the circle, away from the real axis, so the
                # node set stays closed under conjugation
                phi += 2.0 * bg.delta_reg / k0 * (1.0 if math.sin(phi) > 0 else -1.0)
                z = k0 * complex(math.cos(phi), math.sin(phi))
            w = 1j * z * dphi  # dz = i k0 e^{i phi} dphi
            nodes.append(ContourNode(z=z, weight=w, part="circle"))
    return nodes
