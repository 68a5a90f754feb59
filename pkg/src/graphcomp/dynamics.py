"""Circle map, rotation numbers and mode-locking plateaus."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi


class NumericalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class CircleMapParams:
    omega: float
    K: float
    theta0: float = 0.0
    n_transient: int = 1000
    n_iter: int = 100_000

    def __post_init__(self):
        if self.n_iter < 1 or self.n_transient < 0:
            raise ValueError("n_iter must be >= 1 and n_transient >= 0")
        if not 0.0 <= self.theta0 < 1.0:
            raise ValueError("theta0 must lie in [0, 1)")
        if self.K < 0:
            raise ValueError("K must be >= 0")


@dataclass(frozen=True)
class LockReport:
    omega: float
    K: float
    rho: float
    locked: bool
    p: int | None
    q: int | None
    epsilon: float

    def as_row(self) -> dict:
        return {"omega": self.omega, "K": self.K, "rho": self.rho, "locked": self.locked,
                "p": self.p, "q": self.q}


def circle_map_step(theta, omega, K):
    """One step of the lift; works on scalars and numpy arrays alike."""
    return theta + omega - (K / TWO_PI) * np.sin(TWO_PI * theta)


def rotation_numbers(omegas, K: float, theta0=0.0, n_transient: int = 1000,
                     n_iter: int = 100_000) -> np.ndarray:
    """Average displacement per step after a transient, for an array of Ω."""
    omegas = np.asarray(omegas, dtype=float)
    theta = np.broadcast_to(np.asarray(theta0, dtype=float), omegas.shape).copy()
    for _ in range(n_transient):
        theta = circle_map_step(theta, omegas, K)
    start = theta.copy()
    for _ in range(n_iter):
        theta = circle_map_step(theta, omegas, K)
    if not np.all(np.isfinite(theta)):
        raise NumericalError("circle map iteration produced a non-finite value")
    return (theta - start) / n_iter


def rotation_number(p: CircleMapParams) -> float:
    return float(rotation_numbers([p.omega], p.K, p.theta0, p.n_transient, p.n_iter)[0])


def nearest_fraction(x: float, tol: float, q_max: int = 32) -> tuple[int, int] | None:
    """Lowest-denominator p/q within ``tol`` of ``x`` by Stern-Brocot descent."""
    base = math.floor(x)
    frac = x - base
    lo, hi = (0, 1), (1, 1)
    best = None
    for cand in (lo, hi):
        if abs(cand[0] / cand[1] - frac) <= tol:
            best = cand
            break
    while best is None:
        mid = (lo[0] + hi[0], lo[1] + hi[1])
        if mid[1] > q_max:
            return None
        value = mid[0] / mid[1]
        if abs(value - frac) <= tol:
            best = mid
        elif frac < value:
            hi = mid
        else:
            lo = mid
    f = Fraction(best[0], best[1]) + base
    return f.numerator, f.denominator


def _lock_reports(omegas, K, eps, tol, q_max, n_transient, n_iter, theta0=0.0) -> list:
    omegas = np.asarray(omegas, dtype=float)
    grid = np.concatenate([omegas, omegas - eps, omegas + eps])
    rhos = rotation_numbers(grid, K, theta0, n_transient, n_iter)
    n = len(omegas)
    rho, below, above = rhos[:n], rhos[n:2 * n], rhos[2 * n:]
    out = []
    for k in range(n):
        locked = bool(abs(above[k] - below[k]) < tol)
        pq = nearest_fraction(float(rho[k]), tol, q_max) if locked else None
        if pq is None:
            locked = False
        out.append(LockReport(float(omegas[k]), float(K), float(rho[k]), locked,
                              pq[0] if pq else None, pq[1] if pq else None, eps))
    return out


def detect_lock(omega: float, K: float, eps: float = 1e-3, tol: float = 1e-4,
                q_max: int = 32, n_transient: int = 1000, n_iter: int = 100_000) -> LockReport:
    """Locked when nudging Ω by ±eps leaves ρ unchanged to within ``tol``."""
    if eps <= 0 or tol <= 0:
        raise ValueError("eps and tol must be positive")
    return _lock_reports([omega], K, eps, tol, q_max, n_transient, n_iter)[0]


def staircase_sweep(K: float, omega_min: float = 0.0, omega_max: float = 1.0,
                    n_points: int = 401, eps: float = 1e-3, tol: float = 1e-4,
                    q_max: int = 32, n_transient: int = 1000,
                    n_iter: int = 100_000) -> list[LockReport]:
    if not omega_min < omega_max:
        raise ValueError("omega_min must be below omega_max")
    if n_points < 2:
        raise ValueError("a sweep needs at least two points")
    omegas = np.linspace(omega_min, omega_max, n_points)
    return _lock_reports(omegas, K, eps, tol, q_max, n_transient, n_iter)


def plateaus(rows) -> list[tuple[int, int, float, float]]:
    """Runs of locked rows sharing p/q, as (p, q, Ω_start, Ω_end)."""
    out = []
    for r in rows:
        if not r.locked:
            continue
        if out and (out[-1][0], out[-1][1]) == (r.p, r.q):
            out[-1] = (r.p, r.q, out[-1][2], r.omega)
        else:
            out.append((r.p, r.q, r.omega, r.omega))
    return out


CSV_HEADER = ("omega", "K", "rho", "locked", "p", "q")


def sweep_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([f"{r.omega:.12g}", f"{r.K:.12g}", f"{r.rho:.12g}", int(r.locked),
                    "" if r.p is None else r.p, "" if r.q is None else r.q])
    return buf.getvalue()
