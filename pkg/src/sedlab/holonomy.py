"""Discrete parallel transport of orthonormal pairs along the base
great circle, torus angles, unwrapping and slope fits.

The base vector traverses v1(t) = (cos t, sin t, 0, ..., 0) for
t in [0, 2pi] in num_steps equal steps.  Each step projects the fiber
vector orthogonal to the new base vector and renormalizes:

    w = v2 - <v2, v1_new> v1_new;   v2_new = w / |w|

which preserves orthonormality exactly (up to roundoff) and
approximates the metric-induced parallel transport to first order in
the step size.

Angles: theta = arg(v1[0] + i v1[1]), phi = arg(v2[0] + i v2[1]), both
reduced to [0, 2pi).  phi is unwrapped (consecutive jumps brought into
(-pi, pi]) before an ordinary least-squares fit of phi against the
likewise-unwrapped theta.

The default initial fiber is drawn from the documented splitmix64
generator (see sedlab.rng): 8 standard normals, projected orthogonal to
v1(0) and normalized, redrawn while the base-plane projection is below
0.1.

Trace CSV columns: step,t,theta,phi,phi_unwrapped,orth_err,norm_err.
Fit summary JSON: {"steps": N, "seed": S, "slope": k, "intercept": b,
"rms": r}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .invariants import Frame
from .rng import SplitMix64

TWO_PI = 2.0 * math.pi
FIBER_DEGENERATE_TOL = 1e-8
FIBER_PROJECTION_TOL = 1e-10
MIN_PLANE_PROJECTION = 0.1


class DegenerateFiberError(RuntimeError):
    """Fiber collapsed onto the new base vector."""


class FiberAngleUndefinedError(RuntimeError):
    """Fiber has (numerically) no component in the base plane."""


@dataclass(frozen=True)
class TransportConfig:
    num_steps: int = 400
    seed: int = 42
    initial_fiber: Optional[np.ndarray] = None  # None -> seeded random

    def __post_init__(self):
        if self.num_steps < 8:
            raise ValueError("num_steps must be at least 8")


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    rms: float


@dataclass(frozen=True)
class HolonomyTrace:
    config: TransportConfig
    t: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    phi_unwrapped: np.ndarray
    orth_err: np.ndarray
    norm_err: np.ndarray
    final_frame: Frame
    fit: FitResult


def transport_step(f: Frame, v1_new: np.ndarray) -> Frame:
    """One projection-plus-normalization update of the fiber."""
    v1_new = np.asarray(v1_new, dtype=float)
    if abs(float(np.linalg.norm(v1_new)) - 1.0) > 1e-12:
        raise ValueError("new base vector must be unit length")
    w = f.v2 - (f.v2 @ v1_new) * v1_new
    n = float(np.linalg.norm(w))
    if n <= FIBER_DEGENERATE_TOL:
        raise DegenerateFiberError(
            "fiber degenerate: step too large or v2 parallel to new v1")
    return Frame(v1_new, w / n)


def _mod_two_pi(angle: float) -> float:
    # x % 2pi can round up to exactly 2pi for tiny negative x
    out = angle % TWO_PI
    return 0.0 if out >= TWO_PI else out


def torus_project(f: Frame) -> tuple:
    """(theta, phi) in [0, 2pi) from the base-plane components."""
    theta = _mod_two_pi(math.atan2(float(f.v1[1]), float(f.v1[0])))
    px, py = float(f.v2[0]), float(f.v2[1])
    if math.hypot(px, py) <= FIBER_PROJECTION_TOL:
        raise FiberAngleUndefinedError(
            "fiber angle undefined: no base-plane projection")
    phi = _mod_two_pi(math.atan2(py, px))
    return theta, phi


def unwrap(phis) -> list:
    """Remove 2pi jumps: consecutive differences end up in (-pi, pi],
    each output stays congruent to its input modulo 2pi."""
    phis = [float(p) for p in phis]
    if not phis:
        return []
    out = [phis[0]]
    wraps = 0
    for prev, cur in zip(phis, phis[1:]):
        d = cur - prev
        # ceil((d - pi)/2pi) maps a raw difference of exactly -pi to +pi
        wraps += math.ceil((d - math.pi) / TWO_PI)
        out.append(cur - TWO_PI * wraps)
    return out


def fit_slope(theta_unwrapped, phi_unwrapped) -> FitResult:
    """Ordinary least squares phi = k*theta + b with residual RMS."""
    x = np.asarray(theta_unwrapped, dtype=float)
    y = np.asarray(phi_unwrapped, dtype=float)
    if len(x) < 8:
        raise ValueError("need at least 8 points to fit")
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    k = float(dx @ (y - ym) / (dx @ dx))
    b = float(ym - k * xm)
    res = y - (k * x + b)
    return FitResult(k, b, float(np.sqrt(np.mean(res * res))))


def initial_fiber(seed: int) -> np.ndarray:
    """Seeded fiber: 8 normals, orthogonalized against v1(0) = e0,
    normalized; redrawn while the base-plane projection is below 0.1."""
    rng = SplitMix64(seed)
    while True:
        v = np.array([rng.normal() for _ in range(8)])
        v[0] = 0.0  # orthogonal to (1, 0, ..., 0)
        n = float(np.linalg.norm(v))
        if n < 1e-12:
            continue
        v /= n
        if abs(float(v[1])) >= MIN_PLANE_PROJECTION:
            return v


def base_vector(t: float) -> np.ndarray:
    v = np.zeros(8)
    v[0] = math.cos(t)
    v[1] = math.sin(t)
    return v


def run_great_circle(config: TransportConfig) -> HolonomyTrace:
    """Transport the fiber once around the base great circle."""
    v2 = (initial_fiber(config.seed) if config.initial_fiber is None
          else np.asarray(config.initial_fiber, dtype=float))
    frame = Frame(base_vector(0.0), v2)
    n = config.num_steps
    t = np.array([TWO_PI * k / n for k in range(n + 1)])
    thetas, phis, orth, nrm = [], [], [], []
    for k in range(n + 1):
        if k > 0:
            frame = transport_step(frame, base_vector(float(t[k])))
        th, ph = torus_project(frame)
        thetas.append(th)
        phis.append(ph)
        norm_err, orth_err = frame.errors()
        orth.append(orth_err)
        nrm.append(norm_err)
    theta_u = unwrap(thetas)
    phi_u = unwrap(phis)
    fit = fit_slope(theta_u, phi_u)
    return HolonomyTrace(config, t, np.array(thetas), np.array(phis),
                         np.array(phi_u), np.array(orth), np.array(nrm),
                         frame, fit)


@dataclass(frozen=True)
class HolonomyReport:
    """Closed-loop comparison of the final frame against the initial one.

    rotation_block is the 2x2 matrix of projections of the transported
    pair onto the initial pair's plane; complement_deviation measures
    how far the final vectors leak out of that plane.  Only the two
    frame vectors are transported, so the complement statement is a
    projection-based report, not a full holonomy matrix.
    """
    rotation_block: np.ndarray
    rotation_angle: float
    complement_deviation: float
    return_error_v1: float
    return_error_v2: float


def holonomy_matrix(config: TransportConfig) -> HolonomyReport:
    v2_0 = (initial_fiber(config.seed) if config.initial_fiber is None
            else np.asarray(config.initial_fiber, dtype=float))
    v1_0 = base_vector(0.0)
    trace = run_great_circle(config)
    f = trace.final_frame
    block = np.array([[f.v1 @ v1_0, f.v2 @ v1_0],
                      [f.v1 @ v2_0, f.v2 @ v2_0]])
    angle = math.atan2(block[1, 0], block[0, 0])
    basis = np.stack([v1_0, v2_0])
    dev_sq = 0.0
    for vec in (f.v1, f.v2):
        proj = basis.T @ (basis @ vec)
        dev_sq += float(np.sum((vec - proj) ** 2))
    return HolonomyReport(block, angle, math.sqrt(dev_sq),
                          float(np.linalg.norm(f.v1 - v1_0)),
                          float(np.linalg.norm(f.v2 - v2_0)))


def sweep(seed: int, steps_list) -> list:
    """Traces for several step counts sharing one seeded initial fiber."""
    return [run_great_circle(TransportConfig(num_steps=n, seed=seed))
            for n in steps_list]


def final_frame_deviations(seed: int, steps_list) -> list:
    """|final fiber at m steps - final fiber at next steps count|."""
    traces = sweep(seed, steps_list)
    out = []
    for a, b in zip(traces, traces[1:]):
        out.append(float(np.linalg.norm(a.final_frame.v2 - b.final_frame.v2)))
    return out


def trace_csv_text(trace: HolonomyTrace) -> str:
    lines = ["step,t,theta,phi,phi_unwrapped,orth_err,norm_err"]
    for k in range(len(trace.t)):
        lines.append(f"{k},{float(trace.t[k])!r},{float(trace.theta[k])!r},"
                     f"{float(trace.phi[k])!r},"
                     f"{float(trace.phi_unwrapped[k])!r},"
                     f"{float(trace.orth_err[k])!r},"
                     f"{float(trace.norm_err[k])!r}")
    return "\n".join(lines) + "\n"


def fit_summary_dict(trace: HolonomyTrace) -> dict:
    return {
        "steps": trace.config.num_steps,
        "seed": trace.config.seed,
        "slope": trace.fit.slope,
        "intercept": trace.fit.intercept,
        "rms": trace.fit.rms,
    }
