"""Radially symmetric finite-difference solver for the coupled damped system

    u_tt - lap(u) + b1(t) u_t = |v|^p,
    v_tt - lap(v) + b2(t) v_t = |u|^q,

with compact bump data, plus functional extraction, inequality
verification, blow-up detection and lifespan sweeps.

Scheme: explicit leapfrog with the radial Laplacian u_rr + (n-1) u_r / r
(n u_rr at the origin via the symmetric ghost node), time-centered damping
solved pointwise, nonlinear sources at the current level, CFL <= 0.5.
Finite propagation speed is enforced: nodes outside r <= t + R + 2 dr are
zeroed each step (the exact solution vanishes there; the scheme's own
dispersive leakage would otherwise pollute the support cone).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from blowup_lab.auxiliary import (
    KernelConfig,
    KernelQuadrature,
    critical_kernel_orders,
    sinhc,
    sphere_area,
)
from blowup_lab.damping import DampingProfile
from blowup_lab.exponents import SystemParams, lifespan_law


@dataclass(frozen=True)
class InitialData:
    """Amplitudes of the built-in smooth compact bump (1 - (r/R)^2)^4 on
    r < R, one per data component; everything is scaled by eps at init."""

    u0_amp: float = 1.0
    u1_amp: float = 0.0
    v0_amp: float = 1.0
    v1_amp: float = 0.0

    @classmethod
    def zero(cls) -> "InitialData":
        return cls(0.0, 0.0, 0.0, 0.0)

    def speed_flags(self) -> tuple[bool, bool]:
        return self.u1_amp != 0.0, self.v1_amp != 0.0


@dataclass(frozen=True)
class GridConfig:
    dr: float = 0.02
    cfl: float = 0.5
    horizon: float = 10.0
    threshold: float = 1e10
    rmax: float | None = None
    sample_every: int = 1
    snapshot_every: int | None = None
    linear_mode: bool = False
    enforce_cone: bool = True

    def __post_init__(self):
        if self.dr <= 0:
            raise ValueError(f"dr must be positive, got {self.dr}")
        if not 0 < self.cfl <= 0.5:
            raise ValueError(f"CFL must lie in (0, 0.5], got {self.cfl}")
        if self.horizon <= 0 or self.threshold <= 0:
            raise ValueError("horizon and threshold must be positive")
        if self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")

    @property
    def dt(self) -> float:
        return self.cfl * self.dr


class Detection(Enum):
    THRESHOLD = "ThresholdCross"
    NONFINITE = "NonFinite"
    SURVIVED = "Survived"


@dataclass(frozen=True)
class LifespanRecord:
    eps: float
    t_blow: float
    detection: Detection
    meta: dict = field(default_factory=dict)


@dataclass
class FunctionalTrace:
    """Sampled spatial functionals along a run; uniform cadence in time."""

    t: np.ndarray
    U: np.ndarray
    V: np.ndarray
    Nu: np.ndarray
    Nv: np.ndarray
    sup: np.ndarray

    def __len__(self) -> int:
        return self.t.size


class GridState:
    """One radial solution snapshot (two time levels) plus grid metadata."""

    def __init__(self, params: SystemParams, profiles, data: InitialData, grid: GridConfig):
        self.params = params
        self.b1, self.b2 = profiles
        self.data = data
        self.grid = grid
        n, R = params.n, params.R
        dr, dt = grid.dr, grid.dt
        rmax = grid.rmax
        if rmax is None:
            rmax = grid.horizon + R + max(0.5, 10 * dr)
        if rmax < grid.horizon + R + 4 * dr:
            raise ValueError(
                f"rmax={rmax:g} too small: the support cone reaches "
                f"{grid.horizon + R:g} by the horizon"
            )
        self.dr, self.dt, self.rmax = dr, dt, rmax
        self.r = np.arange(int(round(rmax / dr)) + 1) * dr
        # trapezoid weights against the surface measure |S^(n-1)| r^(n-1) dr
        w = np.full(self.r.size, dr)
        w[0] = w[-1] = 0.5 * dr
        self.weights = sphere_area(n - 1) * self.r ** (n - 1) * w

        bump = np.where(self.r < R, (1.0 - np.minimum(self.r / R, 1.0) ** 2) ** 4, 0.0)
        eps = params.eps
        self.u_init = eps * data.u0_amp * bump
        self.ut_init = eps * data.u1_amp * bump
        self.v_init = eps * data.v0_amp * bump
        self.vt_init = eps * data.v1_amp * bump

        # second level by a second-order Taylor start from the PDE at t = 0
        su0, sv0 = self._sources(self.u_init, self.v_init)
        u1 = self.u_init + dt * self.ut_init + 0.5 * dt * dt * (
            self._laplacian(self.u_init) - self.b1.b(0.0) * self.ut_init + su0
        )
        v1 = self.v_init + dt * self.vt_init + 0.5 * dt * dt * (
            self._laplacian(self.v_init) - self.b2.b(0.0) * self.vt_init + sv0
        )
        self.u_prev, self.v_prev = self.u_init.copy(), self.v_init.copy()
        self.u, self.v = u1, v1
        self.t = dt
        self.step_index = 1
        self._apply_cone()

    def _sources(self, u, v):
        if self.grid.linear_mode:
            z = np.zeros_like(u)
            return z, z
        p, q = float(self.params.p), float(self.params.q)
        return np.abs(v) ** p, np.abs(u) ** q

    def _laplacian(self, u):
        dr, n, r = self.dr, self.params.n, self.r
        out = np.zeros_like(u)
        out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / dr ** 2
        if n > 1:
            out[1:-1] += (n - 1) * (u[2:] - u[:-2]) / (2.0 * dr * r[1:-1])
        out[0] = n * 2.0 * (u[1] - u[0]) / dr ** 2
        return out

    def _apply_cone(self):
        if not self.grid.enforce_cone:
            return
        # exact solution is supported in r <= t + R; allow a 2 dr buffer
        start = int(math.floor((self.t + self.params.R) / self.dr + 2.0)) + 1
        if start < self.r.size:
            self.u[start:] = 0.0
            self.v[start:] = 0.0

    def integral(self, f) -> float:
        return float(self.weights @ f)

    def functionals(self) -> tuple[float, float, float, float, float]:
        # _sources returns (|v|^p, |u|^q): the u-equation source integrates
        # to Nv and the v-equation source to Nu
        src_u, src_v = self._sources(self.u, self.v)
        U = self.integral(self.u)
        V = self.integral(self.v)
        Nv = self.integral(src_u) if not self.grid.linear_mode else 0.0
        Nu = self.integral(src_v) if not self.grid.linear_mode else 0.0
        sup = max(float(np.max(np.abs(self.u))), float(np.max(np.abs(self.v))))
        return U, V, Nu, Nv, sup

    def sup_norm(self) -> float:
        with np.errstate(invalid="ignore"):
            return max(float(np.max(np.abs(self.u))), float(np.max(np.abs(self.v))))


def step(state: GridState) -> GridState:
    """Advance one leapfrog step (mutates and returns the state).  Non-finite
    values are not an error here; blow-up detection is the caller's job."""
    dt = state.dt
    with np.errstate(over="ignore", invalid="ignore"):
        su, sv = state._sources(state.u, state.v)
        b1t = state.b1.b(state.t)
        b2t = state.b2.b(state.t)
        lap_u = state._laplacian(state.u)
        lap_v = state._laplacian(state.v)
        half1, half2 = 0.5 * b1t * dt, 0.5 * b2t * dt
        u_new = (
            2.0 * state.u - state.u_prev + half1 * state.u_prev + dt * dt * (lap_u + su)
        ) / (1.0 + half1)
        v_new = (
            2.0 * state.v - state.v_prev + half2 * state.v_prev + dt * dt * (lap_v + sv)
        ) / (1.0 + half2)
    u_new[-1] = 0.0
    v_new[-1] = 0.0
    state.u_prev, state.u = state.u, u_new
    state.v_prev, state.v = state.v, v_new
    state.t += dt
    state.step_index += 1
    state._apply_cone()
    return state


@dataclass
class RunResult:
    record: LifespanRecord
    trace: FunctionalTrace
    state: GridState
    snapshots: list[tuple[float, np.ndarray, np.ndarray]] = field(default_factory=list)


def init_state(params, profiles, data: InitialData, grid: GridConfig) -> GridState:
    return GridState(params, profiles, data, grid)


def run_until_blowup(
    params: SystemParams,
    profiles: tuple[DampingProfile, DampingProfile],
    data: InitialData,
    grid: GridConfig,
) -> RunResult:
    """Step until the sup norm crosses the threshold, a non-finite value
    appears, or the horizon is reached (a Survived record, not an error)."""
    state = init_state(params, profiles, data, grid)

    samples = {k: [] for k in ("t", "U", "V", "Nu", "Nv", "sup")}

    def sample_at_zero():
        # the t = 0 level lives in (u_prev, v_prev) plus the initial arrays
        U = state.integral(state.u_init)
        V = state.integral(state.v_init)
        if grid.linear_mode:
            Nu = Nv = 0.0
        else:
            Nu = state.integral(np.abs(state.u_init) ** float(params.q))
            Nv = state.integral(np.abs(state.v_init) ** float(params.p))
        sup0 = max(float(np.max(np.abs(state.u_init))), float(np.max(np.abs(state.v_init))))
        for k, val in zip(("t", "U", "V", "Nu", "Nv", "sup"), (0.0, U, V, Nu, Nv, sup0)):
            samples[k].append(val)

    snapshots: list[tuple[float, np.ndarray, np.ndarray]] = []
    if grid.snapshot_every is not None:
        snapshots.append((0.0, state.u_init.copy(), state.v_init.copy()))

    sample_at_zero()
    if state.sup_norm() >= grid.threshold:
        raise ValueError("threshold must exceed the initial sup norm")

    meta = {
        "n": params.n, "p": float(params.p), "q": float(params.q), "R": params.R,
        "dr": grid.dr, "cfl": grid.cfl, "horizon": grid.horizon,
        "threshold": grid.threshold,
    }

    def sample_current():
        U, V, Nu, Nv, sup = state.functionals()
        for k, val in zip(("t", "U", "V", "Nu", "Nv", "sup"), (state.t, U, V, Nu, Nv, sup)):
            samples[k].append(val)

    detection = Detection.SURVIVED
    t_blow = grid.horizon
    n_steps = int(round(grid.horizon / state.dt))
    while state.step_index <= n_steps:
        if state.step_index % grid.sample_every == 0:
            sample_current()
        if grid.snapshot_every is not None and state.step_index % grid.snapshot_every == 0:
            snapshots.append((state.t, state.u.copy(), state.v.copy()))
        sup = state.sup_norm()
        if not math.isfinite(sup):
            detection, t_blow = Detection.NONFINITE, state.t
            break
        if sup > grid.threshold:
            detection, t_blow = Detection.THRESHOLD, state.t
            break
        if state.step_index == n_steps:
            break
        step(state)

    trace = FunctionalTrace(**{k: np.asarray(v) for k, v in samples.items()})
    record = LifespanRecord(eps=params.eps, t_blow=t_blow, detection=detection, meta=meta)
    return RunResult(record=record, trace=trace, state=state, snapshots=snapshots)


# ---------------------------------------------------------------------------
# identity and inequality verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    """Residuals/fits along a trace.

    ode_residual_*: max |second difference + b * first difference - source|,
    the discrete form of the functional ODEs U'' + b1 U' = int |v|^p.
    iter1_slack_*: min over samples of U - m(0) * double time integral of the
    source (nonnegative when the frame inequality holds).
    c1_fit / k1_fit: empirical constants of the nonlinearity lower bounds.
    """

    ode_residual_u: float
    ode_residual_v: float
    iter1_slack_u: float
    iter1_slack_v: float
    c1_fit: float
    k1_fit: float

    def inequalities_hold(self, tol: float = 0.0) -> bool:
        return self.iter1_slack_u >= -tol and self.iter1_slack_v >= -tol


def _cumleft(y: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Left-endpoint cumulative integral: a lower estimate for nondecreasing
    integrands, so the frame-inequality check stays meaningful even at the
    terminal blow-up spike (where a trapezoid overshoots by orders of
    magnitude)."""
    out = np.zeros_like(y)
    out[1:] = np.cumsum(y[:-1] * np.diff(t))
    return out


def verify_identities(
    trace: FunctionalTrace,
    profiles: tuple[DampingProfile, DampingProfile],
    params: SystemParams,
    window: tuple[float, float] | None = None,
) -> IdentityReport:
    """Check the functional ODEs, the frame inequalities, and fit the
    nonlinearity lower-bound constants on a sampled trace."""
    if len(trace) < 5:
        raise ValueError(f"trace too short for second differences: {len(trace)} samples")
    t = trace.t
    h = np.diff(t)
    if not np.allclose(h, h[0], rtol=1e-9):
        raise ValueError("trace cadence must be uniform")
    h = float(h[0])
    b1, b2 = profiles

    sl = slice(1, len(trace) - 1)
    if window is not None:
        lo, hi = window
        keep = (t[sl] >= lo) & (t[sl] <= hi)
    else:
        keep = np.ones(len(trace) - 2, dtype=bool)

    def ode_residual(F, source, prof):
        d2 = (F[2:] - 2.0 * F[1:-1] + F[:-2]) / h ** 2
        d1 = (F[2:] - F[:-2]) / (2.0 * h)
        res = d2 + prof.b(t[sl]) * d1 - source[sl]
        return float(np.max(np.abs(res[keep])))

    res_u = ode_residual(trace.U, trace.Nv, b1)
    res_v = ode_residual(trace.V, trace.Nu, b2)

    m1_0 = math.exp(-b1.l1)
    m2_0 = math.exp(-b2.l1)
    i2_nv = _cumleft(_cumleft(trace.Nv, t), t)
    i2_nu = _cumleft(_cumleft(trace.Nu, t), t)
    slack_u = float(np.min(trace.U - m1_0 * i2_nv))
    slack_v = float(np.min(trace.V - m2_0 * i2_nu))

    n, eps = params.n, params.eps
    p, q = float(params.p), float(params.q)
    c1 = float(np.min(trace.Nu * (1.0 + t) ** ((n - 1) * (q / 2.0 - 1.0)) / eps ** q))
    k1 = float(np.min(trace.Nv * (1.0 + t) ** ((n - 1) * (p / 2.0 - 1.0)) / eps ** p))
    return IdentityReport(
        ode_residual_u=res_u, ode_residual_v=res_v,
        iter1_slack_u=slack_u, iter1_slack_v=slack_v,
        c1_fit=c1, k1_fit=k1,
    )


def cone_leakage(result: RunResult) -> float:
    """Sup of |u|, |v| outside r <= t + R + 2 dr at the final state."""
    state = result.state
    outside = state.r > state.t + state.params.R + 2.0 * state.dr
    if not np.any(outside):
        return 0.0
    return max(
        float(np.max(np.abs(state.u[outside]))),
        float(np.max(np.abs(state.v[outside]))),
    )


@dataclass(frozen=True)
class CriticalReport:
    """Sampled check of the kernel-weighted integral inequalities and of the
    logarithmic lower bound for the weighted average of the first component."""

    t_checked: np.ndarray
    weighted_u: np.ndarray
    weighted_v: np.ndarray
    rhs_u: np.ndarray
    rhs_v: np.ndarray
    log_ratio_min: float
    log_ratio_window: tuple[float, float]

    def bounds_hold(self, rtol: float = 1e-9) -> bool:
        ok_u = np.all(self.weighted_u >= self.rhs_u * (1.0 - rtol) - 1e-12)
        ok_v = np.all(self.weighted_v >= self.rhs_v * (1.0 - rtol) - 1e-12)
        return bool(ok_u and ok_v)


def verify_critical_inequalities(
    result: RunResult,
    params: SystemParams,
    lambda0: float = 1.0,
    quad_nodes: int = 64,
    log_window: tuple[float, float] = (5.0, math.inf),
) -> CriticalReport:
    """Check the kernel-weighted lower bounds along the stored history.

    Each weighted average must dominate its data terms plus the
    (t-s)-weighted source integral, all damped by exp(-l1) factors; the
    first component must additionally grow at least like log(2t/3).
    Requires n >= 2, snapshot history, and smooth damping kinds.
    """
    state = result.state
    n = params.n
    if n < 2:
        raise ValueError("critical-case machinery requires n >= 2")
    for prof in (state.b1, state.b2):
        if prof.kind == "tabulated":
            raise ValueError("critical-case verifiers require C^1 damping (zero/poly kinds)")
    if not result.snapshots:
        raise ValueError("run was made without snapshots; set snapshot_every")

    p, q = float(params.p), float(params.q)
    swap = p < q
    if swap:
        p, q = q, p
    r1, r2 = critical_kernel_orders(n, p, q)
    if min(r1, r2) <= (n - 3) / 2.0:
        raise ValueError("kernel orders fall outside the admissible upper-bound range")

    cfg1 = KernelConfig(lambda0=lambda0, R=params.R, order=r1, quad_nodes=quad_nodes)
    cfg2 = KernelConfig(lambda0=lambda0, R=params.R, order=r2, quad_nodes=quad_nodes)
    quad1 = KernelQuadrature(cfg1, n, state.r)
    quad2 = KernelQuadrature(cfg2, n, state.r)

    s_times = np.array([s for s, _, _ in result.snapshots])
    W = state.weights
    u_init, ut_init = state.u_init, state.ut_init
    v_init, vt_init = state.v_init, state.vt_init
    u_snaps = np.stack([u for _, u, _ in result.snapshots])
    v_snaps = np.stack([v for _, _, v in result.snapshots])
    if swap:
        u_snaps, v_snaps = v_snaps, u_snaps
        u_init, v_init = v_init, u_init
        ut_init, vt_init = vt_init, ut_init
        b_first, b_second = state.b2, state.b1
    else:
        b_first, b_second = state.b1, state.b2

    # modal profiles: Phi-transforms of the fields and sources per lambda node
    A_u = quad1.phi_mat @ (u_snaps * W).T           # (K1, S)
    A_v = quad2.phi_mat @ (v_snaps * W).T           # (K2, S)
    S_v = quad1.phi_mat @ (np.abs(v_snaps) ** p * W).T
    S_u = quad2.phi_mat @ (np.abs(u_snaps) ** q * W).T
    d0_u, d1_u = quad1.phi_mat @ (W * u_init), quad1.phi_mat @ (W * ut_init)
    d0_v, d1_v = quad2.phi_mat @ (W * v_init), quad2.phi_mat @ (W * vt_init)

    def component_check(quad, A, Ssrc, d0, d1, prof):
        lam, wq, R = quad.lam, quad.w, params.R
        l1 = prof.l1
        lhs, rhs = [], []
        for j, tc in enumerate(s_times):
            if tc <= 0.0:
                continue
            decay = wq * np.exp(-lam * (tc + R))
            lhs.append(float(decay @ A[:, j]))
            data0 = math.exp(-l1) * float((decay * np.cosh(lam * tc)) @ d0)
            data1 = math.exp(-2.0 * l1) * tc * float((decay * sinhc(lam * tc)) @ d1)
            sub = s_times[: j + 1]
            kernel = decay[:, None] * sinhc(np.outer(lam, tc - sub))
            inner = np.einsum("ki,ki->i", kernel, Ssrc[:, : j + 1])
            trap_w = np.zeros_like(sub)
            if sub.size > 1:
                d = np.diff(sub)
                trap_w[0] = 0.5 * d[0]
                trap_w[-1] = 0.5 * d[-1]
                trap_w[1:-1] = 0.5 * (d[1:] + d[:-1])
            source = math.exp(-2.0 * l1) * float(np.sum(trap_w * (tc - sub) * inner))
            rhs.append(data0 + data1 + source)
        return np.asarray(lhs), np.asarray(rhs)

    lhs_u, rhs_u = component_check(quad1, A_u, S_v, d0_u, d1_u, b_first)
    lhs_v, rhs_v = component_check(quad2, A_v, S_u, d0_v, d1_v, b_second)
    t_checked = s_times[s_times > 0.0]

    lo, hi = log_window
    in_win = (t_checked >= max(lo, 1.5 + 1e-9)) & (t_checked <= hi)
    if np.any(in_win):
        ratios = lhs_u[in_win] / np.log(2.0 * t_checked[in_win] / 3.0)
        log_ratio_min = float(np.min(ratios))
    else:
        log_ratio_min = math.nan
    return CriticalReport(
        t_checked=t_checked,
        weighted_u=lhs_u,
        weighted_v=lhs_v,
        rhs_u=rhs_u,
        rhs_v=rhs_v,
        log_ratio_min=log_ratio_min,
        log_ratio_window=(lo, hi),
    )


# ---------------------------------------------------------------------------
# lifespan sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepResult:
    records: list[LifespanRecord]
    slope: float
    intercept: float
    theory_exponent: float
    c_fit: float
    ratio_spread: float
    excluded: int

    def slope_matches(self, rel_tol: float = 0.25) -> bool:
        return abs(self.slope - self.theory_exponent) <= rel_tol * abs(self.theory_exponent)

    def upper_bound_holds(self) -> bool:
        return self.c_fit > 0 and math.isfinite(self.c_fit)


def fit_power_law(eps: np.ndarray, t_blow: np.ndarray) -> tuple[float, float]:
    """Least-squares slope/intercept of log T against log eps."""
    if eps.size < 2:
        raise ValueError("need at least 2 blow-up records to fit a slope")
    coef = np.polyfit(np.log(eps), np.log(t_blow), 1)
    return float(coef[0]), float(coef[1])


def _sweep_one(args) -> LifespanRecord:
    params, profiles, data, grid = args
    return run_until_blowup(params, profiles, data, grid).record


def sweep_workers(n_jobs: int, requested: int | None = None) -> int:
    """Worker count for a sweep: the requested value (default one per job up
    to the CPU count), always capped by BLOWUP_LAB_THREADS when set."""
    cap_env = os.environ.get("BLOWUP_LAB_THREADS")
    cap = int(cap_env) if cap_env else (os.cpu_count() or 1)
    want = requested if requested is not None else min(n_jobs, os.cpu_count() or 1)
    return max(1, min(want, cap, n_jobs))


def lifespan_sweep(
    params_template: SystemParams,
    profiles: tuple[DampingProfile, DampingProfile],
    data: InitialData,
    grid: GridConfig,
    eps_list,
    workers: int | None = None,
) -> SweepResult:
    """Run one blow-up detection per eps (independently, optionally in
    parallel processes), fit log T against log eps, and compare with the
    theoretical law.  Survived records are excluded from the fit and counted."""
    eps_list = list(eps_list)
    if len(eps_list) < 4:
        raise ValueError(f"sweep needs >= 4 eps points, got {len(eps_list)}")
    jobs = [
        (replace(params_template, eps=float(e)), profiles, data, grid) for e in eps_list
    ]
    nw = sweep_workers(len(jobs), workers)
    if nw > 1:
        with ProcessPoolExecutor(max_workers=nw) as pool:
            records = list(pool.map(_sweep_one, jobs))
    else:
        records = [_sweep_one(j) for j in jobs]

    usable = [rec for rec in records if rec.detection is not Detection.SURVIVED]
    excluded = len(records) - len(usable)
    eps = np.array([rec.eps for rec in usable])
    ts = np.array([rec.t_blow for rec in usable])
    slope, intercept = fit_power_law(eps, ts)

    law = lifespan_law(params_template, data.speed_flags())
    theory = float(law.exponent)
    ratios = ts * eps ** (-theory)
    c_fit = float(np.max(ratios))
    spread = float(np.max(ratios) / np.min(ratios))
    return SweepResult(
        records=records,
        slope=slope,
        intercept=intercept,
        theory_exponent=theory,
        c_fit=c_fit,
        ratio_spread=spread,
        excluded=excluded,
    )


# ---------------------------------------------------------------------------
# CSV persistence (schemas documented in the header rows)
# ---------------------------------------------------------------------------


def write_trace_csv(trace: FunctionalTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("t,U,V,Nu,Nv,supnorm\n")
        for i in range(len(trace)):
            row = (trace.t[i], trace.U[i], trace.V[i], trace.Nu[i], trace.Nv[i], trace.sup[i])
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def write_records_csv(records: list[LifespanRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("eps,Tblow,detection,dr,cfl,horizon,threshold\n")
        for rec in records:
            m = rec.meta
            fh.write(
                f"{rec.eps!r},{rec.t_blow!r},{rec.detection.value},"
                f"{m.get('dr', '')!r},{m.get('cfl', '')!r},"
                f"{m.get('horizon', '')!r},{m.get('threshold', '')!r}\n"
            )
