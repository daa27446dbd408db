"""Executable iteration schemes behind the blow-up proofs.

Subcritical scheme: lower bounds U >= D_j (1+t)^(-a_j) t^(b_j) (and the
mirrored V bound) whose exponents satisfy coupled affine recursions and
whose amplitudes grow doubly exponentially.  Exponents are kept as exact
rationals; amplitudes live in the log domain (a direct representation of
D_j overflows by j ~ 5).

Critical scheme: the sliced iteration U(t) >= C_j (log<t>)^(-b_j)
(log(t/l_2j))^(a_j) with its own exponent recursions, closed forms and
log-amplitude lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from blowup_lab.auxiliary import ball_volume
from blowup_lab.exponents import (
    RegionTag,
    RegionError,
    Scalar,
    SystemParams,
    classify,
    compute_F,
)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact binary value; callers wanting exactness pass Fraction
    return Fraction(x)


# ---------------------------------------------------------------------------
# subcritical scheme
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubcriticalState:
    """One frame of the subcritical iteration at index j >= 1."""

    j: int
    a: Fraction
    b: Fraction
    alpha: Fraction
    beta: Fraction
    logD: float
    logDelta: float


@dataclass(frozen=True)
class IterationConstants:
    """Frame and envelope constants; everything the scheme needs beyond
    (n, p, q).  C1, K1 are the functional lower-bound constants (empirical
    or configured; 1.0 is the documented fallback for recursion-only work).
    """

    C0: float
    K0: float
    C1: float
    K1: float
    m1_0: float
    m2_0: float
    B0bar: float
    B0tilde: float
    log_Ctilde: float
    log_Ktilde: float
    Spq: float
    Spq_tilde: float
    j0: int
    log_Chat: float | None
    log_Khat: float | None
    Ctilde1: float = 1.0
    Ktilde1: float = 1.0


def derive_constants(
    params: SystemParams,
    m1_0: float = 1.0,
    m2_0: float = 1.0,
    C1: float = 1.0,
    K1: float = 1.0,
    C0: float | None = None,
    K0: float | None = None,
    Ctilde1: float = 1.0,
    Ktilde1: float = 1.0,
) -> IterationConstants:
    """Assemble the constant pack from the frame definitions.

    C0 = m1(0) meas(B_1)^(1-p) R^(-n(p-1)) and K0 mirrored in (q, m2);
    the remaining scalars are derived.  Explicit C0/K0 override the
    definitions (useful for unit-constant recursion tests).
    """
    n, R = params.n, params.R
    p, q = float(params.p), float(params.q)
    pq = p * q
    vol = ball_volume(n)
    if C0 is None:
        C0 = m1_0 * vol ** (1.0 - p) * R ** (-n * (p - 1.0))
    if K0 is None:
        K0 = m2_0 * vol ** (1.0 - q) * R ** (-n * (q - 1.0))

    B0bar = n + 1 + 2.0 * (p + 1.0) / (pq - 1.0) + 1.0
    B0tilde = n + 1 + 2.0 * (q + 1.0) / (pq - 1.0) + 1.0
    log_Ctilde = math.log(C0) + p * math.log(K0) - 2.0 * math.log(B0bar) - 2.0 * p * math.log(B0tilde)
    log_Ktilde = math.log(K0) + q * math.log(C0) - 2.0 * math.log(B0tilde) - 2.0 * q * math.log(B0bar)
    log_pq = math.log(pq)
    Spq = 2.0 * pq * (p + 1.0) * log_pq / (pq - 1.0) ** 2 - log_Ctilde / (pq - 1.0)
    Spq_tilde = 2.0 * pq * (q + 1.0) * log_pq / (pq - 1.0) ** 2 - log_Ktilde / (pq - 1.0)
    j0 = math.ceil(
        max(log_Ctilde / (p + 1.0), log_Ktilde / (q + 1.0)) / log_pq
        - 2.0 * pq / (pq - 1.0)
        + 1.0
    )

    f_qp = float(compute_F(n, params.q, params.p))
    f_pq = float(compute_F(n, params.p, params.q))
    log_Chat = None
    if f_qp > 0:
        log_Chat = (
            math.log(n * (n + 1)) - math.log(m1_0 * K1)
            + (n + (n - 1) * p / 2.0) * math.log(2.0) + Spq
        ) / (p * f_qp)
    log_Khat = None
    if f_pq > 0:
        log_Khat = (
            math.log(n * (n + 1)) - math.log(m2_0 * C1)
            + (n + (n - 1) * q / 2.0) * math.log(2.0) + Spq_tilde
        ) / (q * f_pq)

    return IterationConstants(
        C0=C0, K0=K0, C1=C1, K1=K1, m1_0=m1_0, m2_0=m2_0,
        B0bar=B0bar, B0tilde=B0tilde,
        log_Ctilde=log_Ctilde, log_Ktilde=log_Ktilde,
        Spq=Spq, Spq_tilde=Spq_tilde, j0=j0,
        log_Chat=log_Chat, log_Khat=log_Khat,
        Ctilde1=Ctilde1, Ktilde1=Ktilde1,
    )


def subcritical_base(
    params: SystemParams,
    consts: IterationConstants,
    low_dim: bool = False,
    speed_integrals: tuple[float, float] = (0.0, 0.0),
) -> SubcriticalState:
    """First frame of the iteration.

    Standard route: a1 = (n-1)p/2, b1 = n+1, D1 = m1(0) K1 eps^p / (n(n+1))
    (and mirrored).  Low-dimension route (n = 1, or n = 2 with p, q < 2,
    nontrivial initial speeds): a1 = p, b1 = (n-1)p with amplitudes built
    from the speed integrals.
    """
    n = params.n
    p, q = _frac(params.p), _frac(params.q)
    log_eps = math.log(params.eps)
    if not low_dim:
        a1 = Fraction(n - 1) * p / 2
        alpha1 = Fraction(n - 1) * q / 2
        b1 = beta1 = Fraction(n + 1)
        logD = math.log(consts.m1_0 * consts.K1) + float(p) * log_eps - math.log(n * (n + 1))
        logDelta = math.log(consts.m2_0 * consts.C1) + float(q) * log_eps - math.log(n * (n + 1))
        return SubcriticalState(1, a1, b1, alpha1, beta1, logD, logDelta)

    if not (n == 1 or (n == 2 and params.p < 2 and params.q < 2)):
        raise ValueError("low-dimension base case requires n = 1, or n = 2 with p, q < 2")
    iu1, iv1 = speed_integrals
    if iu1 == 0.0 or iv1 == 0.0:
        raise ValueError("low-dimension base case requires nonzero initial-speed integrals")
    a1, b1 = p, Fraction(n - 1) * p
    alpha1, beta1 = q, Fraction(n - 1) * q
    logD = math.log(consts.Ktilde1) + float(p) * (math.log(iv1) + log_eps)
    logDelta = math.log(consts.Ctilde1) + float(q) * (math.log(iu1) + log_eps)
    return SubcriticalState(1, a1, b1, alpha1, beta1, logD, logDelta)


def subcritical_step(
    state: SubcriticalState, params: SystemParams, consts: IterationConstants
) -> SubcriticalState:
    """One frame of the coupled recursion:
    a' = n(p-1) + alpha p,  b' = beta p + 2,
    log D' = log C0 + p log Delta - log((beta p + 1)(beta p + 2)),
    with the mirrored (q, K0) updates for alpha, beta, log Delta."""
    n = params.n
    p, q = _frac(params.p), _frac(params.q)
    a = n * (p - 1) + state.alpha * p
    b = state.beta * p + 2
    alpha = n * (q - 1) + state.a * q
    beta = state.b * q + 2
    logD = (
        math.log(consts.C0)
        + float(p) * state.logDelta
        - math.log(float((state.beta * p + 1) * (state.beta * p + 2)))
    )
    logDelta = (
        math.log(consts.K0)
        + float(q) * state.logD
        - math.log(float((state.b * q + 1) * (state.b * q + 2)))
    )
    return SubcriticalState(state.j + 1, a, b, alpha, beta, logD, logDelta)


def iterate_subcritical(
    params: SystemParams,
    consts: IterationConstants,
    j_max: int,
    low_dim: bool = False,
    speed_integrals: tuple[float, float] = (0.0, 0.0),
) -> list[SubcriticalState]:
    state = subcritical_base(params, consts, low_dim, speed_integrals)
    states = [state]
    while state.j < j_max:
        state = subcritical_step(state, params, consts)
        states.append(state)
    return states


@dataclass(frozen=True)
class ClosedForm:
    """Closed-form exponents at index j.  The a/alpha representations exist
    only for odd j (the even-j ones are recursion-only by construction);
    they are None at even j."""

    j: int
    a: Fraction | None
    b: Fraction
    alpha: Fraction | None
    beta: Fraction


def subcritical_closed_form(
    params: SystemParams, j: int, base: SubcriticalState | None = None
) -> ClosedForm:
    """Exact closed forms for the exponent sequences.

    Odd j:  a_j = (n + a1)(pq)^((j-1)/2) - n and
            b_j = (b1 + 2(p+1)/(pq-1))(pq)^((j-1)/2) - 2(p+1)/(pq-1);
    even j: b_j, beta_j chain one recursion step off the odd formulas.
    Defaults to the standard base (a1 = (n-1)p/2, b1 = n+1).
    """
    if j < 1:
        raise ValueError(f"index must be >= 1, got {j}")
    n = params.n
    p, q = _frac(params.p), _frac(params.q)
    pq = p * q
    if base is None:
        a1 = Fraction(n - 1) * p / 2
        alpha1 = Fraction(n - 1) * q / 2
        b1 = beta1 = Fraction(n + 1)
    else:
        a1, b1, alpha1, beta1 = base.a, base.b, base.alpha, base.beta
    cp = 2 * (p + 1) / (pq - 1)
    cq = 2 * (q + 1) / (pq - 1)
    if j % 2 == 1:
        m = (j - 1) // 2
        gain = pq ** m
        return ClosedForm(
            j=j,
            a=(n + a1) * gain - n,
            b=(b1 + cp) * gain - cp,
            alpha=(n + alpha1) * gain - n,
            beta=(beta1 + cq) * gain - cq,
        )
    m = (j - 2) // 2
    gain = pq ** m
    beta_prev = (beta1 + cq) * gain - cq
    b_prev = (b1 + cp) * gain - cp
    return ClosedForm(
        j=j,
        a=None,
        b=beta_prev * p + 2,
        alpha=None,
        beta=b_prev * q + 2,
    )


def weighted_sum_identity(p: Scalar, q: Scalar, j: int) -> tuple[Fraction, Fraction]:
    """Both sides of the inductive summation formula
    sum_{k=1}^{(j-1)/2} (j+1-2k)(pq)^(k-1)
      = (2 pq ((pq)^((j-1)/2) - 1)/(pq-1) - j + 1) / (pq - 1),
    as exact rationals (they must agree identically)."""
    if j % 2 == 0 or j < 3:
        raise ValueError(f"identity is stated for odd j >= 3, got {j}")
    pq = _frac(p) * _frac(q)
    half = (j - 1) // 2
    lhs = sum((j + 1 - 2 * k) * pq ** (k - 1) for k in range(1, half + 1))
    rhs = (2 * pq * (pq ** half - 1) / (pq - 1) - j + 1) / (pq - 1)
    return Fraction(lhs), Fraction(rhs)


@dataclass(frozen=True)
class LogBoundReport:
    j: int
    j0: int
    in_claimed_range: bool
    logD_recursive: float
    logD_bound: float
    logDelta_recursive: float
    logDelta_bound: float

    def holds(self) -> bool:
        return (
            self.logD_recursive >= self.logD_bound
            and self.logDelta_recursive >= self.logDelta_bound
        )


def subcritical_logD_bound(
    params: SystemParams, consts: IterationConstants, j: int
) -> LogBoundReport:
    """Compare the recursively computed log-amplitudes at odd j against the
    geometric lower bounds (pq)^((j-1)/2) (log D1 - S) (and the mirrored
    Delta bound).  The bound is only claimed past j0; smaller j is flagged."""
    if j % 2 == 0:
        raise ValueError("the log lower bound is stated for odd j")
    states = iterate_subcritical(params, consts, j)
    state = states[-1]
    base = states[0]
    gain = float(_frac(params.p) * _frac(params.q)) ** ((j - 1) / 2.0)
    return LogBoundReport(
        j=j,
        j0=consts.j0,
        in_claimed_range=j > consts.j0,
        logD_recursive=state.logD,
        logD_bound=gain * (base.logD - consts.Spq),
        logDelta_recursive=state.logDelta,
        logDelta_bound=gain * (base.logDelta - consts.Spq_tilde),
    )


def subcritical_envelope_ok(params: SystemParams, state: SubcriticalState) -> bool:
    """Check b_j < B0bar (pq)^ceil((j-1)/2) and the mirrored beta_j bound."""
    gain = (_frac(params.p) * _frac(params.q)) ** ((state.j - 1 + 1) // 2)
    b0 = Fraction(params.n + 1) + 2 * (_frac(params.p) + 1) / (_frac(params.p) * _frac(params.q) - 1) + 1
    b0t = Fraction(params.n + 1) + 2 * (_frac(params.q) + 1) / (_frac(params.p) * _frac(params.q) - 1) + 1
    return state.b < b0 * gain and state.beta < b0t * gain


def blowup_threshold_subcritical(params: SystemParams, consts: IterationConstants) -> float:
    """Upper bound for the blow-up time: the smaller of the two branch
    thresholds Chat eps^(-1/F(n,q,p)) and Khat eps^(-1/F(n,p,q)), skipping
    branches whose F is nonpositive."""
    f_qp = float(compute_F(params.n, params.q, params.p))
    f_pq = float(compute_F(params.n, params.p, params.q))
    log_eps = math.log(params.eps)
    branches = []
    if f_qp > 0 and consts.log_Chat is not None:
        branches.append(consts.log_Chat - log_eps / f_qp)
    if f_pq > 0 and consts.log_Khat is not None:
        branches.append(consts.log_Khat - log_eps / f_pq)
    if not branches:
        raise RegionError("no subcritical branch applies: max{F, F-swapped} <= 0")
    return math.exp(min(branches))


# ---------------------------------------------------------------------------
# critical scheme (slicing method)
# ---------------------------------------------------------------------------


def slicing_level(j: int) -> Fraction:
    """Slicing time l_j = 2 - 2^(-(j+1)), increasing to 2."""
    if j < 0:
        raise ValueError(f"slicing index must be >= 0, got {j}")
    return Fraction(2) - Fraction(1, 2 ** (j + 1))


class CriticalCase(Enum):
    P_GREATER_Q = "PGreaterQ"
    P_EQUALS_Q = "PEqualsQ"


@dataclass(frozen=True)
class CriticalState:
    j: int
    a: Fraction
    b: Fraction
    logC: float
    case: CriticalCase


@dataclass(frozen=True)
class CriticalConstants:
    """Integral-inequality constants C, K and the base amplitude constant
    Ctilde; the theory never pins their numeric values, so they are inputs
    (default 1) and only the structural inequalities are verified."""

    C: float = 1.0
    K: float = 1.0
    Ctilde: float = 1.0


def _critical_case(params: SystemParams) -> CriticalCase:
    if params.p == params.q:
        return CriticalCase.P_EQUALS_Q
    if params.p > params.q:
        return CriticalCase.P_GREATER_Q
    raise ValueError("critical iteration expects p >= q; swap (p, q) and the component roles")


def critical_base(params: SystemParams, consts: CriticalConstants) -> CriticalState:
    """a0 = 1, b0 = 0, C0 = Ctilde eps^(pq) for p > q and Ctilde eps^p at p = q."""
    case = _critical_case(params)
    power = float(params.p) * float(params.q) if case is CriticalCase.P_GREATER_Q else float(params.p)
    logC0 = math.log(consts.Ctilde) + power * math.log(params.eps)
    return CriticalState(j=0, a=Fraction(1), b=Fraction(0), logC=logC0, case=case)


def critical_step(
    state: CriticalState, params: SystemParams, consts: CriticalConstants
) -> CriticalState:
    """One slicing step.

    p > q: a' = a pq + 1, b' = p(q-1) + b pq, and
      C' = 2^(-(2p+1)2j - (3n+8)p - 8) C K^p C_j^(pq) (a pq + 1)^(-1);
    p = q: a' = a pq + p + 1, b' = (pq-1) + b pq, and
      C' = 2^(-(p+1)2j - 7p - 8) C K^p C_j^(pq) (a q + 1)^(-p) (a pq + p + 1)^(-1).
    """
    case = _critical_case(params)
    if case is not state.case:
        raise ValueError(f"state case {state.case} does not match params (p={params.p}, q={params.q})")
    n = params.n
    p, q = _frac(params.p), _frac(params.q)
    pq = p * q
    j = state.j
    log2 = math.log(2.0)
    base = math.log(consts.C) + float(p) * math.log(consts.K) + float(p) * float(q) * state.logC
    if case is CriticalCase.P_GREATER_Q:
        a_next = state.a * pq + 1
        b_next = p * (q - 1) + state.b * pq
        logC = base - ((2 * float(p) + 1) * 2 * j + (3 * n + 8) * float(p) + 8) * log2
        logC -= math.log(float(state.a * pq + 1))
    else:
        a_next = state.a * pq + p + 1
        b_next = (pq - 1) + state.b * pq
        logC = base - ((float(p) + 1) * 2 * j + 7 * float(p) + 8) * log2
        logC -= float(p) * math.log(float(state.a * q + 1))
        logC -= math.log(float(state.a * pq + p + 1))
    return CriticalState(j=j + 1, a=a_next, b=b_next, logC=logC, case=case)


def iterate_critical(
    params: SystemParams, consts: CriticalConstants, j_max: int
) -> list[CriticalState]:
    state = critical_base(params, consts)
    states = [state]
    while state.j < j_max:
        state = critical_step(state, params, consts)
        states.append(state)
    return states


def critical_closed_form(params: SystemParams, j: int) -> tuple[Fraction, Fraction]:
    """a_j = A (pq)^j + 1 - A and b_j = B (pq)^j - B with
    A = pq/(pq-1), B = p(q-1)/(pq-1) for p > q and
    A = 1 + (p+1)/(pq-1), B = 1 for p = q."""
    if j < 0:
        raise ValueError(f"index must be >= 0, got {j}")
    case = _critical_case(params)
    p, q = _frac(params.p), _frac(params.q)
    pq = p * q
    if case is CriticalCase.P_GREATER_Q:
        A = pq / (pq - 1)
        B = p * (q - 1) / (pq - 1)
    else:
        A = 1 + (p + 1) / (pq - 1)
        B = Fraction(1)
    gain = pq ** j
    return A * gain + 1 - A, B * gain - B


def geometric_weight_limit(p: Scalar, q: Scalar):
    """Limit S of the weight sums S_j = sum_{k<=j} k (pq)^(-k): pq/(pq-1)^2.
    Exact when p, q are rational."""
    if isinstance(p, (int, Fraction)) and isinstance(q, (int, Fraction)):
        pq = _frac(p) * _frac(q)
        if pq <= 1:
            raise ValueError(f"need pq > 1, got {pq}")
        return pq / (pq - 1) ** 2
    pq = float(p) * float(q)
    if pq <= 1:
        raise ValueError(f"need pq > 1, got {pq}")
    return pq / (pq - 1.0) ** 2


def geometric_weight_partial(p: Scalar, q: Scalar, j: int):
    """Partial sum S_j; exact when p, q are rational."""
    if isinstance(p, (int, Fraction)) and isinstance(q, (int, Fraction)):
        pq = _frac(p) * _frac(q)
        return sum(Fraction(k) / pq ** k for k in range(1, j + 1))
    pq = float(p) * float(q)
    return sum(k * pq ** (-k) for k in range(1, j + 1))


def critical_theta_m(params: SystemParams, consts: CriticalConstants) -> tuple[float, float]:
    """(log Theta, log M) of the per-step amplitude bound C_j >= M Theta^(-j) C_{j-1}^(pq)."""
    case = _critical_case(params)
    n = params.n
    p, q = float(params.p), float(params.q)
    pq = p * q
    log2 = math.log(2.0)
    logCK = math.log(consts.C) + p * math.log(consts.K)
    if case is CriticalCase.P_GREATER_Q:
        log_theta = 2.0 * (2.0 * p + 1.0) * log2 + math.log(pq)
        log_m = -((3 * n + 4) * p + 6) * log2 + logCK + math.log((pq - 1.0) / pq)
    else:
        log_theta = 2.0 * (p + 1.0) * log2 + (p + 1.0) * math.log(pq)
        log_m = (
            -(5.0 * p + 6.0) * log2 + logCK
            + (p + 1.0) * math.log(pq - 1.0)
            - math.log(p) - (p + 1.0) * (math.log(q + 1.0) + math.log(pq))
        )
    return log_theta, log_m


def critical_logC_lower_bound(
    params: SystemParams, consts: CriticalConstants, logC0: float, j: int
) -> float:
    """(pq)^j (log C0 - S log Theta + log M/(pq-1)) - log M/(pq-1), the
    closed lower bound the sliced recursion must dominate."""
    p, q = float(params.p), float(params.q)
    pq = p * q
    log_theta, log_m = critical_theta_m(params, consts)
    s_inf = geometric_weight_limit(p, q)
    core = logC0 - s_inf * log_theta + log_m / (pq - 1.0)
    return pq ** j * core - log_m / (pq - 1.0)


def blowup_threshold_critical(params: SystemParams, E: float) -> float:
    """Critical lifespan threshold exp(E^(-(pq-1)/p) eps^(-q(pq-1))) for
    p > q and exp(E^(-(p-1)) eps^(-p(p-1))) at p = q, with (p, q) swapped
    first when p < q.  E is an empirically fitted positive constant."""
    if E <= 0:
        raise ValueError(f"threshold constant must be positive, got {E}")
    region = classify(params)
    if region.tag is not RegionTag.CRITICAL_BLOWUP:
        raise RegionError("critical threshold is only claimed on the critical curve")
    p, q = float(params.p), float(params.q)
    if p < q:
        p, q = q, p
    pq = p * q
    eps = params.eps
    if p == q:
        exponent = E ** (-(p - 1.0)) * eps ** (-p * (p - 1.0))
    else:
        exponent = E ** (-(pq - 1.0) / p) * eps ** (-q * (pq - 1.0))
    try:
        return math.exp(exponent)
    except OverflowError:
        return math.inf
