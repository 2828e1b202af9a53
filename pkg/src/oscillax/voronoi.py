"""Dual-sum transforms for coefficient sums of modular forms.

A smoothly weighted coefficient sum Sum_n lambda(n) e(a n/q) h(n/N) can be
traded for a dual sum in which the additive twist is inverted and the
weight h is replaced by a Bessel-kernel transform Phi evaluated at
n N / q^2.  This module provides the transforms (holomorphic and Maass
kernels), their large-argument expansions, a certified numerical check of
the identity itself, and the oscillatory integral Psi that arises when the
weight carries an extra phase e(2 sqrt(n x)/q): its direct Mellin-line
evaluation, its stationary-phase asymptotic, and the graded expansion of
the stationary point that the asymptotic's phase is built from.

Conventions: test weights live on [1/2, 5/2]; the phase-carrying weight
uses the plateau window on [1, 2] in the squared variable.  All kernels
are normalized so that the identities hold with prefactor N/q (plain dual
sum) and q (phase-carrying dual sum, coefficients divided by n).
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from functools import lru_cache

import numpy as np
from scipy.special import hankel1e, jv

from .errors import (
    DomainError,
    InvariantError,
    NonConvergenceError,
    RegimeError,
    TailBudgetError,
)
from .forms import HolomorphicForm, divisor_counts
from .quadrature import (
    OscillatoryIntegral,
    integrate_adaptive,
    integrate_oscillatory,
    bump_on_normalized,
    plateau,
)
from .special_fn import (
    _composite_gl,
    _maass_first_grid,
    _maass_second_grid,
    gamma_factor,
    oscillatory_phase_factor,
)

__all__ = [
    "VoronoiTestFunction",
    "standard_test_function",
    "hankel_coefficients",
    "phi_holomorphic",
    "phi_maass",
    "phi_asymptotic",
    "voronoi_verify",
    "PhaseExpansion",
    "expand_stationary_point",
    "psi_mellin",
    "psi_asymptotic",
    "psi_regime_classify",
]

#: support window of the plain test weights
_Y_LO, _Y_HI = 0.5, 2.5

_TWO_PI = 2.0 * math.pi
_FOUR_PI = 4.0 * math.pi


# ----------------------------------------------------------------------------
# Test weights.


@dataclasses.dataclass(frozen=True)
class VoronoiTestFunction:
    """A smooth weight h for the sum Sum_n lambda(n) e(a n/q) h(n/N).

    h must be smooth and supported inside [1/2, 5/2]; N is the length
    scale the weight will be used at. Construction samples h outside the
    window and rejects weights that leak past it.
    """

    h: object
    N: float
    description: str = ""

    def __post_init__(self):
        if not self.N > 0.0:
            raise DomainError("test function requires N > 0")
        inside = np.abs(np.asarray(self.h(np.linspace(_Y_LO, _Y_HI, 257)), dtype=float))
        peak = float(inside.max())
        if not peak > 0.0:
            raise DomainError("test function vanishes on its support window")
        outside = np.array([1e-3, 0.25, 0.4999, 2.5001, 3.0, 10.0])
        leak = float(np.abs(np.asarray(self.h(outside), dtype=float)).max())
        if leak > 1e-12 * peak:
            raise DomainError("test function must be supported inside [1/2, 5/2]")


def standard_test_function(N: float) -> VoronoiTestFunction:
    """The canonical bump on [1/2, 5/2], unit mass, at length scale N."""
    return VoronoiTestFunction(
        h=lambda y: bump_on_normalized(y, _Y_LO, _Y_HI),
        N=float(N),
        description="canonical bump on [1/2, 5/2], unit mass",
    )


# ----------------------------------------------------------------------------
# Kernel transforms Phi.


def hankel_coefficients(jmax: int, *, kappa: int | None = None, mu: float | None = None) -> list:
    """Coefficient pairs (c_j, d_j) of the large-argument kernel expansion.

    Phi(x) ~ x^{-1/4} int h(y) y^{-1/4} sum_j (c_j e(2 sqrt(xy))
    + d_j e(-2 sqrt(xy))) / (xy)^{j/2} dy.  The numbers come from the
    standard Hankel asymptotics of the Bessel kernel: with a_0 = 1 and
    a_k = a_{k-1} (4 nu^2 - (2k-1)^2) / (8k), where nu = kappa - 1 for the
    holomorphic kernel and nu = 2 i mu for the Maass one (so 4 nu^2 is
    real in both cases),

        c_j = (e^{i pi/4}/sqrt 2) i^j a_j / (4 pi)^j,

    and d_j is the conjugate, times (-1)^kappa in the holomorphic case.
    Exactly one of kappa, mu selects the kernel.
    """
    if (kappa is None) == (mu is None):
        raise DomainError("specify exactly one of kappa, mu")
    if jmax < 0:
        raise DomainError("jmax must be >= 0")
    pref_c = cmath.exp(0.25j * math.pi) / math.sqrt(2.0)
    if kappa is not None:
        if kappa < 2:
            raise DomainError("kappa must be >= 2")
        four_nu_sq = 4.0 * (kappa - 1.0) ** 2
        pref_d = (-1.0) ** kappa * pref_c.conjugate()
    else:
        if not mu > 0.0:
            raise DomainError("mu must be > 0")
        four_nu_sq = -16.0 * mu * mu
        pref_d = pref_c.conjugate()
    out = []
    a = 1.0
    for j in range(jmax + 1):
        if j > 0:
            a *= (four_nu_sq - (2.0 * j - 1.0) ** 2) / (8.0 * j)
        scale = a / _FOUR_PI**j
        out.append((pref_c * 1j**j * scale, pref_d * (-1j) ** j * scale))
    return out


def phi_holomorphic(x: float, tf: VoronoiTestFunction, kappa: int, tol: float = 1e-11) -> complex:
    """Phi(x) = 2 pi i^kappa int h(y) J_{kappa-1}(4 pi sqrt(xy)) dy.

    Small arguments integrate the Bessel kernel directly; once the kernel
    argument exceeds ~40 on the whole support the oscillation is peeled
    off through the scaled Hankel function and handled by phase-aware
    quadrature.
    """
    if not x > 0.0:
        raise DomainError("phi_holomorphic requires x > 0")
    if kappa < 4 or kappa % 2:
        raise DomainError("kappa must be an even weight >= 4")
    nu = kappa - 1
    h = tf.h
    if _FOUR_PI * math.sqrt(x * _Y_LO) <= 40.0:
        res = integrate_adaptive(
            lambda y: h(y) * jv(nu, _FOUR_PI * np.sqrt(x * y)), _Y_LO, _Y_HI, tol
        )
        base = res.value.real
    else:
        # J_nu(z) = Re H^(1)_nu(z) for real order and argument; h is real
        I = OscillatoryIntegral(
            amplitude=lambda y: h(y) * hankel1e(nu, _FOUR_PI * np.sqrt(x * y)),
            phase=lambda y: _FOUR_PI * np.sqrt(x * y),
            dphase=lambda y: _TWO_PI * np.sqrt(x / y),
            support=(_Y_LO, _Y_HI),
        )
        base = integrate_oscillatory(I, tol).value.real
    return _TWO_PI * 1j**kappa * base


def _phi_holomorphic_grid(xs: np.ndarray, tf: VoronoiTestFunction, kappa: int) -> np.ndarray:
    """Phi at many arguments by one shared dense quadrature rule."""
    xs = np.asarray(xs, dtype=float)
    span = math.sqrt(_Y_HI) - math.sqrt(_Y_LO)
    phase_max = _FOUR_PI * math.sqrt(float(xs.max())) * span
    panels = max(24, int(phase_max / 8.0) + 8)
    y, w = _composite_gl(_Y_LO, _Y_HI, panels)
    wh = w * np.asarray(tf.h(y), dtype=float)
    out = np.empty(xs.size, dtype=float)
    for lo in range(0, xs.size, 256):
        blk = xs[lo : lo + 256]
        z = _FOUR_PI * np.sqrt(blk[:, None] * y[None, :])
        out[lo : lo + 256] = jv(kappa - 1, z) @ wh
    return _TWO_PI * 1j**kappa * out


def phi_maass(
    x: float, tf: VoronoiTestFunction, mu: float, epsilon_f: int, tol: float = 1e-10
) -> tuple:
    """The transform pair (Phi^+, Phi^-) for a Maass form.

    Phi^+(x) = -pi/sin(pi i mu) int h(y) (J_{2 i mu} - J_{-2 i mu})
    (4 pi sqrt(xy)) dy, and Phi^-(x) = 4 epsilon_f cosh(pi mu) int h(y)
    K_{2 i mu}(4 pi sqrt(xy)) dy; the K-kernel decays exponentially, so
    Phi^- is negligible as soon as the argument is moderately large.
    """
    if not x > 0.0:
        raise DomainError("phi_maass requires x > 0")
    if not mu > 0.0:
        raise DomainError("phi_maass requires mu > 0")
    if epsilon_f not in (1, -1):
        raise DomainError("epsilon_f must be +1 or -1")
    h = tf.h
    z0 = _FOUR_PI * math.sqrt(x * _Y_LO)
    z1 = _FOUR_PI * math.sqrt(x * _Y_HI)
    # the first kernel oscillates like cos z; seed one breakpoint per ~3 rad
    nb = int((z1 - z0) / 3.0)
    bks = None
    if nb > 1:
        zg = z0 + (z1 - z0) * np.arange(1, nb) / nb
        bks = (zg / _FOUR_PI) ** 2 / x
    def safe_z(y):
        # quadrature probes may touch y = 0 where h vanishes anyway
        return _FOUR_PI * np.sqrt(x * np.where(np.asarray(y) > 0.0, y, _Y_LO))

    plus = integrate_adaptive(
        lambda y: h(y) * _maass_first_grid(mu, safe_z(y)),
        _Y_LO,
        _Y_HI,
        tol,
        breakpoints=bks,
    ).value.real
    minus = integrate_adaptive(
        lambda y: h(y) * _maass_second_grid(mu, safe_z(y)),
        _Y_LO,
        _Y_HI,
        tol,
    ).value.real
    return complex(plus), complex(epsilon_f * minus)


def phi_asymptotic(
    x: float, tf: VoronoiTestFunction, J: int, coeffs: list, tol: float = 1e-11
) -> complex:
    """Truncated large-argument expansion of Phi through order J.

    x^{-1/4} sum_{j<=J} x^{-j/2} int h(y) y^{-1/4-j/2} (c_j e(2 sqrt(xy))
    + d_j e(-2 sqrt(xy))) dy with (c_j, d_j) from hankel_coefficients.
    The omitted remainder is O(x^{-J/2-3/4}).
    """
    if x < 10.0:
        raise DomainError("phi_asymptotic requires x >= 10")
    if J < 0 or J >= len(coeffs):
        raise DomainError("need 0 <= J < len(coeffs)")
    h = tf.h
    total = 0.0 + 0.0j
    for j in range(J + 1):
        c, d = coeffs[j]
        power = -0.25 - 0.5 * j
        I = OscillatoryIntegral(
            amplitude=lambda y, p=power: h(y) * np.where(y > 0, y, 1.0) ** p,
            phase=lambda y: _FOUR_PI * np.sqrt(x * y),
            dphase=lambda y: _TWO_PI * np.sqrt(x / y),
            support=(_Y_LO, _Y_HI),
        )
        val = complex(integrate_oscillatory(I, tol).value)
        # the conjugate-phase partner of a real amplitude is the conjugate
        total += (c * val + d * val.conjugate()) * x ** (-0.5 * j)
    return x**-0.25 * total


# ----------------------------------------------------------------------------
# Certified check of the summation identity.


@lru_cache(maxsize=8)
def _divisor_table(size: int) -> np.ndarray:
    return divisor_counts(size)


def _tail_certificate(x_dual: np.ndarray, phi_abs: np.ndarray, N: float, q: int) -> float:
    """Certified bound on the dropped dual tail, via a fitted envelope.

    |Phi| decays like exp(alpha - beta x^{1/4}) for weights of this class;
    the envelope is fitted to binned maxima over the upper half of the
    computed range, inflated by a factor 10, and summed against the
    divisor bound for the coefficients. Raises TailBudgetError when no
    decaying envelope can be certified.
    """
    u = x_dual**0.25
    # the shared quadrature rule bottoms out near 1e-15 in absolute terms
    # (unit-size integrand); fit only where the transform is resolved
    noise = 1e-15
    sel = phi_abs > noise
    if sel.sum() < 8:
        raise TailBudgetError("too few dual terms to certify an envelope")
    ur, vr = u[sel], np.log(phi_abs[sel])
    mid = 0.5 * (ur[0] + ur[-1])
    keep = ur >= mid
    ub, vb = ur[keep], vr[keep]
    edges = np.linspace(ub[0], ub[-1] + 1e-12, 9)
    pts = []
    for a, b in zip(edges[:-1], edges[1:]):
        m = (ub >= a) & (ub < b)
        if m.any():
            pts.append((0.5 * (a + b), vb[m].max()))
    if len(pts) < 4:
        raise TailBudgetError("envelope fit needs at least 4 occupied bins")
    pu = np.array([p[0] for p in pts])
    pv = np.array([p[1] for p in pts])
    beta, alpha = np.polyfit(pu, pv, 1)
    if beta >= 0.0:
        raise TailBudgetError("no certified decay of the dual transform")
    m0 = x_dual.size
    scale = N / q**2
    # beyond the point where the envelope reaches ~1e-22 nothing can move
    # any budget this module certifies against
    n_end = int(((alpha + 51.0) / (-beta)) ** 4 / scale) + 2
    n_end = min(max(n_end, m0 + 2), m0 + 10**7)
    n = np.arange(m0 + 1, n_end + 1)
    env = 10.0 * np.exp(alpha + beta * (n * scale) ** 0.25)
    dtab = _divisor_table(1 << max(10, n_end.bit_length()))
    return (N / q) * float(np.sum(dtab[n] * env))


def voronoi_verify(
    form: HolomorphicForm,
    tf: VoronoiTestFunction,
    a: int,
    q: int,
    M_dual: int | None = None,
    tol: float = 1e-8,
):
    """Both sides of the summation identity and their relative gap.

    LHS = Sum_n lambda(n) e(a n/q) h(n/N); RHS = (N/q) Sum_{n <= M_dual}
    lambda(n) e(-abar n/q) Phi(n N/q^2) plus a certified bound on the
    dropped tail (divisor bound on the coefficients times a fitted decay
    envelope of Phi). When M_dual is omitted it is doubled from 64 until
    the certified tail is below tol times the sum scale; a tail that
    cannot be brought below budget raises TailBudgetError.

    Returns (lhs, rhs, rel_gap).
    """
    if q < 1:
        raise DomainError("voronoi_verify requires q >= 1")
    if math.gcd(a, q) != 1:
        raise DomainError("voronoi_verify requires gcd(a, q) = 1")
    if not isinstance(form, HolomorphicForm):
        raise DomainError("voronoi_verify supports holomorphic eigenforms")
    N = tf.N
    n_hi = int(_Y_HI * N)
    if form.M < n_hi:
        raise DomainError(f"form table too short: need coefficients to {n_hi}")
    n = np.arange(1, n_hi + 1)
    lhs = complex(
        np.sum(
            form.lam[n]
            * np.exp(2j * math.pi * a * n / q)
            * np.asarray(tf.h(n / N), dtype=float)
        )
    )

    abar = pow(a % q, -1, q) if q > 1 else 0
    scale = N / q**2

    if M_dual is not None and M_dual > form.M:
        raise DomainError("M_dual exceeds the form's coefficient table")
    cap = form.M if M_dual is None else int(M_dual)
    floor = tol * max(abs(lhs), 1e-3)

    # accumulate the dual sum in doubling blocks, certifying the dropped
    # tail from the fitted decay envelope after each one
    m_done = 0
    target = cap if M_dual is not None else 64
    rhs = 0.0 + 0.0j
    xd_parts, pa_parts = [], []
    tail = math.inf
    while True:
        hi = min(target, cap)
        nd = np.arange(m_done + 1, hi + 1)
        phi = _phi_holomorphic_grid(nd * scale, tf, form.weight)
        twist = np.exp(-2j * math.pi * abar * nd / q)
        rhs += (N / q) * complex(np.sum(form.lam[nd] * twist * phi))
        xd_parts.append(nd * scale)
        pa_parts.append(np.abs(phi))
        m_done = hi
        try:
            tail = _tail_certificate(
                np.concatenate(xd_parts), np.concatenate(pa_parts), N, q
            )
        except TailBudgetError:
            tail = math.inf
        if M_dual is not None or tail <= floor or m_done >= cap:
            break
        target = 2 * target if target < 512 else int(1.5 * target)
    if tail > tol * max(abs(lhs), abs(rhs), 1e-3):
        raise TailBudgetError(
            f"certified dual tail {tail:.3e} exceeds budget at M_dual = {m_done}"
        )
    rel_gap = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return lhs, rhs, rel_gap


# ----------------------------------------------------------------------------
# The phase-carrying transform Psi.

#: support window of the phase-carrying weight, in the squared variable
_V_KNOTS = (1.0, 1.3, 1.7, 2.0)


def _v_window(v):
    """The plateau weight V of the phase-carrying sum."""
    return plateau(v, *_V_KNOTS)


def psi_regime_classify(B: float, T1: float, T2: float) -> str:
    """Which of the three treatments of Psi applies at (B, T1, T2).

    small-B when B <= |T2|/10 (stationary-phase asymptotic), large-B when
    B >= 10 T1 (second-derivative bound), middle-B in between (first-
    derivative bounds); the factor-10 margins keep every classification a
    decade away from the regime boundary it relies on.
    """
    if not (T1 > 0.0 and T2 != 0.0 and abs(T2) <= T1):
        raise DomainError("require T1 >= |T2| > 0")
    if not B > 0.0:
        raise DomainError("require B > 0")
    if B <= abs(T2) / 10.0:
        return "small-B"
    if B >= 10.0 * T1:
        return "large-B"
    return "middle-B"


def psi_mellin(
    x: float,
    phase_params: tuple,
    mu: float,
    sigma: float,
    *,
    sign: int = 1,
    phase_sign: int = 1,
    tol: float = 1e-7,
    atol: float = 0.0,
) -> complex:
    """Psi^{sign}(x) by direct integration on the shifted Mellin line.

    phase_params = (N, n, q, t) fixes the weight (v/N)^{-it} V(v/N)
    e(phase_sign * 2 sqrt(n v)/q) of the sum being dualized; the dual
    side carries both phase signs and conjugation maps one onto the
    other: conj(Psi(t)) equals Psi at (-t) with phase_sign flipped.
    B = 2 sqrt(nN)/q.
    After the substitution v = N y^2 the transform reads

        Psi = (1/2 pi^2) int (pi^2 N x)^{-sigma - i tau + i t}
              gamma^{sign}(sigma + i tau - i t) phi_sigma(tau) dtau,
        phi_sigma(tau) = int V(y^2) y^{-2 sigma - 1}
              exp(i (2 pi B y - 2 tau log y)) dy,

    and the tau-line is truncated to a window [-0.3 pi B, 3 pi B] holding
    the region tau ~ pi B where the inner integral has its stationary
    point. The window must straddle the origin: at desk scale the two
    sides of tau = 0 carry near-cancelling mass whenever x sits away from
    the resonant size, and cutting at 0+ would report the uncancelled
    half. Truncation is validated by consistency: both ends are doubled
    until two successive evaluations agree to a relative 1e-3 or to the
    absolute tolerance atol (times 2 pi^2, i.e. atol refers to the
    returned value), and RegimeError is raised if they never do. Callers
    probing size bounds of a transform that is itself tiny should set
    atol to the resolution they need.
    """
    N, n, q, t = (float(v) for v in phase_params)
    if not (N > 0.0 and n > 0.0 and q >= 1.0 and x > 0.0):
        raise DomainError("psi_mellin requires positive N, n, x and q >= 1")
    if not sigma > -1.0:
        raise DomainError("psi_mellin requires sigma > -1")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if phase_sign not in (1, -1):
        raise DomainError("phase_sign must be +1 or -1")
    if not mu >= 0.0:
        raise DomainError("psi_mellin requires mu >= 0")
    B = 2.0 * math.sqrt(n * N) / q
    if B < 10.0:
        raise DomainError("psi_mellin requires B >= 10")
    idx = 0 if sign == 1 else 1
    y_lo, y_hi = 1.0, math.sqrt(2.0)
    log_nx = math.log(math.pi**2 * N * x)

    def run(tau_lo, tau_hi):
        tau_abs = max(abs(tau_lo), abs(tau_hi))
        span_phase = _TWO_PI * B * (y_hi - y_lo) + 2.0 * tau_abs * math.log(y_hi)
        panels = max(24, int(span_phase / 5.0) + 8)
        y, w = _composite_gl(y_lo, y_hi, panels)
        cvec = (
            w
            * _v_window(y * y)
            * y ** (-2.0 * sigma - 1.0)
            * np.exp(2j * math.pi * B * y * phase_sign)
        )
        logy = np.log(y)

        def integrand(tau):
            tau = np.atleast_1d(np.asarray(tau, dtype=float))
            out = np.empty(tau.size, dtype=complex)
            for lo in range(0, tau.size, 512):
                blk = tau[lo : lo + 512]
                phi = np.exp(-2j * np.outer(blk, logy)) @ cvec
                gam = np.array(
                    [gamma_factor(sigma + 1j * (tv - t), mu)[idx] for tv in blk]
                )
                pref = np.exp((-sigma - 1j * blk + 1j * t) * log_nx)
                out[lo : lo + 512] = pref * gam * phi
            return out

        return integrand

    def evaluate(tau_lo, tau_hi):
        integrand = run(tau_lo, tau_hi)
        step = max(1.0, (tau_hi - tau_lo) / 1024.0)
        bks = np.arange(tau_lo + step, tau_hi, step)
        res = integrate_adaptive(
            integrand, tau_lo, tau_hi, tol, breakpoints=bks, budget=2**17
        )
        probe = np.abs(integrand(np.linspace(tau_lo, tau_hi, 65)))
        return complex(res.value), float(probe.max()) * (tau_hi - tau_lo)

    if phase_sign == 1:
        lo, hi = -0.3 * math.pi * B, 3.0 * math.pi * B
    else:
        lo, hi = -3.0 * math.pi * B, 0.3 * math.pi * B
    prev, trivial = evaluate(lo, hi)
    for _ in range(4):
        lo, hi = 2.0 * lo, 2.0 * hi
        value, triv2 = evaluate(lo, hi)
        trivial = max(trivial, triv2)
        floor = 2.0 * math.pi**2 * atol
        if abs(value - prev) <= max(1e-3 * abs(value), floor, 1e-10 * trivial):
            return value / (2.0 * math.pi**2)
        prev = value
    raise RegimeError("support detection failed: integrand alive at the cut")


# ----------------------------------------------------------------------------
# Stationary point of the Psi phase and its graded expansion.


@dataclasses.dataclass(frozen=True)
class PhaseExpansion:
    """Stationary-point data of the Psi phase at (B, T1, T2, x, N).

    tau_star solves tau = tau0 sqrt((1 - B tau/T1)(1 - B tau/T2)) with
    tau0 = sqrt(T1 |T2| / (4 N x)); tau_series[j] holds the order-j graded
    correction (tau_star ~ sum_j tau_series[j], the j-th term of size
    (B/|T2|)^j tau0^{j+1}), and g_coeffs[j] the matching coefficients of
    the phase value series, with g_coeffs[0] = 2 identically.
    """

    B: float
    T1: float
    T2: float
    K: int
    tau0: float
    tau_star: float
    tau_series: np.ndarray
    g_coeffs: np.ndarray

    def __post_init__(self):
        arg = (1.0 - self.B * self.tau_star / self.T1) * (
            1.0 - self.B * self.tau_star / self.T2
        )
        if arg <= 0.0:
            raise InvariantError("stationary point left the admissible branch")
        res = abs(self.tau_star - self.tau0 * math.sqrt(arg))
        if res > 1e-10 * max(self.tau0, 1.0):
            raise InvariantError(f"stationary-point residual {res:.3e} too large")
        if abs(self.g_coeffs[0] - 2.0) > 1e-12:
            raise InvariantError("leading phase coefficient must equal 2")


def expand_stationary_point(
    B: float, T1: float, T2: float, x: float, N: float, K: int
) -> PhaseExpansion:
    """Solve for the stationary point and expand it in powers of B/T.

    The fixed point tau = tau0 sqrt((1 - B tau/T1)(1 - B tau/T2)) is
    iterated with damping 1/2 from the seed tau0 (at most 50 steps,
    residual 1e-12). The graded series carries one array entry per total
    power of (B/T1, B/T2); truncated products of the same fixed point in
    that arithmetic give tau_series, and substituting it into the phase
    value sum_m ((B/T1)^m + (B/T2)^m) tau^{m+1} / (m+1) gives g_coeffs.
    """
    if not (T1 > 0.0 and T2 != 0.0 and abs(T2) <= T1):
        raise DomainError("require T1 >= |T2| > 0")
    if B < 0.0 or K < 0 or not (x > 0.0 and N > 0.0):
        raise DomainError("require B >= 0, K >= 0, x > 0, N > 0")
    tau0 = math.sqrt(T1 * abs(T2) / (4.0 * N * x))

    ts = tau0
    for _ in range(50):
        arg = (1.0 - B * ts / T1) * (1.0 - B * ts / T2)
        if arg <= 0.0:
            raise RegimeError("fixed point left the admissible branch")
        nxt = tau0 * math.sqrt(arg)
        if abs(nxt - ts) <= 1e-14 * tau0:
            ts = nxt
            break
        ts += 0.5 * (nxt - ts)
    arg = (1.0 - B * ts / T1) * (1.0 - B * ts / T2)
    if arg <= 0.0 or abs(ts - tau0 * math.sqrt(arg)) > 1e-12 * max(tau0, 1.0):
        raise NonConvergenceError("stationary-point iteration did not converge")

    # graded arithmetic: index = total power of (B/T1, B/T2)
    y1, y2 = B / T1, B / T2

    def mul(p, r):
        return np.convolve(p, r)[: K + 1]

    def sqrt1m(c):
        out = np.zeros(K + 1)
        out[0] = 1.0
        term = np.zeros(K + 1)
        term[0] = 1.0
        coef = 1.0
        for m in range(1, K + 1):
            term = mul(term, c)
            coef *= (0.5 - (m - 1)) / m
            out += coef * (-1.0) ** m * term
        return out

    tser = np.zeros(K + 1)
    tser[0] = tau0
    for _ in range(K + 1):
        c1 = np.concatenate([[0.0], (y1 * tser)[:K]])
        c2 = np.concatenate([[0.0], (y2 * tser)[:K]])
        tser = tau0 * mul(sqrt1m(c1), sqrt1m(c2))

    acc = np.zeros(K + 1)
    tp = tser.copy()
    for m in range(K + 1):
        cm = (y1**m + y2**m) / (m + 1.0)
        acc[m:] += cm * tp[: K + 1 - m]
        if m < K:
            tp = mul(tp, tser)
    g = acc / tau0 ** (np.arange(K + 1) + 1.0)

    return PhaseExpansion(
        B=float(B),
        T1=float(T1),
        T2=float(T2),
        K=int(K),
        tau0=tau0,
        tau_star=ts,
        tau_series=tser,
        g_coeffs=g,
    )


def psi_asymptotic(x: float, params: tuple, K: int, *, sign: int = 1) -> complex:
    """Stationary-phase evaluation of Psi^{sign} in the small-B regime.

    params = (N, n, q, T1, T2); B = 2 sqrt(nN)/q must stay well below
    |T2|, and the stationary point must land inside the weight's support
    (tau0 within the matching window), else RegimeError. The fast phase is
    evaluated through the graded series of expand_stationary_point
    truncated at order K:

        Psi ~ (1/2 pi^2) A(tau) sqrt(2 pi/|P''(tau)|)
              exp(i (-T1 log(T1/2e) - T2 log(|T2|/2e)
                     + B sum_j g_j tau0^{j+1} +- pi/4)),

    where tau = B tau_star and A collects the slowly varying factors: the
    exact gamma factor divided by its unimodular oscillation, the window
    amplitude of the inner stationary point, and (pi^2 N x)^{1/2 + i t}.
    """
    N, n, q, T1, T2 = (float(v) for v in params)
    if not (N > 0.0 and n > 0.0 and q >= 1.0 and x > 0.0):
        raise DomainError("psi_asymptotic requires positive N, n, x and q >= 1")
    if not (T1 > 0.0 and T2 != 0.0 and abs(T2) <= T1):
        raise DomainError("require T1 >= |T2| > 0")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if K < 0:
        raise DomainError("K must be >= 0")
    B = 2.0 * math.sqrt(n * N) / q
    if B > abs(T2) / 2.0:
        raise RegimeError("asymptotic form requires B well below |T2|")
    t = 0.5 * (T1 + T2)
    mu = 0.5 * (T1 - T2)
    pe = expand_stationary_point(B, T1, T2, x, N, K)
    if not (0.5 * math.pi <= pe.tau0 <= 4.0 * math.pi):
        raise RegimeError("length mismatch: stationary point outside the window")
    tau = B * pe.tau_star

    d2 = 1.0 / (tau - T1) + 1.0 / (tau - T2) - 2.0 / tau
    gam = gamma_factor(-0.5 + 1j * (tau - t), mu)[0 if sign == 1 else 1]
    osc = oscillatory_phase_factor(tau - T1, tau - T2)
    u = tau / (math.pi * B)
    v_nat = math.sqrt(math.pi) * _v_window(u * u) * u * cmath.exp(0.25j * math.pi)
    amp = (
        cmath.exp((0.5 + 1j * t) * math.log(math.pi**2 * N * x))
        * (gam / osc)
        * tau**-0.5
        * v_nat
    )
    e = math.e
    phase = (
        -T1 * math.log(T1 / (2.0 * e))
        - T2 * math.log(abs(T2) / (2.0 * e))
        + B * float(np.sum(pe.g_coeffs * pe.tau0 ** (np.arange(K + 1) + 1.0)))
    )
    return (
        amp
        * math.sqrt(_TWO_PI / abs(d2))
        * cmath.exp(1j * (phase + math.copysign(0.25 * math.pi, d2)))
        / (2.0 * math.pi**2)
    )
