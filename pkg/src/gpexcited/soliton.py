"""Radial shooting for the scalar-field profiles and their constants.

Solves u'' + u'/r = (2/q)(u - u^{q+1}) on r > 0 with u'(0) = 0 and u -> 0,
whose unique positive decreasing solution is the soliton profile behind all
scaling constants in this package (for q = 2 it is the cubic ground state).
Shooting classifies trajectories by u(0): too large and u crosses zero, too
small and it turns upward; bisection isolates the separatrix.  The computed
trajectory is trusted down to a small fraction of u(0) (beyond that the
unstable mode amplifies the bisection error) and continued with the fitted
exponential tail.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicHermiteSpline

from . import kernels
from .errors import BadTail, DomainError, NoConvergence, NonBracketed, UnderResolved
from .fields import Field2D

_BRACKET_LO = 1.01
_BRACKET_HI_MAX = 60.0
_TAIL_FLOOR = 1e-9      # profiles are extended until u < 1e-9 u(0)
_STOP_FRAC = 1e-6       # trajectory kept while u > 1e-6 u(0)


@dataclass
class RadialProfile:
    """Radial solution on a uniform grid with an exponential tail.

    r, u, du sample the solution and its derivative from r = 0 out to where
    u < 1e-9 u0; decay = (C, delta) describes the appended tail
    u(r) = C exp(-delta r) for r beyond r_splice.
    """

    q: float
    r: np.ndarray
    u: np.ndarray
    du: np.ndarray
    u0: float
    decay: tuple
    r_splice: float
    dr: float

    def __post_init__(self):
        self._spline = None

    @property
    def r_max(self):
        return float(self.r[-1])

    def _interp(self):
        if self._spline is None:
            self._spline = CubicHermiteSpline(self.r, self.u, self.du)
        return self._spline

    def value(self, r):
        """Profile at radii r (arrays ok); tail formula beyond the grid."""
        r = np.abs(np.asarray(r, dtype=float))
        out = np.where(r <= self.r_max, self._interp()(np.minimum(r, self.r_max)), 0.0)
        c, delta = self.decay
        far = r > self.r_max
        if np.any(far):
            out = np.where(far, c * np.exp(-delta * r), out)
        return out

    def derivative(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        out = np.where(r <= self.r_max,
                       self._interp().derivative()(np.minimum(r, self.r_max)), 0.0)
        c, delta = self.decay
        far = r > self.r_max
        if np.any(far):
            out = np.where(far, -delta * c * np.exp(-delta * r), out)
        return out


@dataclass(frozen=True)
class SolitonConstants:
    """Scalar-field integrals that control every scaling law downstream.

    norm2_sq      squared L2 norm of the q-profile
    a_q_star      norm2_sq**(q/2), the critical coupling scale at exponent q
    a_star        squared L2 norm of the q=2 profile (critical mass)
    grad_sq       squared L2 norm of the gradient
    pot_q2        integral of u^{q+2}
    second_moment integral of |x|^2 u^2 / norm2_sq for the q=2 profile
    """

    q: float
    norm2_sq: float
    a_q_star: float
    a_star: float
    grad_sq: float
    pot_q2: float
    second_moment: float

    @property
    def pohozaev_residuals(self):
        """Relative defects of grad_sq = norm2_sq = (2/(q+2)) pot_q2."""
        r1 = abs(self.grad_sq - self.norm2_sq) / self.norm2_sq
        r2 = abs(self.norm2_sq - 2.0 / (self.q + 2.0) * self.pot_q2) / self.norm2_sq
        return r1, r2


def shoot_soliton(q, tol=1e-13, dr=1e-3, r_cap=40.0, order=4):
    """Shoot for the positive decreasing profile at exponent q in [2, 4].

    tol is the bisection tolerance on u(0); dr the RK step; order selects the
    integrator (4 = classical RK4, 2 = explicit midpoint, kept as the
    independent cross-check path).
    """
    if not 2.0 <= q <= 4.0:
        raise DomainError(f"shooting exponent q={q} outside [2, 4]")
    if tol <= 0:
        raise DomainError("bisection tolerance must be positive")

    lo, hi = _BRACKET_LO, 3.0
    code_lo, _ = kernels.shoot_classify(q, lo, dr, r_cap, order)
    if code_lo != kernels.TURNED:
        raise NonBracketed(f"q={q}: lower shot u0={lo} did not turn upward")
    while True:
        code_hi, _ = kernels.shoot_classify(q, hi, dr, r_cap, order)
        if code_hi == kernels.CROSSED:
            break
        hi *= 1.5
        if hi > _BRACKET_HI_MAX:
            raise NonBracketed(f"q={q}: no crossing trajectory below u0={_BRACKET_HI_MAX}")

    iters = 0
    while hi - lo > tol:
        iters += 1
        if iters > 200:
            raise NoConvergence(f"q={q}: bisection stalled at width {hi - lo:g}")
        mid = 0.5 * (lo + hi)
        code, _ = kernels.shoot_classify(q, mid, dr, r_cap, order)
        if code == kernels.CROSSED:
            hi = mid
        else:
            lo = mid
    u0 = 0.5 * (lo + hi)

    r, u, du, code = kernels.shoot_trajectory(q, u0, dr, r_cap, _STOP_FRAC, order)
    if code != kernels.DECAYED:
        raise NoConvergence(
            f"q={q}: separatrix trajectory lost before the stop fraction "
            f"(code {code}); decrease dr or loosen tol")
    return _attach_tail(q, r, u, du, u0, dr)


def _attach_tail(q, r, u, du, u0, dr):
    """Fit the decay rate on the clean tail window and extend the grid."""
    window = (u <= 1e-3 * u0) & (u >= _STOP_FRAC * u0)
    if np.count_nonzero(window) < 20:
        raise BadTail(f"q={q}: fewer than 20 points in the tail fit window")
    delta = -np.polyfit(r[window], np.log(u[window]), 1)[0]
    if delta <= 0:
        raise BadTail(f"q={q}: fitted decay rate {delta:g} not positive")
    r_splice = r[-1]
    c = u[-1] * np.exp(delta * r_splice)

    n_ext = int(np.ceil(max(0.0, np.log(u[-1] / (_TAIL_FLOOR * u0)) / delta) / dr)) + 1
    r_ext = r_splice + dr * np.arange(1, n_ext + 1)
    u_ext = c * np.exp(-delta * r_ext)
    return RadialProfile(
        q=q,
        r=np.concatenate([r, r_ext]),
        u=np.concatenate([u, u_ext]),
        du=np.concatenate([du, -delta * u_ext]),
        u0=u0,
        decay=(float(c), float(delta)),
        r_splice=float(r_splice),
        dr=dr,
    )


def decay_fit(profile, window=0.25):
    """Least-squares exponential fit log u = log C - delta r on the tail.

    Uses the trailing `window` fraction of the grid (at least 20 points with
    values above underflow).  Raises BadTail when the log-linear residual is
    large, i.e. the tail is not exponential.
    """
    n = len(profile.r)
    sel = slice(int((1.0 - window) * n), n)
    r, u = profile.r[sel], profile.u[sel]
    keep = u > 1e-300
    r, u = r[keep], u[keep]
    if len(r) < 20:
        raise BadTail("tail region has fewer than 20 usable points")
    slope, intercept = np.polyfit(r, np.log(u), 1)
    delta, c = -slope, float(np.exp(intercept))
    resid = np.sqrt(np.mean((np.log(u) - (intercept + slope * r)) ** 2))
    if delta <= 0 or resid > 0.05:
        raise BadTail(f"tail not exponential: delta={delta:g}, rms residual={resid:.3g}")
    return c, float(delta)


def _radial_integral(profile, f):
    """2 pi * Simpson of f(r, u, du) * r over the stored grid."""
    vals = f(profile.r, profile.u, profile.du) * profile.r
    return 2.0 * np.pi * float(simpson(vals, x=profile.r))


def norm2_sq(profile):
    return _radial_integral(profile, lambda r, u, du: u * u)


def grad_sq(profile):
    return _radial_integral(profile, lambda r, u, du: du * du)


def lp_radial(profile, p):
    return _radial_integral(profile, lambda r, u, du: u ** p)


def second_moment(profile):
    n2 = norm2_sq(profile)
    m2 = _radial_integral(profile, lambda r, u, du: u * u * r * r)
    return m2 / n2


def soliton_constants(profile, profile_q2):
    """Bundle the constants derived from the q-profile and the q=2 profile."""
    n2 = norm2_sq(profile)
    return SolitonConstants(
        q=profile.q,
        norm2_sq=n2,
        a_q_star=n2 ** (profile.q / 2.0),
        a_star=norm2_sq(profile_q2),
        grad_sq=grad_sq(profile),
        pot_q2=lp_radial(profile, profile.q + 2.0),
        second_moment=second_moment(profile_q2),
    )


def h1_distance(p1, p2):
    """H1 norm of the difference of two radial profiles."""
    r = p1.r if p1.r_max <= p2.r_max else p2.r
    du = p1.value(r) - p2.value(r)
    dv = p1.derivative(r) - p2.derivative(r)
    val = 2.0 * np.pi * (simpson(du * du * r, x=r) + simpson(dv * dv * r, x=r))
    return float(np.sqrt(val))


def h1_norm(profile):
    return float(np.sqrt(norm2_sq(profile) + grad_sq(profile)))


def tau_q(a, consts):
    """Blow-up scale (2 a_q* / (q a))^(1/(q-2)); diverges as q -> 2+."""
    if consts.q <= 2.0:
        raise DomainError("tau is defined for q > 2 only")
    if not 0.0 < a < consts.a_star:
        raise DomainError(
            f"coupling a={a:g} outside (0, a*) with a*={consts.a_star:g}")
    return (2.0 * consts.a_q_star / (consts.q * a)) ** (1.0 / (consts.q - 2.0))


def c_tilde_q(a, consts):
    """Untapped saddle level ((q-2)/(2q)) tau^2 of the coupling a."""
    t = tau_q(a, consts)
    return (consts.q - 2.0) / (2.0 * consts.q) * t * t


def rescaled_soliton(profile, a, center, grid, consts=None, scale=None):
    """Sample (tau/||u||_2) u(tau (x - center)) onto a 2D grid.

    The result has unit mass up to interpolation error.  `scale` overrides
    the blow-up factor tau (used by the dilation paths); `consts` saves the
    recomputation of the profile norms.
    """
    if consts is None:
        n2 = norm2_sq(profile)
        tau = scale
        if tau is None:
            raise DomainError("either consts (for tau) or an explicit scale is required")
    else:
        n2 = consts.norm2_sq
        tau = tau_q(a, consts) if scale is None else scale
    core = 1.0 / tau
    if core < 8.0 * max(grid.hx, grid.hy):
        raise UnderResolved(
            f"core width {core:.3g} under-resolved by grid spacing "
            f"{max(grid.hx, grid.hy):.3g} (need >= 8 points)")
    X, Y = grid.meshgrid()
    rr = tau * np.hypot(X - center[0], Y - center[1])
    vals = (tau / np.sqrt(n2)) * profile.value(rr)
    return Field2D(grid, vals)
