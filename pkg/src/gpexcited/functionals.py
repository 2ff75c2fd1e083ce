"""Trapped energy, sphere-tangent gradient and dilation functionals.

Everything here shares the quadrature and the adjoint-consistent
gradient/Laplacian pair from fields.py, so the algebraic identities between
the energy, its constrained gradient and the dilation functional close to
rounding on the discrete level, not just up to discretization error.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import NoConvergence
from .fields import (Field2D, dot, ellipse_norm, grad_norm_sq, laplacian,
                     lp_power, mass, potential_grid, radial_scale_grid)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy split: total = kinetic + potential - interaction."""

    kinetic: float
    potential: float
    interaction: float

    @property
    def total(self):
        return self.kinetic + self.potential - self.interaction


def energy(u, params, vzero=False):
    """Trapped energy 1/2 |grad u|^2 + 1/2 V u^2 - a/(q+2) |u|^{q+2}.

    Defined for any field (unit mass is not required); vzero drops the trap
    term, giving the free functional used by the scaling identities.
    """
    kin = 0.5 * grad_norm_sq(u)
    if vzero:
        pot = 0.0
    else:
        V = potential_grid(u.grid, params)
        pot = 0.5 * float(np.sum(V * u.values * u.values)) * u.grid.weight
    inter = params.a / (params.q + 2.0) * lp_power(u, params.q + 2.0)
    return EnergyBreakdown(kin, pot, inter)


def euler_lagrange_residual(u, mu, params, vzero=False):
    """-lap u + V u - a |u|^q u - mu u on the grid nodes."""
    res = -laplacian(u).values
    if not vzero:
        res = res + potential_grid(u.grid, params) * u.values
    res = res - params.a * np.abs(u.values) ** params.q * u.values - mu * u.values
    return Field2D(u.grid, res)


def unconstrained_gradient(u, params, vzero=False):
    """g = -lap u + V u - a |u|^q u, the L2 gradient of the energy."""
    g = -laplacian(u).values
    if not vzero:
        g = g + potential_grid(u.grid, params) * u.values
    g = g - params.a * np.abs(u.values) ** params.q * u.values
    return Field2D(u.grid, g)


def tangent_gradient(u, params, vzero=False):
    """Sphere-projected gradient g - (<g,u>/<u,u>) u.

    Vanishes exactly at constrained critical points and is orthogonal to u
    in the discrete inner product for any input.
    """
    g = unconstrained_gradient(u, params, vzero)
    coef = dot(g, u) / mass(u)
    return Field2D(u.grid, g.values - coef * u.values)


def pohozaev_Q(u, params):
    """Dilation derivative of the trapped energy.

    Q(u) = |grad u|^2 - int |x|_b (|x|_b - A) u^2 - (q a/(q+2)) int |u|^{q+2},
    where the trap term is x . grad V / 2 evaluated analytically.  Vanishes
    at every constrained critical point.
    """
    ring = 0.5 * radial_scale_grid(u.grid, params)
    vterm = float(np.sum(ring * u.values * u.values)) * u.grid.weight
    inter = params.q * params.a / (params.q + 2.0) * lp_power(u, params.q + 2.0)
    return grad_norm_sq(u) - vterm - inter


def pohozaev_Qtilde(u, a, q):
    """Free-space dilation functional |grad u|^2 - (q a/(q+2)) int |u|^{q+2}."""
    return grad_norm_sq(u) - q * a / (q + 2.0) * lp_power(u, q + 2.0)


def gn_check(u, consts):
    """Interpolation-inequality ratio, <= 1 up to quadrature for all fields.

    rho(u) = int |u|^{q+2} / [ (q+2)/(2 a_q*) (int |grad u|^2)^{q/2} int u^2 ];
    equality holds exactly on the rescaled soliton family.
    """
    q = consts.q
    num = lp_power(u, q + 2.0)
    den = (q + 2.0) / (2.0 * consts.a_q_star) * grad_norm_sq(u) ** (q / 2.0) * mass(u)
    return num / den


def identity_321(u, params):
    """Both sides of the trap identity linking energy and dilation functional.

    lhs = (q-2)/2 |grad u|^2 + 1/2 int [q (|x|_b - A)^2 + 2 |x|_b (|x|_b - A)] u^2
    rhs = q * energy(u) - pohozaev_Q(u)

    An exact algebraic rearrangement on shared quadrature: lhs == rhs to
    rounding for every field.
    """
    q = params.q
    X, Y = u.grid.meshgrid()
    nb = ellipse_norm((X, Y), params.metric)
    bracket = q * (nb - params.A) ** 2 + 2.0 * nb * (nb - params.A)
    lhs = ((q - 2.0) / 2.0 * grad_norm_sq(u)
           + 0.5 * float(np.sum(bracket * u.values * u.values)) * u.grid.weight)
    rhs = q * energy(u, params).total - pohozaev_Q(u, params)
    return lhs, rhs


# -- discrete trap operator --------------------------------------------------

def neg_laplacian_matrix(grid):
    """Sparse CSR matrix of -laplacian with the Dirichlet zero frame."""
    def lap1d(n, h):
        main = np.full(n, 2.0 / h ** 2)
        off = np.full(n - 1, -1.0 / h ** 2)
        return sp.diags([off, main, off], [-1, 0, 1])

    ix = sp.identity(grid.nx)
    iy = sp.identity(grid.ny)
    return (sp.kron(iy, lap1d(grid.nx, grid.hx))
            + sp.kron(lap1d(grid.ny, grid.hy), ix)).tocsr()


def smallest_eigenvalue(grid, vdiag, tol=1e-6, max_iter=200):
    """Smallest eigenvalue of -lap + diag(v) by inverse power iteration.

    The operator is symmetric positive definite for v >= 0, so the smallest
    eigenvalue is the one nearest zero and plain inverse iteration with a
    single sparse factorization converges to it.
    """
    K = neg_laplacian_matrix(grid) + sp.diags(np.ravel(vdiag))
    lu = splu(K.tocsc())
    rng = np.random.default_rng(1234)
    z = rng.standard_normal(grid.nx * grid.ny)
    z /= np.linalg.norm(z)
    lam = None
    for _ in range(max_iter):
        z = lu.solve(z)
        z /= np.linalg.norm(z)
        lam_new = float(z @ (K @ z))
        if lam is not None and abs(lam_new - lam) <= tol * abs(lam_new):
            return lam_new
        lam = lam_new
    raise NoConvergence(f"inverse iteration stalled at eigenvalue {lam:g}")


def lambda1(grid, params, tol=1e-6):
    """First eigenvalue of -lap + V on the grid (trap comparison level)."""
    return smallest_eigenvalue(grid, potential_grid(grid, params), tol)
