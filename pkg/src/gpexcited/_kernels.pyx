# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot-loop kernels.

Radial shooting integrators for u'' + u'/r = c (u - |u|^q u) with c = 2/q,
plus the 5-point Dirichlet Laplacian.  The shooting loop is strictly
sequential (millions of RK steps per bisection sweep), which is why it lives
here; see _kernels_py.py for the interchangeable pure-Python implementation.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow

cnp.import_array()

# trajectory outcome codes shared with the fallback backend
CROSSED = 1      # u went negative: u(0) too large
TURNED = 0       # u' became positive while u > 0: u(0) too small
UNDECIDED = 2    # reached r_cap without either event
DECAYED = 3      # trajectory stopping: u fell below the stop fraction


cdef inline double _rhs_v(double r, double u, double v, double c, double q) noexcept nogil:
    # odd extension |u|^q u keeps the RHS smooth across transient negatives
    return -v / r + c * (u - pow(fabs(u), q) * u)


cdef inline void _series_start(double q, double u0, double r1,
                               double* u_out, double* v_out) noexcept nogil:
    # regularized origin: u(r) = u0 + a2 r^2 + a4 r^4 with u'(0) = 0
    cdef double c = 2.0 / q
    cdef double f0 = c * (u0 - pow(u0, q + 1.0))
    cdef double fp = c * (1.0 - (q + 1.0) * pow(u0, q))
    cdef double a2 = 0.25 * f0
    cdef double a4 = fp * a2 / 16.0
    u_out[0] = u0 + a2 * r1 * r1 + a4 * r1 * r1 * r1 * r1
    v_out[0] = 2.0 * a2 * r1 + 4.0 * a4 * r1 * r1 * r1


cdef inline void _step_rk4(double r, double dr, double* u, double* v,
                           double c, double q) noexcept nogil:
    cdef double u0 = u[0], v0 = v[0]
    cdef double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v
    k1u = v0
    k1v = _rhs_v(r, u0, v0, c, q)
    k2u = v0 + 0.5 * dr * k1v
    k2v = _rhs_v(r + 0.5 * dr, u0 + 0.5 * dr * k1u, k2u, c, q)
    k3u = v0 + 0.5 * dr * k2v
    k3v = _rhs_v(r + 0.5 * dr, u0 + 0.5 * dr * k2u, k3u, c, q)
    k4u = v0 + dr * k3v
    k4v = _rhs_v(r + dr, u0 + dr * k3u, k4u, c, q)
    u[0] = u0 + dr / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    v[0] = v0 + dr / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)


cdef inline void _step_rk2(double r, double dr, double* u, double* v,
                           double c, double q) noexcept nogil:
    # explicit midpoint: second order, used by the independent check path
    cdef double u0 = u[0], v0 = v[0]
    cdef double k1u, k1v, k2u, k2v
    k1u = v0
    k1v = _rhs_v(r, u0, v0, c, q)
    k2u = v0 + 0.5 * dr * k1v
    k2v = _rhs_v(r + 0.5 * dr, u0 + 0.5 * dr * k1u, k2u, c, q)
    u[0] = u0 + dr * k2u
    v[0] = v0 + dr * k2v


def shoot_classify(double q, double u0, double dr, double r_cap, int order=4):
    """Integrate from u(0)=u0 and classify the trajectory.

    Returns (code, r_event) with code CROSSED, TURNED or UNDECIDED.
    """
    cdef double c = 2.0 / q
    cdef double r = dr
    cdef double u, v
    cdef double cap = 4.0 * u0
    cdef int code = 2
    _series_start(q, u0, dr, &u, &v)
    with nogil:
        while r < r_cap:
            if order == 4:
                _step_rk4(r, dr, &u, &v, c, q)
            else:
                _step_rk2(r, dr, &u, &v, c, q)
            r += dr
            if u < 0.0:
                code = 1
                break
            if v > 0.0 or u > cap:
                code = 0
                break
    if code == 2:
        r = r_cap
    return code, r


def shoot_trajectory(double q, double u0, double dr, double r_cap,
                     double u_stop_frac, int order=4):
    """Integrate from u(0)=u0 storing every step.

    Stops when u drops below u_stop_frac*u0, when the trajectory crosses or
    turns, or at r_cap.  Returns (r, u, v, code) with code DECAYED on the
    normal exit.
    """
    cdef double c = 2.0 / q
    cdef double u_stop = u_stop_frac * u0
    cdef Py_ssize_t n_max = <Py_ssize_t>(r_cap / dr) + 3
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r_arr = np.empty(n_max)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u_arr = np.empty(n_max)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v_arr = np.empty(n_max)
    cdef double[::1] rm = r_arr, um = u_arr, vm = v_arr
    cdef double r = dr
    cdef double u, v
    cdef Py_ssize_t n
    cdef int code = 2

    rm[0] = 0.0
    um[0] = u0
    vm[0] = 0.0
    _series_start(q, u0, dr, &u, &v)
    rm[1] = r
    um[1] = u
    vm[1] = v
    n = 2
    with nogil:
        while r < r_cap and n < n_max:
            if order == 4:
                _step_rk4(r, dr, &u, &v, c, q)
            else:
                _step_rk2(r, dr, &u, &v, c, q)
            r += dr
            rm[n] = r
            um[n] = u
            vm[n] = v
            n += 1
            if u < 0.0:
                code = 1
                break
            if v >= 0.0:
                code = 0
                break
            if u < u_stop:
                code = 3
                break
    return r_arr[:n], u_arr[:n], v_arr[:n], code


def laplacian_5pt(cnp.ndarray[cnp.float64_t, ndim=2] u, double hx, double hy):
    """5-point Laplacian with zero (Dirichlet) extension outside the array."""
    cdef Py_ssize_t ny = u.shape[0], nx = u.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((ny, nx))
    cdef double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy)
    cdef Py_ssize_t i, j
    cdef double ul, ur, ud, uu
    with nogil:
        for j in range(ny):
            for i in range(nx):
                ul = u[j, i - 1] if i > 0 else 0.0
                ur = u[j, i + 1] if i < nx - 1 else 0.0
                ud = u[j - 1, i] if j > 0 else 0.0
                uu = u[j + 1, i] if j < ny - 1 else 0.0
                out[j, i] = ((ul - 2.0 * u[j, i] + ur) * ihx2
                             + (ud - 2.0 * u[j, i] + uu) * ihy2)
    return out
