"""Pure-Python/numpy fallback for the compiled kernels.

Same algorithms and signatures as _kernels.pyx, selected by
gpexcited.kernels when the extension is unavailable (or forced via
GP_EXCITED_KERNELS=python).  The shooting loops are plain Python and
roughly two orders of magnitude slower; see benchmarks/bench_kernels.py.
"""

import numpy as np

CROSSED = 1
TURNED = 0
UNDECIDED = 2
DECAYED = 3


def _rhs_v(r, u, v, c, q):
    return -v / r + c * (u - abs(u) ** q * u)


def _series_start(q, u0, r1):
    c = 2.0 / q
    f0 = c * (u0 - u0 ** (q + 1.0))
    fp = c * (1.0 - (q + 1.0) * u0 ** q)
    a2 = 0.25 * f0
    a4 = fp * a2 / 16.0
    u = u0 + a2 * r1 * r1 + a4 * r1 ** 4
    v = 2.0 * a2 * r1 + 4.0 * a4 * r1 ** 3
    return u, v


def _step_rk4(r, dr, u, v, c, q):
    k1u = v
    k1v = _rhs_v(r, u, v, c, q)
    k2u = v + 0.5 * dr * k1v
    k2v = _rhs_v(r + 0.5 * dr, u + 0.5 * dr * k1u, k2u, c, q)
    k3u = v + 0.5 * dr * k2v
    k3v = _rhs_v(r + 0.5 * dr, u + 0.5 * dr * k2u, k3u, c, q)
    k4u = v + dr * k3v
    k4v = _rhs_v(r + dr, u + dr * k3u, k4u, c, q)
    return (u + dr / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            v + dr / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v))


def _step_rk2(r, dr, u, v, c, q):
    k1u = v
    k1v = _rhs_v(r, u, v, c, q)
    k2u = v + 0.5 * dr * k1v
    k2v = _rhs_v(r + 0.5 * dr, u + 0.5 * dr * k1u, k2u, c, q)
    return u + dr * k2u, v + dr * k2v


def shoot_classify(q, u0, dr, r_cap, order=4):
    c = 2.0 / q
    step = _step_rk4 if order == 4 else _step_rk2
    cap = 4.0 * u0
    r = dr
    u, v = _series_start(q, u0, dr)
    while r < r_cap:
        u, v = step(r, dr, u, v, c, q)
        r += dr
        if u < 0.0:
            return CROSSED, r
        if v > 0.0 or u > cap:
            return TURNED, r
    return UNDECIDED, r_cap


def shoot_trajectory(q, u0, dr, r_cap, u_stop_frac, order=4):
    c = 2.0 / q
    step = _step_rk4 if order == 4 else _step_rk2
    u_stop = u_stop_frac * u0
    n_max = int(r_cap / dr) + 3
    r_arr = np.empty(n_max)
    u_arr = np.empty(n_max)
    v_arr = np.empty(n_max)
    r_arr[0], u_arr[0], v_arr[0] = 0.0, u0, 0.0
    r = dr
    u, v = _series_start(q, u0, dr)
    r_arr[1], u_arr[1], v_arr[1] = r, u, v
    n = 2
    code = UNDECIDED
    while r < r_cap and n < n_max:
        u, v = step(r, dr, u, v, c, q)
        r += dr
        r_arr[n], u_arr[n], v_arr[n] = r, u, v
        n += 1
        if u < 0.0:
            code = CROSSED
            break
        if v >= 0.0:
            code = TURNED
            break
        if u < u_stop:
            code = DECAYED
            break
    return r_arr[:n], u_arr[:n], v_arr[:n], code


def laplacian_5pt(u, hx, hy):
    out = np.zeros_like(u)
    ihx2 = 1.0 / (hx * hx)
    ihy2 = 1.0 / (hy * hy)
    out -= 2.0 * (ihx2 + ihy2) * u
    out[:, 1:] += ihx2 * u[:, :-1]
    out[:, :-1] += ihx2 * u[:, 1:]
    out[1:, :] += ihy2 * u[:-1, :]
    out[:-1, :] += ihy2 * u[1:, :]
    return out
