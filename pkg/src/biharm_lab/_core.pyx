# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled radial integrator kernel.

Mirror of ``biharm_lab._core_py.radial_ivp`` (same Dormand-Prince 5(4) pair,
series start and node clamping); selected at import when the extension built.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, isfinite, pow, sqrt

cnp.import_array()

STATUS_OK = 0
STATUS_TOUCHED = 1
STATUS_FAILED = 2

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0


cdef inline bint _rhs(double r, double u, double du, double v, double dv,
                      double n, double q, double rexp, double* out) nogil:
    cdef double vr, uq, c
    if u <= 0.0 or v < 0.0:
        return 0
    vr = pow(v, rexp)
    uq = pow(u, -q)
    if not (isfinite(vr) and isfinite(uq)):
        return 0
    c = (n - 1.0) / r
    out[0] = du
    out[1] = vr - c * du
    out[2] = dv
    out[3] = -uq - c * dv
    return 1


def radial_ivp(int n, double q, double rexp, double u0, double v0,
               double h, int num_intervals, double rtol=1e-9, double atol=1e-12,
               double floor_frac=1e-8, long max_steps=20_000_000):
    """Integrate outward on the uniform grid r_i = i*h, i = 0..num_intervals.

    Returns (u, du, v, dv, status, i_stop, r_event); the arrays are valid
    through index i_stop.
    """
    cdef int N = num_intervals
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u_out = np.zeros(N + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] du_out = np.zeros(N + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v_out = np.zeros(N + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dv_out = np.zeros(N + 1)

    cdef double fl_u = floor_frac * u0
    cdef double fl_v = floor_frac * v0
    cdef double nd = <double> n

    u_out[0] = u0
    v_out[0] = v0

    cdef double uq0 = pow(u0, -q)
    cdef double vr0 = pow(v0, rexp) if v0 > 0.0 else 0.0
    cdef double au = vr0 / (2.0 * nd)
    cdef double av = -uq0 / (2.0 * nd)
    cdef double denom4 = 8.0 * nd * (nd + 2.0)
    cdef double bu = -rexp * pow(v0, rexp - 1.0) * uq0 / denom4 if v0 > 0.0 else 0.0
    cdef double bv = q * pow(u0, -q - 1.0) * vr0 / denom4

    cdef double r_start = min(h, 1e-2)
    cdef double r = r_start
    cdef double r2 = r * r
    cdef double u = u0 + au * r2 + bu * r2 * r2
    cdef double du = 2.0 * au * r + 4.0 * bu * r2 * r
    cdef double v = v0 + av * r2 + bv * r2 * r2
    cdef double dv = 2.0 * av * r + 4.0 * bv * r2 * r

    if u <= fl_u or v <= fl_v:
        return u_out, du_out, v_out, dv_out, STATUS_TOUCHED, 0, r
    cdef int i_next = 1
    if r_start == h:
        u_out[1] = u
        du_out[1] = du
        v_out[1] = v
        dv_out[1] = dv
        i_next = 2
        if i_next > N:
            return u_out, du_out, v_out, dv_out, STATUS_OK, N, r
    cdef int i_stop = i_next - 1

    cdef double dt_nat = 0.5 * min(h, 1e-3)
    cdef double dt_min = 1e-13 * max(h, 1.0)

    cdef double k1[4]
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef double k5[4]
    cdef double k6[4]
    cdef double k7[4]
    cdef double y[4]
    cdef double z[4]
    cdef double w[4]

    if not _rhs(r, u, du, v, dv, nd, q, rexp, k1):
        return u_out, du_out, v_out, dv_out, STATUS_FAILED, i_stop, r

    cdef long steps = 0
    cdef double r_target, dtc, err, e, sc, fac
    cdef bint clamped, ok_all
    cdef int j
    cdef bint near_u, near_v
    cdef int status

    y[0] = u; y[1] = du; y[2] = v; y[3] = dv

    while steps < max_steps:
        steps += 1
        r_target = i_next * h
        clamped = r + dt_nat >= r_target
        dtc = r_target - r if clamped else dt_nat

        for j in range(4):
            w[j] = y[j] + dtc * A21 * k1[j]
        ok_all = _rhs(r + A21 * dtc, w[0], w[1], w[2], w[3], nd, q, rexp, k2)
        if ok_all:
            for j in range(4):
                w[j] = y[j] + dtc * (A31 * k1[j] + A32 * k2[j])
            ok_all = _rhs(r + 0.3 * dtc, w[0], w[1], w[2], w[3], nd, q, rexp, k3)
        if ok_all:
            for j in range(4):
                w[j] = y[j] + dtc * (A41 * k1[j] + A42 * k2[j] + A43 * k3[j])
            ok_all = _rhs(r + 0.8 * dtc, w[0], w[1], w[2], w[3], nd, q, rexp, k4)
        if ok_all:
            for j in range(4):
                w[j] = y[j] + dtc * (A51 * k1[j] + A52 * k2[j] + A53 * k3[j] + A54 * k4[j])
            ok_all = _rhs(r + (8.0 / 9.0) * dtc, w[0], w[1], w[2], w[3], nd, q, rexp, k5)
        if ok_all:
            for j in range(4):
                w[j] = y[j] + dtc * (A61 * k1[j] + A62 * k2[j] + A63 * k3[j]
                                     + A64 * k4[j] + A65 * k5[j])
            ok_all = _rhs(r + dtc, w[0], w[1], w[2], w[3], nd, q, rexp, k6)
        if ok_all:
            for j in range(4):
                z[j] = y[j] + dtc * (B1 * k1[j] + B3 * k3[j] + B4 * k4[j]
                                     + B5 * k5[j] + B6 * k6[j])
            ok_all = _rhs(r + dtc, z[0], z[1], z[2], z[3], nd, q, rexp, k7)

        if ok_all:
            err = 0.0
            for j in range(4):
                e = dtc * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j]
                           + E5 * k5[j] + E6 * k6[j] + E7 * k7[j])
                sc = atol + rtol * max(fabs(y[j]), fabs(z[j]))
                err += (e / sc) * (e / sc)
            err = sqrt(err / 4.0)

            if err <= 1.0:
                r = r_target if clamped else r + dtc
                for j in range(4):
                    y[j] = z[j]
                    k1[j] = k7[j]
                if y[0] <= fl_u or y[2] <= fl_v:
                    return u_out, du_out, v_out, dv_out, STATUS_TOUCHED, i_stop, r
                if clamped:
                    u_out[i_next] = y[0]
                    du_out[i_next] = y[1]
                    v_out[i_next] = y[2]
                    dv_out[i_next] = y[3]
                    i_stop = i_next
                    i_next += 1
                    if i_next > N:
                        return u_out, du_out, v_out, dv_out, STATUS_OK, N, r
                else:
                    fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
                    dt_nat = dtc * fac
                continue
            fac = min(0.9, max(0.2, 0.9 * pow(err, -0.2)))
        else:
            fac = 0.2

        dt_nat = dtc * fac
        if dt_nat < dt_min:
            near_u = y[0] <= max(2.0 * fl_u, 1e-5 * u0)
            near_v = y[2] <= max(2.0 * fl_v, 1e-5 * v0)
            status = STATUS_TOUCHED if (near_u or near_v) else STATUS_FAILED
            return u_out, du_out, v_out, dv_out, status, i_stop, r

    return u_out, du_out, v_out, dv_out, STATUS_FAILED, i_stop, r
