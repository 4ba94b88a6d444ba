# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched dyadic kernels; same contract as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, M_PI

cnp.import_array()

ctypedef double complex cplx

cdef double INV_FOUR_PI = 1.0 / (4.0 * M_PI)


cdef inline void _unit(const double[:, ::1] R, Py_ssize_t i, double* n, double* r) noexcept nogil:
    cdef double x = R[i, 0], y = R[i, 1], z = R[i, 2]
    r[0] = sqrt(x * x + y * y + z * z)
    n[0] = x / r[0]
    n[1] = y / r[0]
    n[2] = z / r[0]


cdef inline cplx _phase(double k, double r) noexcept nogil:
    return (cos(k * r) + 1j * sin(k * r)) * INV_FOUR_PI


cdef inline void _put_ab(cplx[:, :, ::1] out, Py_ssize_t i, const double* n,
                         cplx a, cplx b) noexcept nogil:
    # a * alpha + b * beta with alpha = I - nn, beta = I - 3nn
    cdef Py_ssize_t p, q
    cdef double nn, d
    for p in range(3):
        for q in range(3):
            nn = n[p] * n[q]
            d = 1.0 if p == q else 0.0
            out[i, p, q] = a * (d - nn) + b * (d - 3.0 * nn)


cdef inline void _add_cross(cplx[:, :, ::1] out, Py_ssize_t i, const double* u,
                            cplx c) noexcept nogil:
    out[i, 0, 1] += -c * u[2]
    out[i, 0, 2] += c * u[1]
    out[i, 1, 0] += c * u[2]
    out[i, 1, 2] += -c * u[0]
    out[i, 2, 0] += -c * u[1]
    out[i, 2, 1] += c * u[0]


cdef inline void _add_sym(cplx[:, :, ::1] out, Py_ssize_t i, const double* n,
                          const double* u, cplx c) noexcept nogil:
    cdef Py_ssize_t p, q
    for p in range(3):
        for q in range(3):
            out[i, p, q] += c * (n[p] * u[q] + u[p] * n[q])


def electric(double k, R):
    cdef const double[:, ::1] Rv = np.ascontiguousarray(R, dtype=np.float64).reshape(-1, 3)
    cdef Py_ssize_t N = Rv.shape[0], i
    out_arr = np.empty((N, 3, 3), dtype=np.complex128)
    cdef cplx[:, :, ::1] out = out_arr
    cdef double n[3]
    cdef double r
    cdef cplx ph
    with nogil:
        for i in range(N):
            _unit(Rv, i, n, &r)
            ph = _phase(k, r)
            _put_ab(out, i, n, ph / r, ph * (1j / (k * r * r) - 1.0 / (k * k * r * r * r)))
    return out_arr


def magnetic(double k, R):
    cdef const double[:, ::1] Rv = np.ascontiguousarray(R, dtype=np.float64).reshape(-1, 3)
    cdef Py_ssize_t N = Rv.shape[0], i
    out_arr = np.zeros((N, 3, 3), dtype=np.complex128)
    cdef cplx[:, :, ::1] out = out_arr
    cdef double n[3]
    cdef double r
    with nogil:
        for i in range(N):
            _unit(Rv, i, n, &r)
            _add_cross(out, i, n, _phase(k, r) * (1.0 / r + 1j / (k * r * r)))
    return out_arr


def bundle(double k, R, v):
    cdef const double[:, ::1] Rv = np.ascontiguousarray(R, dtype=np.float64).reshape(-1, 3)
    cdef Py_ssize_t N = Rv.shape[0], i, j
    vb = np.ascontiguousarray(np.broadcast_to(np.asarray(v, dtype=np.float64), (N, 3)))
    cdef const double[:, ::1] V = vb
    arrs = [np.zeros((N, 3, 3), dtype=np.complex128) for _ in range(8)]
    cdef cplx[:, :, ::1] G = arrs[0]
    cdef cplx[:, :, ::1] Gm = arrs[1]
    cdef cplx[:, :, ::1] G_k = arrs[2]
    cdef cplx[:, :, ::1] Gm_k = arrs[3]
    cdef cplx[:, :, ::1] dG = arrs[4]
    cdef cplx[:, :, ::1] dGm = arrs[5]
    cdef cplx[:, :, ::1] dG_k = arrs[6]
    cdef cplx[:, :, ::1] dGm_k = arrs[7]
    cdef double n[3]
    cdef double vp[3]
    cdef double r, r2, r3, r4, vr, k2 = k * k, k3 = k * k * k
    cdef cplx ph, ir, A, B, B_k, M, M_k, b1, b1_k, P, P_k, Q1, Q1_k, Q2, Q2_k
    with nogil:
        for i in range(N):
            _unit(Rv, i, n, &r)
            r2 = r * r
            r3 = r2 * r
            r4 = r3 * r
            vr = V[i, 0] * n[0] + V[i, 1] * n[1] + V[i, 2] * n[2]
            for j in range(3):
                vp[j] = V[i, j] - vr * n[j]
            ph = _phase(k, r)
            ir = 1j * r

            A = 1.0 / r
            B = 1j / (k * r2) - 1.0 / (k2 * r3)
            B_k = -1j / (k2 * r2) + 2.0 / (k3 * r3)
            _put_ab(G, i, n, ph * A, ph * B)
            _put_ab(G_k, i, n, ph * ir * A, ph * (ir * B + B_k))

            M = 1.0 / r + 1j / (k * r2)
            M_k = -1j / (k2 * r2)
            _add_cross(Gm, i, n, ph * M)
            _add_cross(Gm_k, i, n, ph * (ir * M + M_k))

            b1 = vr * (2j / (k * r3) - 3.0 / (k2 * r4))
            b1_k = vr * (-2j / (k2 * r3) + 6.0 / (k3 * r4))
            P = 1.0 / r2 + 3j / (k * r3) - 3.0 / (k2 * r4)
            P_k = -3j / (k2 * r3) + 6.0 / (k3 * r4)
            _put_ab(dG, i, n, ph * vr / r2, ph * b1)
            _add_sym(dG, i, n, vp, ph * P)
            _put_ab(dG_k, i, n, ph * ir * vr / r2, ph * (ir * b1 + b1_k))
            _add_sym(dG_k, i, n, vp, ph * (ir * P + P_k))

            Q1 = vr * (1.0 / r2 + 2j / (k * r3))
            Q1_k = vr * (-2j / (k2 * r3))
            Q2 = 1.0 / r2 + 1j / (k * r3)
            Q2_k = -1j / (k2 * r3)
            _add_cross(dGm, i, n, ph * Q1)
            _add_cross(dGm, i, vp, -ph * Q2)
            _add_cross(dGm_k, i, n, ph * (ir * Q1 + Q1_k))
            _add_cross(dGm_k, i, vp, -ph * (ir * Q2 + Q2_k))
    return tuple(arrs)


def iso_levi(X, Y):
    cdef const cplx[:, :, ::1] Xv = np.ascontiguousarray(X, dtype=np.complex128)
    cdef const cplx[:, :, ::1] Yv = np.ascontiguousarray(Y, dtype=np.complex128)
    cdef Py_ssize_t N = Xv.shape[0], i, q
    out_arr = np.empty((N, 3), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    cdef cplx m01, m10, m02, m20, m12, m21
    with nogil:
        for i in range(N):
            m01 = 0; m10 = 0; m02 = 0; m20 = 0; m12 = 0; m21 = 0
            for q in range(3):
                m01 = m01 + Yv[i, 0, q] * Xv[i, q, 1]
                m10 = m10 + Yv[i, 1, q] * Xv[i, q, 0]
                m02 = m02 + Yv[i, 0, q] * Xv[i, q, 2]
                m20 = m20 + Yv[i, 2, q] * Xv[i, q, 0]
                m12 = m12 + Yv[i, 1, q] * Xv[i, q, 2]
                m21 = m21 + Yv[i, 2, q] * Xv[i, q, 1]
            out[i, 0] = (m21 - m12) / 9.0
            out[i, 1] = (m02 - m20) / 9.0
            out[i, 2] = (m10 - m01) / 9.0
    return out_arr


def fixed_levi(X, Y, a, b):
    cdef const cplx[:, :, ::1] Xv = np.ascontiguousarray(X, dtype=np.complex128)
    cdef const cplx[:, :, ::1] Yv = np.ascontiguousarray(Y, dtype=np.complex128)
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t N = Xv.shape[0], i, p, q
    out_arr = np.empty((N, 3), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    cdef cplx s, yb[3]
    with nogil:
        for i in range(N):
            s = 0
            for p in range(3):
                yb[p] = 0
                for q in range(3):
                    s = s + bv[p] * Xv[i, p, q] * av[q]
                    yb[p] = yb[p] + Yv[i, p, q] * bv[q]
            out[i, 0] = s * (av[1] * yb[2] - av[2] * yb[1])
            out[i, 1] = s * (av[2] * yb[0] - av[0] * yb[2])
            out[i, 2] = s * (av[0] * yb[1] - av[1] * yb[0])
    return out_arr


def fixed_contract(X, Y, a, b):
    cdef const cplx[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.complex128)
    cdef const cplx[:, ::1] Yv = np.ascontiguousarray(Y, dtype=np.complex128)
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64).reshape(-1, 3)
    cdef const double[:, ::1] Bm = np.ascontiguousarray(b, dtype=np.float64).reshape(-1, 3)
    cdef Py_ssize_t N = A.shape[0], i, p, q
    out_arr = np.empty(N, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef cplx xab, yba
    with nogil:
        for i in range(N):
            xab = 0
            yba = 0
            for p in range(3):
                for q in range(3):
                    xab = xab + A[i, p] * Xv[p, q] * Bm[i, q]
                    yba = yba + Bm[i, p] * Yv[p, q] * A[i, q]
            out[i] = xab * yba
    return out_arr
