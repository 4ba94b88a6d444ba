"""Pure numpy implementation of the batched dyadic kernels.

Conventions shared with the compiled backend: reduced units with c = 1,
Green's dyadics carry the 1/(4 pi) factor, arrays are shaped ``(N, 3)`` for
vectors and ``(N, 3, 3)`` for dyadics, and lag dyadics are densities (the
coefficient of the lag time tau).
"""
import numpy as np

FOUR_PI = 4.0 * np.pi
_I3 = np.eye(3)


def _geometry(R):
    R = np.asarray(R, dtype=float).reshape(-1, 3)
    r = np.sqrt(np.einsum("ni,ni->n", R, R))
    n = R / r[:, None]
    nn = n[:, :, None] * n[:, None, :]
    return r, n, _I3 - nn, _I3 - 3.0 * nn


def cross_matrix(u):
    """Matrix ``[u]_x`` with entries ``eps_{p s q} u_s``."""
    u = np.asarray(u).reshape(-1, 3)
    out = np.zeros(u.shape[:1] + (3, 3), dtype=u.dtype)
    out[:, 0, 1] = -u[:, 2]
    out[:, 0, 2] = u[:, 1]
    out[:, 1, 0] = u[:, 2]
    out[:, 1, 2] = -u[:, 0]
    out[:, 2, 0] = -u[:, 1]
    out[:, 2, 1] = u[:, 0]
    return out


def electric(k, R):
    r, _, alpha, beta = _geometry(R)
    ph = np.exp(1j * k * r) / FOUR_PI
    a = ph / r
    b = ph * (1j / (k * r**2) - 1.0 / (k**2 * r**3))
    return a[:, None, None] * alpha + b[:, None, None] * beta


def magnetic(k, R):
    r, n, _, _ = _geometry(R)
    m = np.exp(1j * k * r) / FOUR_PI * (1.0 / r + 1j / (k * r**2))
    return m[:, None, None] * cross_matrix(n)


def bundle(k, R, v):
    """All dyadics entering the non-conservative Roentgen force.

    Returns ``(G, Gm, G_k, Gm_k, dG, dGm, dG_k, dGm_k)``: electric and
    magnetic Green's dyadics, their k-derivatives, the electric and magnetic
    lag densities and the k-derivatives of those.
    """
    r, n, alpha, beta = _geometry(R)
    v = np.broadcast_to(np.asarray(v, dtype=float), n.shape)
    vr = np.einsum("ni,ni->n", v, n)
    vp = v - vr[:, None] * n
    ph = np.exp(1j * k * r) / FOUR_PI
    ir = 1j * r
    k2, k3 = k * k, k * k * k
    r2, r3, r4 = r * r, r**3, r**4

    cn = cross_matrix(n)
    cv = cross_matrix(vp)
    S = n[:, :, None] * vp[:, None, :] + vp[:, :, None] * n[:, None, :]

    def dy(c):
        return (ph * c)[:, None, None]

    def dk(c, c_k):
        return (ph * (ir * c + c_k))[:, None, None]

    A = 1.0 / r
    B = 1j / (k * r2) - 1.0 / (k2 * r3)
    B_k = -1j / (k2 * r2) + 2.0 / (k3 * r3)
    G = dy(A) * alpha + dy(B) * beta
    G_k = dk(A, 0.0) * alpha + dk(B, B_k) * beta

    M = 1.0 / r + 1j / (k * r2)
    M_k = -1j / (k2 * r2)
    Gm = dy(M) * cn
    Gm_k = dk(M, M_k) * cn

    a1 = vr / r2
    b1 = vr * (2j / (k * r3) - 3.0 / (k2 * r4))
    b1_k = vr * (-2j / (k2 * r3) + 6.0 / (k3 * r4))
    P = 1.0 / r2 + 3j / (k * r3) - 3.0 / (k2 * r4)
    P_k = -3j / (k2 * r3) + 6.0 / (k3 * r4)
    dG = dy(a1) * alpha + dy(b1) * beta + dy(P) * S
    dG_k = dk(a1, 0.0) * alpha + dk(b1, b1_k) * beta + dk(P, P_k) * S

    Q1 = vr * (1.0 / r2 + 2j / (k * r3))
    Q1_k = vr * (-2j / (k2 * r3))
    Q2 = 1.0 / r2 + 1j / (k * r3)
    Q2_k = -1j / (k2 * r3)
    dGm = dy(Q1) * cn - dy(Q2) * cv
    dGm_k = dk(Q1, Q1_k) * cn - dk(Q2, Q2_k) * cv
    return G, Gm, G_k, Gm_k, dG, dGm, dG_k, dGm_k


def iso_levi(X, Y):
    """Orientation-averaged ``eps_{irp} (Y X)_{pr} / 9`` for batches of dyadics."""
    M = np.einsum("npq,nqr->npr", Y, X)
    out = np.empty(M.shape[:1] + (3,), dtype=M.dtype)
    out[:, 0] = M[:, 2, 1] - M[:, 1, 2]
    out[:, 1] = M[:, 0, 2] - M[:, 2, 0]
    out[:, 2] = M[:, 1, 0] - M[:, 0, 1]
    return out / 9.0


def fixed_levi(X, Y, a, b):
    """``(b.X.a) (a x (Y.b))`` for fixed dipole directions ``a`` (A) and ``b`` (B)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = np.einsum("m,nmq,q->n", b, X, a)
    yb = np.einsum("npq,q->np", Y, b)
    return s[:, None] * np.cross(a, yb)


def fixed_contract(X, Y, a, b):
    """``(a.X.b)(b.Y.a)`` for one pair of dyadics and batches of directions."""
    a = np.asarray(a, dtype=float).reshape(-1, 3)
    b = np.asarray(b, dtype=float).reshape(-1, 3)
    xab = np.einsum("ni,ij,nj->n", a, X, b)
    yba = np.einsum("ni,ij,nj->n", b, Y, a)
    return xab * yba
