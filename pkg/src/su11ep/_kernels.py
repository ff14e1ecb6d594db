"""Hot loops: Hessenberg reduction, complex shifted QR, triangular
eigenvectors and fixed-step RK4 for linear complex flows.

Every kernel has a scalar-loop source (``_nb_*``) compiled with numba and a
vectorised numpy source (``_np_*``).  The public names at the bottom pick one
according to :data:`su11ep._accel.USE_NUMBA`.  Both flavours implement the
same algorithm step for step, so results agree to rounding.
"""
import cmath

import numpy as np

from . import _accel

EPS = np.finfo(np.float64).eps


# --------------------------------------------------------------------------
# scalar-loop sources (numba)


def _nb_givens(a, b):
    # unitary [[c, s], [-conj(s), c]] mapping (a, b) -> (r, 0)
    aa = abs(a)
    bb = abs(b)
    if bb == 0.0:
        return 1.0, 0.0 + 0.0j, a
    if aa == 0.0:
        return 0.0, 1.0 + 0.0j, b
    r = np.hypot(aa, bb)
    alpha = a / aa
    return aa / r, alpha * np.conj(b) / r, alpha * r


_givens_jit = _accel.njit(_nb_givens)


def _nb_hessenberg(a):
    n = a.shape[0]
    h = a.copy()
    q = np.eye(n, dtype=np.complex128)
    v = np.zeros(n, dtype=np.complex128)
    for k in range(n - 2):
        alpha = 0.0
        for i in range(k + 1, n):
            alpha += h[i, k].real ** 2 + h[i, k].imag ** 2
        alpha = np.sqrt(alpha)
        if alpha == 0.0:
            continue
        x0 = h[k + 1, k]
        phase = x0 / abs(x0) if abs(x0) > 0.0 else 1.0 + 0.0j
        vnorm = 0.0
        for i in range(k + 1, n):
            v[i] = h[i, k]
        v[k + 1] = x0 + phase * alpha
        for i in range(k + 1, n):
            vnorm += v[i].real ** 2 + v[i].imag ** 2
        vnorm = np.sqrt(vnorm)
        for i in range(k + 1, n):
            v[i] /= vnorm
        # left reflection on rows k+1..n-1
        for j in range(k, n):
            w = 0.0j
            for i in range(k + 1, n):
                w += np.conj(v[i]) * h[i, j]
            w *= 2.0
            for i in range(k + 1, n):
                h[i, j] -= w * v[i]
        # right reflection on columns k+1..n-1, also accumulated into q
        for i in range(n):
            w = 0.0j
            wq = 0.0j
            for j in range(k + 1, n):
                w += h[i, j] * v[j]
                wq += q[i, j] * v[j]
            w *= 2.0
            wq *= 2.0
            for j in range(k + 1, n):
                cv = np.conj(v[j])
                h[i, j] -= w * cv
                q[i, j] -= wq * cv
        for i in range(k + 2, n):
            h[i, k] = 0.0
    return h, q


def _nb_schur(h, q, maxiter):
    n = h.shape[0]
    hnorm = 0.0
    for i in range(n):
        for j in range(n):
            hnorm += abs(h[i, j]) ** 2
    hnorm = max(np.sqrt(hnorm), 1e-300)
    cs = np.zeros(n)
    sn = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    its = 0
    total = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            tst = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if tst == 0.0:
                tst = hnorm
            if abs(h[lo, lo - 1]) <= EPS * tst:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        total += 1
        its += 1
        if total > maxiter:
            return False
        if its % 11 == 0:
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1].real) + 0.75j * abs(h[hi, hi - 1].imag)
        else:
            a = h[hi - 1, hi - 1]
            b = h[hi - 1, hi]
            c = h[hi, hi - 1]
            d = h[hi, hi]
            half = 0.5 * (a + d)
            disc = cmath.sqrt(0.25 * (a - d) * (a - d) + b * c)
            m1 = half + disc
            m2 = half - disc
            mu = m1 if abs(m1 - d) < abs(m2 - d) else m2
        for k in range(lo, hi + 1):
            h[k, k] -= mu
        for k in range(lo, hi):
            c, s, r = _givens_jit(h[k, k], h[k + 1, k])
            cs[k] = c
            sn[k] = s
            h[k, k] = r
            h[k + 1, k] = 0.0
            sc = np.conj(s)
            for j in range(k + 1, n):
                t1 = h[k, j]
                t2 = h[k + 1, j]
                h[k, j] = c * t1 + s * t2
                h[k + 1, j] = -sc * t1 + c * t2
        for k in range(lo, hi):
            c = cs[k]
            s = sn[k]
            sc = np.conj(s)
            for i in range(k + 2):
                t1 = h[i, k]
                t2 = h[i, k + 1]
                h[i, k] = c * t1 + sc * t2
                h[i, k + 1] = -s * t1 + c * t2
            for i in range(n):
                t1 = q[i, k]
                t2 = q[i, k + 1]
                q[i, k] = c * t1 + sc * t2
                q[i, k + 1] = -s * t1 + c * t2
        for k in range(lo, hi + 1):
            h[k, k] += mu
    return True


def _nb_triangular_eigvecs(t):
    n = t.shape[0]
    y = np.zeros((n, n), dtype=np.complex128)
    tnorm = 0.0
    for i in range(n):
        for j in range(i, n):
            tnorm = max(tnorm, abs(t[i, j]))
    smin = max(EPS * tnorm, 1e-300)
    for k in range(n):
        lam = t[k, k]
        y[k, k] = 1.0
        for i in range(k - 1, -1, -1):
            acc = 0.0j
            for j in range(i + 1, k + 1):
                acc += t[i, j] * y[j, k]
            d = t[i, i] - lam
            if abs(d) < smin:
                d = smin
            y[i, k] = -acc / d
            if abs(y[i, k]) > 1e150:
                for j in range(i, k + 1):
                    y[j, k] *= 1e-150
    return y


def _nb_rk4_linear(a, y0, dt, steps):
    out = np.empty((steps + 1, 2), dtype=np.complex128)
    out[0, 0] = y0[0]
    out[0, 1] = y0[1]
    q = y0[0]
    p = y0[1]
    half = 0.5 * dt
    for k in range(steps):
        k1q = a[0, 0] * q + a[0, 1] * p
        k1p = a[1, 0] * q + a[1, 1] * p
        q2 = q + half * k1q
        p2 = p + half * k1p
        k2q = a[0, 0] * q2 + a[0, 1] * p2
        k2p = a[1, 0] * q2 + a[1, 1] * p2
        q3 = q + half * k2q
        p3 = p + half * k2p
        k3q = a[0, 0] * q3 + a[0, 1] * p3
        k3p = a[1, 0] * q3 + a[1, 1] * p3
        q4 = q + dt * k3q
        p4 = p + dt * k3p
        k4q = a[0, 0] * q4 + a[0, 1] * p4
        k4p = a[1, 0] * q4 + a[1, 1] * p4
        q = q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        p = p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        out[k + 1, 0] = q
        out[k + 1, 1] = p
    return out


# --------------------------------------------------------------------------
# vectorised sources (numpy)


def _np_hessenberg(a):
    n = a.shape[0]
    h = a.copy()
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if abs(x0) > 0.0 else 1.0 + 0.0j
        x[0] = x0 + phase * alpha
        v = x / np.linalg.norm(x)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h, q


def _np_schur(h, q, maxiter):
    n = h.shape[0]
    hnorm = max(np.linalg.norm(h), 1e-300)
    rots = [None] * n
    hi = n - 1
    its = 0
    total = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            tst = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if tst == 0.0:
                tst = hnorm
            if abs(h[lo, lo - 1]) <= EPS * tst:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        total += 1
        its += 1
        if total > maxiter:
            return False
        if its % 11 == 0:
            sub = h[hi, hi - 1]
            mu = h[hi, hi] + 0.75 * abs(sub.real) + 0.75j * abs(sub.imag)
        else:
            a, b = h[hi - 1, hi - 1], h[hi - 1, hi]
            c, d = h[hi, hi - 1], h[hi, hi]
            half = 0.5 * (a + d)
            disc = cmath.sqrt(0.25 * (a - d) ** 2 + b * c)
            m1, m2 = half + disc, half - disc
            mu = m1 if abs(m1 - d) < abs(m2 - d) else m2
        idx = np.arange(lo, hi + 1)
        h[idx, idx] -= mu
        for k in range(lo, hi):
            c, s, r = _nb_givens(h[k, k], h[k + 1, k])
            g = np.array([[c, s], [-np.conj(s), c]])
            rots[k] = g
            h[k, k] = r
            h[k + 1, k] = 0.0
            h[k:k + 2, k + 1:] = g @ h[k:k + 2, k + 1:]
        for k in range(lo, hi):
            gh = rots[k].conj().T
            h[:k + 2, k:k + 2] = h[:k + 2, k:k + 2] @ gh
            q[:, k:k + 2] = q[:, k:k + 2] @ gh
        h[idx, idx] += mu
    return True


def _np_triangular_eigvecs(t):
    n = t.shape[0]
    y = np.zeros((n, n), dtype=np.complex128)
    smin = max(EPS * np.abs(np.triu(t)).max(initial=0.0), 1e-300)
    diag = np.diag(t)
    for k in range(n):
        y[k, k] = 1.0
        d = diag[:k] - diag[k]
        d = np.where(np.abs(d) < smin, smin, d)
        for i in range(k - 1, -1, -1):
            y[i, k] = -(t[i, i + 1:k + 1] @ y[i + 1:k + 1, k]) / d[i]
            if abs(y[i, k]) > 1e150:
                y[i:k + 1, k] *= 1e-150
    return y


def _np_rk4_linear(a, y0, dt, steps):
    # RK4 on y' = A y is multiplication by the degree-4 Taylor polynomial of dt*A
    # overflow is reported by the caller as a non-finite trajectory
    with np.errstate(over="ignore", invalid="ignore"):
        m = dt * a
        m2 = m @ m
        step = np.eye(2) + m + m2 / 2.0 + m2 @ m / 6.0 + m2 @ m2 / 24.0
        out = np.empty((steps + 1, 2), dtype=np.complex128)
        out[0] = y0
        for k in range(steps):
            out[k + 1] = step @ out[k]
    return out


# --------------------------------------------------------------------------
# dispatch

_nb_hessenberg_c = _accel.njit(_nb_hessenberg)
_nb_schur_c = _accel.njit(_nb_schur)
_nb_triangular_eigvecs_c = _accel.njit(_nb_triangular_eigvecs)
_nb_rk4_linear_c = _accel.njit(_nb_rk4_linear)

NUMBA_KERNELS = {
    "hessenberg": _nb_hessenberg_c,
    "schur": _nb_schur_c,
    "triangular_eigvecs": _nb_triangular_eigvecs_c,
    "rk4_linear": _nb_rk4_linear_c,
}
NUMPY_KERNELS = {
    "hessenberg": _np_hessenberg,
    "schur": _np_schur,
    "triangular_eigvecs": _np_triangular_eigvecs,
    "rk4_linear": _np_rk4_linear,
}


def kernels(use_numba=None):
    """Kernel table for the requested backend (default: the env-selected one)."""
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    return NUMBA_KERNELS if (use_numba and _accel.NUMBA_AVAILABLE) else NUMPY_KERNELS


def hessenberg(a):
    return kernels()["hessenberg"](np.ascontiguousarray(a, dtype=np.complex128))


def schur(h, q, maxiter):
    return kernels()["schur"](h, q, maxiter)


def triangular_eigvecs(t):
    return kernels()["triangular_eigvecs"](np.ascontiguousarray(t, dtype=np.complex128))


def rk4_linear(a, y0, dt, steps):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    y0 = np.ascontiguousarray(y0, dtype=np.complex128)
    return kernels()["rk4_linear"](a, y0, float(dt), int(steps))
