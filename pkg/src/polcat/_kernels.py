"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and ``POLCAT_DISABLE_NUMBA`` is
unset (or ``0``). Both implementations stay importable so tests and the
benchmark can compare them in one process.
"""

import os

import numpy as np

_DISABLED = os.environ.get("POLCAT_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

try:
    from numba import njit
    from numba.extending import register_jitable

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def register_jitable(fn):
        return fn


USE_NUMBA = HAVE_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# coherent-state overlaps
# ---------------------------------------------------------------------------

def overlap_matrix_numpy(u, v):
    """O[k, l] = <u_k|v_l> for single-mode coherent amplitudes."""
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    expo = (-0.5 * np.abs(u)[:, None] ** 2 - 0.5 * np.abs(v)[None, :] ** 2
            + np.conj(u)[:, None] * v[None, :])
    return np.exp(expo)


def cross_gram_numpy(left, right):
    """Product over modes of single-mode overlaps between two term lists."""
    expo = np.zeros((left.shape[0], right.shape[0]), dtype=np.complex128)
    for m in range(left.shape[1]):
        u = left[:, m]
        v = right[:, m]
        expo += (-0.5 * np.abs(u)[:, None] ** 2 - 0.5 * np.abs(v)[None, :] ** 2
                 + np.conj(u)[:, None] * v[None, :])
    return np.exp(expo)


def gram_matrix_numpy(amps):
    return cross_gram_numpy(amps, amps)


def reduced_purity_numpy(coeffs, amps, keep):
    # rho_keep = sum_kl c_k c_l* <b_l|b_k> |a_k><a_l|  ->  Tr rho^2 = Tr(M A M A)
    a = overlap_matrix_numpy(amps[:, keep], amps[:, keep])
    b = overlap_matrix_numpy(amps[:, 1 - keep], amps[:, 1 - keep])
    m = coeffs[:, None] * np.conj(coeffs)[None, :] * b.T
    ma = m @ a
    return np.trace(ma @ ma).real


def _cross_gram_loops(left, right):
    kl = left.shape[0]
    kr = right.shape[0]
    nm = left.shape[1]
    out = np.empty((kl, kr), dtype=np.complex128)
    for k in range(kl):
        for l in range(kr):
            e = 0.0 + 0.0j
            for m in range(nm):
                u = left[k, m]
                v = right[l, m]
                e += -0.5 * (u.real * u.real + u.imag * u.imag) \
                     - 0.5 * (v.real * v.real + v.imag * v.imag) + u.conjugate() * v
            out[k, l] = np.exp(e)
    return out


def _gram_loops(amps):
    k_terms = amps.shape[0]
    nm = amps.shape[1]
    out = np.empty((k_terms, k_terms), dtype=np.complex128)
    for k in range(k_terms):
        out[k, k] = 1.0
        for l in range(k + 1, k_terms):
            e = 0.0 + 0.0j
            for m in range(nm):
                u = amps[k, m]
                v = amps[l, m]
                e += -0.5 * (u.real * u.real + u.imag * u.imag) \
                     - 0.5 * (v.real * v.real + v.imag * v.imag) + u.conjugate() * v
            z = np.exp(e)
            out[k, l] = z
            out[l, k] = z.conjugate()
    return out


def _reduced_purity_loops(coeffs, amps, keep):
    n = coeffs.shape[0]
    other = 1 - keep
    a = np.empty((n, n), dtype=np.complex128)
    m = np.empty((n, n), dtype=np.complex128)
    for k in range(n):
        for l in range(n):
            u = amps[k, keep]
            v = amps[l, keep]
            a[k, l] = np.exp(-0.5 * abs(u) ** 2 - 0.5 * abs(v) ** 2 + u.conjugate() * v)
            # M[k, l] = c_k c_l* <b_l|b_k>
            bl = amps[l, other]
            bk = amps[k, other]
            m[k, l] = coeffs[k] * coeffs[l].conjugate() * np.exp(
                -0.5 * abs(bl) ** 2 - 0.5 * abs(bk) ** 2 + bl.conjugate() * bk)
    ma = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            acc = 0.0 + 0.0j
            for p in range(n):
                acc += m[i, p] * a[p, j]
            ma[i, j] = acc
    tr = 0.0 + 0.0j
    for i in range(n):
        for p in range(n):
            tr += ma[i, p] * ma[p, i]
    return tr.real


# ---------------------------------------------------------------------------
# mean-field Heisenberg-Langevin integration (F_ij = 0, fixed fields)
# ---------------------------------------------------------------------------
# y = [s11, s22, s33, s44, s14, s23]; params = [g, gamma, gamma_par, gamma_perp, delta, vac]

@register_jitable
def _mf_rhs(y, params, ap, am, out):
    g = params[0]
    gam = params[1]
    gpar = params[2]
    gperp = params[3]
    delta = params[4]
    vac = params[5]
    s11 = y[0]
    s22 = y[1]
    s33 = y[2]
    s44 = y[3]
    s14 = y[4]
    s23 = y[5]
    z = gam + 1j * delta
    w14 = 2.0 * g * (ap.conjugate() * s14).imag
    w23 = 2.0 * g * (am.conjugate() * s23).imag
    # symmetrized-ordering half photon: 2 gamma G (1/2) (s_low - s_high)
    gg = g * g / (gam * gam + delta * delta)
    p14 = vac * gam * gg * (s11 - s44)
    p23 = vac * gam * gg * (s22 - s33)
    out[0] = 2.0 * gperp * s33 + 2.0 * gpar * s44 + w14 - p14
    out[1] = 2.0 * gpar * s33 + 2.0 * gperp * s44 + w23 - p23
    out[2] = -2.0 * gam * s33 - w23 + p23
    out[3] = -2.0 * gam * s44 - w14 + p14
    out[4] = -z * s14 - 1j * g * ap * (s11 - s44)
    out[5] = -z * s23 - 1j * g * am * (s22 - s33)


def rk4_mean_field_python(y0, params, ap, am, dt, n_steps, record_every):
    """Classical RK4 over ``n_steps``; returns (records, first_bad_step).

    ``first_bad_step`` is -1 unless a population left [-1e-6, 1 + 1e-6].
    """
    n_rec = n_steps // record_every + 1
    if n_steps % record_every != 0:
        n_rec += 1
    rec = np.empty((n_rec, 6), dtype=np.complex128)
    y = y0.copy()
    k1 = np.empty(6, dtype=np.complex128)
    k2 = np.empty(6, dtype=np.complex128)
    k3 = np.empty(6, dtype=np.complex128)
    k4 = np.empty(6, dtype=np.complex128)
    tmp = np.empty(6, dtype=np.complex128)
    rec[0, :] = y
    r = 1
    bad = -1
    for step in range(1, n_steps + 1):
        _mf_rhs(y, params, ap, am, k1)
        for i in range(6):
            tmp[i] = y[i] + 0.5 * dt * k1[i]
        _mf_rhs(tmp, params, ap, am, k2)
        for i in range(6):
            tmp[i] = y[i] + 0.5 * dt * k2[i]
        _mf_rhs(tmp, params, ap, am, k3)
        for i in range(6):
            tmp[i] = y[i] + dt * k3[i]
        _mf_rhs(tmp, params, ap, am, k4)
        for i in range(6):
            y[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        if bad < 0:
            for i in range(4):
                p = y[i].real
                if p < -1e-6 or p > 1.0 + 1e-6 or p != p:
                    bad = step
        if step % record_every == 0 or step == n_steps:
            rec[r, :] = y
            r += 1
        if bad >= 0:
            return rec[:r], bad
    return rec[:r], bad


if HAVE_NUMBA:
    cross_gram_numba = njit(cache=True)(_cross_gram_loops)
    gram_matrix_numba = njit(cache=True)(_gram_loops)
    reduced_purity_numba = njit(cache=True)(_reduced_purity_loops)
    rk4_mean_field_numba = njit(cache=True)(rk4_mean_field_python)
else:  # pragma: no cover
    cross_gram_numba = gram_matrix_numba = reduced_purity_numba = rk4_mean_field_numba = None


# purity is two dense matmuls, where BLAS beats the jitted loops (see benchmarks/)
reduced_purity = reduced_purity_numpy

if USE_NUMBA:
    cross_gram = cross_gram_numba
    gram_matrix = gram_matrix_numba
    rk4_mean_field = rk4_mean_field_numba
else:
    cross_gram = cross_gram_numpy
    gram_matrix = gram_matrix_numpy
    rk4_mean_field = rk4_mean_field_python
