"""Hot loops for the fixed-step RK4 integrators.

The propagated equations are dy/dt = F(t, y) with F assembled from a few
constant matrices and scalar coefficient functions. Matrices arrive here
already multiplied by -i and packed as diagonals ("bands"): every model
Hamiltonian in this package is banded, which turns each right-hand-side
evaluation into O(bands * dim) work instead of a dense matvec.

Deterministic: fixed step, fixed summation order for a given build.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba present in normal installs
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap

# coefficient codes
COEFF_CONST = 0
COEFF_SIN = 1
COEFF_FREQ_MOD = 2
COEFF_SQUEEZE_RATE = 3


@njit(cache=True, fastmath=True)
def _coeff(code, a, b, c, d, t):
    if code == 0:
        return a
    elif code == 1:
        return a * np.sin(b * t)
    elif code == 2:
        return a + b * np.sin(c * t)
    else:
        return a * np.cos(b * t) / (4.0 * (c + d * np.sin(b * t)))


@njit(cache=True, fastmath=True)
def _coeffs_at(codes, params, t, cf):
    for m in range(codes.shape[0]):
        cf[m] = _coeff(codes[m], params[m, 0], params[m, 1], params[m, 2], params[m, 3], t)


@njit(cache=True, fastmath=True)
def _banded_rhs(offsets, band_term, rows, cf, y, out):
    dim = y.shape[0]
    out[:] = 0.0
    for j in range(offsets.shape[0]):
        off = offsets[j]
        c = cf[band_term[j]]
        row = rows[j]
        lo = -off if off < 0 else 0
        hi = dim - off if off > 0 else dim
        for i in range(lo, hi):
            out[i] += c * row[i] * y[i + off]


@njit(cache=True, fastmath=True)
def rk4_banded(offsets, band_term, rows, codes, params, psi, t0, dt, n_steps,
               stride, out, out_norm2, abort_jump, renorm):
    """RK4 on dy/dt = sum_j c_j(t) * B_j y with banded B_j.

    Samples y every `stride` steps into `out` and records the squared norm
    right before any renormalization. Returns the number of samples
    written; a negative value -(s+1) flags an abort at sample s because
    the squared norm jumped by more than `abort_jump` since the previous
    sample.
    """
    dim = psi.shape[0]
    y = psi
    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)
    tmp = np.empty(dim, np.complex128)
    cf = np.empty(codes.shape[0])
    prev_norm2 = 0.0
    for i in range(dim):
        prev_norm2 += y[i].real * y[i].real + y[i].imag * y[i].imag
    s = 0
    for step in range(n_steps):
        t = t0 + step * dt
        _coeffs_at(codes, params, t, cf)
        _banded_rhs(offsets, band_term, rows, cf, y, k1)
        half = 0.5 * dt
        for i in range(dim):
            tmp[i] = y[i] + half * k1[i]
        _coeffs_at(codes, params, t + half, cf)
        _banded_rhs(offsets, band_term, rows, cf, tmp, k2)
        for i in range(dim):
            tmp[i] = y[i] + half * k2[i]
        _banded_rhs(offsets, band_term, rows, cf, tmp, k3)
        for i in range(dim):
            tmp[i] = y[i] + dt * k3[i]
        _coeffs_at(codes, params, t + dt, cf)
        _banded_rhs(offsets, band_term, rows, cf, tmp, k4)
        c6 = dt / 6.0
        for i in range(dim):
            y[i] += c6 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
        if (step + 1) % stride == 0:
            norm2 = 0.0
            for i in range(dim):
                norm2 += y[i].real * y[i].real + y[i].imag * y[i].imag
            out_norm2[s] = norm2
            if abort_jump > 0.0 and abs(norm2 - prev_norm2) > abort_jump:
                out[s] = y
                return -(s + 1)
            prev_norm2 = norm2
            if renorm:
                scale = 1.0 / np.sqrt(norm2)
                for i in range(dim):
                    y[i] *= scale
                prev_norm2 = 1.0
            out[s] = y
            s += 1
    return s


@njit(cache=True, fastmath=True)
def _pairs_rhs(pm, pn, amp, freq, t, c, out):
    out[:] = 0.0
    for idx in range(pm.shape[0]):
        ph = freq[idx] * t
        rot = complex(np.cos(ph), np.sin(ph))
        out[pm[idx]] += amp[idx] * rot * c[pn[idx]]


@njit(cache=True, fastmath=True)
def rk4_pairs(pm, pn, amp, freq, c0, t0, dt, n_steps, stride, out, out_norm2):
    """RK4 on dc_m/dt = sum_pairs amp * exp(i freq t) * c_n (sparse pair list)."""
    dim = c0.shape[0]
    y = c0
    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)
    tmp = np.empty(dim, np.complex128)
    s = 0
    for step in range(n_steps):
        t = t0 + step * dt
        half = 0.5 * dt
        _pairs_rhs(pm, pn, amp, freq, t, y, k1)
        for i in range(dim):
            tmp[i] = y[i] + half * k1[i]
        _pairs_rhs(pm, pn, amp, freq, t + half, tmp, k2)
        for i in range(dim):
            tmp[i] = y[i] + half * k2[i]
        _pairs_rhs(pm, pn, amp, freq, t + half, tmp, k3)
        for i in range(dim):
            tmp[i] = y[i] + dt * k3[i]
        _pairs_rhs(pm, pn, amp, freq, t + dt, tmp, k4)
        c6 = dt / 6.0
        for i in range(dim):
            y[i] += c6 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
        if (step + 1) % stride == 0:
            norm2 = 0.0
            for i in range(dim):
                norm2 += y[i].real * y[i].real + y[i].imag * y[i].imag
            out_norm2[s] = norm2
            out[s] = y
            s += 1
    return s


@njit(cache=True, fastmath=True)
def _harmonics_rhs(w_stack, lam, eta, t, c, u, v, out):
    dim = c.shape[0]
    for i in range(dim):
        ph = lam[i] * t
        u[i] = complex(np.cos(ph), -np.sin(ph)) * c[i]
    out[:] = 0.0
    for l in range(w_stack.shape[0]):
        sl = np.sin((l + 1) * eta * t)
        if sl == 0.0:
            continue
        for i in range(dim):
            acc = 0.0 + 0.0j
            w = w_stack[l, i]
            for jj in range(dim):
                acc += w[jj] * u[jj]
            v[i] = acc
        for i in range(dim):
            ph = lam[i] * t
            out[i] += sl * complex(np.cos(ph), np.sin(ph)) * v[i]


@njit(cache=True, fastmath=True)
def rk4_harmonics(w_stack, lam, eta, c0, t0, dt, n_steps, stride, out, out_norm2):
    """RK4 on the drive-harmonic expansion of the dressed amplitude flow.

    dc/dt = sum_l sin(l eta t) * diag(e^{i lam t}) W_l diag(e^{-i lam t}) c
    with W_l dense and l = 1..l_max.
    """
    dim = c0.shape[0]
    y = c0
    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)
    tmp = np.empty(dim, np.complex128)
    u = np.empty(dim, np.complex128)
    v = np.empty(dim, np.complex128)
    s = 0
    for step in range(n_steps):
        t = t0 + step * dt
        half = 0.5 * dt
        _harmonics_rhs(w_stack, lam, eta, t, y, u, v, k1)
        for i in range(dim):
            tmp[i] = y[i] + half * k1[i]
        _harmonics_rhs(w_stack, lam, eta, t + half, tmp, u, v, k2)
        for i in range(dim):
            tmp[i] = y[i] + half * k2[i]
        _harmonics_rhs(w_stack, lam, eta, t + half, tmp, u, v, k3)
        for i in range(dim):
            tmp[i] = y[i] + dt * k3[i]
        _harmonics_rhs(w_stack, lam, eta, t + dt, tmp, u, v, k4)
        c6 = dt / 6.0
        for i in range(dim):
            y[i] += c6 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
        if (step + 1) % stride == 0:
            norm2 = 0.0
            for i in range(dim):
                norm2 += y[i].real * y[i].real + y[i].imag * y[i].imag
            out_norm2[s] = norm2
            out[s] = y
            s += 1
    return s
