"""Hot loop: piecewise-constant exponential propagator of one adiabatic stroke.

U = prod_k exp(-i H_k dt), dt = duration / n_steps, later times multiplied on
the left; H_k = b0 I_z + B_k I_x with B_k from ``step_fields``.

Two backends compute the same product:

* ``numpy``: stacks every step Hamiltonian, diagonalises the stack with
  one batched ``eigh`` call and reduces the exponentials pairwise.
* ``numba``: a compiled loop that diagonalises each step in closed form.
  b0 I_z + b I_x = delta * R I_z R^dagger with R = exp(-i theta I_y),
  theta = atan2(b, b0), so exp(-i H dt) = R exp(-i delta dt I_z) R^dagger.
  R comes from one precomputed eigendecomposition of I_y. The running
  product is pulled back onto the unitary group every few hundred steps.

Set ``SPINOTTO_DISABLE_JIT=1`` to force the numpy path; it is also used when
numba is not importable.
"""

import os

import numpy as np

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    NUMBA_AVAILABLE = False

JIT_DISABLED = os.environ.get("SPINOTTO_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}
BACKENDS = ("numpy", "numba") if NUMBA_AVAILABLE else ("numpy",)
DEFAULT_BACKEND = "numba" if NUMBA_AVAILABLE and not JIT_DISABLED else "numpy"


def step_fields(b_start, b_end, shape_code, exponent, n_steps, rule="average"):
    """Transverse field held on each of ``n_steps`` equal sub-intervals.

    ``rule="midpoint"`` samples B at the sub-interval centre. ``rule="average"``
    uses the exact mean of B over the sub-interval; it keeps second order for
    ramps whose slope diverges at t = 0, e.g. n = 1/2.
    """
    k = np.arange(n_steps, dtype=float)
    ds = 1.0 / n_steps
    if rule == "midpoint":
        s = (k + 0.5) * ds
        ramp = np.sin(0.5 * np.pi * s) if shape_code == 0 else s**exponent
    elif rule == "average":
        lo = k * ds
        if shape_code == 0:
            # cos(a) - cos(b) = 2 sin((a+b)/2) sin((b-a)/2), free of cancellation
            ramp = (4.0 / (np.pi * ds)) * np.sin(0.25 * np.pi * (2 * lo + ds)) * np.sin(0.25 * np.pi * ds)
        else:
            p1 = exponent + 1.0
            ramp = np.empty(n_steps)
            ramp[0] = ds**exponent / p1
            # (hi^p1 - lo^p1) / (p1 ds) = lo^p1 expm1(p1 log1p(ds/lo)) / (p1 ds)
            ramp[1:] = lo[1:] ** p1 * np.expm1(p1 * np.log1p(ds / lo[1:])) / (p1 * ds)
    else:
        raise ValueError(f"unknown field rule {rule!r}; use 'average' or 'midpoint'")
    return b_start + (b_end - b_start) * ramp


def _ordered_product(mats):
    """mats[N-1] @ ... @ mats[1] @ mats[0] by pairwise reduction."""
    d = mats.shape[-1]
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            mats = np.concatenate([mats, np.eye(d, dtype=mats.dtype)[None]])
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


def propagator_numpy(b0, fields, dt, ix, iz):
    ham = b0 * iz[None, :, :] + fields[:, None, None] * ix[None, :, :]
    w, v = np.linalg.eigh(ham)
    steps = (v * np.exp(-1j * dt * w)[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    return _ordered_product(steps)


# the closed-form step factors are unitary only to a few ulps with a
# consistent bias, so the sequential product drifts linearly in n_steps
_REUNITARIZE_EVERY = 256

if NUMBA_AVAILABLE:

    @numba.njit(cache=True)
    def _propagator_jit(b0, fields, dt, my, vy, mz):
        d = mz.shape[0]
        n_steps = fields.shape[0]
        u = np.eye(d, dtype=np.complex128)
        rot = np.empty((d, d), dtype=np.complex128)
        step = np.empty((d, d), dtype=np.complex128)
        tmp = np.empty((d, d), dtype=np.complex128)
        ph_y = np.empty(d, dtype=np.complex128)
        ph_z = np.empty(d, dtype=np.complex128)
        vy_h = np.conj(vy.T).copy()
        for k in range(n_steps):
            b = fields[k]
            theta = np.arctan2(b, b0)
            delta = np.hypot(b0, b)
            for l in range(d):
                ph_y[l] = np.exp(-1j * theta * my[l])
                ph_z[l] = np.exp(-1j * delta * dt * mz[l])
            # rot = vy diag(ph_y) vy^dagger
            for i in range(d):
                for j in range(d):
                    acc = 0j
                    for l in range(d):
                        acc += vy[i, l] * ph_y[l] * vy_h[l, j]
                    rot[i, j] = acc
            # step = rot diag(ph_z) rot^dagger
            for i in range(d):
                for j in range(d):
                    acc = 0j
                    for l in range(d):
                        acc += rot[i, l] * ph_z[l] * np.conj(rot[j, l])
                    step[i, j] = acc
            for i in range(d):
                for j in range(d):
                    acc = 0j
                    for l in range(d):
                        acc += step[i, l] * u[l, j]
                    tmp[i, j] = acc
            for i in range(d):
                for j in range(d):
                    u[i, j] = tmp[i, j]
            if (k + 1) % _REUNITARIZE_EVERY == 0 or k == n_steps - 1:
                _polar_step(u, tmp, step)
        return u

    @numba.njit(cache=True)
    def _polar_step(u, gram, out):
        """u <- u (3 - u^dagger u) / 2, one Newton-Schulz step toward the unitary polar factor."""
        d = u.shape[0]
        for i in range(d):
            for j in range(d):
                acc = 0j
                for l in range(d):
                    acc += np.conj(u[l, i]) * u[l, j]
                gram[i, j] = -0.5 * acc
            gram[i, i] += 1.5
        for i in range(d):
            for j in range(d):
                acc = 0j
                for l in range(d):
                    acc += u[i, l] * gram[l, j]
                out[i, j] = acc
        for i in range(d):
            for j in range(d):
                u[i, j] = out[i, j]


def propagator_numba(b0, fields, dt, iy, iz):
    if not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is not installed")
    my, vy = np.linalg.eigh(iy)
    mz = np.ascontiguousarray(np.real(np.diag(iz)))
    return _propagator_jit(float(b0), np.ascontiguousarray(fields, dtype=float), float(dt), my, np.ascontiguousarray(vy), mz)


def stroke_unitary(b0, b_start, b_end, duration, shape_code, exponent, ops, n_steps, rule="average", backend=None):
    backend = backend or DEFAULT_BACKEND
    fields = step_fields(b_start, b_end, shape_code, exponent, n_steps, rule)
    dt = duration / n_steps
    if backend == "numba":
        return propagator_numba(b0, fields, dt, ops.iy, ops.iz)
    if backend == "numpy":
        return propagator_numpy(b0, fields, dt, ops.ix, ops.iz)
    raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")
