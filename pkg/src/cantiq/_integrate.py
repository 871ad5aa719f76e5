"""Adaptive embedded Runge-Kutta stepper (Dormand-Prince 5(4)).

Works on complex ndarrays of any shape. A ``post_accept`` hook runs after
every accepted step so callers can re-symmetrise state matrices or abort on
truncation overflow mid-integration.
"""

import numpy as np

from .errors import StepSizeUnderflow

# Dormand-Prince tableau (FSAL: the 7th stage is the next step's first).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_ERR = np.array([
    71 / 57600, 0.0, -71 / 16695, 71 / 1920,
    -17253 / 339200, 22 / 525, -1 / 40,
])


def _rms(arr):
    return float(np.sqrt(np.mean(np.abs(arr) ** 2)))


def adaptive_rk(rhs, y0, t_end, rtol=1e-8, atol=1e-10, post_accept=None):
    """Integrate dy/dt = rhs(t, y) from t = 0 to t_end.

    Classic PI-free step control: local error is measured against
    ``atol + rtol * |y|`` componentwise, steps shrink/grow with the 1/5
    power of the error ratio. Raises StepSizeUnderflow when the controller
    drives the step below the resolvable limit.
    """
    if t_end < 0:
        raise ValueError("integration span must be non-negative")
    y = np.array(y0, complex)
    if t_end == 0:
        return y
    t = 0.0
    k = [None] * 7
    k[0] = rhs(t, y)

    scale0 = atol + rtol * np.abs(y)
    d0 = _rms(y / scale0)
    d1 = _rms(k[0] / scale0)
    if d0 > 1e-5 and d1 > 1e-5:
        h = 0.01 * d0 / d1
    else:
        h = 1e-6 * t_end
    h = min(h, t_end)
    h_floor = 1e-14 * max(t_end, 1.0)

    # a final sliver below the floor is rounding debris, not failure
    while t_end - t > h_floor:
        h = min(h, t_end - t)
        if h < h_floor:
            raise StepSizeUnderflow(
                f"step size {h:.3e} underflowed at t={t:.6g}/{t_end:.6g}"
            )
        for i in range(1, 7):
            yi = y
            for j, aij in enumerate(_A[i]):
                if aij:
                    yi = yi + (h * aij) * k[j]
            k[i] = rhs(t + _C[i] * h, yi)
        y_new = y
        for i in range(7):
            if _B5[i]:
                y_new = y_new + (h * _B5[i]) * k[i]
        err = np.zeros_like(y)
        for i in range(7):
            if _ERR[i]:
                err = err + (h * _ERR[i]) * k[i]
        tol_scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = _rms(err / tol_scale)

        if err_norm <= 1.0:
            t += h
            y = y_new
            if post_accept is not None:
                y = post_accept(t, y)
                k[6] = rhs(t, y)
            k[0] = k[6]  # FSAL
            factor = 5.0 if err_norm == 0.0 else min(
                5.0, max(0.2, 0.9 * err_norm ** -0.2))
        else:
            factor = max(0.2, 0.9 * err_norm ** -0.2)
        h *= factor
    return y
