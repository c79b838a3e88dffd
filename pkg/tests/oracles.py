"""Reference computations that share no solver code with the package."""

import numpy as np


def damped_gradient_objective(t, target, w0, xi, n, p, step=1e-3, iters=100_000, refresh=100):
    """Minimise sum w0 |target - Q(t)|^p over Q(xi) = 1, deg Q <= n, by gradient descent.

    Works in real coordinates, starting from Q = 1. The gradient is
    preconditioned by the exact Hessian, recomputed every ``refresh`` steps
    (curvature vanishes like |e|^(p-2), so a frozen metric stalls).
    """
    cols = (t - xi)[:, None] * t[:, None] ** np.arange(n)[None, :]
    # real Jacobian: residual (re, im) as a function of (Re r, Im r)
    J = np.block([[cols.real, -cols.imag], [cols.imag, cols.real]])
    b = np.concatenate([(target - 1).real, (target - 1).imag])
    M = len(t)
    x = np.zeros(2 * n)

    def parts(x):
        e = b - J @ x
        er, ei = e[:M], e[M:]
        a2 = er * er + ei * ei
        return e, er, ei, a2

    def hessian(x):
        _, er, ei, a2 = parts(x)
        a = np.sqrt(a2)
        s = w0 * p * a ** (p - 2)
        c = w0 * p * (p - 2) * np.where(a > 0, a, 1.0) ** (p - 4) if p > 2 else np.zeros(M)
        # per-node 2x2 blocks s I + c e e^T, assembled as J^T H J
        Hrr = s + c * er * er
        Hii = s + c * ei * ei
        Hri = c * er * ei
        top, bot = J[:M], J[M:]
        return (top.T * Hrr) @ top + (bot.T * Hii) @ bot + (top.T * Hri) @ bot + (bot.T * Hri) @ top

    for k in range(iters):
        if k % refresh == 0:
            P = np.linalg.inv(hessian(x))
        e, er, ei, a2 = parts(x)
        g = -(J.T @ np.concatenate([w0 * p * a2 ** ((p - 2) / 2) * er, w0 * p * a2 ** ((p - 2) / 2) * ei]))
        x = x - step * (P @ g)
    e, er, ei, a2 = parts(x)
    return float(np.sum(w0 * a2 ** (p / 2)))
