"""Unit-speed space curves and their Frenet frames."""

from __future__ import annotations

import math

import numpy as np


class FrenetError(ValueError):
    """Frenet frame undefined (curvature not positive)."""


class Curve:
    """Unit-speed curve parametrized by arc length ``t`` on ``domain``."""

    domain: tuple[float, float]
    periodic: bool = False

    def jets(self, t, order: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """Arrays ``kappa[i]``, ``tau[i]`` of the i-th derivatives, i <= order."""
        raise NotImplementedError

    def frame(self, t):
        """Point and Frenet frame ``(alpha, T, H, B)`` at ``t`` (each (..., 3))."""
        raise NotImplementedError

    def max_curvature(self, samples: int = 2001) -> float:
        t = np.linspace(*self.domain, samples)
        return float(np.max(np.abs(self.jets(t, 0)[0][0])))


class Circle(Curve):
    """Plane circle of radius ``radius`` about the origin in the xy-plane."""

    periodic = True

    def __init__(self, radius: float):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)
        self.domain = (0.0, 2 * math.pi * self.radius)

    def jets(self, t, order=1):
        t = np.asarray(t, dtype=float)
        kappa = np.zeros((order + 1,) + t.shape)
        tau = np.zeros_like(kappa)
        kappa[0] = 1.0 / self.radius
        return kappa, tau

    def frame(self, t):
        t = np.asarray(t, dtype=float)
        th = t / self.radius
        c, s, z = np.cos(th), np.sin(th), np.zeros_like(th)
        alpha = self.radius * np.stack([c, s, z], -1)
        T = np.stack([-s, c, z], -1)
        H = np.stack([-c, -s, z], -1)
        B = np.stack([z, z, np.ones_like(th)], -1)
        return alpha, T, H, B


class Helix(Curve):
    """Circular helix (R cos u, R sin u, pitch * u), reparametrized by arc length.

    ``pitch`` is the rise per radian, so kappa = R / (R^2 + pitch^2) and
    tau = pitch / (R^2 + pitch^2).
    """

    def __init__(self, radius: float, pitch: float, domain: tuple[float, float] | None = None):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)
        self.pitch = float(pitch)
        self.speed = math.hypot(self.radius, self.pitch)
        self.domain = domain or (0.0, 2 * math.pi * self.speed)
        self.kappa = self.radius / self.speed**2
        self.tau = self.pitch / self.speed**2

    def jets(self, t, order=1):
        t = np.asarray(t, dtype=float)
        kappa = np.zeros((order + 1,) + t.shape)
        tau = np.zeros_like(kappa)
        kappa[0] = self.kappa
        tau[0] = self.tau
        return kappa, tau

    def frame(self, t):
        t = np.asarray(t, dtype=float)
        w, R, p = self.speed, self.radius, self.pitch
        u = t / w
        c, s, z = np.cos(u), np.sin(u), np.zeros_like(u)
        alpha = np.stack([R * c, R * s, p * u], -1)
        T = np.stack([-R * s, R * c, np.full_like(u, p)], -1) / w
        H = np.stack([-c, -s, z], -1)
        B = np.stack([p * s, -p * c, np.full_like(u, R)], -1) / w
        return alpha, T, H, B


def _gram_schmidt(T, H, B):
    T = T / np.linalg.norm(T, axis=-1, keepdims=True)
    H = H - np.sum(H * T, -1, keepdims=True) * T
    H = H / np.linalg.norm(H, axis=-1, keepdims=True)
    B = B - np.sum(B * T, -1, keepdims=True) * T - np.sum(B * H, -1, keepdims=True) * H
    B = B / np.linalg.norm(B, axis=-1, keepdims=True)
    return T, H, B


class AnalyticCurve(Curve):
    """Curve determined by curvature and torsion functions.

    ``kappa`` and ``tau`` are vectorized callables of arc length.  Derivative
    callables may be supplied as lists (``kappa_derivs[0]`` is kappa'); missing
    derivatives fall back to central differences.  The frame is obtained by
    RK4 integration of the Frenet-Serret system from ``(point0, frame0)`` at
    ``domain[0]``, re-orthonormalized after every step.
    """

    def __init__(
        self,
        kappa,
        tau,
        domain: tuple[float, float],
        kappa_derivs=(),
        tau_derivs=(),
        point0=(0.0, 0.0, 0.0),
        frame0=((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
        steps: int = 4000,
    ):
        self.kappa = kappa
        self.tau = tau
        self.kappa_derivs = list(kappa_derivs)
        self.tau_derivs = list(tau_derivs)
        self.domain = (float(domain[0]), float(domain[1]))
        self.point0 = np.asarray(point0, dtype=float)
        self.frame0 = np.asarray(frame0, dtype=float)
        self.steps = int(steps)
        self._table = None

    @classmethod
    def from_expressions(cls, kappa: str, tau: str, domain, order: int = 8, **kw) -> AnalyticCurve:
        """Build from expression strings in ``t`` (derivatives taken symbolically)."""
        import sympy

        t = sympy.Symbol("t")
        fns = []
        for text in (kappa, tau):
            expr = sympy.sympify(text, locals={"t": t})
            derivs = [expr]
            for _ in range(order):
                derivs.append(sympy.diff(derivs[-1], t))
            fns.append([_vectorize(sympy.lambdify(t, d, "numpy")) for d in derivs])
        return cls(fns[0][0], fns[1][0], domain, fns[0][1:], fns[1][1:], **kw)

    def _derivative(self, fn, derivs, i, t):
        if i == 0:
            return np.broadcast_to(np.asarray(fn(t), dtype=float), t.shape)
        if i <= len(derivs):
            return np.broadcast_to(np.asarray(derivs[i - 1](t), dtype=float), t.shape)
        h = 1e-3
        prev = lambda s: self._derivative(fn, derivs, i - 1, s)  # noqa: E731
        return (-prev(t + 2 * h) + 8 * prev(t + h) - 8 * prev(t - h) + prev(t - 2 * h)) / (12 * h)

    def jets(self, t, order=1):
        t = np.asarray(t, dtype=float)
        kappa = np.stack([self._derivative(self.kappa, self.kappa_derivs, i, t) for i in range(order + 1)])
        tau = np.stack([self._derivative(self.tau, self.tau_derivs, i, t) for i in range(order + 1)])
        return kappa, tau

    def _rhs(self, t, state):
        k = np.asarray(self.kappa(t), dtype=float)[..., None]
        w = np.asarray(self.tau(t), dtype=float)[..., None]
        T, H, B = state[..., 3:6], state[..., 6:9], state[..., 9:12]
        return np.concatenate([T, k * H, -k * T + w * B, -w * H], -1)

    def _step(self, t, state, dt):
        dt_ = np.asarray(dt)[..., None]
        k1 = self._rhs(t, state)
        k2 = self._rhs(t + dt / 2, state + dt_ / 2 * k1)
        k3 = self._rhs(t + dt / 2, state + dt_ / 2 * k2)
        k4 = self._rhs(t + dt, state + dt_ * k3)
        new = state + dt_ / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        T, H, B = _gram_schmidt(new[..., 3:6], new[..., 6:9], new[..., 9:12])
        return np.concatenate([new[..., :3], T, H, B], -1)

    def integrate(self, steps: int | None = None):
        """Nodes ``ts`` and states (point, T, H, B packed as 12-vectors)."""
        steps = steps or self.steps
        ts = np.linspace(*self.domain, steps + 1)
        k0 = self.jets(ts, 0)[0][0]
        if np.any(k0 <= 0):
            raise FrenetError("Frenet frame undefined: curvature <= 0 on the domain")
        dt = ts[1] - ts[0]
        state = np.concatenate([self.point0, *_gram_schmidt(*self.frame0)])
        states = np.empty((steps + 1, 12))
        states[0] = state
        for i in range(steps):
            state = self._step(ts[i], state, dt)
            states[i + 1] = state
        return ts, states

    def frame(self, t):
        if self._table is None:
            self._table = self.integrate()
        ts, states = self._table
        t = np.asarray(t, dtype=float)
        flat = t.reshape(-1)
        idx = np.clip(np.rint((flat - ts[0]) / (ts[1] - ts[0])).astype(int), 0, len(ts) - 1)
        out = self._step(ts[idx], states[idx], flat - ts[idx]).reshape(t.shape + (12,))
        return out[..., :3], out[..., 3:6], out[..., 6:9], out[..., 9:12]


def _vectorize(fn):
    def wrapped(t):
        return np.broadcast_to(np.asarray(fn(t), dtype=float), np.shape(t))

    return wrapped


def frenet_integrate(curve: Curve, steps: int):
    """RK4 Frenet-Serret integration of ``curve``'s (kappa, tau).

    Returns ``(ts, points, T, H, B)``; the initial point and frame are taken
    from ``curve.frame`` at the start of the domain.
    """
    alpha0, T0, H0, B0 = (np.asarray(x) for x in curve.frame(np.array(curve.domain[0])))
    kappa = lambda s: curve.jets(s, 0)[0][0]  # noqa: E731
    tau = lambda s: curve.jets(s, 0)[1][0]  # noqa: E731
    integ = AnalyticCurve(kappa, tau, curve.domain, point0=alpha0, frame0=(T0, H0, B0), steps=steps)
    ts, states = integ.integrate(steps)
    return ts, states[:, :3], states[:, 3:6], states[:, 6:9], states[:, 9:12]
