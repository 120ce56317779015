"""Cubic Ricci-type vector fields on metric coefficients (x1, x2, x3).

All maps are vectorized over a trailing axis of length 3, so a single point
(3,) and a batch (N, 3) both work. Coordinates are the metric coefficients on
the three isotropy summands; the unnormalized field R satisfies dx/dt = R(x)
for the homogeneous flow, and the projected field X keeps the flow on the
plane x1 + x2 + x3 = 1.
"""

from __future__ import annotations

import numpy as np

from .flags import FlagSpec


def _family_abc(spec: FlagSpec):
    # family E shares the (1,1,1) cubic of family A
    if spec.family == "E":
        return 1, 1, 1
    return spec.params


def ricci_field(spec: FlagSpec, x) -> np.ndarray:
    """Unnormalized cubic field R(x); homogeneous of degree 3.

    Each component carries an explicit factor of its own coordinate, so the
    coordinate hyperplanes {x_i = 0} are invariant exactly, not just to
    rounding.
    """
    x = np.asarray(x, dtype=float)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    if spec.family == "D":
        (ell,) = spec.params
        r1 = -x1 * ((ell - 2) * (x1 * x1 - (x2 - x3) ** 2) + 2 * ell * x2 * x3)
        r2 = -x2 * ((ell - 2) * (x2 * x2 - (x3 - x1) ** 2) + 2 * ell * x1 * x3)
        r3 = -x3 * (2 * (x3 * x3 - (x1 - x2) ** 2) + 4 * (ell - 2) * x1 * x2)
    else:
        m, n, p = _family_abc(spec)
        r1 = -x1 * (p * (x1 * x1 - (x2 - x3) ** 2) + 2 * (m + n) * x2 * x3)
        r2 = -x2 * (n * (x2 * x2 - (x3 - x1) ** 2) + 2 * (m + p) * x1 * x3)
        r3 = -x3 * (m * (x3 * x3 - (x1 - x2) ** 2) + 2 * (n + p) * x1 * x2)
    return np.stack([r1, r2, r3], axis=-1)


def projected_field(spec: FlagSpec, x) -> np.ndarray:
    """Field X(x) = R(x) - (sum R(x)) x, tangent to {sum x = 1}."""
    x = np.asarray(x, dtype=float)
    r = ricci_field(spec, x)
    total = r.sum(axis=-1, keepdims=True)
    return r - total * x


def reduced_field(spec: FlagSpec, uv) -> np.ndarray:
    """Planar restriction Y(u, v): X evaluated at (u, v, 1-u-v), first two components."""
    uv = np.asarray(uv, dtype=float)
    u, v = uv[..., 0], uv[..., 1]
    x = np.stack([u, v, 1.0 - u - v], axis=-1)
    return projected_field(spec, x)[..., :2]


def cone_form(x) -> np.ndarray:
    """Quadratic F(x) = x1^2 + x2^2 + x3^2 - 2(x1 x2 + x1 x3 + x2 x3).

    F < 0 on the realizable region, F = 0 on its boundary cone.
    """
    x = np.asarray(x, dtype=float)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return x1 * x1 + x2 * x2 + x3 * x3 - 2 * (x1 * x2 + x1 * x3 + x2 * x3)


def cone_form_grad(x) -> np.ndarray:
    """Gradient of F: -2(-x1+x2+x3, x1-x2+x3, x1+x2-x3)."""
    x = np.asarray(x, dtype=float)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return np.stack(
        [-2 * (-x1 + x2 + x3), -2 * (x1 - x2 + x3), -2 * (x1 + x2 - x3)],
        axis=-1,
    )


def cone_flux(spec: FlagSpec, x, tol: float = 1e-9) -> np.ndarray:
    """Flux R . grad F at points on the cone {F = 0}.

    Rejects points with |F| > tol * max(1, |x|_inf^2); F scales quadratically,
    so the tolerance is applied at unit scale.
    """
    x = np.asarray(x, dtype=float)
    f = cone_form(x)
    scale = np.maximum(1.0, np.max(np.abs(x), axis=-1) ** 2)
    if np.any(np.abs(f) > tol * scale):
        worst = float(np.max(np.abs(f) / scale))
        raise ValueError(
            "point not on the cone: |F| = %.3e exceeds tolerance %.1e" % (worst, tol)
        )
    r = ricci_field(spec, x)
    return (r * cone_form_grad(x)).sum(axis=-1)


def cone_flux_closed_form(spec: FlagSpec, x) -> np.ndarray:
    """Closed form that cone_flux takes on {F = 0}.

    Family A/E: -8 x1 x2 x3 (p x1 + n x2 + m x3); family D with parameter l:
    -8 x1 x2 x3 ((l-2)(x1 + x2) + 2 x3). Both are nonpositive on the first
    orthant and vanish only where some coordinate does.
    """
    x = np.asarray(x, dtype=float)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    if spec.family == "D":
        (ell,) = spec.params
        lin = (ell - 2) * (x1 + x2) + 2 * x3
    else:
        m, n, p = _family_abc(spec)
        lin = p * x1 + n * x2 + m * x3
    return -8.0 * x1 * x2 * x3 * lin
