"""Finite-difference derivative engine used by every numerical oracle.

All cross-checks in this package compare closed-form expressions against
derivatives that are recomputed numerically from scratch.  The engine is
deliberately simple and well characterised:

* first derivatives use the 4th-order central stencil
  ``(-f(x+2h) + 8 f(x+h) - 8 f(x-h) + f(x-2h)) / (12 h)``,
* one optional level of Richardson extrapolation combines step ``h`` with
  step ``h/2`` and cancels the leading ``O(h^4)`` term, giving ``O(h^6)``,
* steps scale with the magnitude of the coordinate being displaced.

Frame derivatives on the punctured cotangent bundle (the adapted frame
``d/dq^i + p_k Gamma^k_{ih} d/dp_h`` and ``d/dp_i``) are built on top of
plain partial derivatives in the chart coordinates ``(q, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import StencilError

__all__ = [
    "FDConfig",
    "fd_partial",
    "fd_gradient",
    "fd_second",
    "richardson_extrapolate",
    "frame_derivative",
    "frame_gradient",
]

# Coefficients of the 4th-order central first-derivative stencil, offsets
# (-2, -1, +1, +2) in units of the step.
_STENCIL_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_STENCIL_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


@dataclass(frozen=True)
class FDConfig:
    """Step policy for the finite-difference engine.

    Attributes:
        base_step: nominal displacement before relative scaling.
        richardson_levels: number of step sizes combined by Richardson
            extrapolation; 1 means the raw 4th-order stencil, 2 adds one
            extrapolation level (the default).
        relative: if true, the step for coordinate ``x_d`` is
            ``base_step * max(1, |x_d|)``.
    """

    base_step: float = 1e-4
    richardson_levels: int = 2
    relative: bool = True

    def __post_init__(self) -> None:
        if not (self.base_step > 0.0 and np.isfinite(self.base_step)):
            raise StencilError(f"base_step must be positive and finite, got {self.base_step}")
        if self.richardson_levels < 1:
            raise StencilError(f"richardson_levels must be >= 1, got {self.richardson_levels}")

    def step_for(self, coordinate: float) -> float:
        h = self.base_step * max(1.0, abs(coordinate)) if self.relative else self.base_step
        if h <= 0.0 or not np.isfinite(h):
            raise StencilError(f"degenerate finite-difference step {h}")
        return h


def richardson_extrapolate(coarse: np.ndarray, fine: np.ndarray, order: int = 4, ratio: float = 2.0):
    """Combine estimates at step ``h`` (coarse) and ``h / ratio`` (fine) for a
    method whose leading error is ``O(h^order)``."""
    weight = ratio**order
    return (weight * fine - coarse) / (weight - 1.0)


def _stencil_eval(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, d: int, h: float):
    acc = None
    for offset, weight in zip(_STENCIL_OFFSETS, _STENCIL_WEIGHTS):
        shifted = np.array(x, dtype=float)
        shifted[d] += offset * h
        value = np.asarray(f(shifted), dtype=float)
        if not np.all(np.isfinite(value)):
            raise StencilError(
                f"non-finite stencil value at coordinate {d}, offset {offset * h:+.3e}"
            )
        acc = weight * value if acc is None else acc + weight * value
    return acc / h


def fd_partial(
    f: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    d: int,
    cfg: FDConfig | None = None,
) -> np.ndarray:
    """Partial derivative of ``f`` with respect to coordinate ``d`` at ``x``.

    ``f`` may return a scalar or an ndarray of any fixed shape; the result
    has the same shape.
    """
    cfg = cfg or FDConfig()
    x = np.asarray(x, dtype=float)
    h = cfg.step_for(x[d])
    estimate = _stencil_eval(f, x, d, h)
    for _ in range(cfg.richardson_levels - 1):
        h *= 0.5
        finer = _stencil_eval(f, x, d, h)
        estimate = richardson_extrapolate(estimate, finer, order=4)
    return estimate


def fd_gradient(f, x, cfg: FDConfig | None = None) -> np.ndarray:
    """All partial derivatives of ``f`` at ``x``; axis 0 indexes the coordinate."""
    x = np.asarray(x, dtype=float)
    return np.stack([fd_partial(f, x, d, cfg) for d in range(x.size)])


def fd_second(
    f: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    d1: int,
    d2: int,
    cfg: FDConfig | None = None,
) -> np.ndarray:
    """Second partial derivative, as a first difference of first differences.

    The inner derivative uses a step one decade larger than usual so that
    the outer stencil differentiates a smooth function rather than
    round-off noise.  Used only by slow-path oracles.
    """
    cfg = cfg or FDConfig()
    inner_cfg = FDConfig(
        base_step=cfg.base_step,
        richardson_levels=cfg.richardson_levels,
        relative=cfg.relative,
    )
    outer_cfg = FDConfig(
        base_step=10.0 * cfg.base_step,
        richardson_levels=cfg.richardson_levels,
        relative=cfg.relative,
    )

    def inner(y: np.ndarray):
        return fd_partial(f, y, d2, inner_cfg)

    return fd_partial(inner, np.asarray(x, dtype=float), d1, outer_cfg)


# ---------------------------------------------------------------------------
# frame derivatives on the cotangent bundle
# ---------------------------------------------------------------------------


def _joint(field, n: int):
    """Wrap a field of (q, p) as a field of the joint 2n-vector z = (q, p)."""

    def f(z: np.ndarray):
        return field(z[:n], z[n:])

    return f


def frame_derivative(
    field,
    q: np.ndarray,
    p: np.ndarray,
    kind: str,
    index: int,
    gamma: np.ndarray,
    cfg: FDConfig | None = None,
) -> np.ndarray:
    """Derivative of ``field(q, p)`` along one adapted-frame direction.

    ``kind`` is ``"h"`` for the horizontal field ``d/dq^i + p_k Gamma^k_{ih}
    d/dp_h`` (``gamma`` supplies the base Christoffel symbols at the centre
    point, indexed ``gamma[k, i, j] = Gamma^k_{ij}``) and ``"v"`` for
    ``d/dp_i``.
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    n = q.size
    z = np.concatenate([q, p])
    f = _joint(field, n)
    if kind == "v":
        return fd_partial(f, z, n + index, cfg)
    if kind != "h":
        raise ValueError(f"kind must be 'h' or 'v', got {kind!r}")
    out = fd_partial(f, z, index, cfg)
    gamma0 = np.einsum("k,kih->ih", p, gamma)
    for h_idx in range(n):
        coeff = gamma0[index, h_idx]
        if coeff != 0.0:
            out = out + coeff * fd_partial(f, z, n + h_idx, cfg)
    return out


def frame_gradient(
    field,
    q: np.ndarray,
    p: np.ndarray,
    gamma: np.ndarray,
    cfg: FDConfig | None = None,
) -> np.ndarray:
    """Derivatives of ``field(q, p)`` along all 2n adapted-frame directions.

    Axis 0 of the result indexes the frame: entries ``0..n-1`` are the
    horizontal directions, entries ``n..2n-1`` the vertical ones.  The 2n
    coordinate partials are evaluated once and recombined, which is much
    cheaper than 2n independent ``frame_derivative`` calls.
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    n = q.size
    z = np.concatenate([q, p])
    f = _joint(field, n)
    partials = [fd_partial(f, z, d, cfg) for d in range(2 * n)]
    gamma0 = np.einsum("k,kih->ih", p, gamma)
    rows = []
    for i in range(n):
        row = partials[i]
        for h_idx in range(n):
            row = row + gamma0[i, h_idx] * partials[n + h_idx]
        rows.append(row)
    rows.extend(partials[n:])
    return np.stack(rows)
