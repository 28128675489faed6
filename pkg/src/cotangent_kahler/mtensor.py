"""Pointwise data on the punctured cotangent bundle and the fiber metric jets.

Every field of interest here is an M-tensor: its components at ``(q, p)``
are built from the base metric, the momentum covector, and the energy
density ``t = g^{ik} p_i p_k / 2``.  Such fields are parallel along the
horizontal distribution -- their frame derivative ``d/dq^k + p . Gamma_k
d/dp`` equals the usual Christoffel corrections -- so all genuinely new
information sits in the fiber derivatives ``d/dp_k``, which this module
supplies in closed form through second order.

The bundle metric is block diagonal in the adapted frame: a weighted
Sasaki-type block ``a sqrt(t) g_ij + v(t) p_i p_j`` on horizontal vectors
and its matrix inverse on vertical ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .base import (
    BaseCurvature,
    MetricJet,
    ModelParams,
    base_curvature,
    christoffel,
    space_form_metric,
)
from .errors import GeometryError, PositivityError, ZeroSectionError

__all__ = [
    "ZERO_SECTION_TOL",
    "energy_density",
    "CotangentPoint",
    "MTensor",
    "horizontal_corrections",
    "AdaptedVector",
    "BlockBilinear",
    "BlockOperator",
    "FiberJets",
    "horizontal_metric",
    "vertical_metric",
    "fiber_jets",
    "assemble_metric",
    "frame_bracket",
    "bundle_metric_fields",
]

ZERO_SECTION_TOL = 1e-12


def energy_density(g_inv: np.ndarray, p: np.ndarray) -> float:
    """``t = g^{ik} p_i p_k / 2``; rejects points on the zero section."""
    with np.errstate(invalid="ignore", over="ignore"):
        t = 0.5 * float(p @ g_inv @ p)
    if not np.isfinite(t):
        raise GeometryError("energy density is not finite")
    if t < ZERO_SECTION_TOL:
        raise ZeroSectionError(
            f"energy density {t:.3e} below {ZERO_SECTION_TOL:.0e}; "
            "the structure degenerates on the zero section"
        )
    return t


# ---- point data ----


@dataclass(frozen=True)
class CotangentPoint:
    """Everything the fiberwise formulas need at one point ``(q, p)``.

    ``p_up`` is the momentum with raised index, ``p_gamma[i, h] =
    p_k Gamma^k_{ih}`` feeds the horizontal frame, and ``p_riemann[k, i, j]
    = p_h R^h_{kij}`` is the curvature contracted with the momentum.
    """

    q: np.ndarray
    p: np.ndarray
    jet: MetricJet
    curv: BaseCurvature
    t: float
    p_up: np.ndarray = field(repr=False)
    p_gamma: np.ndarray = field(repr=False)
    p_riemann: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.p.shape[0]

    @property
    def g(self) -> np.ndarray:
        return self.jet.g

    @property
    def g_inv(self) -> np.ndarray:
        return self.jet.g_inv

    @property
    def gamma(self) -> np.ndarray:
        return self.curv.gamma

    @property
    def riemann(self) -> np.ndarray:
        return self.curv.riemann

    @classmethod
    def from_jet(cls, q: np.ndarray, p: np.ndarray, jet: MetricJet) -> "CotangentPoint":
        p = np.asarray(p, dtype=float)
        if p.shape != (jet.n,):
            raise GeometryError(f"momentum shape {p.shape} does not match dimension {jet.n}")
        curv = base_curvature(jet)
        t = energy_density(jet.g_inv, p)
        return cls(
            q=np.asarray(q, dtype=float),
            p=p,
            jet=jet,
            curv=curv,
            t=t,
            p_up=jet.g_inv @ p,
            p_gamma=np.einsum("k,kih->ih", p, curv.gamma),
            p_riemann=np.einsum("h,hkij->kij", p, curv.riemann),
        )

    @classmethod
    def at(cls, q: np.ndarray, p: np.ndarray, params: ModelParams) -> "CotangentPoint":
        return cls.from_jet(q, p, space_form_metric(q, params))


# ---- M-tensor calculus ----


@dataclass(frozen=True)
class MTensor:
    """Components plus index variance, one of ``u``/``d`` per axis."""

    components: np.ndarray
    variance: str

    def __post_init__(self) -> None:
        if self.components.ndim != len(self.variance):
            raise GeometryError(
                f"variance {self.variance!r} does not match array of "
                f"rank {self.components.ndim}"
            )
        if set(self.variance) - {"u", "d"}:
            raise GeometryError(f"variance {self.variance!r} must consist of 'u'/'d'")


def horizontal_corrections(pt: CotangentPoint, tensor: MTensor) -> np.ndarray:
    """Predicted horizontal frame derivative of an M-tensor.

    Returns ``out[k, ...] = delta_k T``, which for an M-tensor is pure
    Christoffel bookkeeping: ``+Gamma^l_{km} T[..l..]`` on each lower slot,
    ``-Gamma^m_{kl} T[..l..]`` on each upper slot.
    """
    comp = tensor.components
    out = np.zeros((pt.n,) + comp.shape)
    for axis, var in enumerate(tensor.variance):
        moved = np.moveaxis(comp, axis, 0)
        if var == "d":
            corr = np.einsum("lkm,l...->km...", pt.gamma, moved)
        else:
            corr = -np.einsum("mkl,l...->km...", pt.gamma, moved)
        out += np.moveaxis(corr, 1, axis + 1)
    return out


# ---- adapted-frame containers ----


@dataclass(frozen=True)
class AdaptedVector:
    """Tangent vector split into horizontal and vertical frame components."""

    h: np.ndarray
    v: np.ndarray

    def __add__(self, other: "AdaptedVector") -> "AdaptedVector":
        return AdaptedVector(self.h + other.h, self.v + other.v)

    def __sub__(self, other: "AdaptedVector") -> "AdaptedVector":
        return AdaptedVector(self.h - other.h, self.v - other.v)

    def __mul__(self, scalar: float) -> "AdaptedVector":
        return AdaptedVector(self.h * scalar, self.v * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "AdaptedVector":
        return AdaptedVector(-self.h, -self.v)

    @classmethod
    def zero(cls, n: int) -> "AdaptedVector":
        return cls(np.zeros(n), np.zeros(n))

    @classmethod
    def basis(cls, n: int, kind: str, index: int) -> "AdaptedVector":
        vec = cls.zero(n)
        (vec.h if kind == "h" else vec.v)[index] = 1.0
        return vec

    def norm(self) -> float:
        return float(np.sqrt(self.h @ self.h + self.v @ self.v))


@dataclass(frozen=True)
class BlockBilinear:
    """Bilinear form on adapted vectors, stored as four frame blocks."""

    hh: np.ndarray
    hv: np.ndarray
    vh: np.ndarray
    vv: np.ndarray

    def pair(self, x: AdaptedVector, y: AdaptedVector) -> float:
        return float(
            x.h @ self.hh @ y.h
            + x.h @ self.hv @ y.v
            + x.v @ self.vh @ y.h
            + x.v @ self.vv @ y.v
        )


@dataclass(frozen=True)
class BlockOperator:
    """Endomorphism of the adapted frame, stored as four blocks."""

    hh: np.ndarray
    hv: np.ndarray
    vh: np.ndarray
    vv: np.ndarray

    def apply(self, x: AdaptedVector) -> AdaptedVector:
        return AdaptedVector(
            h=self.hh @ x.h + self.hv @ x.v,
            v=self.vh @ x.h + self.vv @ x.v,
        )

    def compose(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator(
            hh=self.hh @ other.hh + self.hv @ other.vh,
            hv=self.hh @ other.hv + self.hv @ other.vv,
            vh=self.vh @ other.hh + self.vv @ other.vh,
            vv=self.vh @ other.hv + self.vv @ other.vv,
        )


# ---- bundle metric blocks and their fiber jets ----


@dataclass(frozen=True)
class FiberJets:
    """Metric blocks with fiber derivatives through second order.

    ``gh`` is the horizontal block, ``gv`` the vertical one; ``dgh[k, i, j]
    = d gh_ij / d p_k`` and likewise ``ddgh[l, k, i, j]``, ``dgv[m, k, l]``,
    ``ddgv[r, m, k, l]``.
    """

    gh: np.ndarray
    gv: np.ndarray
    dgh: np.ndarray
    ddgh: np.ndarray
    dgv: np.ndarray
    ddgv: np.ndarray


def _check_positivity(pt: CotangentPoint, a: float, v: float) -> float:
    """Radial eigenvalue ``a sqrt(t) + 2 t v``; the metric is positive iff
    it is (the complementary eigenvalue ``a sqrt(t)`` always is)."""
    radial = a * np.sqrt(pt.t) + 2.0 * pt.t * v
    if radial <= 0.0:
        raise PositivityError(
            f"horizontal block degenerates: a*sqrt(t) + 2*t*v = {radial:.3e} <= 0 "
            f"at t = {pt.t:.6g}"
        )
    return radial


def horizontal_metric(pt: CotangentPoint, params: ModelParams, profile) -> np.ndarray:
    """``a sqrt(t) g_ij + v(t) p_i p_j`` with the positivity bound enforced."""
    v = float(profile.v(pt.t))
    _check_positivity(pt, params.a_metric, v)
    return params.a_metric * np.sqrt(pt.t) * pt.g + v * np.outer(pt.p, pt.p)


def vertical_metric(pt: CotangentPoint, params: ModelParams, profile) -> np.ndarray:
    """Matrix inverse of the horizontal block, in closed form:
    ``g^kl / (a sqrt(t)) + w p^k p^l`` with ``w = -v / (a t (a + 2 sqrt(t) v))``."""
    a = params.a_metric
    v = float(profile.v(pt.t))
    _check_positivity(pt, a, v)
    w = -v / (a * pt.t * (a + 2.0 * np.sqrt(pt.t) * v))
    return pt.g_inv / (a * np.sqrt(pt.t)) + w * np.outer(pt.p_up, pt.p_up)


def _w_jet(t: float, a: float, v: float, dv: float, d2v: float) -> tuple[float, float, float]:
    """``w = -v/D`` with ``D = a^2 t + 2 a t^(3/2) v``, plus ``w'``, ``w''``."""
    st = np.sqrt(t)
    d0 = a * a * t + 2.0 * a * t * st * v
    d1 = a * a + 3.0 * a * st * v + 2.0 * a * t * st * dv
    d2 = 1.5 * a * v / st + 6.0 * a * st * dv + 2.0 * a * t * st * d2v
    w = -v / d0
    w1 = -dv / d0 + v * d1 / d0**2
    w2 = -d2v / d0 + (2.0 * dv * d1 + v * d2) / d0**2 - 2.0 * v * d1**2 / d0**3
    return w, w1, w2


def fiber_jets(pt: CotangentPoint, params: ModelParams, profile) -> FiberJets:
    """Metric blocks and their first and second fiber derivatives.

    Everything follows from ``dt/dp_k = p^k`` and the product rule; the
    vertical block's jet uses the quotient-rule chain for ``w`` rather than
    differentiating the matrix inverse, so tests can cross-check one route
    against the other.
    """
    n, t, a = pt.n, pt.t, params.a_metric
    st = np.sqrt(t)
    g, g_inv, p, pu = pt.g, pt.g_inv, pt.p, pt.p_up
    v, dv, d2v = (float(x) for x in profile.jet(t))
    _check_positivity(pt, a, v)
    eye = np.eye(n)

    pp = np.outer(p, p)
    dpp = np.einsum("ki,j->kij", eye, p) + np.einsum("kj,i->kij", eye, p)

    gh = a * st * g + v * pp
    dgh = (
        (0.5 * a / st) * np.einsum("k,ij->kij", pu, g)
        + dv * np.einsum("k,ij->kij", pu, pp)
        + v * dpp
    )
    ddgh = (
        a * np.einsum("ij,lk->lkij", g, g_inv / (2.0 * st) - np.outer(pu, pu) / (4.0 * t * st))
        + d2v * np.einsum("l,k,ij->lkij", pu, pu, pp)
        + dv
        * (
            np.einsum("lk,ij->lkij", g_inv, pp)
            + np.einsum("k,lij->lkij", pu, dpp)
            + np.einsum("l,kij->lkij", pu, dpp)
        )
        + v * (np.einsum("ki,lj->lkij", eye, eye) + np.einsum("kj,li->lkij", eye, eye))
    )

    w, w1, w2 = _w_jet(t, a, v, dv, d2v)
    pupu = np.outer(pu, pu)
    dpupu = np.einsum("mk,l->mkl", g_inv, pu) + np.einsum("ml,k->mkl", g_inv, pu)

    gv = g_inv / (a * st) + w * pupu
    dgv = (
        -np.einsum("kl,m->mkl", g_inv, pu) / (2.0 * a * t * st)
        + w1 * np.einsum("m,kl->mkl", pu, pupu)
        + w * dpupu
    )
    ddgv = (
        np.einsum(
            "kl,rm->rmkl",
            g_inv,
            3.0 * np.outer(pu, pu) / (4.0 * a * t * t * st) - g_inv / (2.0 * a * t * st),
        )
        + w2 * np.einsum("r,m,kl->rmkl", pu, pu, pupu)
        + w1
        * (
            np.einsum("mr,kl->rmkl", g_inv, pupu)
            + np.einsum("m,rkl->rmkl", pu, dpupu)
            + np.einsum("r,mkl->rmkl", pu, dpupu)
        )
        + w * (np.einsum("mk,rl->rmkl", g_inv, g_inv) + np.einsum("ml,rk->rmkl", g_inv, g_inv))
    )

    return FiberJets(gh=gh, gv=gv, dgh=dgh, ddgh=ddgh, dgv=dgv, ddgv=ddgv)


def assemble_metric(jets: FiberJets) -> BlockBilinear:
    """The bundle metric as a block form: horizontal and vertical blocks on
    the diagonal, no mixing in the adapted frame."""
    n = jets.gh.shape[0]
    zero = np.zeros((n, n))
    return BlockBilinear(hh=jets.gh, hv=zero, vh=zero, vv=jets.gv)


def frame_bracket(pt: CotangentPoint, kind_a: str, i: int, kind_b: str, j: int) -> AdaptedVector:
    """Lie bracket of two adapted frame fields, which is always vertical:
    two horizontals give the momentum-contracted curvature, a vertical and a
    horizontal give a Christoffel row, two verticals commute."""
    n = pt.n
    out = AdaptedVector.zero(n)
    if kind_a == "h" and kind_b == "h":
        out.v[:] = pt.p_riemann[:, i, j]
    elif kind_a == "v" and kind_b == "h":
        out.v[:] = pt.gamma[i, j, :]
    elif kind_a == "h" and kind_b == "v":
        out.v[:] = -pt.gamma[j, i, :]
    return out


def bundle_metric_fields(params: ModelParams, profile):
    """Closures ``(q, p) -> block`` for the two metric blocks, handy for
    finite-difference cross-checks of the analytic jets."""

    def gh_field(q: np.ndarray, p: np.ndarray) -> np.ndarray:
        return horizontal_metric(CotangentPoint.at(q, p, params), params, profile)

    def gv_field(q: np.ndarray, p: np.ndarray) -> np.ndarray:
        return vertical_metric(CotangentPoint.at(q, p, params), params, profile)

    return gh_field, gv_field
