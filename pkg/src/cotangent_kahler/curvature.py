"""Curvature tensor of the bundle metric: frame blocks, Ricci, probes.

Six arrays determine the full (1,3) curvature in the adapted frame; the
missing kind combinations follow from antisymmetry in the first two slots,
and the complementary output parts of each displayed block vanish (a fact
the finite-difference oracle checks rather than assumes).  Index order is
``[output, in1, in2, in3]`` throughout.

The Ricci tensor is produced twice: by tracing the blocks, and from closed
forms in ``(c, t, v, v', v'')`` valid at the integrable coupling.  The two
routes share no code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import ModelParams
from .errors import GeometryError
from .fd import FDConfig
from .mtensor import (
    AdaptedVector,
    BlockBilinear,
    BlockOperator,
    CotangentPoint,
    FiberJets,
    fiber_jets,
    frame_bracket,
)
from .connection import (
    ConnectionCoeffs,
    connection_coefficients,
    connection_fiber_derivatives,
    connection_on_frame,
    covariant_field_derivative,
)

__all__ = [
    "CurvatureBlocks",
    "RicciBlocks",
    "curvature_blocks",
    "apply_curvature",
    "ricci_from_blocks",
    "ricci_closed_form",
    "ricci_trace_coefficient",
    "pair_symmetry_residual",
    "holomorphic_sectional_curvature",
    "curvature_fd",
    "mixed_ricci_fd",
    "nabla_curvature",
    "nabla_curvature_probe",
    "second_bianchi_residual",
]


@dataclass(frozen=True)
class CurvatureBlocks:
    """Frame blocks of ``K(X, Y)Z``; field names give the input kinds.

    Output kinds alternate: ``hhh`` and ``vvh`` produce horizontal vectors,
    ``hhv`` and ``vvv`` vertical ones, ``vhh`` vertical, ``vhv`` horizontal.
    """

    hhh: np.ndarray
    hhv: np.ndarray
    vvh: np.ndarray
    vvv: np.ndarray
    vhh: np.ndarray
    vhv: np.ndarray

    OUTPUT_KIND = {
        "hhh": "h",
        "hhv": "v",
        "vvh": "h",
        "vvv": "v",
        "vhh": "v",
        "vhv": "h",
    }


@dataclass(frozen=True)
class RicciBlocks:
    """Ricci tensor blocks on (horizontal, horizontal) and (vertical,
    vertical) frame pairs; the mixed blocks vanish."""

    hh: np.ndarray
    vv: np.ndarray


def curvature_blocks(
    pt: CotangentPoint, params: ModelParams, jets: FiberJets
) -> CurvatureBlocks:
    """Assemble all six blocks from the connection and its fiber 1-jet.

    Horizontal derivatives of the coefficient arrays never appear: every
    coefficient is an M-tensor, so its horizontal frame derivative is
    Christoffel bookkeeping that cancels inside the commutators, leaving
    base curvature terms and fiber derivatives only.
    """
    conn = connection_coefficients(pt, params, jets)
    der = connection_fiber_derivatives(pt, params, jets)
    vv, vh, hh = conn.vv, conn.vh, conn.hh
    dvv, dvh, dhh = der.dvv, der.dvh, der.dhh
    riem, pr = pt.riemann, pt.p_riemann

    hhh = (
        np.einsum("hkij->hijk", riem)
        - np.einsum("hlk,lij->hijk", vh, pr)
        + np.einsum("hli,ljk->hijk", vh, hh)
        - np.einsum("hlj,lik->hijk", vh, hh)
    )
    hhv = (
        -np.einsum("khij->hijk", riem)
        + np.einsum("lkj,hil->hijk", vh, hh)
        - np.einsum("lki,hjl->hijk", vh, hh)
        - np.einsum("lkh,lij->hijk", vv, pr)
    )
    vvh = (
        np.einsum("ihjk->hijk", dvh)
        - np.einsum("jhik->hijk", dvh)
        + np.einsum("hil,ljk->hijk", vh, vh)
        - np.einsum("hjl,lik->hijk", vh, vh)
    )
    vvv = (
        np.einsum("ijkh->hijk", dvv)
        - np.einsum("jikh->hijk", dvv)
        + np.einsum("jkl,ilh->hijk", vv, vv)
        - np.einsum("ikl,jlh->hijk", vv, vv)
    )
    vhh = (
        np.einsum("ihjk->hijk", dhh)
        + np.einsum("ilh,ljk->hijk", vv, hh)
        - np.einsum("lik,hjl->hijk", vh, hh)
    )
    vhv = (
        np.einsum("ihkj->hijk", dvh)
        + np.einsum("hil,lkj->hijk", vh, vh)
        - np.einsum("hlj,ikl->hijk", vh, vv)
    )
    return CurvatureBlocks(hhh=hhh, hhv=hhv, vvh=vvh, vvv=vvv, vhh=vhh, vhv=vhv)


def apply_curvature(
    blocks: CurvatureBlocks, x: AdaptedVector, y: AdaptedVector, z: AdaptedVector
) -> AdaptedVector:
    """``K(X, Y)Z`` for arbitrary adapted vectors.

    The two kind combinations without a stored block come from antisymmetry
    in the first pair of arguments.
    """
    n = x.h.shape[0]
    out_h = np.zeros(n)
    out_v = np.zeros(n)

    out_h += np.einsum("hijk,i,j,k->h", blocks.hhh, x.h, y.h, z.h)
    out_v += np.einsum("hijk,i,j,k->h", blocks.hhv, x.h, y.h, z.v)
    out_h += np.einsum("hijk,i,j,k->h", blocks.vvh, x.v, y.v, z.h)
    out_v += np.einsum("hijk,i,j,k->h", blocks.vvv, x.v, y.v, z.v)
    out_v += np.einsum("hijk,i,j,k->h", blocks.vhh, x.v, y.h, z.h)
    out_v -= np.einsum("hijk,i,j,k->h", blocks.vhh, y.v, x.h, z.h)
    out_h += np.einsum("hijk,i,j,k->h", blocks.vhv, x.v, y.h, z.v)
    out_h -= np.einsum("hijk,i,j,k->h", blocks.vhv, y.v, x.h, z.v)
    return AdaptedVector(h=out_h, v=out_v)


# ---- Ricci, two routes ----


def ricci_from_blocks(blocks: CurvatureBlocks) -> RicciBlocks:
    """Trace over the frame: horizontal directions feed the purely
    horizontal block, vertical ones the mixed blocks, with a sign from
    antisymmetry on the vertical/vertical trace."""
    hh = np.einsum("hhjk->jk", blocks.hhh) + np.einsum("hhjk->jk", blocks.vhh)
    vv = np.einsum("hhjk->jk", blocks.vvv) - np.einsum("hjhk->jk", blocks.vhv)
    return RicciBlocks(hh=hh, vv=vv)


def ricci_trace_coefficient(params: ModelParams, profile, t: float) -> float:
    """Coefficient of ``g_jk/2`` in the horizontal Ricci block:
    ``(n-2) c - (n+1) sqrt(2c) sqrt(t) v - 2 sqrt(2c) t^(3/2) v'``."""
    n, c = params.n, params.c
    v = float(profile.v(t))
    dv = float(profile.dv(t))
    s2c = np.sqrt(2.0 * c)
    return (n - 2.0) * c - (n + 1.0) * s2c * np.sqrt(t) * v - 2.0 * s2c * t ** 1.5 * dv


def _radial_coefficients(params: ModelParams, profile, t: float) -> tuple[float, float]:
    """Coefficients of the rank-one parts of the two Ricci blocks."""
    n, c = params.n, params.c
    v, dv, d2v = (float(x) for x in profile.jet(t))
    s2c = np.sqrt(2.0 * c)
    alpha = (
        (2.0 - n) * c
        - (2.0 * n + 2.0) * t * v * v
        - (2.0 * n + 6.0) * s2c * t**1.5 * dv
        - (4.0 * n + 16.0) * t**2 * v * dv
        - 4.0 * s2c * t**2.5 * d2v
        - 8.0 * t**3 * v * d2v
    )
    beta = (
        (2.0 - n) * c
        - (n - 2.0) * s2c * np.sqrt(t) * v
        + 2.0 * (n + 1.0) * t * v * v
        + 4.0 * t**2 * v * dv
        - 2.0 * (n + 3.0) * s2c * t**1.5 * dv
        - 4.0 * s2c * t**2.5 * d2v
    )
    return alpha, beta


def ricci_closed_form(pt: CotangentPoint, params: ModelParams, profile) -> RicciBlocks:
    """Closed-form Ricci blocks at the integrable coupling.

    Horizontal block: ``(a/2) g_jk + (alpha/4t) p_j p_k``.  Vertical block:
    ``(a/4ct) g^jk`` plus a rank-one part along the raised momentum whose
    denominator carries the admissibility quantity ``sqrt(c) + sqrt(2t) v``.
    """
    if not params.is_integrable:
        raise GeometryError("closed-form Ricci requires the integrable coupling a = sqrt(2c)")
    c, t = params.c, pt.t
    v = float(profile.v(t))
    a_tr = ricci_trace_coefficient(params, profile, t)
    alpha, beta = _radial_coefficients(params, profile, t)
    admis = np.sqrt(c) + np.sqrt(2.0 * t) * v
    hh = 0.5 * a_tr * pt.g + (alpha / (4.0 * t)) * np.outer(pt.p, pt.p)
    vv = (a_tr / (4.0 * c * t)) * pt.g_inv + (
        beta / (8.0 * np.sqrt(c) * t**2 * admis)
    ) * np.outer(pt.p_up, pt.p_up)
    return RicciBlocks(hh=hh, vv=vv)


# ---- pointwise probes ----


def pair_symmetry_residual(
    blocks: CurvatureBlocks, metric: BlockBilinear, vectors
) -> float:
    """``max |<K(X,Y)Z, W> - <K(Z,W)X, Y>|`` over the given vector tuples."""
    worst = 0.0
    for x, y, z, w in vectors:
        lhs = metric.pair(apply_curvature(blocks, x, y, z), w)
        rhs = metric.pair(apply_curvature(blocks, z, w, x), y)
        worst = max(worst, abs(lhs - rhs))
    return worst


def holomorphic_sectional_curvature(
    blocks: CurvatureBlocks,
    metric: BlockBilinear,
    j_op: BlockOperator,
    x: AdaptedVector,
) -> float:
    """``G(K(X, JX)JX, X) / G(X, X)^2``, invariant under rescaling of X."""
    jx = j_op.apply(x)
    norm_sq = metric.pair(x, x)
    if norm_sq <= 0.0:
        raise GeometryError("holomorphic sectional curvature needs a nonnull vector")
    return metric.pair(apply_curvature(blocks, x, jx, jx), x) / norm_sq**2


# ---- finite-difference oracles ----


def _nabla_frame_field(params: ModelParams, profile, kind_b: str, j: int, kind_c: str, k: int):
    """Field ``z -> nabla_{e_b} e_c`` in flattened frame components."""

    def field(q: np.ndarray, p: np.ndarray) -> np.ndarray:
        ptz = CotangentPoint.at(q, p, params)
        connz = connection_coefficients(ptz, params, fiber_jets(ptz, params, profile))
        vec = connection_on_frame(connz, kind_b, j, kind_c, k)
        return np.concatenate([vec.h, vec.v])

    return field


def curvature_fd(
    params: ModelParams,
    profile,
    pt: CotangentPoint,
    a: tuple[str, int],
    b: tuple[str, int],
    c: tuple[str, int],
    cfg: FDConfig,
) -> AdaptedVector:
    """``K(e_a, e_b)e_c`` from the definition, differencing the connection.

    Every covariant derivative here is finite-difference plus coefficient
    corrections; the curvature block formulas are never consulted.
    """
    n = pt.n
    conn0 = connection_coefficients(pt, params, fiber_jets(pt, params, profile))

    term_ab = covariant_field_derivative(
        pt, conn0, a[0], a[1], _nabla_frame_field(params, profile, *b, *c), cfg
    )
    term_ba = covariant_field_derivative(
        pt, conn0, b[0], b[1], _nabla_frame_field(params, profile, *a, *c), cfg
    )
    bracket = frame_bracket(pt, a[0], a[1], b[0], b[1])
    corr = AdaptedVector.zero(n)
    for l in range(n):
        if bracket.v[l] != 0.0:
            corr = corr + bracket.v[l] * connection_on_frame(conn0, "v", l, c[0], c[1])
    diff = term_ab - term_ba
    return AdaptedVector(h=diff[:n] - corr.h, v=diff[n:] - corr.v)


def mixed_ricci_fd(
    params: ModelParams,
    profile,
    pt: CotangentPoint,
    j: int,
    k: int,
    cfg: FDConfig,
) -> float:
    """Mixed Ricci entry ``Ric(delta_j, vertical_k)`` by tracing the
    finite-difference curvature; vanishes for the block-diagonal metric."""
    n = pt.n
    total = 0.0
    for h in range(n):
        total += curvature_fd(params, profile, pt, ("h", h), ("h", j), ("v", k), cfg).h[h]
        total += curvature_fd(params, profile, pt, ("v", h), ("h", j), ("v", k), cfg).v[h]
    return total


# ---- covariant derivative of the curvature ----


def _curvature_value_field(
    params: ModelParams, profile, x: AdaptedVector, y: AdaptedVector, z: AdaptedVector
):
    """Field ``z -> K(X, Y)Z`` for constant frame components X, Y, Z."""

    def field(q: np.ndarray, p: np.ndarray) -> np.ndarray:
        ptz = CotangentPoint.at(q, p, params)
        blocksz = curvature_blocks(ptz, params, fiber_jets(ptz, params, profile))
        vec = apply_curvature(blocksz, x, y, z)
        return np.concatenate([vec.h, vec.v])

    return field


def nabla_curvature(
    params: ModelParams,
    profile,
    pt: CotangentPoint,
    w: tuple[str, int],
    x: AdaptedVector,
    y: AdaptedVector,
    z: AdaptedVector,
    cfg: FDConfig,
) -> AdaptedVector:
    """``(nabla_W K)(X, Y)Z`` by the Leibniz rule along frame direction W.

    The value term differentiates the block assembly as a field; the three
    correction terms evaluate the blocks once at the center point.
    """
    n = pt.n
    jets = fiber_jets(pt, params, profile)
    conn = connection_coefficients(pt, params, jets)
    blocks = curvature_blocks(pt, params, jets)

    value = covariant_field_derivative(
        pt, conn, w[0], w[1], _curvature_value_field(params, profile, x, y, z), cfg
    )
    out = AdaptedVector(h=value[:n], v=value[n:])

    def nabla_of(vec: AdaptedVector) -> AdaptedVector:
        acc = AdaptedVector.zero(n)
        for l in range(n):
            if vec.h[l] != 0.0:
                acc = acc + vec.h[l] * connection_on_frame(conn, w[0], w[1], "h", l)
            if vec.v[l] != 0.0:
                acc = acc + vec.v[l] * connection_on_frame(conn, w[0], w[1], "v", l)
        return acc

    out = out - apply_curvature(blocks, nabla_of(x), y, z)
    out = out - apply_curvature(blocks, x, nabla_of(y), z)
    out = out - apply_curvature(blocks, x, y, nabla_of(z))
    return out


def nabla_curvature_probe(
    params: ModelParams,
    profile,
    pt: CotangentPoint,
    cfg: FDConfig,
    probes=None,
) -> float:
    """Largest component of ``(nabla_W K)(X, Y)Z`` over a set of frame probes.

    A value above a small floor at one point witnesses the failure of local
    symmetry; the default probe set mixes horizontal and vertical slots.
    """
    n = pt.n
    if probes is None:
        probes = [
            (("h", 0), ("h", n - 1), ("v", 0), ("h", 0)),
            (("v", 0), ("h", 0), ("h", n - 1), ("h", n - 1)),
            (("h", 0), ("h", n - 1), ("h", 0), ("h", n - 1)),
        ]
    worst = 0.0
    for w, xs, ys, zs in probes:
        out = nabla_curvature(
            params,
            profile,
            pt,
            w,
            AdaptedVector.basis(n, *xs),
            AdaptedVector.basis(n, *ys),
            AdaptedVector.basis(n, *zs),
            cfg,
        )
        worst = max(worst, float(np.max(np.abs(out.h))), float(np.max(np.abs(out.v))))
    return worst


def second_bianchi_residual(
    params: ModelParams,
    profile,
    pt: CotangentPoint,
    w: tuple[str, int],
    a: tuple[str, int],
    b: tuple[str, int],
    z: AdaptedVector,
    cfg: FDConfig,
) -> float:
    """``max |cyclic_{W,A,B} (nabla_W K)(A, B)Z|`` on frame directions."""
    n = pt.n

    def as_vec(slot: tuple[str, int]) -> AdaptedVector:
        return AdaptedVector.basis(n, slot[0], slot[1])

    total = AdaptedVector.zero(n)
    for d, u, s in ((w, a, b), (a, b, w), (b, w, a)):
        total = total + nabla_curvature(params, profile, pt, d, as_vec(u), as_vec(s), z, cfg)
    return float(max(np.max(np.abs(total.h)), np.max(np.abs(total.v))))
