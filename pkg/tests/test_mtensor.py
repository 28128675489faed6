"""Bundle pointwise data: energy density, metric blocks, fiber jets, brackets."""

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cotangent_kahler import (
    AdaptedVector,
    BlockOperator,
    CotangentPoint,
    FDConfig,
    GeometryError,
    MTensor,
    ModelParams,
    PositivityError,
    ZeroSectionError,
    bundle_metric_fields,
    constant_profile,
    energy_density,
    fd_partial,
    fiber_jets,
    frame_bracket,
    frame_gradient,
    horizontal_corrections,
    horizontal_metric,
    rational_profile,
    vertical_metric,
)
from cotangent_kahler.profiles import einstein_profile

# ---------------------------------------------------------------------------
# Energy density and point data
# ---------------------------------------------------------------------------


class TestEnergyDensity:
    def test_matches_definition(self, kahler_point):
        expected = 0.5 * kahler_point.p @ kahler_point.g_inv @ kahler_point.p
        assert kahler_point.t == pytest.approx(expected)

    def test_zero_section_rejected(self):
        with pytest.raises(ZeroSectionError):
            energy_density(np.eye(3), np.full(3, 1e-9))

    def test_non_finite_rejected(self):
        with pytest.raises(GeometryError):
            energy_density(np.eye(2), np.array([np.inf, 0.0]))

    def test_fiber_gradient_is_raised_momentum(self, sample_qp, kahler_params, fd_cfg):
        """dt/dp_k = g^{kl} p_l."""
        q, p = sample_qp
        pt = CotangentPoint.at(q, p, kahler_params)

        def t_of_p(pp):
            return energy_density(pt.g_inv, pp)

        for k in range(3):
            npt.assert_allclose(fd_partial(t_of_p, p, k, fd_cfg), pt.p_up[k], atol=1e-9)

    def test_momentum_shape_checked(self, kahler_params):
        with pytest.raises(GeometryError):
            CotangentPoint.at(np.zeros(3), np.array([1.0, 0.0]), kahler_params)


# ---------------------------------------------------------------------------
# Metric blocks
# ---------------------------------------------------------------------------


class TestMetricBlocks:
    def test_vertical_block_inverts_horizontal(self, kahler_point, kahler_params, kahler_profile):
        gh = horizontal_metric(kahler_point, kahler_params, kahler_profile)
        gv = vertical_metric(kahler_point, kahler_params, kahler_profile)
        npt.assert_allclose(gh @ gv, np.eye(3), atol=1e-13)

    def test_momentum_is_radial_eigenvector(self, generic_point, generic_params, generic_profile):
        """gh p^ = (a sqrt(t) + 2 t v) p: the radial direction diagonalizes."""
        pt = generic_point
        gh = horizontal_metric(pt, generic_params, generic_profile)
        v = float(generic_profile.v(pt.t))
        radial = generic_params.a_metric * np.sqrt(pt.t) + 2.0 * pt.t * v
        npt.assert_allclose(gh @ pt.p_up, radial * pt.p, atol=1e-12)

    def test_positivity_bound_enforced(self):
        params = ModelParams(n=2, c=1.0, a_metric=1.0)
        profile = constant_profile(-0.8)
        pt = CotangentPoint.at(np.zeros(2), np.array([1.0, 0.0], dtype=float), params)
        assert pt.t == pytest.approx(0.5)
        # a sqrt(t) + 2 t v = 1/sqrt(2) - 0.8 < 0
        with pytest.raises(PositivityError):
            horizontal_metric(pt, params, profile)
        with pytest.raises(PositivityError):
            vertical_metric(pt, params, profile)

    def test_marginally_admissible_profile_accepted(self):
        params = ModelParams(n=2, c=1.0, a_metric=1.0)
        profile = constant_profile(-0.6)
        pt = CotangentPoint.at(np.zeros(2), np.array([1.0, 0.0], dtype=float), params)
        gh = horizontal_metric(pt, params, profile)
        assert np.all(np.linalg.eigvalsh(gh) > 0)

    @given(
        k_a=st.floats(0.0, 3.0),
        k_b=st.floats(0.0, 3.0),
        t_target=st.floats(0.3, 3.0),
    )
    @settings(max_examples=30, deadline=None)
    def test_einstein_family_is_positive_definite(self, k_a, k_b, t_target):
        """Every k_a, k_b >= 0 member yields a positive horizontal block."""
        params = ModelParams.kahler(n=3, c=1.0, k_a=k_a, k_b=k_b)
        profile = einstein_profile(params)
        p = np.array([1.0, 0.5, -0.25])
        pt0 = CotangentPoint.at(np.zeros(3), p, params)
        pt = CotangentPoint.at(np.zeros(3), p * np.sqrt(t_target / pt0.t), params)
        gh = horizontal_metric(pt, params, profile)
        assert np.all(np.linalg.eigvalsh(gh) > 0)


# ---------------------------------------------------------------------------
# Fiber jets of the metric blocks
# ---------------------------------------------------------------------------


class TestFiberJets:
    @pytest.fixture(params=["kahler", "generic"])
    def setup(self, request, kahler_params, kahler_profile, generic_params, generic_profile, sample_qp):
        if request.param == "kahler":
            params, profile = kahler_params, kahler_profile
        else:
            params, profile = generic_params, generic_profile
        q, p = sample_qp
        return params, profile, CotangentPoint.at(q, p, params)

    def test_values_match_direct_blocks(self, setup):
        params, profile, pt = setup
        jets = fiber_jets(pt, params, profile)
        npt.assert_allclose(jets.gh, horizontal_metric(pt, params, profile), atol=1e-14)
        npt.assert_allclose(jets.gv, vertical_metric(pt, params, profile), atol=1e-14)

    def test_first_fiber_derivatives_match_fd(self, setup, fd_cfg):
        params, profile, pt = setup
        jets = fiber_jets(pt, params, profile)
        gh_field, gv_field = bundle_metric_fields(params, profile)
        for k in range(3):
            npt.assert_allclose(
                jets.dgh[k],
                fd_partial(lambda pp: gh_field(pt.q, pp).ravel(), pt.p, k, fd_cfg).reshape(3, 3),
                atol=1e-7,
                err_msg="d gh / dp vs finite differences",
            )
            npt.assert_allclose(
                jets.dgv[k],
                fd_partial(lambda pp: gv_field(pt.q, pp).ravel(), pt.p, k, fd_cfg).reshape(3, 3),
                atol=1e-7,
                err_msg="d gv / dp vs finite differences",
            )

    def test_second_fiber_derivatives_match_fd(self, setup, fd_cfg):
        params, profile, pt = setup

        def dgh_field(pp):
            ptz = CotangentPoint.at(pt.q, pp, params)
            return fiber_jets(ptz, params, profile).dgh.ravel()

        def dgv_field(pp):
            ptz = CotangentPoint.at(pt.q, pp, params)
            return fiber_jets(ptz, params, profile).dgv.ravel()

        jets = fiber_jets(pt, params, profile)
        for l in range(3):
            npt.assert_allclose(
                jets.ddgh[l],
                fd_partial(dgh_field, pt.p, l, fd_cfg).reshape(3, 3, 3),
                atol=1e-6,
            )
            npt.assert_allclose(
                jets.ddgv[l],
                fd_partial(dgv_field, pt.p, l, fd_cfg).reshape(3, 3, 3),
                atol=1e-6,
            )

    def test_inverse_chain_rule_first_order(self, setup):
        """d gv = -gv (d gh) gv: the closed form agrees with the matrix route."""
        params, profile, pt = setup
        jets = fiber_jets(pt, params, profile)
        chain = -np.einsum("ka,mab,bl->mkl", jets.gv, jets.dgh, jets.gv)
        npt.assert_allclose(jets.dgv, chain, atol=1e-12)

    def test_inverse_chain_rule_second_order(self, setup):
        """d2 gv from differentiating -gv (d gh) gv once more."""
        params, profile, pt = setup
        jets = fiber_jets(pt, params, profile)
        chain = (
            -np.einsum("rka,mab,bl->rmkl", jets.dgv, jets.dgh, jets.gv)
            - np.einsum("ka,rmab,bl->rmkl", jets.gv, jets.ddgh, jets.gv)
            - np.einsum("ka,mab,rbl->rmkl", jets.gv, jets.dgh, jets.dgv)
        )
        npt.assert_allclose(jets.ddgv, chain, atol=1e-12)

    def test_second_derivatives_are_symmetric(self, setup):
        params, profile, pt = setup
        jets = fiber_jets(pt, params, profile)
        npt.assert_allclose(jets.ddgh, np.swapaxes(jets.ddgh, 0, 1), atol=1e-12)
        npt.assert_allclose(jets.ddgv, np.swapaxes(jets.ddgv, 0, 1), atol=1e-12)


# ---------------------------------------------------------------------------
# Horizontal parallelism of M-tensors
# ---------------------------------------------------------------------------


class TestHorizontalRule:
    """Frame derivatives of momentum-built fields reduce to Christoffel terms."""

    def test_variance_validation(self):
        with pytest.raises(GeometryError):
            MTensor(components=np.zeros((2, 2)), variance="d")
        with pytest.raises(GeometryError):
            MTensor(components=np.zeros((2, 2)), variance="dx")

    @pytest.mark.parametrize(
        "variance,field_name",
        [("dd", "gh"), ("uu", "gv"), ("u", "p_up")],
    )
    def test_horizontal_derivative_is_christoffel_bookkeeping(
        self, variance, field_name, kahler_params, kahler_profile, sample_qp, fd_cfg
    ):
        q, p = sample_qp
        pt = CotangentPoint.at(q, p, kahler_params)

        def field(qq, pp):
            ptz = CotangentPoint.at(qq, pp, kahler_params)
            if field_name == "gh":
                return horizontal_metric(ptz, kahler_params, kahler_profile)
            if field_name == "gv":
                return vertical_metric(ptz, kahler_params, kahler_profile)
            return ptz.p_up

        value = field(q, p)
        predicted = horizontal_corrections(pt, MTensor(components=value, variance=variance))
        measured = frame_gradient(field, q, p, pt.gamma, fd_cfg)[:3]
        npt.assert_allclose(
            measured,
            predicted,
            atol=1e-7,
            err_msg=f"horizontal rule for variance {variance!r}",
        )


# ---------------------------------------------------------------------------
# Adapted-frame containers and brackets
# ---------------------------------------------------------------------------


class TestAdaptedFrame:
    def test_vector_algebra(self):
        x = AdaptedVector.basis(2, "h", 0)
        y = AdaptedVector.basis(2, "v", 1)
        z = 2.0 * x - y
        npt.assert_allclose(z.h, [2.0, 0.0], atol=0)
        npt.assert_allclose(z.v, [0.0, -1.0], atol=0)
        assert z.norm() == pytest.approx(np.sqrt(5.0))
        npt.assert_allclose((-z).h, [-2.0, 0.0], atol=0)

    def test_operator_compose_matches_apply(self, rng):
        blocks_a = BlockOperator(*(rng.normal(size=(2, 2)) for _ in range(4)))
        blocks_b = BlockOperator(*(rng.normal(size=(2, 2)) for _ in range(4)))
        x = AdaptedVector(rng.normal(size=2), rng.normal(size=2))
        via_compose = blocks_a.compose(blocks_b).apply(x)
        via_apply = blocks_a.apply(blocks_b.apply(x))
        npt.assert_allclose(via_compose.h, via_apply.h, atol=1e-14)
        npt.assert_allclose(via_compose.v, via_apply.v, atol=1e-14)

    def test_vertical_fields_commute(self, kahler_point):
        out = frame_bracket(kahler_point, "v", 0, "v", 2)
        npt.assert_allclose(out.h, 0.0, atol=0)
        npt.assert_allclose(out.v, 0.0, atol=0)

    def test_mixed_bracket_is_antisymmetric(self, kahler_point):
        vh = frame_bracket(kahler_point, "v", 1, "h", 2)
        hv = frame_bracket(kahler_point, "h", 2, "v", 1)
        npt.assert_allclose(vh.v, -hv.v, atol=0)

    def test_mixed_bracket_matches_nested_derivatives(
        self, sample_qp, kahler_params, fd_cfg
    ):
        """[d/dp_i, delta_j] f = Gamma^i_{jl} df/dp_l on scalars."""
        q, p = sample_qp
        pt = CotangentPoint.at(q, p, kahler_params)
        i, j = 2, 0

        def scalar(qq, pp):
            return np.array([np.cos(qq[0] * pp[2]) + pp[1] ** 2 * qq[2]])

        def pair_of_derivs(qq, pp):
            ptz = CotangentPoint.at(qq, pp, kahler_params)
            g = frame_gradient(scalar, qq, pp, ptz.gamma, fd_cfg)
            return np.array([g[3 + i, 0], g[j, 0]])

        outer = frame_gradient(pair_of_derivs, q, p, pt.gamma, fd_cfg)
        commutator = outer[3 + i][1] - outer[j][0]
        fiber_grad = frame_gradient(scalar, q, p, pt.gamma, fd_cfg)[3:, 0]
        expected = frame_bracket(pt, "v", i, "h", j).v @ fiber_grad
        npt.assert_allclose(commutator, expected, atol=1e-6)

    def test_rational_profile_everywhere_admissible(self):
        profile = rational_profile()
        assert profile.admissible(np.linspace(0.05, 50.0, 200), a_metric=0.1)
