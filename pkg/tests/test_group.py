import math

import numpy as np
import pytest

from superholonomy.grassmann import GrassmannElement
from superholonomy.group import (
    HolonomyPair,
    HypothesisError,
    OspGroup,
    SingularGaugeOperatorError,
    ahat,
    ahat_det_rank,
    build_nonexp_holonomy,
    commuting_pair_forces_diagonal,
    det_conjugation_invariance,
    enumerate_sectors_osp12,
    fermionic_moduli_count,
    fermionic_moduli_count_bruteforce,
    gauge_fix_sigma,
    matrix_rank,
    parabolic,
    random_sp,
    rotation,
    sample_commuting_bodies,
    sector_representative,
)
from superholonomy.supermatrix import SuperMatrix, commutator, gmat_from_real


@pytest.fixture(scope="module")
def g12():
    return OspGroup(1, 1, 2)


@pytest.fixture(scope="module")
def g22():
    return OspGroup(2, 1, 2)


class TestMembership:
    def test_identity(self, g12):
        assert g12.is_member(SuperMatrix.identity(1, 2, 2))

    def test_disconnected_component(self, g12):
        # diag(-1, I) satisfies the graded-form condition
        assert g12.is_member(g12.reflection_component())

    def test_perturbed_identity_rejected(self, g12):
        body = np.eye(3)
        body[1, 1] += 0.1
        assert not g12.is_member(SuperMatrix.from_body(body, 1, 2, 2))

    def test_wrong_shape_raises(self, g12):
        with pytest.raises(ValueError):
            g12.is_member(SuperMatrix.identity(2, 2, 2))

    def test_sampled_members(self, g12, g22):
        rng = np.random.default_rng(31)
        for group in (g12, g22):
            for _ in range(10):
                M = group.sample_member(rng)
                assert group.is_member(M, tol=1e-9)

    def test_closure_under_group_operations(self, g12):
        rng = np.random.default_rng(32)
        pool = [g12.sample_member(rng) for _ in range(8)]
        for _ in range(60):
            x, y = rng.choice(len(pool), 2)
            op = rng.integers(0, 3)
            if op == 0:
                M = pool[x] @ pool[y]
            elif op == 1:
                M = pool[x].inverse()
            else:
                M = pool[x] @ pool[y] @ pool[x].inverse()
            assert g12.is_member(M, tol=1e-9)


class TestXiFromChi:
    def test_zero_chi_gives_zero_xi(self, g12):
        a = [[GrassmannElement.one(2)]]
        A = gmat_from_real(np.eye(2), 2)
        chi = [[GrassmannElement.zero(2)], [GrassmannElement.zero(2)]]
        xi = g12.xi_from_chi(a, A, chi)
        assert all(e.is_zero() for row in xi for e in row)

    def test_trivial_bodies(self, g12):
        # a = 1, A = I: xi = -chi^T C, so chi = (0, t1)^T gives (t1, 0)
        t1 = GrassmannElement.theta(1, 2)
        a = [[GrassmannElement.one(2)]]
        A = gmat_from_real(np.eye(2), 2)
        chi = [[GrassmannElement.zero(2)], [t1]]
        xi = g12.xi_from_chi(a, A, chi)
        assert xi[0][0] == t1
        assert xi[0][1].is_zero()

    def test_recovers_sampled_members(self, g12, g22):
        rng = np.random.default_rng(33)
        for group in (g12, g22):
            for _ in range(25):
                M = group.sample_member(rng)
                xi = group.xi_from_chi(M.block("a"), M.block("A"), M.block("chi"))
                diff = max(
                    (p - q).max_abs()
                    for rp, rq in zip(M.block("xi"), xi)
                    for p, q in zip(rp, rq)
                )
                assert diff < 1e-10


class TestAhat:
    def test_parabolic_sector(self):
        det, rank = ahat_det_rank(np.array([[1.0]]), parabolic(0.7))
        assert det == 0.0 and rank == 1

    def test_rotation_determinant(self):
        phi = 0.9
        det, rank = ahat_det_rank(np.array([[1.0]]), rotation(phi))
        assert abs(det - (2 - 2 * math.cos(phi))) < 1e-12
        assert rank == 2

    def test_osp22_determinant_formula(self):
        rng = np.random.default_rng(34)
        for _ in range(30):
            phi = rng.uniform(0, 2 * math.pi)
            A0 = random_sp(2, rng) * rng.choice([-1.0, 1.0])
            det = np.linalg.det(ahat(rotation(phi), A0))
            assert abs(det - (2 * math.cos(phi) - np.trace(A0)) ** 2) < 1e-10

    def test_zero_matrix_rank(self):
        assert matrix_rank(np.zeros((4, 4))) == 0

    def test_det_conjugation_invariance(self):
        rng = np.random.default_rng(35)
        d1, d2 = det_conjugation_invariance(np.array([[1.0]]), parabolic(0.5), np.eye(2))
        assert d1 == d2 == 0.0
        for _ in range(20):
            S0 = random_sp(2, rng)
            d1, d2 = det_conjugation_invariance(np.array([[1.0]]), parabolic(0.5), S0)
            assert abs(d1) < 1e-10 and abs(d2) < 1e-10
            A0 = np.diag([1.7, 1 / 1.7])
            d1, d2 = det_conjugation_invariance(np.array([[1.0]]), A0, S0)
            assert abs(d1 - d2) <= 1e-8 * abs(d2)
            assert abs(d2) > 1e-3

    def test_singular_conjugator_rejected(self):
        with pytest.raises(ValueError):
            det_conjugation_invariance(np.array([[1.0]]), np.eye(2), np.zeros((2, 2)))

    def test_rank_gauge_invariance(self, g12):
        # det and rank computed before/after conjugation by random members agree
        rng = np.random.default_rng(36)
        for _ in range(15):
            U = g12.sample_member(rng)
            S = g12.sample_member(rng)
            V = S @ U @ S.inverse()
            dU, rU = ahat_det_rank(*U.body_blocks())
            dV, rV = ahat_det_rank(*V.body_blocks())
            assert rU == rV
            assert abs(dU - dV) <= 1e-8 * max(1.0, abs(dU))


class TestGaugeFix:
    def test_chi_free_input_is_fixed_point(self, g12):
        body = np.diag([1.0, 2.0, 0.5])
        U = SuperMatrix.from_body(body, 1, 2, 2)
        res = gauge_fix_sigma(g12, U)
        assert res.U_fixed.diff(U) == 0.0
        assert res.degrees_solved == ()

    def test_annihilates_chi_generic(self, g12):
        rng = np.random.default_rng(37)
        for _ in range(25):
            U = g12.sample_member(rng)
            res = gauge_fix_sigma(g12, U)
            chi_norm = max(e.max_abs() for row in res.U_fixed.block("chi") for e in row)
            assert chi_norm < 1e-10
            assert (res.S @ U @ res.S.inverse()).diff(res.U_fixed) < 1e-12
            assert g12.is_member(res.U_fixed, 1e-9)
            assert g12.is_member(res.S, 1e-9)

    def test_recursion_with_higher_degrees(self):
        # N = 4 souls make the degree-1 solve feed a degree-3 correction,
        # so the iteration must run twice
        group = OspGroup(1, 1, 4)
        rng = np.random.default_rng(38)
        for _ in range(5):
            U = group.sample_member(rng, components=False)
            res = gauge_fix_sigma(group, U)
            assert res.degrees_solved == (1, 3)
            chi_norm = max(e.max_abs() for row in res.U_fixed.block("chi") for e in row)
            assert chi_norm < 1e-10
            assert group.is_member(res.U_fixed, 1e-8)

    def test_parabolic_sector_raises(self, g12):
        desc = [s for s in enumerate_sectors_osp12().sectors if s.fermionic][0]
        pair = sector_representative(desc)
        with pytest.raises(SingularGaugeOperatorError):
            gauge_fix_sigma(g12, pair.U1)

    def test_seed_conjugation_applied(self, g12):
        rng = np.random.default_rng(39)
        U = g12.sample_member(rng)
        seed = g12.sample_member(rng)
        res = gauge_fix_sigma(g12, U, S0_seed=seed)
        assert (res.S @ U @ res.S.inverse()).diff(res.U_fixed) < 1e-11


class TestCommutingPair:
    def test_hyperbolic_commutant_is_diagonal(self, g12):
        A0 = np.diag([2.0, 0.5])
        U1 = SuperMatrix.from_body(np.diag([1.0, 2.0, 0.5]), 1, 2, 2)
        # members of the commutant: powers share the abelian direction
        U2 = SuperMatrix.from_body(np.diag([1.0, 4.0, 0.25]), 1, 2, 2)
        assert commuting_pair_forces_diagonal(g12, U1, U2)

    def test_identity_second_factor(self, g12):
        U1 = SuperMatrix.from_body(np.diag([1.0, 2.0, 0.5]), 1, 2, 2)
        assert commuting_pair_forces_diagonal(g12, U1, SuperMatrix.identity(1, 2, 2))

    def test_linear_commutant_equations(self):
        # mu a0 = A0 mu as a linear system: trivial kernel exactly when the
        # Kronecker operator is regular, so the commutant keeps no fermions
        rng = np.random.default_rng(77)
        for _ in range(20):
            A0 = random_sp(2, rng)
            a0 = np.array([[rng.choice([-1.0, 1.0])]])
            op = ahat(a0, A0)
            kernel_dim = 2 - matrix_rank(op)
            if abs(np.linalg.det(op)) > 1e-10:
                assert kernel_dim == 0
            else:
                assert kernel_dim > 0
        op = ahat(np.array([[1.0]]), parabolic(0.6))
        assert 2 - matrix_rank(op) == 1  # one fermion direction survives

    def test_parabolic_hypothesis_rejected(self, g12):
        desc = [s for s in enumerate_sectors_osp12().sectors if s.fermionic][0]
        pair = sector_representative(desc)
        U1_diag = SuperMatrix.from_body(
            np.diag([1.0, 1.0, 1.0]) + np.pad(parabolic(0.8) - np.eye(2), ((1, 0), (1, 0))),
            1, 2, 2,
        )
        with pytest.raises(HypothesisError):
            commuting_pair_forces_diagonal(g12, U1_diag, pair.U2)


class TestPairGaugeFixing:
    def test_fixing_one_member_diagonalizes_the_partner(self, g12):
        # start from a regular block-diagonal commuting pair, dress both with
        # a random conjugation, then undo it by gauge fixing U1 alone: the
        # same conjugator must strip U2's fermion blocks as well
        rng = np.random.default_rng(88)
        for _ in range(10):
            v1, v2 = rng.uniform(0.3, 1.2, 2)
            U1 = SuperMatrix.from_body(
                np.diag([1.0, math.exp(v1), math.exp(-v1)]), 1, 2, 2
            )
            U2 = SuperMatrix.from_body(
                np.diag([1.0, math.exp(v2), math.exp(-v2)]), 1, 2, 2
            )
            S = g12.sample_member(rng)
            V1, V2 = S @ U1 @ S.inverse(), S @ U2 @ S.inverse()
            assert commutator(V1, V2).max_abs() < 1e-10
            dressed = max(e.max_abs() for row in V2.block("chi") for e in row)
            assert dressed > 1e-3  # the dressing really introduced fermions
            res = gauge_fix_sigma(g12, V1)
            W2 = res.S @ V2 @ res.S.inverse()
            off = max(
                max(e.max_abs() for row in W2.block("chi") for e in row),
                max(e.max_abs() for row in W2.block("xi") for e in row),
            )
            assert off < 1e-9
            assert commuting_pair_forces_diagonal(g12, res.U_fixed, W2, tol=1e-9)


class TestModuliCount:
    def test_parabolic_two(self):
        c = fermionic_moduli_count(1.0, 1.0, parabolic(0.5), parabolic(0.9))
        assert c == 2

    def test_hyperbolic_zero(self):
        c = fermionic_moduli_count(1.0, 1.0, np.diag([2.0, 0.5]), np.diag([3.0, 1 / 3.0]))
        assert c == 0

    def test_osp22_so2_sector_four(self):
        c = fermionic_moduli_count(rotation(0.4), rotation(1.1), rotation(0.4), rotation(1.1))
        assert c == 4

    def test_noncommuting_rejected(self):
        with pytest.raises(ValueError):
            fermionic_moduli_count(np.eye(2), np.eye(2), rotation(0.3), np.diag([2.0, 0.5]))

    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (1, 2)])
    def test_closed_form_equals_bruteforce(self, m, n):
        rng = np.random.default_rng(40 + m * 10 + n)
        for _ in range(60):
            bodies = sample_commuting_bodies(m, n, rng)
            assert fermionic_moduli_count(*bodies) == fermionic_moduli_count_bruteforce(*bodies)


class TestSectors:
    def test_counts(self):
        report = enumerate_sectors_osp12()
        assert report.bosonic_count == 36
        assert len(report.fermionic_sectors) == 4
        assert all(s.moduli == 2 for s in report.fermionic_sectors)

    def test_family_split(self):
        report = enumerate_sectors_osp12()
        by_family = {}
        for s in report.sectors:
            by_family[s.family] = by_family.get(s.family, 0) + 1
        assert by_family == {"hyperbolic": 16, "parabolic": 16, "so2": 4}

    def test_fermionic_sector_signs_match(self):
        for s in enumerate_sectors_osp12().fermionic_sectors:
            assert s.family == "parabolic" and s.eps1 == s.a0 and s.eps2 == s.b0

    def test_representatives_are_valid_pairs(self, g12):
        report = enumerate_sectors_osp12()
        for desc in report.sectors:
            pair = sector_representative(desc)
            assert g12.is_member(pair.U1, 1e-10) and g12.is_member(pair.U2, 1e-10)
            assert commutator(pair.U1, pair.U2).max_abs() <= 1e-10
            if desc.fermionic:
                # fermions require BOTH determinant criteria to degenerate
                assert pair.det_ahat == 0.0 and pair.det_bhat == 0.0
                assert pair.rank_ahat == pair.rank_bhat == 1
                assert pair.moduli == 2
                chi_norm = max(e.max_abs() for row in pair.U1.block("chi") for e in row)
                assert chi_norm > 0
            else:
                assert abs(pair.det_ahat) > 1e-10 or abs(pair.det_bhat) > 1e-10
                assert pair.moduli == 0

    def test_gauge_fix_verdict_per_sector(self, g12):
        # raises on every fermionic representative; succeeds on all bosonic
        # representatives whose own operator is regular (the sign-mismatched
        # parabolic sectors degenerate on one side only and are already diagonal)
        for desc in enumerate_sectors_osp12().sectors:
            pair = sector_representative(desc)
            if desc.fermionic:
                for U in (pair.U1, pair.U2):
                    with pytest.raises(SingularGaugeOperatorError):
                        gauge_fix_sigma(g12, U)
            else:
                for U, det in ((pair.U1, pair.det_ahat), (pair.U2, pair.det_bhat)):
                    if abs(det) > 1e-10:
                        res = gauge_fix_sigma(g12, U)
                        assert res.U_fixed.diff(U) < 1e-10  # already diagonal

    def test_json_matches_counts(self):
        report = enumerate_sectors_osp12()
        data = report.to_json_dict()
        assert data["group"] == "osp(1|2)"
        assert data["bosonic_sectors"] == 36
        assert len(data["fermionic_sectors"]) == 4
        assert all(e["moduli"] == 2 for e in data["fermionic_sectors"])
        assert len(data["sectors"]) == 36


class TestHolonomyPair:
    def test_noncommuting_rejected(self, g12):
        U1 = SuperMatrix.from_body(np.diag([1.0, 2.0, 0.5]), 1, 2, 2)
        body = np.eye(3)
        body[1:, 1:] = rotation(0.7)
        U2 = SuperMatrix.from_body(body, 1, 2, 2)
        with pytest.raises(ValueError):
            HolonomyPair.make(g12, U1, U2)

    def test_metadata(self, g12):
        body = np.eye(3)
        body[1:, 1:] = rotation(0.7)
        U = SuperMatrix.from_body(body, 1, 2, 2)
        pair = HolonomyPair.make(g12, U, U, label="so2")
        assert pair.rank_ahat == 2 and pair.moduli == 0 and not pair.fermionic


class TestNonExponentialFamily:
    def test_boundary_conditions(self, g12):
        fam = build_nonexp_holonomy(0.35, -0.2, grid_points=64)
        eye = SuperMatrix.identity(1, 2, 2)
        assert fam.U1[0].diff(eye) == 0.0
        assert fam.U2[0].diff(eye) == 0.0
        assert np.abs(fam.U1[-1].body() - fam.target_body_1).max() < 1e-8
        assert np.abs(fam.U2[-1].body() - fam.target_body_2).max() < 1e-8

    def test_membership_along_path(self, g12):
        fam = build_nonexp_holonomy(0.3, 0.1, grid_points=16)
        for u in fam.U1 + fam.U2:
            assert g12.is_member(u, 1e-9)

    def test_target_is_outside_the_exponential_image(self):
        fam = build_nonexp_holonomy(0.35, 0.1, grid_points=8)
        # the SL(2) exponential image is {tr > -2} plus -I; the endpoint's
        # lower block -exp(2 pi A sigma_1) has tr = -2 cosh(2 pi A) < -2,
        # so no single exponential reaches it even though the path does
        lower = fam.target_body_1[1:, 1:]
        assert abs(np.linalg.det(lower) - 1.0) < 1e-10
        assert np.trace(lower) < -2.0
        assert np.abs(lower + np.eye(2)).max() > 0.1

    def test_connection_is_approximately_tangent(self):
        fam = build_nonexp_holonomy(0.2, 0.1, grid_points=32)
        from superholonomy.superlie import graded_form, _supertranspose_body

        H = graded_form(1, 2)
        for A in fam.connection(1)[:5]:
            b = A.body()
            assert np.abs(_supertranspose_body(b, 1) @ H + H @ b).max() < 1e-3
