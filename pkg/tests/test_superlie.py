import numpy as np
import pytest

from superholonomy.grassmann import GrassmannElement
from superholonomy.superlie import (
    EPS2,
    SIGMA0,
    SIGMA1,
    SIGMA2,
    SuperAlgebra,
    build_osp,
    build_osp12,
    graded_form,
    _supertranspose_body,
)


@pytest.fixture(scope="module")
def osp12():
    return build_osp12()


class TestOsp12Relations:
    def test_jj_relations_with_scaled_epsilon(self, osp12):
        # [J_a, J_b] = eps_ab^c J_c with eps_012 recorded (the exact solution
        # forces |lam_a| = 1, which scales the symbol to 2)
        J = osp12.rep[:3]
        eps012 = osp12.conventions["epsilon_012"]
        eta_inv = np.linalg.inv(np.diag([-1.0, 1.0, 1.0]))
        eps = np.zeros((3, 3, 3))
        for a, b, c in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
            eps[a, b, c] = eps012
            eps[b, a, c] = -eps012
        eps_up = np.einsum("abc,cd->abd", eps, eta_inv)
        for a in range(3):
            for b in range(3):
                lhs = J[a] @ J[b] - J[b] @ J[a]
                rhs = sum(eps_up[a, b, c] * J[c] for c in range(3))
                assert np.abs(lhs - rhs).max() == 0.0

    def test_jq_relations_match_sigma_matrices(self, osp12):
        J, Q = osp12.rep[:3], osp12.rep[3:]
        sigmas = [SIGMA0, SIGMA1, SIGMA2]
        for a in range(3):
            for al in range(2):
                lhs = J[a] @ Q[al] - Q[al] @ J[a]
                rhs = sum(sigmas[a][al, be] * Q[be] for be in range(2))
                assert np.abs(lhs - rhs).max() == 0.0

    def test_qq_closes_onto_even_span(self, osp12):
        J, Q = osp12.rep[:3], osp12.rep[3:]
        eta_inv = np.linalg.inv(np.diag([-1.0, 1.0, 1.0]))
        sigma_up = [
            sum(eta_inv[a, b] * (s @ EPS2) for b, s in enumerate([SIGMA0, SIGMA1, SIGMA2]))
            for a in range(3)
        ]
        for al in range(2):
            for be in range(2):
                lhs = Q[al] @ Q[be] + Q[be] @ Q[al]
                rhs = sum(sigma_up[a][al, be] * J[a] for a in range(3))
                assert np.abs(lhs - rhs).max() == 0.0

    def test_supertrace_form_is_scaled_eta(self, osp12):
        k = osp12.conventions["supertrace_normalization"]
        J = osp12.rep[:3]
        gram = np.array([[np.trace((J[a] @ J[b])[:1, :1]) - np.trace((J[a] @ J[b])[1:, 1:])
                          for b in range(3)] for a in range(3)])
        assert np.allclose(gram, k * np.diag([-1.0, 1.0, 1.0]))
        assert k != 0

    def test_top_left_entry_vanishes(self, osp12):
        # a unit top-left entry cannot satisfy the even bracket relations
        for mat in osp12.rep[:3]:
            assert mat[0, 0] == 0.0

    def test_graded_trace_of_generator_products(self, osp12):
        # the supermatrix supertrace reproduces the full bilinear form, even
        # block diag(-1,1,1) and odd block antisymmetric, with one scale
        k = osp12.conventions["supertrace_normalization"]
        mats = osp12.rep_supermatrices(2)
        for i in range(5):
            for j in range(5):
                val = (mats[i] @ mats[j]).supertrace()
                assert abs(val.body - k * osp12.eta[i, j]) < 1e-12


class TestBuildOsp:
    @pytest.mark.parametrize(
        "m,n,even,odd", [(1, 1, 3, 2), (2, 1, 4, 4), (1, 2, 10, 4), (2, 2, 11, 8)]
    )
    def test_dimension_formula(self, m, n, even, odd):
        alg = build_osp(m, n)
        assert alg.n_even == m * (m - 1) // 2 + n * (2 * n + 1) == even
        assert alg.n_odd == 2 * m * n == odd

    def test_generators_satisfy_tangency(self):
        alg = build_osp(2, 1)
        H = graded_form(2, 2)
        for mat in alg.rep:
            assert np.abs(_supertranspose_body(mat, 2) @ H + H @ mat).max() == 0.0

    def test_11_isomorphic_to_explicit_osp12(self, osp12):
        alg = build_osp(1, 1)
        # both span the same matrix solution space; expand one basis in the
        # other and check the structure constants transform accordingly
        basis = np.array([mat.flatten() for mat in alg.rep]).T
        P = np.array([np.linalg.lstsq(basis, mat.flatten(), rcond=None)[0] for mat in osp12.rep])
        recon = np.einsum("il,ljk->ijk", P, np.array(alg.rep))
        assert np.abs(recon - np.array(osp12.rep)).max() < 1e-12
        P_inv = np.linalg.inv(P)
        f_transformed = np.einsum("il,jm,lmn,nk->ijk", P, P, alg.f, P_inv)
        assert np.abs(f_transformed - osp12.f).max() < 1e-10

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            build_osp(0, 1)
        with pytest.raises(ValueError):
            build_osp(3, 3)


class TestBracket:
    def test_even_even_self_bracket_vanishes(self, osp12):
        x = np.array([0.3, -0.7, 0.2, 0.0, 0.0])
        assert np.abs(osp12.bracket(x, x)).max() < 1e-15

    def test_single_odd_self_bracket_nonzero(self, osp12):
        # {Q, Q} for one odd generator lands on the even span
        x = np.zeros(5)
        x[3] = 1.0
        out = osp12.bracket(x, x)
        assert np.abs(out[:3]).max() > 0.5
        assert np.abs(out[3:]).max() == 0.0

    def test_matches_representation_commutators(self, osp12):
        rng = np.random.default_rng(21)
        for _ in range(20):
            xc = [GrassmannElement.scalar(rng.uniform(-1, 1), 2) for _ in range(3)]
            xc += [GrassmannElement.theta(1, 2) * rng.uniform(-1, 1) for _ in range(2)]
            yc = [GrassmannElement.scalar(rng.uniform(-1, 1), 2) for _ in range(3)]
            yc += [GrassmannElement.theta(2, 2) * rng.uniform(-1, 1) for _ in range(2)]
            X = osp12.embed(xc, 2)
            Y = osp12.embed(yc, 2)
            matrix_side = X @ Y - Y @ X
            coeff_side = osp12.bracket(xc, yc)
            recon = osp12.embed(coeff_side, 2)
            assert matrix_side.diff(recon) < 1e-12

    def test_parity_violation_rejected(self, osp12):
        bad = [GrassmannElement.theta(1, 2)] + [GrassmannElement.zero(2)] * 4
        good = [GrassmannElement.zero(2)] * 5
        with pytest.raises(ValueError):
            osp12.bracket(bad, good)

    def test_odd_odd_lands_on_even(self, osp12):
        rng = np.random.default_rng(22)
        for _ in range(20):
            x = [GrassmannElement.zero(2)] * 3 + [
                GrassmannElement.theta(1, 2) * rng.uniform(-1, 1) for _ in range(2)
            ]
            y = [GrassmannElement.zero(2)] * 3 + [
                GrassmannElement.theta(2, 2) * rng.uniform(-1, 1) for _ in range(2)
            ]
            out = osp12.bracket(x, y)
            assert all(out[k].is_zero() for k in osp12.odd_indices)


class TestJacobi:
    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (1, 2), (2, 2)])
    def test_osp_passes(self, m, n):
        report = build_osp(m, n).check_jacobi(tol=1e-12)
        assert report.passed, str(report)

    def test_explicit_osp12_passes(self, osp12):
        assert osp12.check_jacobi(tol=1e-12).passed

    def test_perturbation_detected(self, osp12):
        f_bad = osp12.f.copy()
        f_bad[0, 1, 2] += 0.1
        broken = SuperAlgebra(
            labels=osp12.labels, parities=osp12.parities, f=f_bad, eta=osp12.eta
        )
        assert not broken.check_jacobi(tol=1e-12).passed


class TestFfBlock:
    def test_parabolic_direction_singular(self, osp12):
        # sigma_+ = sigma_0 + sigma_2 corresponds to -J0 + J2 here
        block = osp12.ff_block([-1.0, 0.0, 1.0])
        assert np.linalg.det(block) == 0.0
        assert np.linalg.matrix_rank(block) == 1

    def test_hyperbolic_direction_regular(self, osp12):
        block = osp12.ff_block([0.0, 1.0, 0.0])
        assert abs(np.linalg.det(block) - (-1.0)) < 1e-14

    def test_zero_direction(self, osp12):
        assert np.abs(osp12.ff_block([0.0, 0.0, 0.0])).max() == 0.0

    def test_rejects_odd_support(self, osp12):
        with pytest.raises(ValueError):
            osp12.ff_block(np.array([0.0, 0.0, 0.0, 1.0, 0.0]))


class TestInvariance:
    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (1, 2)])
    def test_structure_constant_round_trip(self, m, n):
        # f projected out of the representation must reproduce every bracket
        alg = build_osp(m, n)
        for i in range(alg.dim):
            for j in range(alg.dim):
                if alg.parities[i] and alg.parities[j]:
                    br = alg.rep[i] @ alg.rep[j] + alg.rep[j] @ alg.rep[i]
                else:
                    br = alg.rep[i] @ alg.rep[j] - alg.rep[j] @ alg.rep[i]
                recon = sum(alg.f[i, j, k] * alg.rep[k] for k in range(alg.dim))
                assert np.abs(br - recon).max() <= 1e-12

    def test_eta_invariance_on_basis_triples(self, osp12):
        # str([X,Y} Z) = str(X [Y,Z}) expressed through f and eta
        f, eta = osp12.f, osp12.eta
        lhs = np.einsum("ijl,lk->ijk", f, eta)
        rhs = np.einsum("jkl,il->ijk", f, eta)
        assert np.abs(lhs - rhs).max() < 1e-12

    def test_eta_invariance_general_build(self):
        alg = build_osp(2, 1)
        lhs = np.einsum("ijl,lk->ijk", alg.f, alg.eta)
        rhs = np.einsum("jkl,il->ijk", alg.f, alg.eta)
        assert np.abs(lhs - rhs).max() < 1e-12


class TestJson:
    def test_round_trip(self, osp12):
        again = SuperAlgebra.from_json_dict(osp12.to_json_dict())
        assert np.abs(again.f - osp12.f).max() == 0.0
        assert np.abs(again.eta - osp12.eta).max() == 0.0
        assert again.labels == osp12.labels
        assert again.parities == osp12.parities
