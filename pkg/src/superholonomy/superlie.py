"""Super Lie algebra data: structure constants, parities, bilinear form.

Algebras are built from explicit matrix representations (real supermatrix
bodies).  Structure constants come from projecting representation brackets
back onto the basis with the supertrace form, which is also stored as the
invariant bilinear form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from .grassmann import GrassmannElement
from .supermatrix import SuperMatrix, gmat_from_real

SIGMA0 = np.array([[0.0, 1.0], [-1.0, 0.0]])
SIGMA1 = np.array([[1.0, 0.0], [0.0, -1.0]])
SIGMA2 = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_PLUS = SIGMA0 + SIGMA2
EPS2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(two_n: int) -> np.ndarray:
    """C with C^T = -C and C^2 = -I; the 2x2 case is the epsilon matrix."""
    half = two_n // 2
    C = np.zeros((two_n, two_n))
    C[:half, half:] = np.eye(half)
    C[half:, :half] = -np.eye(half)
    return C


def graded_form(m: int, two_n: int) -> np.ndarray:
    """The preserved form H = diag(I_m, C)."""
    H = np.zeros((m + two_n, m + two_n))
    H[:m, :m] = np.eye(m)
    H[m:, m:] = symplectic_form(two_n)
    return H


def _str_body(mat: np.ndarray, m: int) -> float:
    return float(np.trace(mat[:m, :m]) - np.trace(mat[m:, m:]))


def _bracket_body(x: np.ndarray, y: np.ndarray, px: int, py: int) -> np.ndarray:
    """[x, y} on representation matrices: anticommutator only for odd-odd."""
    if px and py:
        return x @ y + y @ x
    return x @ y - y @ x


@dataclass
class JacobiReport:
    dim: int
    max_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"super Jacobi: dim={self.dim} max residual={self.max_residual:.3e} tol={self.tol:.1e} [{status}]"


@dataclass
class SuperAlgebra:
    """Basis labels with parities, structure constants and bilinear form."""

    labels: tuple[str, ...]
    parities: tuple[int, ...]
    f: np.ndarray            # f[I, J, K] with [T_I, T_J} = f_IJ^K T_K
    eta: np.ndarray          # invariant form; even block symmetric, odd block antisymmetric
    rep: tuple[np.ndarray, ...] | None = None
    block_m: int | None = None
    block_n: int | None = None   # size of the lower-right block (= 2n for osp(m|2n))
    conventions: dict = field(default_factory=dict)

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=float)
        self.eta = np.asarray(self.eta, dtype=float)

    # ------------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def even_indices(self) -> list[int]:
        return [i for i, p in enumerate(self.parities) if p == 0]

    @property
    def odd_indices(self) -> list[int]:
        return [i for i, p in enumerate(self.parities) if p == 1]

    @property
    def n_even(self) -> int:
        return len(self.even_indices)

    @property
    def n_odd(self) -> int:
        return len(self.odd_indices)

    # ------------------------------------------------------------------
    def validate(self, tol: float = 1e-12):
        """Graded antisymmetry and parity selection rules of f."""
        dim = self.dim
        for i, j in product(range(dim), repeat=2):
            sign = -1.0 if (self.parities[i] and self.parities[j]) else 1.0
            if np.abs(self.f[i, j] + sign * self.f[j, i]).max() > tol:
                raise ValueError(f"graded antisymmetry violated at ({i},{j})")
            for k in range(dim):
                if (self.parities[i] + self.parities[j] - self.parities[k]) % 2:
                    if abs(self.f[i, j, k]) > tol:
                        raise ValueError(f"parity selection rule violated at ({i},{j},{k})")

    def bracket(self, x: Sequence, y: Sequence):
        """Bilinear extension of f to coefficient vectors.

        Accepts plain real vectors or vectors of GrassmannElement.  Grassmann
        coefficients must match the parity of their generator, which keeps
        every term of the enveloping-algebra element even.
        """
        if all(isinstance(c, (int, float)) for c in x) and all(
            isinstance(c, (int, float)) for c in y
        ):
            # plain real vectors mean the abstract bracket of basis
            # combinations (odd-odd pairs resolved by the anticommutator);
            # Grassmann-valued input goes through the graded path below
            xv = np.asarray(x, dtype=float)
            yv = np.asarray(y, dtype=float)
            return np.einsum("i,j,ijk->k", xv, yv, self.f)
        ngen = next(c.n for c in list(x) + list(y) if isinstance(c, GrassmannElement))
        xg = [c if isinstance(c, GrassmannElement) else GrassmannElement.scalar(c, ngen) for c in x]
        yg = [c if isinstance(c, GrassmannElement) else GrassmannElement.scalar(c, ngen) for c in y]
        for vec in (xg, yg):
            for i, c in enumerate(vec):
                if not c.is_homogeneous(self.parities[i]):
                    raise ValueError(
                        f"coefficient {i} must have Grassmann parity {self.parities[i]}"
                    )
        out = [GrassmannElement.zero(ngen) for _ in range(self.dim)]
        for i in range(self.dim):
            if xg[i].is_zero():
                continue
            for j in range(self.dim):
                if yg[j].is_zero():
                    continue
                coef = xg[i] * yg[j]
                for k in np.nonzero(self.f[i, j])[0]:
                    out[k] = out[k] + coef * float(self.f[i, j, k])
        return out

    def check_jacobi(self, tol: float = 1e-12) -> JacobiReport:
        """Residual of [X,[Y,Z}} - [[X,Y},Z} - (-1)^{|X||Y|}[Y,[X,Z}} on the basis."""
        f = self.f
        p = np.asarray(self.parities)
        sgn = np.where(np.outer(p, p) == 1, -1.0, 1.0)
        lhs = np.einsum("jkl,ilm->ijkm", f, f)
        rhs1 = np.einsum("ijl,lkm->ijkm", f, f)
        rhs2 = np.einsum("ikl,jlm->ijkm", f, f)
        residual = lhs - rhs1 - sgn[:, :, None, None] * rhs2
        return JacobiReport(self.dim, float(np.abs(residual).max()), tol)

    def ff_block(self, c: Sequence[float]) -> np.ndarray:
        """Fermion-fermion block of the adjoint action of an even direction.

        For c supported on the even generators returns the matrix
        J[alpha, beta] = sum_a c^a f[a, alpha, beta] acting on the odd basis.
        """
        c = np.asarray(c, dtype=float)
        ev, od = self.even_indices, self.odd_indices
        if c.shape == (self.dim,):
            if np.abs(c[od]).max(initial=0.0) > 0:
                raise ValueError("direction must be supported on even generators")
            c = c[ev]
        if c.shape != (len(ev),):
            raise ValueError("direction has wrong length")
        block = np.zeros((len(od), len(od)))
        for a, ci in zip(ev, c):
            if ci:
                block += ci * self.f[np.ix_([a], od, od)][0]
        return block

    # ------------------------------------------------------------------
    def embed(self, coeffs: Sequence, ngen: int) -> SuperMatrix:
        """Enveloping-algebra element sum coeffs[I] * T_I as a SuperMatrix."""
        if self.rep is None:
            raise ValueError("algebra carries no matrix representation")
        d = self.block_m + self.block_n
        terms: list[list[dict[int, float]]] = [[{} for _ in range(d)] for _ in range(d)]
        for c, mat, par in zip(coeffs, self.rep, self.parities):
            if isinstance(c, (int, float)):
                if c == 0:
                    continue
                if par == 1 and c != 0:
                    raise ValueError("odd generators need odd Grassmann coefficients")
                cg = {0: float(c)}
            else:
                if c.is_zero():
                    continue
                if not c.is_homogeneous(par):
                    raise ValueError("coefficient parity must match generator parity")
                cg = c.terms
            for i in range(d):
                for j in range(d):
                    v = mat[i, j]
                    if v == 0.0:
                        continue
                    tij = terms[i][j]
                    for mask, coeff in cg.items():
                        tij[mask] = tij.get(mask, 0.0) + coeff * v
        rows = [[GrassmannElement(ngen, tij) for tij in row] for row in terms]
        return SuperMatrix(self.block_m, self.block_n, rows, ngen=ngen)

    def rep_supermatrices(self, ngen: int) -> list[SuperMatrix]:
        """Generators as supermatrices; odd generators use the odd pattern."""
        return [
            SuperMatrix(self.block_m, self.block_n, gmat_from_real(mat, ngen),
                        parity=par, ngen=ngen)
            for mat, par in zip(self.rep, self.parities)
        ]

    # ------------------------------------------------------------------
    def to_json_dict(self) -> dict:
        def triples(arr):
            out = []
            for idx in np.argwhere(np.abs(arr) > 0):
                out.append({"index": [int(v) for v in idx], "value": float(arr[tuple(idx)])})
            return out

        return {
            "labels": list(self.labels),
            "parities": list(self.parities),
            "f": triples(self.f),
            "eta": triples(self.eta),
            "conventions": {k: v for k, v in sorted(self.conventions.items())},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SuperAlgebra":
        dim = len(data["labels"])
        f = np.zeros((dim, dim, dim))
        for entry in data["f"]:
            f[tuple(entry["index"])] = entry["value"]
        eta = np.zeros((dim, dim))
        for entry in data["eta"]:
            eta[tuple(entry["index"])] = entry["value"]
        return cls(
            labels=tuple(data["labels"]),
            parities=tuple(int(p) for p in data["parities"]),
            f=f,
            eta=eta,
            conventions=dict(data.get("conventions", {})),
        )


# ----------------------------------------------------------------------
# structure-constant extraction
# ----------------------------------------------------------------------

def _structure_constants_from_rep(
    rep: list[np.ndarray], parities: list[int], m: int, tol: float = 1e-10
) -> tuple[np.ndarray, np.ndarray]:
    """f and the supertrace Gram matrix from representation matrices."""
    dim = len(rep)
    gram = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(dim):
            gram[i, j] = _str_body(rep[i] @ rep[j], m)
    if abs(np.linalg.det(gram)) < tol:
        raise ValueError("supertrace form is degenerate on this basis")
    f = np.zeros((dim, dim, dim))
    for i in range(dim):
        for j in range(dim):
            br = _bracket_body(rep[i], rep[j], parities[i], parities[j])
            rhs = np.array([_str_body(br @ rep[l], m) for l in range(dim)])
            f[i, j] = np.linalg.solve(gram.T, rhs)
            # round-trip: the projected constants must reproduce the bracket
            recon = sum(f[i, j, k] * rep[k] for k in range(dim))
            if np.abs(recon - br).max() > 1e-10:
                raise ValueError(f"bracket ({i},{j}) does not close on the basis")
    return f, gram


# ----------------------------------------------------------------------
# osp(1|2) with the explicit 3x3 sigma-matrix representation
# ----------------------------------------------------------------------

def _osp12_candidate(t_sign: float, mu1: float) -> tuple[list[np.ndarray], dict]:
    """J_a = lam_a * diag(0, sigma_a), Q_alpha = mu_alpha * q_alpha.

    The top-left entry of the J's must vanish (otherwise {Q,Q} cannot close
    onto them), and the normalizations are pinned by the J-Q relations:
    lam_1 = 1 from the diagonal generator, lam_2 = -lam_0 = t from the other
    two, and mu_2 = t*mu_1 with t^2 = 1.
    """
    lam = np.array([-t_sign, 1.0, t_sign])
    mu = np.array([mu1, t_sign * mu1])
    C = EPS2
    sigmas = [SIGMA0, SIGMA1, SIGMA2]
    rep = []
    for a in range(3):
        mat = np.zeros((3, 3))
        mat[1:, 1:] = lam[a] * sigmas[a]
        rep.append(mat)
    for alpha in range(2):
        c_vec = np.zeros((2, 1))
        c_vec[alpha, 0] = 1.0
        mat = np.zeros((3, 3))
        mat[0:1, 1:] = -mu[alpha] * (c_vec.T @ C)
        mat[1:, 0:1] = mu[alpha] * c_vec
        rep.append(mat)
    info = {"lambda": lam.tolist(), "mu": mu.tolist()}
    return rep, info


def _osp12_relation_residual(rep: list[np.ndarray], eps_scale: float) -> float:
    """Exactness of the three defining relation families for a candidate."""
    J, Q = rep[:3], rep[3:]
    eta = np.diag([-1.0, 1.0, 1.0])
    C = EPS2
    sigmas = [SIGMA0, SIGMA1, SIGMA2]
    eps = np.zeros((3, 3, 3))
    for a, b, c in product(range(3), repeat=3):
        perm = [a, b, c]
        if sorted(perm) != [0, 1, 2]:
            continue
        sign = 1.0 if perm in ([0, 1, 2], [1, 2, 0], [2, 0, 1]) else -1.0
        eps[a, b, c] = sign * eps_scale
    eta_inv = np.linalg.inv(eta)
    eps_up = np.einsum("abc,cd->abd", eps, eta_inv)
    sigma_lowered = [s @ C for s in sigmas]
    sigma_up = [
        sum(eta_inv[a, b] * sigma_lowered[b] for b in range(3)) for a in range(3)
    ]
    res = 0.0
    for a, b in product(range(3), repeat=2):
        target = sum(eps_up[a, b, c] * J[c] for c in range(3))
        res = max(res, np.abs(J[a] @ J[b] - J[b] @ J[a] - target).max())
    for a, al in product(range(3), range(2)):
        target = sum(sigmas[a][al, be] * Q[be] for be in range(2))
        res = max(res, np.abs(J[a] @ Q[al] - Q[al] @ J[a] - target).max())
    for al, be in product(range(2), repeat=2):
        target = sum(sigma_up[a][al, be] * J[a] for a in range(3))
        res = max(res, np.abs(Q[al] @ Q[be] + Q[be] @ Q[al] - target).max())
    return res


@lru_cache(maxsize=None)
def build_osp12(tol: float = 1e-12) -> SuperAlgebra:
    """osp(1|2) from its 3x3 representation, normalizations fitted then verified.

    The result is cached and shared; treat it as immutable (copy arrays
    before modifying).

    The defining relations are
        [J_a, J_b]     = eps_ab^c J_c
        [J_a, Q_alpha] = (sigma_a)_alpha^beta Q_beta
        {Q_alpha, Q_beta} = (sigma^a)_alpha_beta J_a
    with indices moved by eta = diag(-1, 1, 1) and C = eps.  Requiring all
    three to hold exactly forces |lam_a| = 1 and scales the antisymmetric
    eps symbol to eps_012 = 2; the discrete sign choices are searched and the
    selected convention is recorded.
    """
    best = None
    for t_sign in (1.0, -1.0):
        for mu1 in (1.0, -1.0):
            rep, info = _osp12_candidate(t_sign, mu1)
            res = _osp12_relation_residual(rep, eps_scale=2.0)
            if res <= tol:
                best = (rep, info)
                break
        if best:
            break
    if best is None:
        raise RuntimeError("no normalization satisfies the defining relations exactly")
    rep, info = best
    parities = [0, 0, 0, 1, 1]
    f, gram = _structure_constants_from_rep(rep, parities, m=1)
    eta_target = np.zeros((5, 5))
    eta_target[:3, :3] = np.diag([-1.0, 1.0, 1.0])
    eta_target[3:, 3:] = EPS2
    # single global factor between the supertrace form and the target eta
    k = gram[0, 0] / eta_target[0, 0]
    if np.abs(gram - k * eta_target).max() > tol:
        raise RuntimeError("supertrace form is not proportional to the expected eta")
    alg = SuperAlgebra(
        labels=("J0", "J1", "J2", "Q1", "Q2"),
        parities=tuple(parities),
        f=f,
        eta=eta_target,
        rep=tuple(rep),
        block_m=1,
        block_n=2,
        conventions={
            "epsilon_012": 2.0,
            "supertrace_normalization": float(k),
            "J_scale": info["lambda"],
            "Q_scale": info["mu"],
            "sigma_upper": "eta^{ab} (sigma_b C)_{alpha beta}",
            "C_12": 1.0,
        },
    )
    alg.validate()
    return alg


# ----------------------------------------------------------------------
# general osp(m|2n)
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def build_osp(m: int, n: int) -> SuperAlgebra:
    """osp(m|2n) as all X with X^st H + H X = 0, H = diag(I_m, C_2n).

    The condition splits into: a antisymmetric (so(m)), A^T C + C A = 0
    (sp(2n)) and xi = -chi^T C with chi free, so the dimensions are
    m(m-1)/2 + n(2n+1) even and 2mn odd generators.  Cached and shared;
    treat the result as immutable.
    """
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    if m + 2 * n > 8:
        raise ValueError("desk-scale builder capped at m + 2n <= 8")
    two_n = 2 * n
    d = m + two_n
    C = symplectic_form(two_n)
    rep: list[np.ndarray] = []
    labels: list[str] = []
    parities: list[int] = []
    # so(m) block
    for i in range(m):
        for j in range(i + 1, m):
            mat = np.zeros((d, d))
            mat[i, j], mat[j, i] = 1.0, -1.0
            rep.append(mat)
            labels.append(f"J(o{i}{j})")
            parities.append(0)
    # sp(2n) block: A = C S with S symmetric
    for k in range(two_n):
        for l in range(k, two_n):
            S = np.zeros((two_n, two_n))
            S[k, l] += 1.0
            S[l, k] += 1.0
            mat = np.zeros((d, d))
            mat[m:, m:] = C @ S
            rep.append(mat)
            labels.append(f"J(sp{k}{l})")
            parities.append(0)
    # odd generators: chi = E_{ji}, xi = -chi^T C
    for i in range(m):
        for j in range(two_n):
            chi = np.zeros((two_n, m))
            chi[j, i] = 1.0
            mat = np.zeros((d, d))
            mat[m:, :m] = chi
            mat[:m, m:] = -chi.T @ C
            rep.append(mat)
            labels.append(f"Q({j}{i})")
            parities.append(1)
    expected_even = m * (m - 1) // 2 + n * (2 * n + 1)
    assert parities.count(0) == expected_even and parities.count(1) == 2 * m * n
    H = graded_form(m, two_n)
    for mat in rep:
        tangent = _supertranspose_body(mat, m) @ H + H @ mat
        if np.abs(tangent).max() > 1e-12:
            raise RuntimeError("generator fails the tangency condition")
    f, gram = _structure_constants_from_rep(rep, parities, m=m)
    alg = SuperAlgebra(
        labels=tuple(labels),
        parities=tuple(parities),
        f=f,
        eta=gram,
        rep=tuple(rep),
        block_m=m,
        block_n=two_n,
        conventions={"eta": "supertrace Gram matrix", "C": "block off-diagonal (0, I; -I, 0)"},
    )
    alg.validate()
    return alg


def _supertranspose_body(mat: np.ndarray, m: int) -> np.ndarray:
    """Supertranspose of a real supermatrix body written in blocks."""
    out = np.zeros_like(mat)
    out[:m, :m] = mat[:m, :m].T
    out[m:, m:] = mat[m:, m:].T
    out[:m, m:] = mat[m:, :m].T
    out[m:, :m] = -mat[:m, m:].T
    return out
