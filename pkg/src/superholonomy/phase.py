"""Finite-dimensional graded phase space of homogeneous torus connections.

Polynomials in even variables A_k^a and odd variables psi_k^alpha (k = 1, 2
labels the two cycles) carry the graded bracket

    {A_k^a, A_j^b}   = eps_kj eta^{ab}
    {psi_k^a, psi_j^b} = eps_kj C^{ab}

extended by the graded Leibniz rule.  The flatness constraints G^a, G^alpha
live here, close under the bracket onto the underlying superalgebra, and the
determinant of the fermion-fermion adjoint block decides whether a sector
carries fermionic moduli.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .grassmann import GrassmannElement, merge_sign
from .superlie import SuperAlgebra

EPS_CYCLES = np.array([[0.0, 1.0], [-1.0, 0.0]])   # eps_12 = +1


@dataclass(frozen=True)
class PhaseSpace:
    """Variable layout and fundamental brackets for one graded phase space.

    Even variables are indexed (k, a) with k in {1, 2} and a < n_even; odd
    variables (k, alpha) likewise.  eta must be symmetric invertible and C
    antisymmetric invertible.
    """

    n_even: int
    n_odd: int
    eta: tuple        # stored as nested tuples to stay hashable
    C: tuple

    @classmethod
    def create(cls, eta: np.ndarray, C: np.ndarray) -> "PhaseSpace":
        eta = np.asarray(eta, dtype=float)
        C = np.asarray(C, dtype=float)
        if np.abs(eta - eta.T).max() > 0 or np.abs(C + C.T).max() > 0:
            raise ValueError("eta must be symmetric and C antisymmetric")
        return cls(
            n_even=eta.shape[0],
            n_odd=C.shape[0],
            eta=tuple(map(tuple, eta)),
            C=tuple(map(tuple, C)),
        )

    @classmethod
    def from_algebra(cls, alg: SuperAlgebra) -> "PhaseSpace":
        ev, od = alg.even_indices, alg.odd_indices
        eta = alg.eta[np.ix_(ev, ev)]
        C = alg.eta[np.ix_(od, od)]
        return cls.create(eta, C)

    # ------------------------------------------------------------------
    @property
    def eta_mat(self) -> np.ndarray:
        return np.array(self.eta)

    @property
    def C_mat(self) -> np.ndarray:
        return np.array(self.C)

    def even_weights(self) -> np.ndarray:
        """Bracket coefficients over the 2*n_even even slots, k-major order."""
        return np.kron(EPS_CYCLES, np.linalg.inv(self.eta_mat))

    def odd_weights(self) -> np.ndarray:
        """Bracket coefficients over the 2*n_odd odd slots (symmetric matrix).

        The raised form obeys C^{ab} C_{bc} = delta^a_c; the other index
        order flips its sign and breaks constraint closure against the
        structure constants, which is what pins the convention.
        """
        C_upper = np.linalg.inv(self.C_mat)
        return np.kron(EPS_CYCLES, C_upper)

    def even_slot(self, k: int, a: int) -> int:
        return (int(k) - 1) * self.n_even + int(a)

    def odd_slot(self, k: int, alpha: int) -> int:
        return (int(k) - 1) * self.n_odd + int(alpha)

    # ------------------------------------------------------------------
    def zero(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {})

    def scalar(self, value: float) -> "GradedPolynomial":
        key = ((0,) * (2 * self.n_even), 0)
        return GradedPolynomial(self, {key: float(value)})

    def A(self, k: int, a: int) -> "GradedPolynomial":
        exps = [0] * (2 * self.n_even)
        exps[self.even_slot(k, a)] = 1
        return GradedPolynomial(self, {(tuple(exps), 0): 1.0})

    def psi(self, k: int, alpha: int) -> "GradedPolynomial":
        key = ((0,) * (2 * self.n_even), 1 << self.odd_slot(k, alpha))
        return GradedPolynomial(self, {key: 1.0})


class GradedPolynomial:
    """Polynomial in even A-variables and odd psi-variables, canonical form.

    Terms map (even exponent tuple, odd slot mask) -> coefficient; odd masks
    follow the same bit conventions as Grassmann monomials.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: PhaseSpace, terms: dict):
        clean = {k: float(c) for k, c in terms.items() if abs(c) >= 1e-14}
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("GradedPolynomial is immutable")

    # ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def parity(self) -> int | None:
        if not self.terms:
            return None
        ps = {mask.bit_count() & 1 for _, mask in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def parity_part(self, parity: int) -> "GradedPolynomial":
        return GradedPolynomial(
            self.ctx,
            {k: c for k, c in self.terms.items() if k[1].bit_count() & 1 == parity},
        )

    # ------------------------------------------------------------------
    def _check(self, other: "GradedPolynomial"):
        if self.ctx is not other.ctx and self.ctx != other.ctx:
            raise ValueError("polynomials belong to different phase spaces")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = self.ctx.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0.0) + c
        return GradedPolynomial(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPolynomial(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = self.ctx.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return GradedPolynomial(self.ctx, {k: c * other for k, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for (e1, m1), c1 in self.terms.items():
            for (e2, m2), c2 in other.terms.items():
                if m1 & m2:
                    continue
                key = (tuple(a + b for a, b in zip(e1, e2)), m1 | m2)
                out[key] = out.get(key, 0.0) + merge_sign(m1, m2) * c1 * c2
        return GradedPolynomial(self.ctx, out)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    # ------------------------------------------------------------------
    def d_even(self, slot: int) -> "GradedPolynomial":
        out: dict = {}
        for (exps, mask), c in self.terms.items():
            e = exps[slot]
            if e == 0:
                continue
            new = list(exps)
            new[slot] = e - 1
            key = (tuple(new), mask)
            out[key] = out.get(key, 0.0) + c * e
        return GradedPolynomial(self.ctx, out)

    def d_odd_left(self, slot: int) -> "GradedPolynomial":
        """Left derivative: moves psi_slot to the front, then removes it."""
        bit = 1 << slot
        out: dict = {}
        for (exps, mask), c in self.terms.items():
            if not mask & bit:
                continue
            below = (mask & (bit - 1)).bit_count()
            sign = -1.0 if below & 1 else 1.0
            key = (exps, mask ^ bit)
            out[key] = out.get(key, 0.0) + sign * c
        return GradedPolynomial(self.ctx, out)

    # ------------------------------------------------------------------
    def bracket(self, other: "GradedPolynomial") -> "GradedPolynomial":
        """Graded bracket from the fundamental relations plus Leibniz.

        For homogeneous F the odd-sector term carries (-1)^{|F|+1}; mixed
        inputs are split into parity components first.
        """
        self._check(other)
        fe, fo = self.parity_part(0), self.parity_part(1)
        out = self.ctx.zero()
        for f_part, pf in ((fe, 0), (fo, 1)):
            if f_part.is_zero():
                continue
            out = out + f_part._bracket_homogeneous(other, pf)
        return out

    def _bracket_homogeneous(self, other: "GradedPolynomial", pf: int) -> "GradedPolynomial":
        ctx = self.ctx
        out = ctx.zero()
        we = ctx.even_weights()
        for i, j in zip(*np.nonzero(we)):
            df = self.d_even(int(i))
            if df.is_zero():
                continue
            dg = other.d_even(int(j))
            if dg.is_zero():
                continue
            out = out + df * dg * float(we[i, j])
        wo = ctx.odd_weights()
        pref = 1.0 if pf else -1.0   # (-1)^{|F|+1}
        for i, j in zip(*np.nonzero(wo)):
            df = self.d_odd_left(int(i))
            if df.is_zero():
                continue
            dg = other.d_odd_left(int(j))
            if dg.is_zero():
                continue
            out = out + df * dg * (pref * float(wo[i, j]))
        return out

    # ------------------------------------------------------------------
    def evaluate(self, even_values: Sequence[float],
                 odd_values: Sequence[GrassmannElement]) -> GrassmannElement:
        """Substitute numbers for A-variables and odd elements for psi's."""
        ctx = self.ctx
        if len(even_values) != 2 * ctx.n_even or len(odd_values) != 2 * ctx.n_odd:
            raise ValueError("value vectors do not match the variable layout")
        ngen = odd_values[0].n if odd_values else 2
        total = GrassmannElement.zero(ngen)
        for (exps, mask), c in self.terms.items():
            factor = GrassmannElement.scalar(c, ngen)
            for slot, e in enumerate(exps):
                if e:
                    factor = factor * (float(even_values[slot]) ** e)
            rest = mask
            while rest:
                low = rest & -rest
                factor = factor * odd_values[low.bit_length() - 1]
                rest ^= low
            total = total + factor
        return total

    def __eq__(self, other):
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (exps, mask), c in sorted(self.terms.items()):
            factors = []
            for slot, e in enumerate(exps):
                if e:
                    k, a = divmod(slot, self.ctx.n_even)
                    factors.append(f"A{k + 1}^{a}" + (f"^{e}" if e > 1 else ""))
            rest = mask
            while rest:
                low = rest & -rest
                slot = low.bit_length() - 1
                k, al = divmod(slot, self.ctx.n_odd)
                factors.append(f"psi{k + 1}^{al}")
                rest ^= low
            bits.append(f"{c:g}*" + "*".join(factors) if factors else f"{c:g}")
        return " + ".join(bits).replace("+ -", "- ")


# ----------------------------------------------------------------------
# flatness constraints
# ----------------------------------------------------------------------

def flatness_constraints(alg: SuperAlgebra, ctx: PhaseSpace | None = None,
                         bosonic_same_cycle: bool = False
                         ) -> tuple[list[GradedPolynomial], list[GradedPolynomial]]:
    """The constraints expressing [A_1, A_2} = 0 for a homogeneous pair.

        G^a     = f_bc^a A_1^b A_2^c + f_{alpha beta}^a psi_1^alpha psi_2^beta
        G^alpha = f_{a beta}^alpha (A_1^a psi_2^beta - A_2^a psi_1^beta)

    bosonic_same_cycle=True builds the A_1^b A_1^c variant instead; its
    bosonic part is then identically zero by antisymmetry of f, so that form
    cannot detect a non-commuting bosonic pair (kept for documentation).
    """
    if ctx is None:
        ctx = PhaseSpace.from_algebra(alg)
    ev, od = alg.even_indices, alg.odd_indices
    f = alg.f
    even_constraints = []
    second_cycle = 1 if bosonic_same_cycle else 2
    for a_pos, a_idx in enumerate(ev):
        poly = ctx.zero()
        for b_pos, b_idx in enumerate(ev):
            for c_pos, c_idx in enumerate(ev):
                coeff = f[b_idx, c_idx, a_idx]
                if coeff:
                    poly = poly + ctx.A(1, b_pos) * ctx.A(second_cycle, c_pos) * coeff
        for al_pos, al_idx in enumerate(od):
            for be_pos, be_idx in enumerate(od):
                coeff = f[al_idx, be_idx, a_idx]
                if coeff:
                    poly = poly + ctx.psi(1, al_pos) * ctx.psi(2, be_pos) * coeff
        even_constraints.append(poly)
    odd_constraints = []
    for al_pos, al_idx in enumerate(od):
        poly = ctx.zero()
        for a_pos, a_idx in enumerate(ev):
            for be_pos, be_idx in enumerate(od):
                coeff = f[a_idx, be_idx, al_idx]
                if coeff:
                    poly = poly + ctx.A(1, a_pos) * ctx.psi(2, be_pos) * coeff
                    poly = poly - ctx.A(2, a_pos) * ctx.psi(1, be_pos) * coeff
        odd_constraints.append(poly)
    return even_constraints, odd_constraints


# ----------------------------------------------------------------------
# constraint closure
# ----------------------------------------------------------------------

@dataclass
class ClosureReport:
    dim: int
    kappa: float
    max_unexplained: float
    proportionality_residual: float
    induced: np.ndarray
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_unexplained <= self.tol and self.proportionality_residual <= self.tol

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"constraint closure: dim={self.dim} kappa={self.kappa:+.6g} "
            f"unexplained={self.max_unexplained:.3e} "
            f"proportionality residual={self.proportionality_residual:.3e} [{status}]"
        )


def check_closure(alg: SuperAlgebra, tol: float = 1e-12,
                  eta_override: np.ndarray | None = None) -> ClosureReport:
    """Brackets of the constraints close linearly onto the constraints.

    Expands every {G^I, G^J} in the span of the G^K by exact coefficient
    matching.  In terms of the lowered combinations G~_I = eta_IA G^A the
    induced coefficients must reproduce (-1)^{|I||J|} f_IJ^K up to one
    global measured factor kappa.  An eta_override detunes the bracket to
    show the check has teeth.
    """
    ctx = PhaseSpace.from_algebra(alg)
    if eta_override is not None:
        ctx = PhaseSpace.create(np.asarray(eta_override), ctx.C_mat)
    even_G, odd_G = flatness_constraints(alg, ctx)
    Gs = even_G + odd_G
    dim = len(Gs)
    # coefficient-space expansion of each bracket in the span of the G's
    monomials = sorted({key for g in Gs for key in g.terms})
    index = {key: i for i, key in enumerate(monomials)}
    basis = np.zeros((len(monomials), dim))
    for col, g in enumerate(Gs):
        for key, c in g.terms.items():
            basis[index[key], col] = c
    induced = np.zeros((dim, dim, dim))
    max_unexplained = 0.0
    for i, j in product(range(dim), repeat=2):
        br = Gs[i].bracket(Gs[j])
        rhs = np.zeros(len(monomials))
        outside = 0.0
        for key, c in br.terms.items():
            if key in index:
                rhs[index[key]] = c
            else:
                outside = max(outside, abs(c))
        coeffs, _, _, _ = np.linalg.lstsq(basis, rhs, rcond=None)
        induced[i, j] = coeffs
        residual = np.abs(basis @ coeffs - rhs).max(initial=0.0)
        max_unexplained = max(max_unexplained, residual, outside)
    # compare in lowered form against the graded-signed structure constants
    order = alg.even_indices + alg.odd_indices
    f_ord = alg.f[np.ix_(order, order, order)]
    eta_ord = alg.eta[np.ix_(order, order)]
    eta_inv = np.linalg.inv(eta_ord)
    par = np.array([alg.parities[i] for i in order])
    graded_sign = np.where(np.outer(par, par) == 1, -1.0, 1.0)
    induced_lowered = np.einsum("ia,jb,abk,kl->ijl", eta_ord, eta_ord, induced, eta_inv)
    target = graded_sign[:, :, None] * f_ord
    denom = float(np.sum(target * target))
    kappa = float(np.sum(induced_lowered * target) / denom) if denom else 0.0
    prop_residual = float(np.abs(induced_lowered - kappa * target).max())
    return ClosureReport(
        dim=dim,
        kappa=kappa,
        max_unexplained=float(max_unexplained),
        proportionality_residual=prop_residual,
        induced=induced,
        tol=tol,
    )


# ----------------------------------------------------------------------
# fermionic-moduli criterion in the exponential sector
# ----------------------------------------------------------------------

@dataclass
class EfmReport:
    det: float
    rank: int
    moduli: int
    direction_is_null: bool

    def __str__(self) -> str:
        null = " (eta-null direction: bosonic bracket degenerates)" if self.direction_is_null else ""
        return f"fermion block: det={self.det:+.6g} rank={self.rank} moduli={self.moduli}{null}"


def exponential_sector_moduli(alg: SuperAlgebra, c: Sequence[float],
                              threshold: float = 1e-10) -> EfmReport:
    """det and rank of c^a f_{a alpha}^beta, with the moduli count attached."""
    block = alg.ff_block(c)
    det = float(np.linalg.det(block))
    svals = np.linalg.svd(block, compute_uv=False)
    rank = 0
    if svals.size and svals[0] > 0:
        rank = int(np.count_nonzero(svals / svals[0] > threshold))
    n_odd = len(alg.odd_indices)
    c_vec = np.asarray(c, dtype=float)
    ev = alg.even_indices
    eta_even = alg.eta[np.ix_(ev, ev)]
    null = bool(abs(c_vec @ np.linalg.inv(eta_even) @ c_vec) < threshold)
    return EfmReport(det=det, rank=rank, moduli=2 * (n_odd - rank), direction_is_null=null)


# ----------------------------------------------------------------------
# gauge fixing in the homogeneous sector
# ----------------------------------------------------------------------

@dataclass
class GaugeFixingCheck:
    rank: int
    pairing_det: float
    pairing_ok: bool
    residual_constraint: float
    residual_ok: bool
    free_odd_coordinates: int

    @property
    def ok(self) -> bool:
        return self.pairing_ok and self.residual_ok


def gauge_fixing_check(alg: SuperAlgebra, c: Sequence[float],
                       chi_choice: Sequence[GradedPolynomial],
                       A_values: tuple[float, float] = (0.6, 0.8),
                       tol: float = 1e-10) -> GaugeFixingCheck:
    """Test a fermionic gauge-fixing choice against the independent constraints.

    At the bosonic background A_k = cal_A_k * c the fermionic constraints
    reduce to linear forms in the psi's; the r independent ones are paired
    with the r gauge conditions through the odd bracket, and the leftover
    quadratic constraint is pulled back to the fixed surface.  Returns the
    pairing determinant, the surviving residual and the number of free odd
    coordinates (which equals 2(n_odd - r)).
    """
    ctx = PhaseSpace.from_algebra(alg)
    block = alg.ff_block(c)
    svals = np.linalg.svd(block, compute_uv=False)
    r = 0
    if svals.size and svals[0] > 0:
        r = int(np.count_nonzero(svals / svals[0] > tol))
    if len(chi_choice) != r:
        raise ValueError(f"need exactly r = {r} gauge conditions, got {len(chi_choice)}")
    n_odd = ctx.n_odd
    slots = 2 * n_odd
    ev = alg.even_indices
    c_vec = np.asarray(c, dtype=float)
    even_values = np.concatenate([A_values[0] * c_vec, A_values[1] * c_vec])

    def linear_form(poly: GradedPolynomial) -> np.ndarray:
        vec = np.zeros(slots)
        for (exps, mask), coeff in poly.terms.items():
            if mask.bit_count() != 1:
                raise ValueError("gauge conditions must be linear in the psi's")
            slot = mask.bit_length() - 1
            factor = coeff
            for s, e in enumerate(exps):
                factor *= float(even_values[s]) ** e
            vec[slot] += factor
        return vec

    _, odd_G = flatness_constraints(alg, ctx)
    g_rows = np.zeros((len(odd_G), slots))
    for i, g in enumerate(odd_G):
        for (exps, mask), coeff in g.terms.items():
            slot = mask.bit_length() - 1
            factor = coeff
            for s, e in enumerate(exps):
                factor *= float(even_values[s]) ** e
            g_rows[i, slot] += factor
    # r independent constraint rows via pivoted factorization
    picked: list[int] = []
    work = g_rows.copy()
    for _ in range(r):
        norms = np.linalg.norm(work, axis=1)
        pick = int(np.argmax(norms))
        if norms[pick] < tol:
            break
        picked.append(pick)
        pivot = work[pick] / norms[pick] ** 2
        work = work - np.outer(work @ work[pick], pivot)
    g_ind = g_rows[picked]
    chi_rows = np.vstack([linear_form(p) for p in chi_choice])
    # odd-sector pairing of linear forms: u M v^T with the fundamental matrix
    M = ctx.odd_weights()
    if len(picked) < r:
        # the background degenerates the constraints themselves
        pairing_det = 0.0
    elif r == 0:
        pairing_det = 1.0
    else:
        pairing_det = float(np.linalg.det(g_ind @ M @ chi_rows.T))
    pairing_ok = abs(pairing_det) > tol
    # the fixed surface and the pulled-back quadratic constraint
    stacked = np.vstack([g_ind, chi_rows])
    _, svals2, vt = np.linalg.svd(stacked)
    cutoff = max(svals2) * tol if svals2.size and max(svals2) > 0 else tol
    kernel = vt[np.sum(svals2 > cutoff):].T
    free = kernel.shape[1]
    od = alg.odd_indices
    residual = 0.0
    for a_idx in ev:
        quad = np.zeros((slots, slots))
        for al_pos, al_idx in enumerate(od):
            for be_pos, be_idx in enumerate(od):
                coeff = alg.f[al_idx, be_idx, a_idx]
                if coeff:
                    quad[ctx.odd_slot(1, al_pos), ctx.odd_slot(2, be_pos)] += coeff
        pulled = kernel.T @ quad @ kernel
        anti = np.abs(pulled - pulled.T).max(initial=0.0) / 2.0
        residual = max(residual, float(anti))
    return GaugeFixingCheck(
        rank=r,
        pairing_det=pairing_det,
        pairing_ok=pairing_ok,
        residual_constraint=residual,
        residual_ok=residual <= tol,
        free_odd_coordinates=free,
    )


# ----------------------------------------------------------------------
# the parabolic exponential sector of osp(1|2)
# ----------------------------------------------------------------------

@dataclass
class ExponentialSectorReport:
    bracket_a1_a2: float
    constraint_residual: float
    gauge_residual: float
    commutator_norms: list[float]
    invariants: list[float]          # p^2 + q^2 per sample point
    tol: float

    @property
    def passed(self) -> bool:
        return (
            abs(self.bracket_a1_a2 - 1.0) <= self.tol
            and self.constraint_residual <= self.tol
            and self.gauge_residual <= self.tol
            and max(self.commutator_norms, default=0.0) <= 1e-8
        )


def osp12_exponential_sector(samples: int = 10, seed: int = 0,
                             tol: float = 1e-10) -> ExponentialSectorReport:
    """Canonical variables, constraints and holonomies of the parabolic sector.

    Uses a reduced phase space with a single even direction per cycle and
    unit pairing {cal_A_1, cal_A_2} = 1 (the direction itself is eta-null, so
    the pullback pairing would degenerate).  The two psi-linear conditions
    cal_A_1 psi_2 - cal_A_2 psi_1 = 0 make both fermions proportional to one
    odd modulus; the resulting holonomy pair exponentiates proportional
    algebra elements and commutes.
    """
    from .superlie import build_osp12

    reduced = PhaseSpace.create(np.array([[1.0]]), EPS_CYCLES)
    a1, a2 = reduced.A(1, 0), reduced.A(2, 0)
    bracket_value = a1.bracket(a2)
    bracket_a1_a2 = bracket_value.terms.get(((0, 0), 0), 0.0)

    alg = build_osp12()
    ngen = 2
    sigma_plus_dir = np.array([-1.0, 0.0, 1.0])   # embeds sigma_0 + sigma_2
    rng = np.random.default_rng(seed)
    constraint_residual = 0.0
    gauge_residual = 0.0
    commutator_norms = []
    invariants = []
    # a reference sample point plus a unit-circle sweep
    points = [(0.6, 0.8)]
    for t in np.linspace(0.2, 2.8, samples - 1):
        points.append((float(np.cos(t)), float(np.sin(t))))
    for p, q in points:
        c_dir = rng.uniform(-1.0, 1.0, 2)
        psi = GrassmannElement.theta(1, ngen) * rng.uniform(0.3, 1.0)
        psi2 = [psi * float(c_dir[0]), psi * float(c_dir[1])]
        psi1 = [e * (p / q) for e in psi2]
        # both linear conditions A_1 psi_2 - A_2 psi_1 vanish here; one is the
        # constraint component, the other the derived gauge condition
        v = [psi2[alpha] * p - psi1[alpha] * q for alpha in range(2)]
        constraint_residual = max(constraint_residual, v[0].max_abs())
        gauge_residual = max(gauge_residual, v[1].max_abs())
        coeffs1 = [
            GrassmannElement.scalar(2 * np.pi * p * sigma_plus_dir[a], ngen) for a in range(3)
        ] + [psi1[0] * (2 * np.pi), psi1[1] * (2 * np.pi)]
        coeffs2 = [
            GrassmannElement.scalar(2 * np.pi * q * sigma_plus_dir[a], ngen) for a in range(3)
        ] + [psi2[0] * (2 * np.pi), psi2[1] * (2 * np.pi)]
        U1 = alg.embed(coeffs1, ngen).expm()
        U2 = alg.embed(coeffs2, ngen).expm()
        comm = (U1 @ U2 - U2 @ U1).max_abs()
        commutator_norms.append(comm)
        invariants.append(p * p + q * q)
    return ExponentialSectorReport(
        bracket_a1_a2=float(bracket_a1_a2),
        constraint_residual=constraint_residual,
        gauge_residual=gauge_residual,
        commutator_norms=commutator_norms,
        invariants=invariants,
        tol=tol,
    )
