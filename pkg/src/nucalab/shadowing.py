"""Column factorizations, the standard metric, pseudo-orbits, and constructive shadowing.

Works over finitely generated abelian monoids of linear NUCA acting on
eventually periodic configurations (d = 1). Distances are exact dyadic
fractions; every shadow point is re-verified by exact evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from random import Random
from typing import Sequence

from nucalab.core import (
    Cell,
    ContractViolation,
    EvPerConfig,
    FinSuppConfig,
    RuleConfig,
    UnsupportedDimension,
    apply_evper,
    apply_finsupp,
    cell_sub,
    compose,
)
from nucalab.gf import FieldMatrix, solve_affine


@dataclass(frozen=True)
class StandardMetric:
    """Prodiscrete metric from the box exhaustion E_n = [-n, n]^d, E_0 = {0}.

    d(x, y) = 0 when x = y, else 2^(-n) with n the largest window of
    agreement; configurations differing at the origin are at distance 1.
    """

    d: int = 1

    def distance(self, x: EvPerConfig, y: EvPerConfig) -> Fraction:
        if self.d != 1 or x.universe.d != 1:
            raise UnsupportedDimension("metric requires d = 1")
        t = x.sub(y).min_abs_nonzero()
        if t is None:
            return Fraction(0)
        return Fraction(1, 2 ** max(t - 1, 0))


def metric(x: EvPerConfig, y: EvPerConfig) -> Fraction:
    return StandardMetric().distance(x, y)


def _radius(s: RuleConfig) -> int:
    return s.memory.radius


def lipschitz_bound(generators: Sequence[RuleConfig], n_box: int) -> int:
    """C = 2^(m * N * r): any product of at most N * r generator applications
    propagates dependence by at most m*N*r cells."""
    r = len(generators)
    m = max(_radius(g) for g in generators)
    return 2 ** (m * n_box * r)


def check_commuting(generators: Sequence[RuleConfig]) -> bool:
    for i in range(len(generators)):
        for j in range(i + 1, len(generators)):
            if compose(generators[i], generators[j]) != compose(generators[j], generators[i]):
                return False
    return True


def generator_powers(base: RuleConfig, exponents: Sequence[int]) -> list[RuleConfig]:
    """Powers of one rule (always pairwise commuting)."""
    out = []
    for e in exponents:
        if e < 1:
            raise ContractViolation("exponents must be >= 1")
        acc = base
        for _ in range(e - 1):
            acc = compose(base, acc)
        out.append(acc)
    return out


def _as_horizon(horizon, r: int) -> tuple[int, ...]:
    if isinstance(horizon, int):
        horizon = (horizon,) * r
    horizon = tuple(int(t) for t in horizon)
    if len(horizon) != r or any(t < 0 for t in horizon):
        raise ContractViolation("horizon must give a non-negative extent per generator")
    return horizon


def _box_alphas(horizon: tuple[int, ...]):
    return [tuple(a) for a in product(*(range(t + 1) for t in horizon))]


def dyadic_exponent(delta) -> int:
    """j with delta = 2^-j, or a contract violation for non-dyadic input."""
    f = Fraction(delta)
    if f.numerator != 1 or f.denominator < 1 or (f.denominator & (f.denominator - 1)):
        raise ContractViolation(f"delta must be 2^-j for some j >= 0, got {delta}")
    return f.denominator.bit_length() - 1


def dyadic_floor(f: Fraction) -> Fraction:
    """Largest 2^-j (j >= 0) that is <= f."""
    if f <= 0:
        raise ContractViolation("positive value required")
    j = 0
    while Fraction(1, 2 ** j) > f:
        j += 1
    return Fraction(1, 2 ** j)


@dataclass
class PseudoOrbit:
    """Finite horizon box of configurations with per-generator step errors < delta."""

    generators: tuple[RuleConfig, ...]
    horizon: tuple[int, ...]
    delta: Fraction
    points: dict

    def step_errors(self) -> dict:
        errs = {}
        for alpha in _box_alphas(self.horizon):
            for i, gen in enumerate(self.generators):
                succ = tuple(a + (1 if idx == i else 0) for idx, a in enumerate(alpha))
                if succ in self.points:
                    errs[(alpha, i)] = metric(apply_evper(gen, self.points[alpha]),
                                              self.points[succ])
        return errs

    def is_valid(self) -> bool:
        return all(e < self.delta for e in self.step_errors().values())


def generate_pseudo_orbit(generators: Sequence[RuleConfig], x0: EvPerConfig, delta,
                          horizon, rng: Random | None = None,
                          perturb: bool = True) -> PseudoOrbit:
    """Walk the horizon box applying generators exactly, then perturb.

    Perturbations are injected outside E_{j+1} (delta = 2^-j), pushed far
    enough out that every commuting edge of the box, not only the chain
    edges, keeps its step error strictly below delta.
    """
    gens = tuple(generators)
    r = len(gens)
    if r == 0:
        raise ContractViolation("at least one generator required")
    if gens[0].universe.d != 1:
        raise UnsupportedDimension("pseudo-orbits require d = 1")
    j = dyadic_exponent(delta)
    horizon = _as_horizon(horizon, r)
    if r > 1 and not check_commuting(gens):
        raise ContractViolation("generators must pairwise commute")
    rng = rng or Random(0)
    m_eff = max(_radius(g) for g in gens)
    u = x0.universe
    points: dict = {}
    for alpha in _box_alphas(horizon):
        if not any(alpha):
            points[alpha] = x0
            continue
        i_star = max(i for i in range(r) if alpha[i] > 0)
        pred = tuple(a - (1 if i == i_star else 0) for i, a in enumerate(alpha))
        pt = apply_evper(gens[i_star], points[pred])
        if perturb:
            rem = sum(t - a for t, a in zip(horizon, alpha))
            ring = j + 2 + (0 if r == 1 else m_eff * rem)
            cells = {}
            for _ in range(rng.randint(1, 2)):
                side = rng.choice((-1, 1))
                c = side * (ring + rng.randint(0, 2))
                v = tuple(rng.randrange(u.p) for _ in range(u.k))
                if any(v):
                    cells[(c,)] = v
            pt = pt.add_finsupp(FinSuppConfig(u, cells))
        points[alpha] = pt
    return PseudoOrbit(generators=gens, horizon=horizon, delta=Fraction(delta), points=points)


@dataclass
class ShadowReport:
    n0: int
    lipschitz: int
    sft_window: int
    delta: Fraction
    delta_required: Fraction
    feasible: bool
    distances: dict = field(default_factory=dict)
    max_distance: Fraction = Fraction(0)


def theorem_delta(generators: Sequence[RuleConfig], epsilon, sft_window: int = 3) -> Fraction:
    """The shadowing theorem's step bound 1 / (2^{n0} * C * N * r)."""
    eps = Fraction(epsilon)
    n0 = shadow_n0(eps)
    C = lipschitz_bound(generators, sft_window)
    r = len(generators)
    return Fraction(1, (2 ** n0) * C * sft_window * r)


def shadow_n0(epsilon) -> int:
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ContractViolation("epsilon must be positive")
    n0 = 0
    while Fraction(1, 2 ** n0) >= eps:
        n0 += 1
    return n0


def shadow_point(orbit: PseudoOrbit, epsilon, sft_window: int = 3) -> tuple[EvPerConfig | None, ShadowReport]:
    """Solve for a configuration whose true trajectory matches the orbit on E_{n0}.

    Unknowns are a finitely supported correction of the orbit's base point
    on the dependence window; the tail outside it stays the base point's
    tail. Every returned distance is re-verified by exact evaluation.
    """
    gens = orbit.generators
    r = len(gens)
    u = gens[0].universe
    eps = Fraction(epsilon)
    n0 = shadow_n0(eps)
    C = lipschitz_bound(gens, sft_window)
    delta_req = Fraction(1, (2 ** n0) * C * sft_window * r)
    # Solvability is only guaranteed when orbit.delta <= delta_required; the
    # report carries both so a violated precondition shows up alongside any
    # infeasibility instead of being raised.
    report = ShadowReport(n0=n0, lipschitz=C, sft_window=sft_window,
                          delta=orbit.delta, delta_required=delta_req, feasible=False)

    alphas = _box_alphas(orbit.horizon)
    zero_alpha = tuple(0 for _ in orbit.horizon)
    x0 = orbit.points[zero_alpha]
    W = n0 + sum(t * _radius(g) for t, g in zip(orbit.horizon, gens))
    window = [(c,) for c in range(-W, W + 1)]

    # chain the true orbit of x0 and of each correction basis vector
    true_orbit: dict = {zero_alpha: x0}
    basis_images: dict = {key: {zero_alpha: FinSuppConfig.delta(u, key[0], tuple(
        1 if jj == key[1] else 0 for jj in range(u.k)))} for key in
        ((c, j) for c in window for j in range(u.k))}
    for alpha in alphas:
        if not any(alpha):
            continue
        i_star = max(i for i in range(r) if alpha[i] > 0)
        pred = tuple(a - (1 if i == i_star else 0) for i, a in enumerate(alpha))
        true_orbit[alpha] = apply_evper(gens[i_star], true_orbit[pred])
        for key, chain in basis_images.items():
            chain[alpha] = apply_finsupp(gens[i_star], chain[pred])

    col_keys = [(c, j) for c in window for j in range(u.k)]
    col_index = {key: i for i, key in enumerate(col_keys)}
    obs_cells = [(c,) for c in range(-n0, n0 + 1)]
    rows = []
    rhs = []
    for alpha in alphas:
        base = true_orbit[alpha]
        target = orbit.points[alpha]
        for e in obs_cells:
            bval = base.value(e)
            tval = target.value(e)
            for i in range(u.k):
                row = [0] * len(col_keys)
                for key in col_keys:
                    v = basis_images[key][alpha].value(e)[i]
                    if v:
                        row[col_index[key]] = v
                rows.append(row)
                rhs.append((tval[i] - bval[i]) % u.p)
    mat = FieldMatrix(u.p, len(rows), len(col_keys), [v for row in rows for v in row])
    sol = solve_affine(mat, rhs)
    if not sol.solvable:
        return None, report

    correction = {}
    for key, idx in col_index.items():
        if sol.particular[idx]:
            c, jj = key
            vec = list(correction.get(c, (0,) * u.k))
            vec[jj] = sol.particular[idx]
            correction[c] = tuple(vec)
    x = x0.add_finsupp(FinSuppConfig(u, correction))

    shadow_orbit: dict = {zero_alpha: x}
    for alpha in alphas:
        if not any(alpha):
            continue
        i_star = max(i for i in range(r) if alpha[i] > 0)
        pred = tuple(a - (1 if i == i_star else 0) for i, a in enumerate(alpha))
        shadow_orbit[alpha] = apply_evper(gens[i_star], shadow_orbit[pred])
    report.feasible = True
    for alpha in alphas:
        dist = metric(shadow_orbit[alpha], orbit.points[alpha])
        report.distances[alpha] = dist
        if dist > report.max_distance:
            report.max_distance = dist
    return x, report


@dataclass
class ColumnFactor:
    """Restriction of the trajectory space to a window E and an index box.

    The basis consists of trajectory patterns of explicit windowed
    configurations (the pivot preimages)."""

    generators: tuple[RuleConfig, ...]
    window: tuple[Cell, ...]
    omega: tuple[int, ...]
    matrix: FieldMatrix
    row_keys: tuple
    col_keys: tuple
    dimension: int
    basis: tuple
    basis_preimages: tuple

    def contains(self, pattern) -> bool:
        """Membership of a map alpha -> (cell -> vector) in the factor."""
        rhs = []
        for alpha, e, i in self.row_keys:
            rhs.append(pattern[alpha][e][i] % self.matrix.p)
        return solve_affine(self.matrix, rhs).solvable

    def pattern_of_basis(self, b) -> dict:
        out: dict = {}
        k = self.generators[0].universe.k
        for (alpha, e, i), v in zip(self.row_keys, b):
            vec = list(out.setdefault(alpha, {}).get(e, (0,) * k))
            vec[i] = v
            out[alpha][e] = tuple(vec)
        return out

    def sft_violations(self, n_box: int) -> list:
        """Check every basis pattern restricted to each shifted sub-box of
        size n_box against the factor on that sub-box; violations returned."""
        sub = column_factor(self.generators, self.window,
                            tuple(min(n_box, t) for t in self.omega))
        out = []
        for bi, b in enumerate(self.basis):
            full = self.pattern_of_basis(b)
            for beta in _box_alphas(tuple(t - min(n_box, t) for t in self.omega)):
                shifted = {}
                for gamma in _box_alphas(sub.omega):
                    shifted[gamma] = full[tuple(bt + gt for bt, gt in zip(beta, gamma))]
                if not sub.contains(shifted):
                    out.append({"basis": bi, "shift": beta})
        return out


def column_factor(generators: Sequence[RuleConfig], E: Sequence, omega) -> ColumnFactor:
    """Image of the map sending a configuration to its trajectory of window
    restrictions over the index box {0..omega_1} x ... x {0..omega_r}."""
    gens = tuple(generators)
    r = len(gens)
    u = gens[0].universe
    if u.d != 1:
        raise UnsupportedDimension("column factors require d = 1")
    if r > 1 and not check_commuting(gens):
        raise ContractViolation("generators must pairwise commute")
    omega = _as_horizon(omega, r)
    cells = tuple(sorted({u.cell(e) for e in E}))
    R = sum(t * _radius(g) for t, g in zip(omega, gens))
    lo = min(c[0] for c in cells) - R
    hi = max(c[0] for c in cells) + R
    dep = [(c,) for c in range(lo, hi + 1)]
    alphas = _box_alphas(omega)

    col_keys = tuple((c, j) for c in dep for j in range(u.k))
    chains: dict = {key: {tuple(0 for _ in omega): FinSuppConfig.delta(
        u, key[0], tuple(1 if jj == key[1] else 0 for jj in range(u.k)))} for key in col_keys}
    for alpha in alphas:
        if not any(alpha):
            continue
        i_star = max(i for i in range(r) if alpha[i] > 0)
        pred = tuple(a - (1 if i == i_star else 0) for i, a in enumerate(alpha))
        for key in col_keys:
            chains[key][alpha] = apply_finsupp(gens[i_star], chains[key][pred])

    row_keys = tuple((alpha, e, i) for alpha in alphas for e in cells for i in range(u.k))
    entries = []
    for alpha, e, i in row_keys:
        for key in col_keys:
            entries.append(chains[key][alpha].value(e)[i])
    mat = FieldMatrix(u.p, len(row_keys), len(col_keys), entries)
    red, pivots = mat.rref()
    basis = tuple(tuple(mat.entry(ri, pc) for ri in range(mat.rows)) for pc in pivots)
    preimages = tuple(col_keys[pc] for pc in pivots)
    return ColumnFactor(generators=gens, window=cells, omega=omega, matrix=mat,
                        row_keys=row_keys, col_keys=col_keys,
                        dimension=len(pivots), basis=basis, basis_preimages=preimages)
