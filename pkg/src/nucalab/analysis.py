"""Verdict engine for dynamical properties of linear NUCA (decision procedures d = 1).

Every Holds/Fails verdict carries a machine-checkable certificate that
re-verifies by direct evaluation; Inconclusive carries the exhausted
bound. Definitive reasoning combines:

  * window rank failures (the image is closed, so one deficient window
    refutes surjectivity),
  * finite-support and eventually periodic kernel witnesses,
  * the scalar (k = 1) tail oracle via the Laurent-polynomial domain
    argument,
  * bounded left/right inverse searches (left inverse <=> stable
    injectivity, right inverse <=> stable post-surjectivity),
  * transfers across the duality (pre-injective <=> dual surjective,
    injective <=> dual post-surjective, stable variants, invertibility).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from nucalab.core import (
    Cell,
    ContractViolation,
    EvPerConfig,
    FinSuppConfig,
    LocalRule,
    MemorySet,
    NucaError,
    RuleConfig,
    UnsupportedDimension,
    Universe,
    Vector,
    apply_evper,
    apply_finsupp,
    box_cells,
    cell_add,
    cell_neg,
    cell_sub,
    compose,
    induced_map,
    parse_rule,
    serialize_rule,
)
from nucalab.duality import dual_config
from nucalab.gf import FieldMatrix, solve_affine


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


# --------------------------------------------------------------------------
# Certificates
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WindowRankFailure:
    """A window whose induced map has deficient row rank: the image misses
    a pattern on the window, and the image is closed, so surjectivity fails."""

    radius: int
    rank: int
    full_rank: int


@dataclass(frozen=True, eq=False)
class FinSuppKernelWitness:
    config: FinSuppConfig


@dataclass(frozen=True, eq=False)
class EvPerKernelWitness:
    config: EvPerConfig


@dataclass(frozen=True, eq=False)
class PreimageWitness:
    cell: Cell
    value: Vector
    config: FinSuppConfig


@dataclass(frozen=True, eq=False)
class InverseRule:
    rule: RuleConfig
    side: str  # "left" | "right" | "two-sided"


@dataclass(frozen=True, eq=False)
class ScalarKernelBound:
    """k = 1 definitive pre-injectivity: nonzero tail polynomial plus an
    empty bounded kernel. Any finitely supported kernel element would be a
    Laurent polynomial annihilated by the tail away from the overrides, and
    a nonzero polynomial over a domain forces its support into the tested
    window."""

    radius: int


@dataclass(frozen=True, eq=False)
class DualTransfer:
    clause: str
    source_prop: str
    inner_status: str
    inner: object


@dataclass(frozen=True, eq=False)
class TailTransfer:
    """Verdict on the constant tail, a member of the orbit closure."""

    source_prop: str
    inner_status: str
    inner: object


@dataclass(frozen=True, eq=False)
class ImpliedTransfer:
    """Verdict on another property of the same rule that implies this one."""

    source_prop: str
    inner_status: str
    inner: object


@dataclass(frozen=True, eq=False)
class BoundExhausted:
    bound: int


@dataclass(frozen=True, eq=False)
class Verdict:
    prop: str
    status: Status
    certificate: object
    detail: dict = field(default_factory=dict)

    def __repr__(self):
        return f"Verdict({self.prop}: {self.status.value}, {type(self.certificate).__name__})"


Anchors = Sequence[tuple[Cell, Vector]]

PROPERTIES = (
    "surjective",
    "pre-injective",
    "injective",
    "post-surjective",
    "stable-surjective",
    "stable-pre-injective",
    "stable-injective",
    "stable-post-surjective",
    "invertible",
)


# --------------------------------------------------------------------------
# Linear systems over configurations
# --------------------------------------------------------------------------

class _LinSys:
    """Small helper: equations over named variables, solved via gf-linalg."""

    def __init__(self, p: int):
        self.p = p
        self.var_index: dict = {}
        self.rows: list[dict] = []
        self.rhs: list[int] = []

    def var(self, key) -> int:
        idx = self.var_index.get(key)
        if idx is None:
            idx = len(self.var_index)
            self.var_index[key] = idx
        return idx

    def add_eq(self, coeffs: dict, rhs: int = 0):
        row = {}
        for key, c in coeffs.items():
            c %= self.p
            if c:
                row[self.var(key)] = (row.get(self.var(key), 0) + c) % self.p
        self.rows.append(row)
        self.rhs.append(rhs % self.p)

    def matrix(self) -> FieldMatrix:
        nv = len(self.var_index)
        entries = [0] * (len(self.rows) * nv)
        for i, row in enumerate(self.rows):
            base = i * nv
            for j, c in row.items():
                entries[base + j] = c
        return FieldMatrix(self.p, len(self.rows), nv, entries)

    def solve(self):
        return solve_affine(self.matrix(), self.rhs)

    def kernel(self) -> list[tuple[int, ...]]:
        return self.matrix().kernel_basis()


def finite_support_kernel_basis(s: RuleConfig, radius: int) -> list[FinSuppConfig]:
    """Basis of the kernel elements supported inside the box [-radius, radius]^d.

    These are genuine global kernel elements: outside the enforced window
    the image of such a configuration vanishes automatically.
    """
    u = s.universe
    support = box_cells(u.d, radius)
    support_set = set(support)
    eq_cells = sorted({cell_sub(c, m) for c in support for m in s.memory})
    sys = _LinSys(u.p)
    for c in support:
        for j in range(u.k):
            sys.var((c, j))
    for t in eq_cells:
        rule = s.rule_at(t)
        for i in range(u.k):
            coeffs = {}
            for m, mat in zip(rule.memory, rule.mats):
                cell = cell_add(t, m)
                if cell in support_set and not mat.is_zero():
                    for j in range(u.k):
                        v = mat.entry(i, j)
                        if v:
                            coeffs[(cell, j)] = (coeffs.get((cell, j), 0) + v) % u.p
            sys.add_eq(coeffs, 0)
    out = []
    for vec in sys.kernel():
        vals: dict[Cell, list[int]] = {}
        for (c, j), idx in sys.var_index.items():
            if vec[idx]:
                vals.setdefault(c, [0] * u.k)[j] = vec[idx]
        out.append(FinSuppConfig(u, {c: tuple(v) for c, v in vals.items()}))
    return out


# --------------------------------------------------------------------------
# Scalar (k = 1) constant-rule oracle
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarCAFacts:
    """Exact facts about a constant scalar rule via its Laurent polynomial."""

    p: int
    coeffs: tuple[tuple[int, int], ...]  # (offset, nonzero coefficient), sorted

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    @property
    def surjective(self) -> bool:
        return not self.is_zero

    @property
    def pre_injective(self) -> bool:
        return not self.is_zero

    @property
    def injective(self) -> bool:
        return self.is_monomial

    @property
    def post_surjective(self) -> bool:
        return self.is_monomial

    def periodic_kernel_witness(self) -> EvPerConfig | None:
        """A fully periodic nonzero kernel configuration, when one exists.

        The shift map on the recurrence solution space is invertible, so
        every solution is purely periodic; the period is found by iterating
        the recurrence until the state window repeats.
        """
        u = Universe(d=1, k=1, p=self.p)
        if self.is_monomial:
            return None
        if self.is_zero:
            return EvPerConfig(u, 0, (), ((1,),), ((1,),))
        p = self.p
        cmap = dict(self.coeffs)
        mu = min(cmap)
        top = max(cmap)
        spread = top - mu
        inv_top = pow(cmap[top], p - 2, p)
        vals = [1] + [0] * (spread - 1)
        start = tuple(vals)
        limit = p ** spread + 1
        for _ in range(limit):
            # next value from the recurrence at n = len(vals) - spread + mu... fixed form:
            j = len(vals)
            acc = 0
            for m, c in cmap.items():
                if m != top:
                    acc += c * vals[j - spread + (m - mu)]
            vals.append((-acc * inv_top) % p)
            if tuple(vals[-spread:]) == start and (len(vals) - spread) >= 1:
                period = len(vals) - spread
                block = [(v,) for v in vals[:period]]
                return EvPerConfig(u, 0, (), block, block)
        raise AssertionError("periodic state must recur within p**spread steps")


def scalar_ca_facts(rule: LocalRule) -> ScalarCAFacts:
    mat = rule.mats[0]
    if mat.rows != 1:
        raise ContractViolation("scalar facts require k = 1")
    if rule.memory.d != 1:
        raise UnsupportedDimension("scalar facts require d = 1")
    coeffs = []
    for m, mt in zip(rule.memory, rule.mats):
        v = mt.entry(0, 0)
        if v:
            coeffs.append((m[0], v))
    return ScalarCAFacts(p=mat.p, coeffs=tuple(sorted(coeffs)))


# --------------------------------------------------------------------------
# Eventually periodic kernel search (d = 1)
# --------------------------------------------------------------------------

def search_evper_kernel(s: RuleConfig, max_period: int = 8) -> EvPerConfig | None:
    """Search for a nonzero eventually periodic kernel configuration.

    Tries left/right tail periods up to max_period; periodicity of the
    pure-tail equations means one sampled period of them implies all, so a
    solution of the finite system is a genuine global kernel element. The
    returned witness is re-verified exactly.
    """
    u = s.universe
    if u.d != 1:
        raise UnsupportedDimension("eventually periodic search requires d = 1")
    lo, hi = s.memory.lo(), s.memory.hi()
    r = s.memory.radius
    if s.overrides:
        ov = [g[0] for g in s.support]
        ov_min, ov_max = min(ov), max(ov)
    else:
        ov_min = ov_max = 0
    for total in range(2, 2 * max_period + 1):
        for ell in range(max(1, total - max_period), min(max_period, total - 1) + 1):
            rho = total - ell
            w = _evper_kernel_at(s, ell, rho, lo, hi, r, ov_min, ov_max)
            if w is not None:
                return w
    return None


def _evper_kernel_at(s: RuleConfig, ell: int, rho: int, lo: int, hi: int,
                     r: int, ov_min: int, ov_max: int) -> EvPerConfig | None:
    u = s.universe
    c0 = min(ov_min, 0) - r - ell - 1
    c1 = max(ov_max, 0) + r + rho + 1
    zl = min(ov_min, c0 - hi)  # cells < zl have pure left-tail equations
    zr = max(ov_max, c1 - lo)

    def var_of(n: int):
        if n < c0:
            return ("L", (n - c0) % ell)
        if n <= c1:
            return ("C", n)
        return ("R", (n - c1 - 1) % rho)

    sys = _LinSys(u.p)
    for i in range(ell):
        for j in range(u.k):
            sys.var((("L", i), j))
    for n in range(c0, c1 + 1):
        for j in range(u.k):
            sys.var((("C", n), j))
    for i in range(rho):
        for j in range(u.k):
            sys.var((("R", i), j))

    for g in range(zl - ell, zr + rho + 1):
        rule = s.rule_at((g,))
        for i in range(u.k):
            coeffs: dict = {}
            for m, mat in zip(rule.memory, rule.mats):
                if mat.is_zero():
                    continue
                key = var_of(g + m[0])
                for j in range(u.k):
                    v = mat.entry(i, j)
                    if v:
                        kk = (key, j)
                        coeffs[kk] = (coeffs.get(kk, 0) + v) % u.p
            sys.add_eq(coeffs, 0)

    basis = sys.kernel()
    if not basis:
        return None
    vec = basis[0]
    left = [[0] * u.k for _ in range(ell)]
    core = [[0] * u.k for _ in range(c1 - c0 + 1)]
    right = [[0] * u.k for _ in range(rho)]
    for (key, j), idx in sys.var_index.items():
        tag, n = key
        if tag == "L":
            left[n][j] = vec[idx]
        elif tag == "C":
            core[n - c0][j] = vec[idx]
        else:
            right[n][j] = vec[idx]
    witness = EvPerConfig(u, c0, [tuple(v) for v in core],
                          [tuple(v) for v in left], [tuple(v) for v in right])
    if witness.is_zero():
        return None
    if not apply_evper(s, witness).is_zero():
        raise AssertionError("eventually periodic kernel witness failed re-verification")
    return witness


# --------------------------------------------------------------------------
# Anchored searches
# --------------------------------------------------------------------------

def _chebyshev(c: Cell) -> int:
    return max(abs(v) for v in c)


def default_anchors(s: RuleConfig) -> list[tuple[Cell, Vector]]:
    """Override region inflated by the memory radius, plus one tail cell;
    all nonzero vectors when the alphabet is small, else basis vectors."""
    u = s.universe
    r = max(s.memory.radius, 1)
    rho = s.override_radius + s.memory.radius
    if u.d == 1:
        cells = [(n,) for n in range(-rho, rho + 1)]
    else:
        cells = box_cells(u.d, rho)
    cells.append((rho + 2 * r,) * u.d)
    if u.p ** u.k <= 16:
        from itertools import product as _product

        vecs = [v for v in _product(range(u.p), repeat=u.k) if any(v)]
    else:
        vecs = [tuple(1 if i == j else 0 for i in range(u.k)) for j in range(u.k)]
    return [(c, v) for c in cells for v in vecs]


def _validate_anchors(u: Universe, anchors: Anchors) -> list[tuple[Cell, Vector]]:
    out = []
    for g, v in anchors:
        g = u.cell(g)
        v = u.vec(v)
        if not any(v):
            raise ContractViolation("anchor vectors must be nonzero")
        out.append((g, v))
    return out


def anchored_injectivity(s: RuleConfig, anchors: Anchors, n_max: int) -> dict:
    """Per anchor (g, v): the first n with K_n(g, v) empty, or None.

    K_n is the set of window patterns killed by the induced map and equal
    to v at g; emptiness at any n refutes every global kernel element
    attaining v at g.
    """
    u = s.universe
    anchors = _validate_anchors(u, anchors)
    result: dict = {a: None for a in anchors}
    pending = set(range(len(anchors)))
    for n in range(0, n_max + 1):
        if not pending:
            break
        wm = induced_map(s, box_cells(u.d, n))
        dom_index = {c: i for i, c in enumerate(wm.domain_cells)}
        mat = wm.matrix
        for ai in sorted(pending):
            g, v = anchors[ai]
            if g not in dom_index:
                continue
            ci = dom_index[g]
            extra_rows = []
            rhs = [0] * mat.rows
            for j in range(u.k):
                row = [0] * mat.cols
                row[ci * u.k + j] = 1
                extra_rows.append(row)
                rhs.append(v[j])
            entries = list(mat.entries)
            for row in extra_rows:
                entries.extend(row)
            stacked = FieldMatrix(u.p, mat.rows + u.k, mat.cols, entries)
            if not solve_affine(stacked, rhs).solvable:
                result[anchors[ai]] = n
                pending.discard(ai)
    return result


def anchored_preimages(s: RuleConfig, anchors: Anchors, n_max: int) -> dict:
    """Per anchor (g, v): a finitely supported preimage of the delta at g, or None."""
    u = s.universe
    anchors = _validate_anchors(u, anchors)
    result: dict = {}
    for g, v in anchors:
        found = None
        for n in range(_chebyshev(g), n_max + 1):
            support = box_cells(u.d, n)
            support_set = set(support)
            eq_cells = sorted({cell_sub(c, m) for c in support for m in s.memory} | {g})
            sys = _LinSys(u.p)
            for c in support:
                for j in range(u.k):
                    sys.var((c, j))
            for t in eq_cells:
                rule = s.rule_at(t)
                target = v if t == g else u.zero_vec
                for i in range(u.k):
                    coeffs: dict = {}
                    for m, mat in zip(rule.memory, rule.mats):
                        cell = cell_add(t, m)
                        if cell in support_set and not mat.is_zero():
                            for j in range(u.k):
                                val = mat.entry(i, j)
                                if val:
                                    kk = (cell, j)
                                    coeffs[kk] = (coeffs.get(kk, 0) + val) % u.p
                    sys.add_eq(coeffs, target[i])
            sol = sys.solve()
            if sol.solvable:
                vals: dict[Cell, list[int]] = {}
                for (c, j), idx in sys.var_index.items():
                    if sol.particular[idx]:
                        vals.setdefault(c, [0] * u.k)[j] = sol.particular[idx]
                z = FinSuppConfig(u, {c: tuple(w) for c, w in vals.items()})
                if apply_finsupp(s, z) != FinSuppConfig(u, {g: v}):
                    raise AssertionError("preimage witness failed re-verification")
                found = PreimageWitness(cell=g, value=v, config=z)
                break
        result[(g, v)] = found
    return result


# --------------------------------------------------------------------------
# Bounded inverse searches (d = 1)
# --------------------------------------------------------------------------

def _poly_mul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma + mb
            out[m] = (out.get(m, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def _tail_det_poly(s: RuleConfig) -> dict:
    """Determinant of the tail matrix Laurent polynomial (d = 1)."""
    u = s.universe
    k, p = u.k, u.p
    entry_polys = [[{} for _ in range(k)] for _ in range(k)]
    for m, mat in zip(s.memory, s.default_rule.mats):
        for i in range(k):
            for j in range(k):
                v = mat.entry(i, j)
                if v:
                    entry_polys[i][j][m[0]] = v
    from itertools import permutations

    det: dict = {}
    for perm in permutations(range(k)):
        sign = 1
        seen = list(perm)
        # parity via counting inversions
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if seen[i] > seen[j])
        sign = (-1) ** inv % p
        term = {0: sign}
        for i in range(k):
            term = _poly_mul(term, entry_polys[i][perm[i]], p)
            if not term:
                break
        for m, c in term.items():
            det[m] = (det.get(m, 0) + c) % p
    return {m: c for m, c in det.items() if c}


def tail_unit_gate(s: RuleConfig) -> bool:
    """Necessary condition for left/right invertibility: the tail determinant
    is a unit of the Laurent polynomial ring, i.e. a nonzero monomial."""
    return len(_tail_det_poly(s)) == 1


def _rule_from_solution(u: Universe, offsets, slots, getval) -> RuleConfig:
    """Assemble a RuleConfig from solved per-slot, per-offset matrices."""
    keep = []
    for m in offsets:
        nonzero = any(
            getval(slot, m, i, j)
            for slot in slots
            for i in range(u.k)
            for j in range(u.k)
        )
        if nonzero:
            keep.append(m)
    if not keep:
        keep = [(0,) * u.d]
    mem = MemorySet(keep, d=u.d)

    def build(slot) -> LocalRule:
        mats = []
        for m in mem:
            mats.append(FieldMatrix(u.p, u.k, u.k,
                                    [getval(slot, m, i, j) for i in range(u.k) for j in range(u.k)]))
        return LocalRule(mem, mats)

    default = build("default")
    overrides = {slot: build(slot) for slot in slots if slot != "default"}
    return RuleConfig(u, mem, default, overrides)


def is_identity_rule(s: RuleConfig) -> bool:
    """Structural global identity within the representable class."""
    ident = FieldMatrix.identity(s.universe.p, s.universe.k)
    origin = (0,) * s.universe.d
    return (not s.overrides) and s.default_rule.coeff_map() == {origin: ident}


def _inverse_search(s: RuleConfig, mem_bound: int, support_bound: int, side: str) -> RuleConfig | None:
    u = s.universe
    if u.d != 1:
        raise UnsupportedDimension("inverse search requires d = 1")
    if mem_bound < 0 or support_bound < 0:
        raise ContractViolation("bounds must be non-negative")
    if not tail_unit_gate(s):
        return None
    k, p = u.k, u.p
    offsets = [(m,) for m in range(-mem_bound, mem_bound + 1)]
    slot_cells = [(c,) for c in range(-support_bound, support_bound + 1)]
    slots = ["default"] + slot_cells
    B = s.override_radius
    W = mem_bound + support_bound + B + 1

    def slot_of(cell: int):
        return (cell,) if abs(cell) <= support_bound else "default"

    sys = _LinSys(p)
    for slot in slots:
        for m in offsets:
            for i in range(k):
                for j in range(k):
                    sys.var((slot, m, i, j))

    n_values = sorted({mo[0] + ms[0] for mo in offsets for ms in s.memory})
    for g in range(-W, W + 1):
        for n in n_values:
            for i in range(k):
                for j in range(k):
                    coeffs: dict = {}
                    if side == "left":
                        # sum_m t(g, m) s(g+m, n-m) = delta
                        tslot = slot_of(g)
                        for m in offsets:
                            smat = s.coeff((g + m[0],), (n - m[0],))
                            if smat is None or smat.is_zero():
                                continue
                            for l in range(k):
                                c = smat.entry(l, j)
                                if c:
                                    key = (tslot, m, i, l)
                                    coeffs[key] = (coeffs.get(key, 0) + c) % p
                    else:
                        # sum_m s(g, m) t(g+m, n-m) = delta
                        rule = s.rule_at((g,))
                        for m, smat in zip(rule.memory, rule.mats):
                            if smat.is_zero():
                                continue
                            moff = n - m[0]
                            if abs(moff) > mem_bound:
                                continue
                            tslot = slot_of(g + m[0])
                            for l in range(k):
                                c = smat.entry(i, l)
                                if c:
                                    key = (tslot, (moff,), l, j)
                                    coeffs[key] = (coeffs.get(key, 0) + c) % p
                    rhs = 1 if (n == 0 and i == j) else 0
                    sys.add_eq(coeffs, rhs)

    sol = sys.solve()
    if not sol.solvable:
        return None

    def getval(slot, m, i, j):
        return sol.particular[sys.var_index[(slot, m, i, j)]]

    t = _rule_from_solution(u, offsets, slots, getval)
    composed = compose(t, s) if side == "left" else compose(s, t)
    if not is_identity_rule(composed):
        return None
    return t


def find_left_inverse(s: RuleConfig, mem_bound: int, support_bound: int) -> RuleConfig | None:
    """Search a rule t with t o s = identity; presence certifies stable injectivity."""
    return _inverse_search(s, mem_bound, support_bound, "left")


def find_right_inverse(s: RuleConfig, mem_bound: int, support_bound: int) -> RuleConfig | None:
    """Search a rule t with s o t = identity; presence certifies stable post-surjectivity."""
    return _inverse_search(s, mem_bound, support_bound, "right")


@dataclass
class InverseDiagnostics:
    failed_targets: list = field(default_factory=list)
    verified: bool = False
    message: str = ""


def construct_inverse(s: RuleConfig, e_bound: int) -> tuple[RuleConfig | None, InverseDiagnostics]:
    """Inverse via preimages of planted window patterns.

    For each cell g of a canonical set and each basis pattern on the window
    [-e_bound, e_bound], find the finitely supported preimage of the pattern
    planted at g; the inverse rule reads off the preimage value at g. Both
    compositions are verified; failure returns None with diagnostics.
    """
    u = s.universe
    if u.d != 1:
        raise UnsupportedDimension("construct_inverse requires d = 1")
    diag = InverseDiagnostics()
    k, p = u.k, u.p
    r = s.memory.radius
    B = s.override_radius
    offsets = [(m,) for m in range(-e_bound, e_bound + 1)]
    region = B + 2 * r + e_bound + 2
    tail_cell = region + max(r, 1) + 1
    cells = list(range(-region, region + 1)) + [tail_cell]
    margin = e_bound + 2 * r + 4

    columns: dict = {}
    for g in cells:
        for m in offsets:
            target_cell = g + m[0]
            for j in range(k):
                v = tuple(1 if jj == j else 0 for jj in range(k))
                lo = min(target_cell, -B) - margin
                hi = max(target_cell, B) + margin
                support = [(n,) for n in range(lo, hi + 1)]
                support_set = set(support)
                eq_cells = sorted({cell_sub(c, mm) for c in support for mm in s.memory} | {(target_cell,)})
                sys = _LinSys(p)
                for c in support:
                    for jj in range(k):
                        sys.var((c, jj))
                for t_cell in eq_cells:
                    rule = s.rule_at(t_cell)
                    tgt = v if t_cell == (target_cell,) else u.zero_vec
                    for i in range(k):
                        coeffs: dict = {}
                        for mm, mat in zip(rule.memory, rule.mats):
                            cc = cell_add(t_cell, mm)
                            if cc in support_set and not mat.is_zero():
                                for jj in range(k):
                                    val = mat.entry(i, jj)
                                    if val:
                                        kk = (cc, jj)
                                        coeffs[kk] = (coeffs.get(kk, 0) + val) % p
                        sys.add_eq(coeffs, tgt[i])
                sol = sys.solve()
                if not sol.solvable:
                    diag.failed_targets.append({"cell": g, "offset": m[0], "component": j})
                    diag.message = "some planted pattern has no finitely supported preimage"
                    return None, diag
                y_at_g = [0] * k
                for jj in range(k):
                    idx = sys.var_index.get(((g,), jj))
                    if idx is not None:
                        y_at_g[jj] = sol.particular[idx]
                columns[(g, m, j)] = tuple(y_at_g)

    def getval(slot, m, i, j):
        g = tail_cell if slot == "default" else slot[0]
        return columns[(g, m, j)][i]

    slots = ["default"] + [(c,) for c in range(-region, region + 1)]
    t = _rule_from_solution(u, offsets, slots, getval)
    left_ok = is_identity_rule(compose(t, s))
    right_ok = is_identity_rule(compose(s, t))
    if not (left_ok and right_ok):
        diag.message = f"verification failed (left={left_ok}, right={right_ok})"
        return None, diag
    diag.verified = True
    return t, diag


# --------------------------------------------------------------------------
# The verdict engine
# --------------------------------------------------------------------------

_UNSET = object()


class RuleAnalyzer:
    """Memoizing facade over the searches; one instance per rule, with a
    lazily built twin for the dual so cross-property transfers share work."""

    def __init__(self, rule: RuleConfig, n_max: int = 8,
                 mem_bound: int | None = None, support_bound: int | None = None,
                 period_bound: int = 8):
        self.rule = rule
        self.n_max = n_max
        r = rule.memory.radius
        B = rule.override_radius
        self.mem_bound = mem_bound if mem_bound is not None else r + 1
        self.support_bound = support_bound if support_bound is not None else B + r + 1
        self.period_bound = period_bound
        self._dual: RuleAnalyzer | None = None
        self._evper: object = _UNSET
        self._left: object = _UNSET
        self._right: object = _UNSET
        self._verdicts: dict[str, Verdict] = {}

    @property
    def u(self) -> Universe:
        return self.rule.universe

    @property
    def dual(self) -> "RuleAnalyzer":
        if self._dual is None:
            self._dual = RuleAnalyzer(dual_config(self.rule), self.n_max,
                                      self.mem_bound, self.support_bound, self.period_bound)
            self._dual._dual = self
        return self._dual

    # -- memoized searches -------------------------------------------------

    def evper_witness(self) -> EvPerConfig | None:
        if self._evper is _UNSET:
            self._evper = search_evper_kernel(self.rule, self.period_bound)
        return self._evper  # type: ignore[return-value]

    def left_inverse(self) -> RuleConfig | None:
        if self._left is _UNSET:
            if self.u.d == 1:
                self._left = find_left_inverse(self.rule, self.mem_bound, self.support_bound)
            else:
                self._left = None
        return self._left  # type: ignore[return-value]

    def right_inverse(self) -> RuleConfig | None:
        if self._right is _UNSET:
            if self.u.d == 1:
                self._right = find_right_inverse(self.rule, self.mem_bound, self.support_bound)
            else:
                self._right = None
        return self._right  # type: ignore[return-value]

    def scalar_facts(self) -> ScalarCAFacts:
        return scalar_ca_facts(self.rule.default_rule)

    # -- verdicts ----------------------------------------------------------

    def verdict(self, prop: str, anchors: Anchors | None = None) -> Verdict:
        if prop not in PROPERTIES:
            raise ContractViolation(f"unknown property {prop!r}")
        if anchors is None and prop in self._verdicts:
            return self._verdicts[prop]
        if prop == "surjective":
            v = self._surjective()
        elif prop == "pre-injective":
            v = self._preinjective()
        elif prop == "injective":
            v = self._injective(anchors)
        elif prop == "post-surjective":
            v = self._postsurjective(anchors)
        elif prop.startswith("stable-"):
            v = self._stable(prop.removeprefix("stable-"))
        else:
            v = self._invertible()
        if anchors is None:
            self._verdicts[prop] = v
        return v

    def _surjective(self) -> Verdict:
        u = self.u
        for n in range(0, self.n_max + 1):
            wm = induced_map(self.rule, box_cells(u.d, n))
            full = wm.matrix.rows
            rank = wm.rank()
            if rank < full:
                cert = WindowRankFailure(radius=n, rank=rank, full_rank=full)
                return Verdict("surjective", Status.FAILS, cert)
        if u.d == 1 and u.k == 1:
            dv = self.dual.verdict("pre-injective")
            cert = DualTransfer(clause="pre-injective(dual) <=> surjective",
                                source_prop="pre-injective",
                                inner_status=dv.status.value, inner=dv.certificate)
            return Verdict("surjective", dv.status, cert)
        if u.d == 1:
            ri = self.right_inverse()
            if ri is not None:
                return Verdict("surjective", Status.HOLDS, InverseRule(ri, "right"))
        return Verdict("surjective", Status.INCONCLUSIVE, BoundExhausted(self.n_max))

    def _preinjective(self) -> Verdict:
        u = self.u
        r = self.rule.memory.radius
        B = self.rule.override_radius
        if u.d == 1 and u.k == 1:
            facts = self.scalar_facts()
            if facts.is_zero:
                far = (B + r + 1,)
                w = FinSuppConfig.delta(u, far)
                if not apply_finsupp(self.rule, w).is_zero():
                    raise AssertionError("zero tail must kill a far delta")
                return Verdict("pre-injective", Status.FAILS, FinSuppKernelWitness(w))
            n_star = B + r + 2
            basis = finite_support_kernel_basis(self.rule, n_star)
            if basis:
                return Verdict("pre-injective", Status.FAILS, FinSuppKernelWitness(basis[0]))
            return Verdict("pre-injective", Status.HOLDS, ScalarKernelBound(n_star))
        for n in range(1, self.n_max + 1):
            basis = finite_support_kernel_basis(self.rule, n)
            if basis:
                return Verdict("pre-injective", Status.FAILS, FinSuppKernelWitness(basis[0]))
        if u.d == 1:
            li = self.left_inverse()
            if li is not None:
                return Verdict("pre-injective", Status.HOLDS, InverseRule(li, "left"))
        return Verdict("pre-injective", Status.INCONCLUSIVE, BoundExhausted(self.n_max))

    def _injective(self, anchors: Anchors | None) -> Verdict:
        if self.u.d != 1:
            raise UnsupportedDimension("injectivity verdict requires d = 1")
        detail = {}
        if anchors is not None:
            detail["anchors"] = anchored_injectivity(self.rule, anchors, self.n_max)
        w = self.evper_witness()
        if w is not None:
            return Verdict("injective", Status.FAILS, EvPerKernelWitness(w), detail)
        li = self.left_inverse()
        if li is not None:
            return Verdict("injective", Status.HOLDS, InverseRule(li, "left"), detail)
        if anchors is None:
            detail["anchors"] = anchored_injectivity(self.rule, default_anchors(self.rule), self.n_max)
        return Verdict("injective", Status.INCONCLUSIVE, BoundExhausted(self.n_max), detail)

    def _postsurjective(self, anchors: Anchors | None) -> Verdict:
        if self.u.d != 1:
            raise UnsupportedDimension("post-surjectivity verdict requires d = 1")
        detail = {}
        if anchors is not None:
            detail["anchors"] = anchored_preimages(self.rule, anchors, self.n_max)
        dw = self.dual.evper_witness()
        if dw is not None:
            cert = DualTransfer(clause="injective(dual) <=> post-surjective",
                                source_prop="injective",
                                inner_status=Status.FAILS.value,
                                inner=EvPerKernelWitness(dw))
            return Verdict("post-surjective", Status.FAILS, cert, detail)
        ri = self.right_inverse()
        if ri is not None:
            return Verdict("post-surjective", Status.HOLDS, InverseRule(ri, "right"), detail)
        if anchors is None:
            detail["anchors"] = anchored_preimages(self.rule, default_anchors(self.rule), self.n_max)
        return Verdict("post-surjective", Status.INCONCLUSIVE, BoundExhausted(self.n_max), detail)

    def _stable(self, base: str) -> Verdict:
        prop = f"stable-{base}"
        if base in ("surjective", "pre-injective"):
            # surjectivity and pre-injectivity are stable properties
            v = self.verdict(base)
            cert = ImpliedTransfer(source_prop=base, inner_status=v.status.value,
                                   inner=v.certificate)
            return Verdict(prop, v.status, cert, {"stability": "free"})
        if base == "injective":
            if self.u.k == 1 and self.u.d == 1:
                facts = self.scalar_facts()
                if not facts.injective:
                    w = facts.periodic_kernel_witness()
                    inner = EvPerKernelWitness(w)
                    cert = TailTransfer(source_prop="injective",
                                        inner_status=Status.FAILS.value, inner=inner)
                    return Verdict(prop, Status.FAILS, cert)
            v = self.verdict("injective")
            if v.status is Status.FAILS:
                cert = ImpliedTransfer(source_prop="injective",
                                       inner_status=v.status.value, inner=v.certificate)
                return Verdict(prop, Status.FAILS, cert)
            li = self.left_inverse()
            if li is not None:
                return Verdict(prop, Status.HOLDS, InverseRule(li, "left"))
            return Verdict(prop, Status.INCONCLUSIVE, BoundExhausted(self.n_max))
        # base == "post-surjective"
        if self.u.k == 1 and self.u.d == 1:
            dual_tail_facts = scalar_ca_facts(dual_config(self.rule).default_rule)
            if not dual_tail_facts.injective:
                w = dual_tail_facts.periodic_kernel_witness()
                inner = DualTransfer(clause="injective(dual) <=> post-surjective",
                                     source_prop="injective",
                                     inner_status=Status.FAILS.value,
                                     inner=EvPerKernelWitness(w))
                cert = TailTransfer(source_prop="post-surjective",
                                    inner_status=Status.FAILS.value, inner=inner)
                return Verdict(prop, Status.FAILS, cert)
        v = self.verdict("post-surjective")
        if v.status is Status.FAILS:
            cert = ImpliedTransfer(source_prop="post-surjective",
                                   inner_status=v.status.value, inner=v.certificate)
            return Verdict(prop, Status.FAILS, cert)
        ri = self.right_inverse()
        if ri is not None:
            return Verdict(prop, Status.HOLDS, InverseRule(ri, "right"))
        return Verdict(prop, Status.INCONCLUSIVE, BoundExhausted(self.n_max))

    def _invertible(self) -> Verdict:
        if self.u.d == 1:
            li = self.left_inverse()
            if li is not None and is_identity_rule(compose(self.rule, li)):
                return Verdict("invertible", Status.HOLDS, InverseRule(li, "two-sided"))
        negative_sources = ["pre-injective", "surjective"]
        if self.u.d == 1:
            negative_sources += ["injective", "stable-injective", "stable-post-surjective"]
        for src in negative_sources:
            v = self.verdict(src)
            if v.status is Status.FAILS:
                cert = ImpliedTransfer(source_prop=src, inner_status=v.status.value,
                                       inner=v.certificate)
                return Verdict("invertible", Status.FAILS, cert)
        return Verdict("invertible", Status.INCONCLUSIVE, BoundExhausted(self.n_max))


# --------------------------------------------------------------------------
# Public verdict API
# --------------------------------------------------------------------------

def surjectivity_verdict(s: RuleConfig, n_max: int = 8) -> Verdict:
    return RuleAnalyzer(s, n_max).verdict("surjective")


def preinjectivity_verdict(s: RuleConfig, n_max: int = 8) -> Verdict:
    return RuleAnalyzer(s, n_max).verdict("pre-injective")


def injectivity_verdict(s: RuleConfig, anchors: Anchors | None = None, n_max: int = 8) -> Verdict:
    return RuleAnalyzer(s, n_max).verdict("injective", anchors=anchors)


def postsurjectivity_verdict(s: RuleConfig, anchors: Anchors | None = None, n_max: int = 8) -> Verdict:
    return RuleAnalyzer(s, n_max).verdict("post-surjective", anchors=anchors)


def stable_verdict(s: RuleConfig, prop: str, n_max: int = 8) -> Verdict:
    if prop not in ("surjective", "pre-injective", "injective", "post-surjective"):
        raise ContractViolation(f"no stable variant for {prop!r}")
    return RuleAnalyzer(s, n_max).verdict(f"stable-{prop}")


def invertibility_verdict(s: RuleConfig, n_max: int = 8,
                          mem_bound: int | None = None, support_bound: int | None = None) -> Verdict:
    return RuleAnalyzer(s, n_max, mem_bound, support_bound).verdict("invertible")


class CrossValidationError(NucaError):
    def __init__(self, contradictions, report):
        super().__init__(f"duality contradiction(s): {contradictions}")
        self.contradictions = contradictions
        self.report = report


@dataclass
class CrossValidationReport:
    rule: RuleConfig
    dual_rule: RuleConfig
    verdicts: dict
    transfers: list = field(default_factory=list)
    contradictions: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.contradictions


_CLAUSES = (
    ("i", ("s", "pre-injective"), ("dual", "surjective")),
    ("i", ("dual", "pre-injective"), ("s", "surjective")),
    ("ii", ("s", "injective"), ("dual", "post-surjective")),
    ("ii", ("dual", "injective"), ("s", "post-surjective")),
    ("iii", ("s", "stable-injective"), ("dual", "stable-post-surjective")),
    ("iii", ("dual", "stable-injective"), ("s", "stable-post-surjective")),
    ("iv", ("s", "invertible"), ("dual", "invertible")),
)

_CROSS_PROPS = ("surjective", "pre-injective", "injective", "post-surjective",
                "stable-injective", "stable-post-surjective", "invertible")


def cross_validate(s: RuleConfig, n_max: int = 6) -> CrossValidationReport:
    """Run all verdicts on s and on its dual; transfer definitive statuses
    across the duality clauses and fail hard on any contradiction."""
    if s.universe.d != 1:
        raise UnsupportedDimension("cross validation requires d = 1")
    a = RuleAnalyzer(s, n_max)
    b = a.dual
    verdicts: dict = {}
    for prop in _CROSS_PROPS:
        verdicts[("s", prop)] = a.verdict(prop)
        verdicts[("dual", prop)] = b.verdict(prop)

    report = CrossValidationReport(rule=s, dual_rule=b.rule, verdicts=verdicts)
    for clause, ka, kb in _CLAUSES:
        for src, dst in ((ka, kb), (kb, ka)):
            vs, vd = verdicts[src], verdicts[dst]
            if vs.status is Status.INCONCLUSIVE or vd.status is not Status.INCONCLUSIVE:
                continue
            cert = DualTransfer(clause=clause, source_prop=src[1],
                                inner_status=vs.status.value, inner=vs.certificate)
            verdicts[dst] = Verdict(vd.prop, vs.status, cert, vd.detail)
            report.transfers.append({"clause": clause, "from": src, "to": dst,
                                     "status": vs.status.value})
    for clause, ka, kb in _CLAUSES:
        va, vb = verdicts[ka], verdicts[kb]
        if (va.status is not Status.INCONCLUSIVE and vb.status is not Status.INCONCLUSIVE
                and va.status is not vb.status):
            report.contradictions.append({"clause": clause, "a": (ka, va), "b": (kb, vb)})
    if report.contradictions:
        raise CrossValidationError(report.contradictions, report)
    return report


# --------------------------------------------------------------------------
# Certificate serialization and re-verification
# --------------------------------------------------------------------------

import json as _json


def _finsupp_to_obj(x: FinSuppConfig) -> dict:
    return {"values": [[list(g), list(v)] for g, v in x.values]}


def _finsupp_from_obj(obj, u: Universe) -> FinSuppConfig:
    return FinSuppConfig(u, {tuple(g): tuple(v) for g, v in obj["values"]})


def _evper_to_obj(x: EvPerConfig) -> dict:
    return {"core_start": x.core_start,
            "core": [list(v) for v in x.core],
            "left_period": [list(v) for v in x.left_period],
            "right_period": [list(v) for v in x.right_period]}


def _evper_from_obj(obj, u: Universe) -> EvPerConfig:
    return EvPerConfig(u, obj["core_start"], [tuple(v) for v in obj["core"]],
                       [tuple(v) for v in obj["left_period"]],
                       [tuple(v) for v in obj["right_period"]])


def _rule_to_obj(rule: RuleConfig) -> dict:
    return _json.loads(serialize_rule(rule))


def _rule_from_obj(obj) -> RuleConfig:
    return parse_rule(_json.dumps(obj))


def cert_to_obj(cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, WindowRankFailure):
        return {"kind": "window-rank-failure", "radius": cert.radius,
                "rank": cert.rank, "full_rank": cert.full_rank}
    if isinstance(cert, FinSuppKernelWitness):
        return {"kind": "finsupp-kernel-witness", "config": _finsupp_to_obj(cert.config)}
    if isinstance(cert, EvPerKernelWitness):
        return {"kind": "evper-kernel-witness", "config": _evper_to_obj(cert.config)}
    if isinstance(cert, PreimageWitness):
        return {"kind": "preimage-witness", "cell": list(cert.cell),
                "value": list(cert.value), "config": _finsupp_to_obj(cert.config)}
    if isinstance(cert, InverseRule):
        return {"kind": "inverse-rule", "side": cert.side, "rule": _rule_to_obj(cert.rule)}
    if isinstance(cert, ScalarKernelBound):
        return {"kind": "scalar-kernel-bound", "radius": cert.radius}
    if isinstance(cert, DualTransfer):
        return {"kind": "dual-transfer", "clause": cert.clause,
                "source_prop": cert.source_prop, "inner_status": cert.inner_status,
                "inner": cert_to_obj(cert.inner)}
    if isinstance(cert, TailTransfer):
        return {"kind": "tail-transfer", "source_prop": cert.source_prop,
                "inner_status": cert.inner_status, "inner": cert_to_obj(cert.inner)}
    if isinstance(cert, ImpliedTransfer):
        return {"kind": "implied", "source_prop": cert.source_prop,
                "inner_status": cert.inner_status, "inner": cert_to_obj(cert.inner)}
    if isinstance(cert, BoundExhausted):
        return {"kind": "bound-exhausted", "bound": cert.bound}
    raise ContractViolation(f"unknown certificate {type(cert)!r}")


def cert_from_obj(obj, u: Universe):
    if obj is None:
        return None
    kind = obj.get("kind")
    if kind == "window-rank-failure":
        return WindowRankFailure(obj["radius"], obj["rank"], obj["full_rank"])
    if kind == "finsupp-kernel-witness":
        return FinSuppKernelWitness(_finsupp_from_obj(obj["config"], u))
    if kind == "evper-kernel-witness":
        return EvPerKernelWitness(_evper_from_obj(obj["config"], u))
    if kind == "preimage-witness":
        return PreimageWitness(tuple(obj["cell"]), tuple(obj["value"]),
                               _finsupp_from_obj(obj["config"], u))
    if kind == "inverse-rule":
        return InverseRule(_rule_from_obj(obj["rule"]), obj["side"])
    if kind == "scalar-kernel-bound":
        return ScalarKernelBound(obj["radius"])
    if kind == "dual-transfer":
        return DualTransfer(obj["clause"], obj["source_prop"], obj["inner_status"],
                            cert_from_obj(obj["inner"], u))
    if kind == "tail-transfer":
        return TailTransfer(obj["source_prop"], obj["inner_status"],
                            cert_from_obj(obj["inner"], u))
    if kind == "implied":
        return ImpliedTransfer(obj["source_prop"], obj["inner_status"],
                               cert_from_obj(obj["inner"], u))
    if kind == "bound-exhausted":
        return BoundExhausted(obj["bound"])
    raise ContractViolation(f"unknown certificate kind {kind!r}")


_DUAL_PAIRS = {
    ("surjective", "pre-injective"),
    ("pre-injective", "surjective"),
    ("post-surjective", "injective"),
    ("injective", "post-surjective"),
    ("stable-post-surjective", "stable-injective"),
    ("stable-injective", "stable-post-surjective"),
    ("invertible", "invertible"),
}

_TAIL_PAIRS = {
    ("stable-injective", "injective"),
    ("stable-post-surjective", "post-surjective"),
    ("stable-surjective", "surjective"),
    ("stable-pre-injective", "pre-injective"),
}

_IMPLIED = {
    ("stable-surjective", "surjective"): {Status.HOLDS, Status.FAILS},
    ("stable-pre-injective", "pre-injective"): {Status.HOLDS, Status.FAILS},
    ("stable-injective", "injective"): {Status.FAILS},
    ("stable-post-surjective", "post-surjective"): {Status.FAILS},
    ("invertible", "pre-injective"): {Status.FAILS},
    ("invertible", "injective"): {Status.FAILS},
    ("invertible", "surjective"): {Status.FAILS},
    ("invertible", "post-surjective"): {Status.FAILS},
    ("invertible", "stable-injective"): {Status.FAILS},
    ("invertible", "stable-post-surjective"): {Status.FAILS},
}

_DIRECT_FAILS = {
    WindowRankFailure: {"surjective", "stable-surjective"},
    FinSuppKernelWitness: {"pre-injective", "injective", "stable-pre-injective",
                           "stable-injective", "invertible"},
    EvPerKernelWitness: {"injective", "stable-injective"},
}

_INVERSE_HOLDS = {
    "left": {"injective", "pre-injective", "stable-injective", "stable-pre-injective"},
    "right": {"post-surjective", "stable-post-surjective", "surjective", "stable-surjective"},
    "two-sided": set(PROPERTIES),
}


def verify_certificate(rule: RuleConfig, prop: str, status: Status, cert) -> tuple[bool, str]:
    """Re-verify a certificate by direct evaluation against the rule."""
    if status is Status.INCONCLUSIVE:
        if isinstance(cert, BoundExhausted) or cert is None:
            return True, "inconclusive verdicts carry only the exhausted bound"
        return False, "inconclusive verdict with a non-bound certificate"
    if isinstance(cert, WindowRankFailure):
        if status is not Status.FAILS or prop not in _DIRECT_FAILS[WindowRankFailure]:
            return False, f"window rank failure does not certify {status.value} {prop}"
        wm = induced_map(rule, box_cells(rule.universe.d, cert.radius))
        if wm.matrix.rows != cert.full_rank or wm.rank() != cert.rank or cert.rank >= cert.full_rank:
            return False, "window rank recomputation mismatch"
        return True, f"window radius {cert.radius} has rank {cert.rank} < {cert.full_rank}"
    if isinstance(cert, FinSuppKernelWitness):
        if status is not Status.FAILS or prop not in _DIRECT_FAILS[FinSuppKernelWitness]:
            return False, f"kernel witness does not certify {status.value} {prop}"
        w = cert.config
        if w.is_zero():
            return False, "kernel witness is zero"
        if not apply_finsupp(rule, w).is_zero():
            return False, "kernel witness does not map to zero"
        return True, "nonzero finitely supported kernel element re-verified"
    if isinstance(cert, EvPerKernelWitness):
        if status is not Status.FAILS or prop not in _DIRECT_FAILS[EvPerKernelWitness]:
            return False, f"kernel witness does not certify {status.value} {prop}"
        w = cert.config
        if w.is_zero():
            return False, "kernel witness is zero"
        if not apply_evper(rule, w).is_zero():
            return False, "kernel witness does not map to zero"
        return True, "nonzero eventually periodic kernel element re-verified"
    if isinstance(cert, PreimageWitness):
        target = FinSuppConfig(rule.universe, {cert.cell: cert.value})
        if apply_finsupp(rule, cert.config) != target:
            return False, "preimage witness does not map to its target"
        return True, "preimage witness re-verified"
    if isinstance(cert, InverseRule):
        if status is not Status.HOLDS or prop not in _INVERSE_HOLDS.get(cert.side, set()):
            return False, f"{cert.side} inverse does not certify {status.value} {prop}"
        if cert.side in ("left", "two-sided") and not is_identity_rule(compose(cert.rule, rule)):
            return False, "left composition is not the identity"
        if cert.side in ("right", "two-sided") and not is_identity_rule(compose(rule, cert.rule)):
            return False, "right composition is not the identity"
        return True, f"{cert.side} inverse re-verified by composition"
    if isinstance(cert, ScalarKernelBound):
        if status is not Status.HOLDS or prop not in ("pre-injective", "stable-pre-injective"):
            return False, "scalar kernel bound only certifies pre-injectivity"
        u = rule.universe
        if u.k != 1 or u.d != 1:
            return False, "scalar kernel bound requires k = 1, d = 1"
        if scalar_ca_facts(rule.default_rule).is_zero:
            return False, "tail polynomial is zero"
        if finite_support_kernel_basis(rule, cert.radius):
            return False, "bounded kernel is nonempty"
        return True, f"nonzero tail and empty kernel inside radius {cert.radius}"
    if isinstance(cert, DualTransfer):
        if (prop, cert.source_prop) not in _DUAL_PAIRS:
            return False, f"no duality clause links {prop} to dual {cert.source_prop}"
        if cert.inner_status != status.value:
            return False, "dual transfer must preserve the status"
        return verify_certificate(dual_config(rule), cert.source_prop, status, cert.inner)
    if isinstance(cert, TailTransfer):
        if (prop, cert.source_prop) not in _TAIL_PAIRS or status is not Status.FAILS:
            return False, f"tail transfer does not certify {status.value} {prop}"
        return verify_certificate(rule.constant_tail(), cert.source_prop, status, cert.inner)
    if isinstance(cert, ImpliedTransfer):
        allowed = _IMPLIED.get((prop, cert.source_prop))
        if allowed is None or status not in allowed:
            return False, f"{cert.source_prop} does not imply {status.value} {prop}"
        return verify_certificate(rule, cert.source_prop, status, cert.inner)
    if isinstance(cert, BoundExhausted):
        return False, "bound-exhausted certificate on a decisive verdict"
    return False, f"unknown certificate {type(cert)!r}"
