"""Rule configurations over Z^d and exact evaluation of linear non-uniform CA.

A rule configuration assigns every cell a local linear map V^M -> V with
V = GF(p)^k and M a finite set of offsets. Representable configurations
are a constant default rule plus finitely many per-cell overrides, so
everything here admits exact, terminating algorithms.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

from nucalab.gf import FieldMatrix, validate_modulus

Cell = tuple[int, ...]
Vector = tuple[int, ...]


class NucaError(ValueError):
    """Base class for contract and format errors."""


class ContractViolation(NucaError):
    pass


class UnsupportedDimension(ContractViolation):
    """Raised when an operation requires d = 1 but the universe is higher-dimensional."""


class RuleFormatError(NucaError):
    """Malformed or inconsistent rule file."""


@dataclass(frozen=True)
class Universe:
    """Ambient data: dimension d of the grid, alphabet V = GF(p)^k."""

    d: int
    k: int
    p: int

    def __post_init__(self):
        if self.d not in (1, 2):
            raise NucaError(f"dimension must be 1 or 2, got {self.d}")
        if self.k < 1:
            raise NucaError(f"alphabet dimension must be >= 1, got {self.k}")
        validate_modulus(self.p)

    def cell(self, c) -> Cell:
        if isinstance(c, int):
            c = (c,)
        c = tuple(int(v) for v in c)
        if len(c) != self.d:
            raise ContractViolation(f"cell {c} does not match dimension {self.d}")
        return c

    def vec(self, v) -> Vector:
        if isinstance(v, int):
            v = (v,)
        v = tuple(int(x) % self.p for x in v)
        if len(v) != self.k:
            raise ContractViolation(f"vector {v} does not match alphabet dimension {self.k}")
        return v

    @property
    def zero_vec(self) -> Vector:
        return (0,) * self.k


def cell_add(a: Cell, b: Cell) -> Cell:
    return tuple(x + y for x, y in zip(a, b))

def cell_sub(a: Cell, b: Cell) -> Cell:
    return tuple(x - y for x, y in zip(a, b))

def cell_neg(a: Cell) -> Cell:
    return tuple(-x for x in a)


def box_cells(d: int, radius: int) -> list[Cell]:
    """E_n = [-n, n]^d in lexicographic order."""
    if radius < 0:
        raise ContractViolation("radius must be >= 0")
    rng = range(-radius, radius + 1)
    return [tuple(c) for c in product(rng, repeat=d)]


def vec_add(a: Vector, b: Vector, p: int) -> Vector:
    return tuple((x + y) % p for x, y in zip(a, b))

def vec_sub(a: Vector, b: Vector, p: int) -> Vector:
    return tuple((x - y) % p for x, y in zip(a, b))


class MemorySet:
    """Finite ordered set of offsets in Z^d, kept in lexicographic order."""

    __slots__ = ("offsets", "d")

    def __init__(self, offsets: Iterable, d: int | None = None):
        raw = list(offsets)
        if not raw:
            raise NucaError("memory set must be nonempty")
        norm = []
        for m in raw:
            if isinstance(m, int):
                m = (m,)
            norm.append(tuple(int(v) for v in m))
        dd = d if d is not None else len(norm[0])
        for m in norm:
            if len(m) != dd:
                raise NucaError(f"offset {m} does not match dimension {dd}")
        uniq = sorted(set(norm))
        if len(uniq) != len(norm):
            raise NucaError("memory offsets must be distinct")
        object.__setattr__(self, "offsets", tuple(uniq))
        object.__setattr__(self, "d", dd)

    def __setattr__(self, name, value):
        raise AttributeError("MemorySet is immutable")

    def __iter__(self):
        return iter(self.offsets)

    def __len__(self):
        return len(self.offsets)

    def __contains__(self, m):
        return m in self.offsets

    def index(self, m) -> int:
        return self.offsets.index(m)

    def negated(self) -> "MemorySet":
        return MemorySet([cell_neg(m) for m in self.offsets], d=self.d)

    @property
    def radius(self) -> int:
        """Chebyshev radius: max over offsets of max coordinate magnitude."""
        return max(max(abs(v) for v in m) for m in self.offsets)

    def lo(self) -> int:
        """Smallest offset (d = 1 only)."""
        return min(m[0] for m in self.offsets)

    def hi(self) -> int:
        return max(m[0] for m in self.offsets)

    def __eq__(self, other):
        return isinstance(other, MemorySet) and self.offsets == other.offsets

    def __hash__(self):
        return hash(self.offsets)

    def __repr__(self):
        return f"MemorySet({list(self.offsets)})"


class LocalRule:
    """One cell's local map, stored as a k x k matrix per memory offset."""

    __slots__ = ("memory", "mats")

    def __init__(self, memory: MemorySet, mats: Sequence[FieldMatrix]):
        mats = tuple(mats)
        if len(mats) != len(memory):
            raise NucaError("one matrix per memory offset required")
        k = mats[0].rows
        p = mats[0].p
        for m in mats:
            if m.rows != k or m.cols != k or m.p != p:
                raise NucaError("local rule matrices must share shape k x k and modulus")
        object.__setattr__(self, "memory", memory)
        object.__setattr__(self, "mats", mats)

    def __setattr__(self, name, value):
        raise AttributeError("LocalRule is immutable")

    @classmethod
    def from_map(cls, memory: MemorySet, coeffs: Mapping, universe: Universe) -> "LocalRule":
        mats = []
        for m in memory:
            mat = coeffs.get(m)
            if mat is None:
                mat = FieldMatrix.zeros(universe.p, universe.k, universe.k)
            mats.append(mat)
        return cls(memory, mats)

    def coeff(self, m: Cell) -> FieldMatrix | None:
        """Matrix at offset m, or None when m is outside the memory set."""
        try:
            return self.mats[self.memory.index(m)]
        except ValueError:
            return None

    def coeff_map(self) -> dict[Cell, FieldMatrix]:
        """Nonzero coefficients only, keyed by offset."""
        return {m: mat for m, mat in zip(self.memory, self.mats) if not mat.is_zero()}

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def __eq__(self, other):
        return (isinstance(other, LocalRule)
                and self.memory == other.memory and self.mats == other.mats)

    def __hash__(self):
        return hash((self.memory, self.mats))

    def __repr__(self):
        return f"LocalRule({ {m: mat.to_rows() for m, mat in zip(self.memory, self.mats)} })"


class RuleConfig:
    """Configuration of local rules: constant default plus finite overrides.

    Overrides structurally equal to the default are pruned, so equality of
    RuleConfig values is equality of the induced global maps within this
    representable class.
    """

    __slots__ = ("universe", "memory", "default_rule", "overrides", "_override_map")

    def __init__(self, universe: Universe, memory: MemorySet,
                 default_rule: LocalRule, overrides: Mapping | Iterable = ()):
        if memory.d != universe.d:
            raise NucaError("memory dimension does not match universe")
        self._check_rule(universe, memory, default_rule)
        if isinstance(overrides, Mapping):
            items = overrides.items()
        else:
            items = list(overrides)
        canon = {}
        for g, rule in items:
            g = universe.cell(g)
            self._check_rule(universe, memory, rule)
            if rule != default_rule:
                canon[g] = rule
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "memory", memory)
        object.__setattr__(self, "default_rule", default_rule)
        object.__setattr__(self, "overrides", tuple(sorted(canon.items())))
        object.__setattr__(self, "_override_map", canon)

    @staticmethod
    def _check_rule(universe: Universe, memory: MemorySet, rule: LocalRule):
        if rule.memory != memory:
            raise NucaError("local rule memory differs from configuration memory")
        if rule.mats[0].rows != universe.k or rule.mats[0].p != universe.p:
            raise NucaError("local rule shape does not match universe")

    def __setattr__(self, name, value):
        raise AttributeError("RuleConfig is immutable")

    def rule_at(self, g: Cell) -> LocalRule:
        return self._override_map.get(g, self.default_rule)

    def coeff(self, g: Cell, m: Cell) -> FieldMatrix | None:
        return self.rule_at(g).coeff(m)

    def coeff_map_at(self, g: Cell) -> dict[Cell, FieldMatrix]:
        """Nonzero coefficients of the output at g, keyed by absolute cell read."""
        return {cell_add(g, m): mat for m, mat in self.rule_at(g).coeff_map().items()}

    @property
    def support(self) -> tuple[Cell, ...]:
        return tuple(g for g, _ in self.overrides)

    @property
    def override_radius(self) -> int:
        """Chebyshev radius of the override region (0 when constant)."""
        if not self.overrides:
            return 0
        return max(max(abs(v) for v in g) for g in self.support)

    def is_constant(self) -> bool:
        return not self.overrides

    def constant_tail(self) -> "RuleConfig":
        """The constant configuration every translate converges to."""
        return RuleConfig(self.universe, self.memory, self.default_rule)

    def __eq__(self, other):
        return (isinstance(other, RuleConfig)
                and self.universe == other.universe
                and self.memory == other.memory
                and self.default_rule == other.default_rule
                and self.overrides == other.overrides)

    def __hash__(self):
        return hash((self.universe, self.memory, self.default_rule, self.overrides))

    def __repr__(self):
        return (f"RuleConfig(universe={self.universe}, memory={self.memory}, "
                f"overrides at {[g for g, _ in self.overrides]})")


class FinSuppConfig:
    """Finitely supported configuration in V^G; absent cells are zero."""

    __slots__ = ("universe", "values", "_map")

    def __init__(self, universe: Universe, values: Mapping | Iterable = ()):
        if isinstance(values, Mapping):
            items = values.items()
        else:
            items = list(values)
        canon = {}
        for g, v in items:
            g = universe.cell(g)
            v = universe.vec(v)
            if any(v):
                canon[g] = v
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "values", tuple(sorted(canon.items())))
        object.__setattr__(self, "_map", canon)

    def __setattr__(self, name, value):
        raise AttributeError("FinSuppConfig is immutable")

    @classmethod
    def delta(cls, universe: Universe, g, v=None) -> "FinSuppConfig":
        if v is None:
            v = (1,) + (0,) * (universe.k - 1)
        return cls(universe, {universe.cell(g): v})

    @classmethod
    def zero(cls, universe: Universe) -> "FinSuppConfig":
        return cls(universe)

    def value(self, g) -> Vector:
        return self._map.get(self.universe.cell(g), self.universe.zero_vec)

    @property
    def support(self) -> tuple[Cell, ...]:
        return tuple(g for g, _ in self.values)

    def is_zero(self) -> bool:
        return not self.values

    def add(self, other: "FinSuppConfig") -> "FinSuppConfig":
        p = self.universe.p
        out = dict(self._map)
        for g, v in other.values:
            out[g] = vec_add(out.get(g, self.universe.zero_vec), v, p)
        return FinSuppConfig(self.universe, out)

    def neg(self) -> "FinSuppConfig":
        p = self.universe.p
        return FinSuppConfig(self.universe, {g: tuple((-x) % p for x in v) for g, v in self.values})

    def scale(self, c: int) -> "FinSuppConfig":
        p = self.universe.p
        return FinSuppConfig(self.universe, {g: tuple(x * c % p for x in v) for g, v in self.values})

    def __eq__(self, other):
        return (isinstance(other, FinSuppConfig)
                and self.universe == other.universe and self.values == other.values)

    def __hash__(self):
        return hash((self.universe, self.values))

    def __repr__(self):
        return f"FinSuppConfig({dict(self.values)})"


def _minimal_tile(block: tuple) -> tuple:
    n = len(block)
    for d in range(1, n + 1):
        if n % d == 0 and block == block[:d] * (n // d):
            return block[:d]
    return block


class EvPerConfig:
    """Eventually periodic bi-infinite configuration (d = 1).

    Values on a finite core interval, plus period blocks tiling the two
    tails. Evaluation at any cell is total; periods are stored minimal.
    """

    __slots__ = ("universe", "core_start", "core", "left_period", "right_period")

    def __init__(self, universe: Universe, core_start: int, core: Sequence,
                 left_period: Sequence, right_period: Sequence):
        if universe.d != 1:
            raise UnsupportedDimension("eventually periodic configurations require d = 1")
        core_t = tuple(universe.vec(v) for v in core)
        left_t = tuple(universe.vec(v) for v in left_period)
        right_t = tuple(universe.vec(v) for v in right_period)
        if not left_t or not right_t:
            raise NucaError("period blocks must be nonempty")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "core_start", int(core_start))
        object.__setattr__(self, "core", core_t)
        object.__setattr__(self, "left_period", _minimal_tile(left_t))
        object.__setattr__(self, "right_period", _minimal_tile(right_t))

    def __setattr__(self, name, value):
        raise AttributeError("EvPerConfig is immutable")

    @classmethod
    def zero(cls, universe: Universe) -> "EvPerConfig":
        z = universe.zero_vec
        return cls(universe, 0, (), (z,), (z,))

    @classmethod
    def from_finsupp(cls, x: FinSuppConfig) -> "EvPerConfig":
        u = x.universe
        if u.d != 1:
            raise UnsupportedDimension("d = 1 required")
        if x.is_zero():
            return cls.zero(u)
        cells = [g[0] for g in x.support]
        a, b = min(cells), max(cells)
        core = [x.value((n,)) for n in range(a, b + 1)]
        return cls(u, a, core, (u.zero_vec,), (u.zero_vec,))

    @property
    def core_end(self) -> int:
        return self.core_start + len(self.core) - 1

    def value(self, n) -> Vector:
        if isinstance(n, tuple):
            n = n[0]
        a = self.core_start
        if n < a:
            return self.left_period[(n - a) % len(self.left_period)]
        if n <= self.core_end:
            return self.core[n - a]
        return self.right_period[(n - self.core_end - 1) % len(self.right_period)]

    def is_zero(self) -> bool:
        zero = self.universe.zero_vec
        return (all(v == zero for v in self.core)
                and all(v == zero for v in self.left_period)
                and all(v == zero for v in self.right_period))

    def scan_bound(self) -> int:
        """Radius beyond which any nonzero cell forces one inside the radius."""
        return (max(abs(self.core_start), abs(self.core_end)) +
                len(self.left_period) + len(self.right_period) + 1)

    def combine(self, other: "EvPerConfig", op: Callable[[Vector, Vector], Vector]) -> "EvPerConfig":
        if self.universe != other.universe:
            raise ContractViolation("universe mismatch")
        L = _lcm(len(self.left_period), len(other.left_period))
        R = _lcm(len(self.right_period), len(other.right_period))
        a = min(self.core_start, other.core_start)
        b = max(self.core_end, other.core_end)
        core = [op(self.value(n), other.value(n)) for n in range(a, b + 1)]
        left = [op(self.value(n), other.value(n)) for n in range(a - L, a)]
        right = [op(self.value(n), other.value(n)) for n in range(b + 1, b + R + 1)]
        return EvPerConfig(self.universe, a, core, left, right)

    def add(self, other: "EvPerConfig") -> "EvPerConfig":
        p = self.universe.p
        return self.combine(other, lambda x, y: vec_add(x, y, p))

    def sub(self, other: "EvPerConfig") -> "EvPerConfig":
        p = self.universe.p
        return self.combine(other, lambda x, y: vec_sub(x, y, p))

    def add_finsupp(self, x: FinSuppConfig) -> "EvPerConfig":
        if x.is_zero():
            return self
        return self.add(EvPerConfig.from_finsupp(x))

    def min_abs_nonzero(self) -> int | None:
        """Smallest |n| with value(n) != 0, or None for the zero configuration."""
        zero = self.universe.zero_vec
        for t in range(self.scan_bound() + 1):
            if self.value(t) != zero or self.value(-t) != zero:
                return t
        return None

    def __eq__(self, other):
        if not isinstance(other, EvPerConfig) or self.universe != other.universe:
            return False
        return self.sub(other).min_abs_nonzero() is None

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return (f"EvPerConfig(left={list(self.left_period)}, core@{self.core_start}="
                f"{list(self.core)}, right={list(self.right_period)})")


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class WindowMap:
    """Induced linear map V^{EM} -> V^E realized as a matrix with cell-indexed bases."""

    domain_cells: tuple[Cell, ...]
    codomain_cells: tuple[Cell, ...]
    matrix: FieldMatrix

    def rank(self) -> int:
        return self.matrix.rank()

    def full_rank_rows(self) -> bool:
        return self.rank() == self.matrix.rows

    def apply(self, pattern: Mapping[Cell, Vector]) -> dict[Cell, Vector]:
        k = self.matrix.rows // max(len(self.codomain_cells), 1)
        vec: list[int] = []
        for c in self.domain_cells:
            if c not in pattern:
                raise ContractViolation(f"pattern missing cell {c}")
            vec.extend(pattern[c])
        out = self.matrix.mat_vec(tuple(vec))
        return {g: tuple(out[i * k:(i + 1) * k]) for i, g in enumerate(self.codomain_cells)}


def _config_value(x, g: Cell, universe: Universe) -> Vector:
    if isinstance(x, (FinSuppConfig, EvPerConfig)):
        return x.value(g)
    if isinstance(x, Mapping):
        if g not in x:
            raise ContractViolation(f"pattern missing cell {g}")
        return universe.vec(x[g])
    if callable(x):
        return universe.vec(x(g))
    raise ContractViolation(f"unsupported configuration object {type(x)!r}")


def evaluate_cell(s: RuleConfig, x, g) -> Vector:
    """Image value at cell g: sum over offsets m of s(g, m) applied to x(g + m)."""
    u = s.universe
    g = u.cell(g)
    rule = s.rule_at(g)
    acc = [0] * u.k
    for m, mat in zip(rule.memory, rule.mats):
        if mat.is_zero():
            # still require the pattern to cover g + m for explicit patterns
            if isinstance(x, Mapping):
                _config_value(x, cell_add(g, m), u)
            continue
        v = _config_value(x, cell_add(g, m), u)
        if any(v):
            w = mat.mat_vec(v)
            for i in range(u.k):
                acc[i] += w[i]
    return tuple(a % u.p for a in acc)


def window_cells(E: Sequence[Cell], memory: MemorySet) -> tuple[Cell, ...]:
    """EM = {e + m : e in E, m in memory}, duplicates merged, lex order."""
    return tuple(sorted({cell_add(e, m) for e in E for m in memory}))


def induced_map(s: RuleConfig, E: Sequence) -> WindowMap:
    """Matrix of the restriction map: image on E as a function of input on EM."""
    u = s.universe
    cells = tuple(sorted({u.cell(e) for e in E}))
    if not cells:
        raise ContractViolation("window must be nonempty")
    dom = window_cells(cells, s.memory)
    col_index = {c: i for i, c in enumerate(dom)}
    k = u.k
    rows, cols = k * len(cells), k * len(dom)
    entries = [0] * (rows * cols)
    for gi, g in enumerate(cells):
        rule = s.rule_at(g)
        for m, mat in zip(rule.memory, rule.mats):
            if mat.is_zero():
                continue
            ci = col_index[cell_add(g, m)]
            for i in range(k):
                base = (gi * k + i) * cols + ci * k
                mrow = mat.row(i)
                for j in range(k):
                    entries[base + j] = mrow[j]
    return WindowMap(dom, cells, FieldMatrix(u.p, rows, cols, entries))


def apply_finsupp(s: RuleConfig, x: FinSuppConfig) -> FinSuppConfig:
    """Exact image of a finitely supported configuration."""
    u = s.universe
    if x.universe != u:
        raise ContractViolation("universe mismatch")
    targets = {cell_sub(c, m) for c in x.support for m in s.memory}
    out = {}
    for g in targets:
        v = evaluate_cell(s, x, g)
        if any(v):
            out[g] = v
    return FinSuppConfig(u, out)


def apply_evper(s: RuleConfig, x: EvPerConfig) -> EvPerConfig:
    """Exact image of an eventually periodic configuration (d = 1).

    The rule is constant outside a finite region and x is periodic outside
    its core, so the image is eventually periodic with computable core and
    period alignment.
    """
    u = s.universe
    if u.d != 1:
        raise UnsupportedDimension("apply_evper requires d = 1")
    if x.universe != u:
        raise ContractViolation("universe mismatch")
    lo_off, hi_off = s.memory.lo(), s.memory.hi()
    a, b = x.core_start, x.core_end
    if s.overrides:
        ov_cells = [g[0] for g in s.support]
        ov_min, ov_max = min(ov_cells), max(ov_cells)
    else:
        ov_min, ov_max = a, b
    zl = min(a - hi_off, ov_min)
    zr = max(b - lo_off, ov_max)
    lp, rp = len(x.left_period), len(x.right_period)
    A, B = zl - lp, zr + rp
    core = [evaluate_cell(s, x, (n,)) for n in range(A, B + 1)]
    left = [evaluate_cell(s, x, (n,)) for n in range(A - lp, A)]
    right = [evaluate_cell(s, x, (n,)) for n in range(B + 1, B + rp + 1)]
    return EvPerConfig(u, A, core, left, right)


def compose(s: RuleConfig, t: RuleConfig) -> RuleConfig:
    """Rule configuration of the composite map (apply t first, then s)."""
    u = s.universe
    if t.universe != u:
        raise ContractViolation("universe mismatch")
    mem = MemorySet(sorted({cell_add(m1, m2) for m1 in s.memory for m2 in t.memory}), d=u.d)
    zero = FieldMatrix.zeros(u.p, u.k, u.k)

    def coeff_at(g: Cell, rule_s: LocalRule) -> LocalRule:
        acc: dict[Cell, FieldMatrix] = {}
        for m, mat_s in zip(rule_s.memory, rule_s.mats):
            if mat_s.is_zero():
                continue
            inner = t.rule_at(cell_add(g, m))
            for m2, mat_t in zip(inner.memory, inner.mats):
                if mat_t.is_zero():
                    continue
                n = cell_add(m, m2)
                prod = mat_s.matmul(mat_t)
                acc[n] = acc.get(n, zero).add(prod)
        return LocalRule(mem, [acc.get(n, zero) for n in mem])

    # Cells whose composite rule can differ from the composite default.
    candidates = set(s.support)
    for c in t.support:
        for m in s.memory:
            candidates.add(cell_sub(c, m))
    far = _far_cell(u, s, t)
    default = coeff_at(far, s.default_rule)
    overrides = {g: coeff_at(g, s.rule_at(g)) for g in candidates}
    return RuleConfig(u, mem, default, overrides)


def _far_cell(u: Universe, *rules: RuleConfig) -> Cell:
    r = 1
    for s in rules:
        r += s.override_radius + s.memory.radius + 1
    return (r,) * u.d


def translate(s: RuleConfig, g) -> RuleConfig:
    """Shifted configuration: the override at c moves to c + g; default unchanged."""
    gc = s.universe.cell(g)
    return RuleConfig(s.universe, s.memory, s.default_rule,
                      {cell_add(c, gc): rule for c, rule in s.overrides})


def limit_representatives(s: RuleConfig) -> list[RuleConfig]:
    """Representatives of the orbit-closure classes of s.

    For a default-plus-finite-overrides configuration the closure of the
    translates adds exactly one constant class (the default tail) unless s
    is already constant.
    """
    if s.is_constant():
        return [s]
    return [s, s.constant_tail()]


def extensional_equal(a: RuleConfig, b: RuleConfig, radius: int) -> bool:
    """Do a and b act identically on every cell of the box [-radius, radius]^d?"""
    if a.universe != b.universe:
        return False
    for g in box_cells(a.universe.d, radius):
        if a.coeff_map_at(g) != b.coeff_map_at(g):
            return False
    return True


def identity_map_on_window(s: RuleConfig, radius: int) -> bool:
    k, p = s.universe.k, s.universe.p
    ident = FieldMatrix.identity(p, k)
    for g in box_cells(s.universe.d, radius):
        if s.coeff_map_at(g) != {g: ident}:
            return False
    return True


# ---------------------------------------------------------------------------
# Rule file schema (JSON). Offsets and cells are JSON lists used as keys in
# their compact json.dumps form, e.g. "[-1]" or "[0,1]"; matrices row-major.
# ---------------------------------------------------------------------------

def _cell_key(c: Cell) -> str:
    return json.dumps(list(c), separators=(",", ":"))


def _parse_cell_key(key: str, d: int, what: str) -> Cell:
    try:
        val = json.loads(key)
    except json.JSONDecodeError as e:
        raise RuleFormatError(f"bad {what} key {key!r}: {e}") from None
    if not isinstance(val, list) or len(val) != d or not all(isinstance(v, int) for v in val):
        raise RuleFormatError(f"{what} key {key!r} is not a {d}-tuple of integers")
    return tuple(val)


def _matrix_to_rows(mat: FieldMatrix) -> list[list[int]]:
    return mat.to_rows()


def _rule_to_obj(rule: LocalRule) -> dict:
    return {_cell_key(m): _matrix_to_rows(mat) for m, mat in zip(rule.memory, rule.mats)}


def serialize_rule(s: RuleConfig) -> str:
    """Canonical JSON text for a rule configuration (round-trips bit-exactly)."""
    obj = {
        "p": s.universe.p,
        "k": s.universe.k,
        "d": s.universe.d,
        "memory": [list(m) for m in s.memory],
        "default_rule": _rule_to_obj(s.default_rule),
        "overrides": {_cell_key(g): _rule_to_obj(rule) for g, rule in s.overrides},
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _parse_local_rule(obj, memory: MemorySet, universe: Universe, what: str) -> LocalRule:
    if not isinstance(obj, dict):
        raise RuleFormatError(f"{what} must be an object mapping offsets to matrices")
    coeffs = {}
    for key, rows in obj.items():
        m = _parse_cell_key(key, universe.d, f"{what} offset")
        if m not in memory:
            raise RuleFormatError(f"{what} offset {list(m)} is not in the memory set")
        if (not isinstance(rows, list) or len(rows) != universe.k
                or any(not isinstance(r, list) or len(r) != universe.k for r in rows)
                or any(not isinstance(v, int) for r in rows for v in r)):
            raise RuleFormatError(f"{what} matrix at {list(m)} must be a {universe.k}x{universe.k} integer matrix")
        coeffs[m] = FieldMatrix.from_rows(universe.p, rows)
    for m in memory:
        if m not in coeffs:
            raise RuleFormatError(f"{what} is missing the matrix for offset {list(m)}")
    return LocalRule.from_map(memory, coeffs, universe)


def parse_rule(text: str) -> RuleConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise RuleFormatError(f"invalid JSON: {e}") from None
    if not isinstance(obj, dict):
        raise RuleFormatError("rule file must be a JSON object")
    for field in ("p", "k", "d", "memory", "default_rule", "overrides"):
        if field not in obj:
            raise RuleFormatError(f"missing field {field!r}")
    try:
        universe = Universe(d=obj["d"], k=obj["k"], p=obj["p"])
    except ValueError as e:
        raise RuleFormatError(str(e)) from None
    mem_raw = obj["memory"]
    if (not isinstance(mem_raw, list) or not mem_raw
            or any(not isinstance(m, list) or len(m) != universe.d for m in mem_raw)
            or any(not isinstance(v, int) for m in mem_raw for v in m)):
        raise RuleFormatError("memory must be a nonempty list of offset tuples")
    try:
        memory = MemorySet([tuple(m) for m in mem_raw], d=universe.d)
    except ValueError as e:
        raise RuleFormatError(str(e)) from None
    default = _parse_local_rule(obj["default_rule"], memory, universe, "default_rule")
    if not isinstance(obj["overrides"], dict):
        raise RuleFormatError("overrides must be an object")
    overrides = {}
    for key, rule_obj in obj["overrides"].items():
        g = _parse_cell_key(key, universe.d, "override cell")
        overrides[g] = _parse_local_rule(rule_obj, memory, universe, f"override {key}")
    return RuleConfig(universe, memory, default, overrides)


def rule_digest(s: RuleConfig) -> str:
    return hashlib.sha256(serialize_rule(s).encode("utf-8")).hexdigest()[:16]
