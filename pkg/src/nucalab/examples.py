"""Named rule configurations used across tests, the CLI demo suite and docs."""

from __future__ import annotations

from itertools import product
from random import Random

from nucalab.core import (
    EvPerConfig,
    FieldMatrix,
    FinSuppConfig,
    LocalRule,
    MemorySet,
    RuleConfig,
    Universe,
)


def identity_rule(p: int = 2, k: int = 1, d: int = 1) -> RuleConfig:
    u = Universe(d=d, k=k, p=p)
    mem = MemorySet([(0,) * d])
    return RuleConfig(u, mem, LocalRule(mem, [FieldMatrix.identity(p, k)]))


def shift_rule(offset: int = -1, p: int = 2, k: int = 1) -> RuleConfig:
    """One-dimensional shift: output at n reads the cell n + offset."""
    u = Universe(d=1, k=k, p=p)
    mem = MemorySet([(offset,)])
    return RuleConfig(u, mem, LocalRule(mem, [FieldMatrix.identity(p, k)]))


def xor_rule(p: int = 2) -> RuleConfig:
    """Constant scalar rule x(n-1) + x(n): tail polynomial 1 + X."""
    u = Universe(d=1, k=1, p=p)
    mem = MemorySet([(-1,), (0,)])
    one = FieldMatrix.from_rows(p, [[1]])
    return RuleConfig(u, mem, LocalRule(mem, [one, one]))


def ex_s0(radius: int = 4) -> RuleConfig:
    """The bijectivity counterexample rule, finite-override form.

    Default rule u + v (reads cells n-1 and n); cells -radius..0 instead
    copy their own value. Surjective and pre-injective, anchored-injective
    near the boundary, but not post-surjective and not stably injective.
    """
    u = Universe(d=1, k=1, p=2)
    mem = MemorySet([(-1,), (0,)])
    one = FieldMatrix.from_rows(2, [[1]])
    zero = FieldMatrix.from_rows(2, [[0]])
    g_rule = LocalRule(mem, [one, one])
    f_rule = LocalRule(mem, [zero, one])
    overrides = {(n,): f_rule for n in range(-radius, 1)}
    return RuleConfig(u, mem, g_rule, overrides)


def ex_s0_dual(radius: int = 4) -> RuleConfig:
    from nucalab.duality import dual_config

    return dual_config(ex_s0(radius))


def gf3_diagonal() -> RuleConfig:
    """GF(3) pointwise rule: default multiply by 1, cell 0 multiplies by 2."""
    u = Universe(d=1, k=1, p=3)
    mem = MemorySet([(0,)])
    default = LocalRule(mem, [FieldMatrix.from_rows(3, [[1]])])
    double = LocalRule(mem, [FieldMatrix.from_rows(3, [[2]])])
    return RuleConfig(u, mem, default, {(0,): double})


def kernel_witness_config(radius: int = 4) -> EvPerConfig:
    """The dual kernel witness: 0 on n <= -1, 1 on n >= 0."""
    u = Universe(d=1, k=1, p=2)
    return EvPerConfig(u, 0, [(1,)], [(0,)], [(1,)])


def random_rule(rng: Random, p: int = 2, k: int = 1, d: int = 1,
                mem_span: int = 2, max_overrides: int = 3,
                override_span: int = 3) -> RuleConfig:
    """Seeded random rule: memory inside [-mem_span, mem_span]^d, few overrides."""
    u = Universe(d=d, k=k, p=p)
    cells = [tuple(c) for c in product(range(-mem_span, mem_span + 1), repeat=d)]
    n_mem = rng.randint(1, min(3, len(cells)))
    mem = MemorySet(rng.sample(cells, n_mem), d=d)

    def rand_rule() -> LocalRule:
        mats = [
            FieldMatrix(p, k, k, [rng.randrange(p) for _ in range(k * k)])
            for _ in mem
        ]
        return LocalRule(mem, mats)

    override_cells = [tuple(c) for c in product(range(-override_span, override_span + 1), repeat=d)]
    n_over = rng.randint(0, max_overrides)
    overrides = {g: rand_rule() for g in rng.sample(override_cells, n_over)}
    return RuleConfig(u, mem, rand_rule(), overrides)


def random_finsupp(rng: Random, u: Universe, span: int = 4, max_cells: int = 4) -> FinSuppConfig:
    cells = [tuple(c) for c in product(range(-span, span + 1), repeat=u.d)]
    chosen = rng.sample(cells, rng.randint(0, max_cells))
    return FinSuppConfig(u, {g: tuple(rng.randrange(u.p) for _ in range(u.k)) for g in chosen})
