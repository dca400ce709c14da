"""Dual rule configurations, the natural pairing, and structural identity checks.

The dual of a configuration s has memory -M and coefficients
s*(g, m) = s(g + m, -m)^T; the dual alphabet V* is identified with V
through the standard basis, so covectors are stored as plain vectors and
the pairing is the dot product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

from nucalab.core import (
    ContractViolation,
    EvPerConfig,
    FinSuppConfig,
    LocalRule,
    MemorySet,
    RuleConfig,
    apply_finsupp,
    cell_add,
    cell_neg,
    compose,
)
from nucalab.gf import FieldMatrix


def _dual_rule_at(s: RuleConfig, g, dual_mem: MemorySet) -> LocalRule:
    zero = FieldMatrix.zeros(s.universe.p, s.universe.k, s.universe.k)
    mats = []
    for m in dual_mem:
        mat = s.coeff(cell_add(g, m), cell_neg(m))
        mats.append(mat.transpose() if mat is not None else zero)
    return LocalRule(dual_mem, mats)


def dual_config(s: RuleConfig) -> RuleConfig:
    """Adjoint configuration: memory -M, transposed and reflected coefficients.

    Overrides equal to the dual default are pruned, which makes taking the
    dual twice a structural identity.
    """
    dual_mem = s.memory.negated()
    far = (1 + s.override_radius + s.memory.radius,) * s.universe.d
    default = _dual_rule_at(s, far, dual_mem)
    candidates = {cell_add(c, m) for c in s.support for m in s.memory}
    overrides = {g: _dual_rule_at(s, g, dual_mem) for g in candidates}
    return RuleConfig(s.universe, dual_mem, default, overrides)


def check_involution(s: RuleConfig) -> bool:
    """Taking the dual twice returns the original configuration exactly."""
    return dual_config(dual_config(s)) == s


def pairing(omega: FinSuppConfig, c) -> int:
    """Sum over the support of omega of the dot product omega(g) . c(g)."""
    if not isinstance(c, (FinSuppConfig, EvPerConfig)):
        raise ContractViolation("second pairing argument must be a configuration")
    p = omega.universe.p
    acc = 0
    for g, w in omega.values:
        v = c.value(g)
        acc += sum(a * b for a, b in zip(w, v))
    return acc % p


def check_adjointness(s: RuleConfig, omega: FinSuppConfig, c: FinSuppConfig) -> bool:
    """Pairing the dual image of omega with c equals pairing omega with the image of c."""
    lhs = pairing(apply_finsupp(dual_config(s), omega), c)
    rhs = pairing(omega, apply_finsupp(s, c))
    return lhs == rhs


def check_functoriality(s: RuleConfig, t: RuleConfig) -> bool:
    """dual(s after t) equals dual(t) after dual(s), entrywise on the product memory."""
    return dual_config(compose(s, t)) == compose(dual_config(t), dual_config(s))


@dataclass
class OrthogonalityReport:
    kernel_pairs_checked: int = 0
    image_pairs_checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_orthogonality(s: RuleConfig, samples: int = 20, rng: Random | None = None,
                        window: int | None = None) -> OrthogonalityReport:
    """Sample-based test of the kernel/image orthogonality relations.

    Finitely supported kernel elements of s must pair to zero with every
    finite image of the dual; finitely supported kernel elements of the
    dual must pair to zero with every finite image of s. Violations are
    collected (a nonempty list would refute exactness of the arithmetic).
    """
    from nucalab.analysis import finite_support_kernel_basis

    rng = rng or Random(0)
    u = s.universe
    dual = dual_config(s)
    if window is None:
        window = s.override_radius + s.memory.radius + 2
    report = OrthogonalityReport()

    def random_combo(basis):
        out = FinSuppConfig.zero(u)
        for z in basis:
            out = out.add(z.scale(rng.randrange(u.p)))
        return out

    from nucalab.examples import random_finsupp

    kernel_s = finite_support_kernel_basis(s, window)
    for _ in range(samples):
        z = random_combo(kernel_s) if kernel_s else FinSuppConfig.zero(u)
        w = random_finsupp(rng, u)
        omega = apply_finsupp(dual, w)
        report.kernel_pairs_checked += 1
        if pairing(omega, z) != 0:
            report.violations.append(("kernel-vs-dual-image", z, omega))

    kernel_dual = finite_support_kernel_basis(dual, window)
    for _ in range(samples):
        omega = random_combo(kernel_dual) if kernel_dual else FinSuppConfig.zero(u)
        x = random_finsupp(rng, u)
        report.image_pairs_checked += 1
        if pairing(omega, apply_finsupp(s, x)) != 0:
            report.violations.append(("dual-kernel-vs-image", omega, x))

    return report
