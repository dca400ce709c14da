"""Dense matrices over GF(p): rank, kernel, affine solving, transpose.

Entries are machine ints in [0, p), reduced after every multiply; p is a
prime below 2**16. Elimination uses first-nonzero pivoting, so every
result is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import nucalab.gf as _gf_pkg  # backend indirection, resolved lazily


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def validate_modulus(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p!r}")
    if p >= 1 << 16:
        raise ValueError(f"modulus must be < 2**16, got {p}")
    return p


class FieldMatrix:
    """Immutable rows x cols matrix over GF(p), row-major entries."""

    __slots__ = ("p", "rows", "cols", "entries")

    def __init__(self, p: int, rows: int, cols: int, entries: Iterable[int]):
        validate_modulus(p)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        ent = tuple(int(v) % p for v in entries)
        if len(ent) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(ent)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable")

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FieldMatrix":
        return cls(p, rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, p: int, n: int) -> "FieldMatrix":
        ent = [0] * (n * n)
        for i in range(n):
            ent[i * n + i] = 1
        return cls(p, n, n, ent)

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]]) -> "FieldMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        flat: list[int] = []
        for row in rows:
            if len(row) != nc:
                raise ValueError("ragged rows")
            flat.extend(row)
        return cls(p, nr, nc, flat)

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "FieldMatrix":
        ent = [0] * (self.rows * self.cols)
        for i in range(self.rows):
            base = i * self.cols
            for j in range(self.cols):
                ent[j * self.rows + i] = self.entries[base + j]
        return FieldMatrix(self.p, self.cols, self.rows, ent)

    def matmul(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        flat = _gf_pkg.matmul_flat(self.entries, self.rows, self.cols, other.entries, other.cols, self.p)
        return FieldMatrix(self.p, self.rows, other.cols, flat)

    __matmul__ = matmul

    def mat_vec(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        p = self.p
        out = []
        for i in range(self.rows):
            base = i * self.cols
            acc = 0
            for j, v in enumerate(vec):
                if v:
                    acc += self.entries[base + j] * v
            out.append(acc % p)
        return tuple(out)

    def add(self, other: "FieldMatrix") -> "FieldMatrix":
        if (self.p, self.rows, self.cols) != (other.p, other.rows, other.cols):
            raise ValueError("shape or modulus mismatch")
        p = self.p
        return FieldMatrix(p, self.rows, self.cols,
                           [(a + b) % p for a, b in zip(self.entries, other.entries)])

    def scale(self, c: int) -> "FieldMatrix":
        p = self.p
        c %= p
        return FieldMatrix(p, self.rows, self.cols, [v * c % p for v in self.entries])

    def is_zero(self) -> bool:
        return not any(self.entries)

    def rref(self) -> tuple["FieldMatrix", tuple[int, ...]]:
        flat, pivots = _gf_pkg.rref_flat(self.entries, self.rows, self.cols, self.p)
        return FieldMatrix(self.p, self.rows, self.cols, flat), tuple(pivots)

    def rank(self) -> int:
        _, pivots = _gf_pkg.rref_flat(self.entries, self.rows, self.cols, self.p)
        return len(pivots)

    def kernel_basis(self) -> list[tuple[int, ...]]:
        """Basis of the right null space, one vector per free column.

        Each vector carries a 1 at its own free column and 0 at every
        other free column, so the basis is canonical and reproducible.
        """
        red, pivots = self.rref()
        p = self.p
        pivot_set = set(pivots)
        free_cols = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for fc in free_cols:
            v = [0] * self.cols
            v[fc] = 1
            for i, pc in enumerate(pivots):
                v[pc] = (-red.entry(i, fc)) % p
            basis.append(tuple(v))
        return basis

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldMatrix)
                and self.p == other.p and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.p, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"FieldMatrix(p={self.p}, {self.rows}x{self.cols}, {self.to_rows()})"


@dataclass(frozen=True)
class AffineSolution:
    """Solution set of A x = b: one particular solution (or None) plus a kernel basis."""

    particular: tuple[int, ...] | None
    kernel_basis: tuple[tuple[int, ...], ...]

    @property
    def solvable(self) -> bool:
        return self.particular is not None


def solve_affine(a: FieldMatrix, b: Sequence[int]) -> AffineSolution:
    """Solve A x = b over GF(p).

    The particular solution sets every free variable to zero (first
    solution in lexicographic free-variable order), so repeated calls
    are reproducible.
    """
    if len(b) != a.rows:
        raise ValueError(f"rhs length {len(b)} does not match {a.rows} rows")
    p = a.p
    aug_entries: list[int] = []
    for i in range(a.rows):
        aug_entries.extend(a.row(i))
        aug_entries.append(int(b[i]) % p)
    aug = FieldMatrix(p, a.rows, a.cols + 1, aug_entries)
    red, pivots = aug.rref()
    kernel = tuple(a.kernel_basis())
    if a.cols in pivots:
        return AffineSolution(particular=None, kernel_basis=kernel)
    x = [0] * a.cols
    for i, pc in enumerate(pivots):
        x[pc] = red.entry(i, a.cols)
    return AffineSolution(particular=tuple(x), kernel_basis=kernel)


def mat_rank(m: FieldMatrix) -> int:
    return m.rank()


def kernel_basis(m: FieldMatrix) -> list[tuple[int, ...]]:
    return m.kernel_basis()


def transpose(m: FieldMatrix) -> FieldMatrix:
    return m.transpose()
