"""Pure-Python elimination kernels over GF(p).

Reference implementation for the compiled extension in ``nucalab._gfext``.
Both backends must be output-identical; the reduced row-echelon form is
canonical, so this holds by construction and is pinned by tests.

Matrices are flat row-major lists of ints already reduced mod p.
"""

from __future__ import annotations


def _rref_bits_gf2(entries: list[int], rows: int, cols: int) -> tuple[list[int], list[int]]:
    """GF(2) fast path: rows packed into Python ints, bit c = column c."""
    packed = []
    for r in range(rows):
        base = r * cols
        word = 0
        for c in range(cols):
            if entries[base + c]:
                word |= 1 << c
        packed.append(word)

    pivots: list[int] = []
    pivot_row = 0
    for col in range(cols):
        mask = 1 << col
        found = -1
        for r in range(pivot_row, rows):
            if packed[r] & mask:
                found = r
                break
        if found < 0:
            continue
        packed[pivot_row], packed[found] = packed[found], packed[pivot_row]
        word = packed[pivot_row]
        for r in range(rows):
            if r != pivot_row and packed[r] & mask:
                packed[r] ^= word
        pivots.append(col)
        pivot_row += 1
        if pivot_row == rows:
            break

    out = [0] * (rows * cols)
    for r in range(rows):
        word = packed[r]
        base = r * cols
        while word:
            c = (word & -word).bit_length() - 1
            out[base + c] = 1
            word &= word - 1
    return out, pivots


def rref_flat(entries, rows: int, cols: int, p: int) -> tuple[list[int], list[int]]:
    """Reduced row-echelon form with first-nonzero pivoting.

    Returns (flat RREF, pivot column indices). Pivots are normalized to one
    and eliminated above and below, so the output is the canonical RREF.
    """
    if rows == 0 or cols == 0:
        return list(entries), []
    if p == 2:
        return _rref_bits_gf2(list(entries), rows, cols)

    a = [list(entries[r * cols:(r + 1) * cols]) for r in range(rows)]
    pivots: list[int] = []
    pivot_row = 0
    for col in range(cols):
        found = -1
        for r in range(pivot_row, rows):
            if a[r][col]:
                found = r
                break
        if found < 0:
            continue
        a[pivot_row], a[found] = a[found], a[pivot_row]
        prow = a[pivot_row]
        inv = pow(prow[col], p - 2, p)
        if inv != 1:
            for c in range(col, cols):
                prow[c] = prow[c] * inv % p
        for r in range(rows):
            if r == pivot_row:
                continue
            f = a[r][col]
            if f:
                arow = a[r]
                for c in range(col, cols):
                    arow[c] = (arow[c] - f * prow[c]) % p
        pivots.append(col)
        pivot_row += 1
        if pivot_row == rows:
            break
    return [v for row in a for v in row], pivots


def matmul_flat(a, ar: int, ac: int, b, bc: int, p: int) -> list[int]:
    """Flat row-major product of an ar*ac and an ac*bc matrix mod p."""
    out = [0] * (ar * bc)
    for i in range(ar):
        abase = i * ac
        obase = i * bc
        for l in range(ac):
            f = a[abase + l]
            if f:
                bbase = l * bc
                for j in range(bc):
                    v = b[bbase + j]
                    if v:
                        out[obase + j] = (out[obase + j] + f * v) % p
    return out
