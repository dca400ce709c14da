# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels over GF(p).

Same contracts as nucalab.gf._kernels_py; outputs are bit-identical
(the reduced row-echelon form is canonical).
"""

from libc.stdlib cimport malloc, free


cdef inline long long _inv_mod(long long a, long long p) nogil:
    # Fermat inverse; p prime and < 2**16 so products fit comfortably in 64 bits.
    cdef long long result = 1
    cdef long long base = a % p
    cdef long long e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def rref_flat(entries, long long rows, long long cols, long long p):
    """Reduced row-echelon form with first-nonzero pivoting; returns (flat, pivots)."""
    if rows == 0 or cols == 0:
        return list(entries), []

    cdef long long n = rows * cols
    cdef long long* a = <long long*> malloc(n * sizeof(long long))
    if a == NULL:
        raise MemoryError()
    cdef long long i, r, c, col, found, pivot_row, f, inv, tmp
    cdef long long pb, rb
    try:
        for i in range(n):
            a[i] = entries[i]
        pivots = []
        pivot_row = 0
        for col in range(cols):
            found = -1
            for r in range(pivot_row, rows):
                if a[r * cols + col] != 0:
                    found = r
                    break
            if found < 0:
                continue
            if found != pivot_row:
                pb = pivot_row * cols
                rb = found * cols
                for c in range(cols):
                    tmp = a[pb + c]
                    a[pb + c] = a[rb + c]
                    a[rb + c] = tmp
            pb = pivot_row * cols
            inv = _inv_mod(a[pb + col], p)
            if inv != 1:
                for c in range(col, cols):
                    a[pb + c] = a[pb + c] * inv % p
            for r in range(rows):
                if r == pivot_row:
                    continue
                rb = r * cols
                f = a[rb + col]
                if f != 0:
                    for c in range(col, cols):
                        a[rb + c] = (a[rb + c] - f * a[pb + c]) % p
                        if a[rb + c] < 0:
                            a[rb + c] += p
            pivots.append(col)
            pivot_row += 1
            if pivot_row == rows:
                break
        out = [0] * n
        for i in range(n):
            out[i] = a[i]
        return out, pivots
    finally:
        free(a)


def matmul_flat(a_in, long long ar, long long ac, b_in, long long bc, long long p):
    """Flat row-major product of an ar*ac and an ac*bc matrix mod p."""
    cdef long long* a = <long long*> malloc(max(ar * ac, 1) * sizeof(long long))
    cdef long long* b = <long long*> malloc(max(ac * bc, 1) * sizeof(long long))
    cdef long long* o = <long long*> malloc(max(ar * bc, 1) * sizeof(long long))
    if a == NULL or b == NULL or o == NULL:
        if a != NULL:
            free(a)
        if b != NULL:
            free(b)
        if o != NULL:
            free(o)
        raise MemoryError()
    cdef long long i, j, l, f
    try:
        for i in range(ar * ac):
            a[i] = a_in[i]
        for i in range(ac * bc):
            b[i] = b_in[i]
        for i in range(ar * bc):
            o[i] = 0
        for i in range(ar):
            for l in range(ac):
                f = a[i * ac + l]
                if f != 0:
                    for j in range(bc):
                        o[i * bc + j] = (o[i * bc + j] + f * b[l * bc + j]) % p
        out = [0] * (ar * bc)
        for i in range(ar * bc):
            out[i] = o[i]
        return out
    finally:
        free(a)
        free(b)
        free(o)
