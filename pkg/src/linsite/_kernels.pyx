# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction over F_p."""

from libc.stdlib cimport malloc, free


cdef long long _inv(long long a, long long p):
    cdef long long result = 1
    cdef long long e = p - 2
    a %= p
    while e > 0:
        if e & 1:
            result = (result * a) % p
        a = (a * a) % p
        e >>= 1
    return result


def rref_modp(rows, Py_ssize_t ncols, long long p):
    """Reduce a matrix over F_p to reduced row echelon form.

    Same contract as the pure-Python fallback: leftmost pivot column,
    first nonzero row, returns ``(basis_rows, pivots)``.
    """
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, r, col, piv
    cdef long long c, lead, inv, x
    cdef long long *a
    cdef long long *tmp
    if nrows == 0 or ncols == 0:
        return [], []
    a = <long long *> malloc(nrows * ncols * sizeof(long long))
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                x = row[j] % p
                if x < 0:
                    x += p
                a[i * ncols + j] = x
        pivots = []
        r = 0
        for col in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if a[i * ncols + col] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    x = a[r * ncols + j]
                    a[r * ncols + j] = a[piv * ncols + j]
                    a[piv * ncols + j] = x
            lead = a[r * ncols + col]
            if lead != 1:
                inv = _inv(lead, p)
                for j in range(col, ncols):
                    a[r * ncols + j] = (a[r * ncols + j] * inv) % p
            for i in range(nrows):
                if i == r:
                    continue
                c = a[i * ncols + col]
                if c != 0:
                    for j in range(col, ncols):
                        x = (a[i * ncols + j] - c * a[r * ncols + j]) % p
                        if x < 0:
                            x += p
                        a[i * ncols + j] = x
            pivots.append(col)
            r += 1
        out = [[a[i * ncols + j] for j in range(ncols)] for i in range(r)]
        return out, pivots
    finally:
        free(a)
