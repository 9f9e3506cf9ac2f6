"""Pure-Python row reduction over F_p, used when the compiled kernel is missing."""


def rref_modp(rows, ncols, p):
    """Reduce a matrix over F_p to reduced row echelon form.

    Pivots are chosen in the leftmost nonzero column, using the first row
    with a nonzero entry there.

    Args:
        rows: List of rows, each a list of ints.
        ncols: Number of columns.
        p: The prime modulus.

    Returns:
        A pair ``(basis_rows, pivots)`` where ``basis_rows`` are the nonzero
        rows of the reduced form and ``pivots`` their pivot columns.
    """
    a = [[x % p for x in row] for row in rows]
    nrows = len(a)
    pivots = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        lead = prow[col]
        if lead != 1:
            inv = pow(lead, p - 2, p)
            prow = [(x * inv) % p for x in prow]
            a[r] = prow
        for i in range(nrows):
            if i != r:
                row = a[i]
                c = row[col]
                if c:
                    a[i] = [(x - c * y) % p for x, y in zip(row, prow)]
        pivots.append(col)
        r += 1
    return a[:r], pivots
