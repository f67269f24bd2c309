"""Exact integer linear algebra.

Matrices are row-major lists of lists of Python ints (arbitrary precision).
Functions never mutate their arguments.  Stored matrices elsewhere in the
package are frozen to tuples of tuples with :func:`freeze`.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

Matrix = list[list[int]]
FrozenMatrix = tuple[tuple[int, ...], ...]


def freeze(a: Sequence[Sequence[int]]) -> FrozenMatrix:
    return tuple(tuple(int(x) for x in row) for row in a)


def thaw(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(row) for row in a]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def shape(a: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, int]:
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    return m, n


def transpose(a: Sequence[Sequence[int]], ncols: int = 0) -> Matrix:
    m, n = shape(a, ncols)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    m = len(a)
    k = len(b)
    n = len(b[0]) if k else 0
    if m and len(a[0]) != k:
        raise ValueError(f"shape mismatch: {m}x{len(a[0])} @ {k}x{n}")
    bt = transpose(b, n)
    return [[sum(x * y for x, y in zip(row, col) if x and y) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v) if x and y) for row in a]


def chain(*mats: Sequence[Sequence[int]]) -> Matrix:
    out = thaw(mats[0])
    for m in mats[1:]:
        out = matmul(out, m)
    return out


def column(a: Sequence[Sequence[int]], j: int) -> list[int]:
    return [row[j] for row in a]


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    return [[c[i] for c in cols] for i in range(nrows)]


def is_zero(a: Sequence[Sequence[int]]) -> bool:
    return all(x == 0 for row in a for x in row)


def block_diag(*blocks: Sequence[Sequence[int]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return out


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = thaw(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _swap_rows(m: Matrix, i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: Matrix, i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m: Matrix, src: int, dst: int, q: int) -> None:
    # row[dst] += q * row[src]
    rs, rd = m[src], m[dst]
    for k, x in enumerate(rs):
        if x:
            rd[k] += q * x


def _add_col(m: Matrix, src: int, dst: int, q: int) -> None:
    for row in m:
        if row[src]:
            row[dst] += q * row[src]


def smith_normal_form(a: Sequence[Sequence[int]], ncols: int = 0) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, P, Q)`` with ``P @ a @ Q == D``.

    ``P`` and ``Q`` are unimodular, ``D`` is diagonal with non-negative
    entries ``d_1 | d_2 | ...`` followed by zeros.  The elimination order is
    fixed (smallest pivot, first occurrence), so the output is deterministic.
    """
    m, n = shape(a, ncols)
    d = thaw(a) if m else []
    p = identity(m)
    q = identity(n)
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            _swap_rows(d, i, t)
            _swap_rows(p, i, t)
        if j != t:
            _swap_cols(d, j, t)
            _swap_cols(q, j, t)
        while True:
            piv = d[t][t]
            clean = True
            for i in range(t + 1, m):
                if d[i][t]:
                    f = d[i][t] // piv
                    _add_row(d, t, i, -f)
                    _add_row(p, t, i, -f)
                    if d[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if d[t][j]:
                    f = d[t][j] // piv
                    _add_col(d, t, j, -f)
                    _add_col(q, t, j, -f)
                    if d[t][j]:
                        clean = False
            if not clean:
                # a smaller remainder appeared in row/column t: make it the pivot
                bi, bj = t, t
                for i in range(t + 1, m):
                    if d[i][t] and abs(d[i][t]) < abs(d[bi][bj]):
                        bi, bj = i, t
                for j in range(t + 1, n):
                    if d[t][j] and abs(d[t][j]) < abs(d[bi][bj]):
                        bi, bj = t, j
                if bi != t:
                    _swap_rows(d, bi, t)
                    _swap_rows(p, bi, t)
                if bj != t:
                    _swap_cols(d, bj, t)
                    _swap_cols(q, bj, t)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _add_row(d, bad, t, 1)
            _add_row(p, bad, t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            p[t] = [-x for x in p[t]]
        t += 1
    return d, p, q


def diagonal(d: Sequence[Sequence[int]]) -> list[int]:
    return [d[i][i] for i in range(min(shape(d)))]


def rank(a: Sequence[Sequence[int]], ncols: int = 0) -> int:
    d, _, _ = smith_normal_form(a, ncols)
    return sum(1 for x in diagonal(d) if x)


def invariant_factors(a: Sequence[Sequence[int]], ncols: int = 0) -> list[int]:
    d, _, _ = smith_normal_form(a, ncols)
    return [x for x in diagonal(d) if x]


def unimodular_inverse(a: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a matrix with determinant +-1."""
    n = len(a)
    d, p, q = smith_normal_form(a)
    if any(d[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    # P a Q = I  =>  a^-1 = Q P
    return matmul(q, p)


def kernel_basis(a: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of the saturated lattice ``{x in Z^n : a x = 0}`` as column vectors."""
    d, _, q = smith_normal_form(a, ncols)
    r = sum(1 for x in diagonal(d) if x) if a else 0
    return [column(q, j) for j in range(r, ncols)]


def solve_integral(a: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> list[int] | None:
    """An integer solution of ``a x = b``, or ``None`` if there is none."""
    m, n = shape(a, ncols)
    if m == 0:
        return [0] * n
    d, p, q = smith_normal_form(a, n)
    pb = matvec(p, b)
    y = [0] * n
    for i in range(m):
        di = d[i][i] if i < n else 0
        if di == 0:
            if pb[i] != 0:
                return None
        else:
            if pb[i] % di:
                return None
            y[i] = pb[i] // di
    return matvec(q, y)


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """A basis of the lattice spanned by ``vectors``.

    Zero vectors are dropped; if the rest are already independent they are
    returned unchanged, otherwise a reduced basis is computed.
    """
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    mat = from_columns(vecs, dim)
    d, p, q = smith_normal_form(mat, len(vecs))
    diag = diagonal(d)
    r = sum(1 for x in diag if x)
    if r == len(vecs):
        return vecs
    pinv = unimodular_inverse(p)
    return [[pinv[i][k] * diag[k] for i in range(dim)] for k in range(r)]


def ext_gcd_list(values: Sequence[int]) -> tuple[int, list[int]]:
    """Return ``(g, coeffs)`` with ``sum(c*v) == g == gcd(values) >= 0``."""
    g = 0
    coeffs = [0] * len(values)
    for idx, v in enumerate(values):
        if v == 0:
            continue
        # g*x + v*y = gcd(g, v)
        old_r, r = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            qt = old_r // r
            old_r, r = r, old_r - qt * r
            old_s, s = s, old_s - qt * s
            old_t, t = t, old_t - qt * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [c * old_s for c in coeffs]
        coeffs[idx] = old_t
        g = old_r
    return g, coeffs


def standard_symplectic_form(genus: int) -> Matrix:
    """Block form pairing ``a_i`` with ``b_i`` in the order a1, b1, ..., ag, bg."""
    j = zeros(2 * genus, 2 * genus)
    for i in range(genus):
        j[2 * i][2 * i + 1] = 1
        j[2 * i + 1][2 * i] = -1
    return j


def pairing(form: Sequence[Sequence[int]], u: Sequence[int], v: Sequence[int]) -> int:
    return sum(ui * x * vj for ui, row in zip(u, form) if ui for x, vj in zip(row, v) if x and vj)


def is_antisymmetric(form: Sequence[Sequence[int]]) -> bool:
    n = len(form)
    return all(form[i][j] == -form[j][i] for i in range(n) for j in range(n))


def is_symplectic(m: Sequence[Sequence[int]], form: Sequence[Sequence[int]]) -> bool:
    return chain(transpose(m), form, m) == thaw(form)


def symplectic_basis(form: Sequence[Sequence[int]]) -> Matrix:
    """Change of basis ``S`` with ``S^T form S`` the standard symplectic form.

    ``form`` must be antisymmetric and unimodular.  Columns of ``S`` are the
    new basis vectors a1, b1, a2, b2, ... in old coordinates.  An already
    standard form yields the identity.
    """
    n = len(form)
    if n % 2 or not is_antisymmetric(form) or abs(determinant(form)) != 1:
        raise ValueError("form is not antisymmetric unimodular")
    vecs = [column(identity(n), j) for j in range(n)]
    out: list[list[int]] = []
    while vecs:
        e = vecs[0]
        f = None
        for v in vecs[1:]:
            pv = pairing(form, e, v)
            if pv in (1, -1):
                f = v if pv == 1 else [-x for x in v]
                break
        if f is None:
            g, coeffs = ext_gcd_list([pairing(form, e, v) for v in vecs])
            if g != 1:
                raise ValueError("form is not unimodular on the complement")
            f = [sum(c * v[i] for c, v in zip(coeffs, vecs)) for i in range(n)]
        out.append(e)
        out.append(f)
        rest = []
        for v in vecs[1:]:
            vf = pairing(form, v, f)
            ve = pairing(form, v, e)
            rest.append([x - vf * ei + ve * fi for x, ei, fi in zip(v, e, f)])
        vecs = lattice_basis(rest, n)
    return from_columns(out, n)


def transvection_matrix(c: Sequence[int], form: Sequence[Sequence[int]], power: int = 1) -> Matrix:
    """Matrix of ``x -> x + power * <x, c> c``."""
    n = len(c)
    # <x, c> = x^T J c, so the matrix is I + power * c (J c)^T
    jc = matvec(form, c)
    out = identity(n)
    for i in range(n):
        if c[i]:
            for j in range(n):
                if jc[j]:
                    out[i][j] += power * c[i] * jc[j]
    return out
