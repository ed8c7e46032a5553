"""Independent oracles used by the tests.

Nothing here calls the package's own higher-level machinery: quaternion
arithmetic is expanded from the defining relations, and the so(4,1)
reference realization gets its structure constants, Killing form, and
signature from a separate small implementation.
"""

from __future__ import annotations

from fractions import Fraction

# Quaternions as coefficient 4-tuples over the basis (1, i, j, k), with the
# products expanded from i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j.
_BASIS_PRODUCTS = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quat_mul(x, y):
    out = [Fraction(0)] * 4
    for a in range(4):
        if not x[a]:
            continue
        for b in range(4):
            if not y[b]:
                continue
            sign, unit = _BASIS_PRODUCTS[(a, b)]
            out[unit] += sign * x[a] * y[b]
    return tuple(out)


def unit(name: str):
    idx = {"1": 0, "i": 1, "j": 2, "k": 3}[name.lstrip("-")]
    sign = -1 if name.startswith("-") else 1
    return tuple(Fraction(sign if a == idx else 0) for a in range(4))


def right_mult_matrix(u: str):
    """Column a of the matrix is (basis_a) * u, expanded by quat_mul."""
    cols = [quat_mul(unit(b), unit(u)) for b in ("1", "i", "j", "k")]
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def left_mult_matrix(u: str):
    cols = [quat_mul(unit(u), unit(b)) for b in ("1", "i", "j", "k")]
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def matrix_power_order(mat, bound=24):
    n = len(mat)
    ident = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    acc = [row[:] for row in mat]
    for r in range(1, bound + 1):
        if acc == ident:
            return r
        acc = [
            [sum(acc[i][k] * mat[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
    return None


# -- so(4,1) reference realization --------------------------------------------


def so41_generators():
    """The ten 5x5 generators E_ab eta_bb - E_ba eta_aa for eta = diag(1,1,1,1,-1)."""
    eta = [1, 1, 1, 1, -1]
    gens = []
    for a in range(5):
        for b in range(a + 1, 5):
            mat = [[Fraction(0)] * 5 for _ in range(5)]
            mat[a][b] = Fraction(eta[b])
            mat[b][a] = Fraction(-eta[a])
            gens.append(mat)
    return gens


def _solve_exact(a, b):
    """Gaussian elimination with partial (first-nonzero) pivoting; None if
    inconsistent.  Independent of the package's linalg module."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [a[i][:] + [b[i]] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        f = aug[r][c]
        aug[r] = [x / f for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                g = aug[i][c]
                aug[i] = [x - g * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if aug[i][cols]:
            return None
    sol = [Fraction(0)] * cols
    for row_idx, c in enumerate(pivots):
        sol[c] = aug[row_idx][cols]
    return sol


def structure_constants(gens):
    """c with [X_i, X_j] = sum_k c[i][j][k] X_k, solved independently."""
    count = len(gens)
    size = len(gens[0])
    cols = [
        [gens[g][r][c] for g in range(count)]
        for r in range(size)
        for c in range(size)
    ]
    consts = [[None] * count for _ in range(count)]
    for i in range(count):
        for j in range(count):
            br = [
                [
                    sum(gens[i][r][k] * gens[j][k][c] for k in range(size))
                    - sum(gens[j][r][k] * gens[i][k][c] for k in range(size))
                    for c in range(size)
                ]
                for r in range(size)
            ]
            vec = [br[r][c] for r in range(size) for c in range(size)]
            sol = _solve_exact(cols, vec)
            assert sol is not None, "reference algebra failed to close"
            consts[i][j] = sol
    return consts


def killing_matrix(consts):
    count = len(consts)
    ad = []
    for i in range(count):
        mat = [[Fraction(0)] * count for _ in range(count)]
        for j in range(count):
            for k in range(count):
                mat[k][j] = consts[i][j][k]
        ad.append(mat)
    return [
        [
            sum(
                sum(ad[i][r][k] * ad[j][k][r] for k in range(count))
                for r in range(count)
            )
            for j in range(count)
        ]
        for i in range(count)
    ]


def symmetric_signature(mat):
    """Inertia by repeated completion of squares; independent implementation."""
    n = len(mat)
    m = [row[:] for row in mat]
    active = list(range(n))
    pos = neg = zero = 0
    while active:
        pivot = next((i for i in active if m[i][i]), None)
        if pivot is None:
            found = None
            for i in active:
                for j in active:
                    if i < j and m[i][j]:
                        found = (i, j)
                        break
                if found:
                    break
            if found is None:
                zero += len(active)
                break
            i, j = found
            for c in range(n):
                m[i][c] = m[i][c] + m[j][c]
            for r in range(n):
                m[r][i] = m[r][i] + m[r][j]
            pivot = i
        d = m[pivot][pivot]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        for i in active:
            if m[i][pivot]:
                factor = m[i][pivot] / d
                for c in range(n):
                    m[i][c] = m[i][c] - factor * m[pivot][c]
                for r in range(n):
                    m[r][i] = m[r][i] - factor * m[r][pivot]
    return pos, neg, zero


def so41_killing_signature():
    consts = structure_constants(so41_generators())
    kill = killing_matrix(consts)
    return symmetric_signature(kill), kill
