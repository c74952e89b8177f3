"""Reference computations that share no code with the package's linear algebra.

Everything here works on lists of ``Fraction`` and is only meant for tiny inputs.
"""
from fractions import Fraction
import itertools


def to_frac(x) -> Fraction:
    return x if isinstance(x, (int, Fraction)) else Fraction(str(x))


def frac_rref(rows):
    m = [[to_frac(x) for x in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def frac_rank(rows) -> int:
    return len(frac_rref(rows)[1]) if rows else 0


def frac_nullity(rows, ncols) -> int:
    return ncols - (frac_rank(rows) if rows else 0)


def matmul(a, b):
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


# -- Hochschild homology of Q[eps] through the periodic resolution ---------------------

def dual_numbers_s_multiplication(sign):
    """Matrix of multiplication by ``x(x)1 + sign 1(x)x`` on ``S = Q[x,y]/(x^2, y^2)``.

    Basis order 1, y, x, xy (that is, 1(x)1, 1(x)x, x(x)1, x(x)x).
    """
    # x*1 = x, x*y = xy, x*x = 0, x*xy = 0 ; y*1 = y, y*x = xy, others 0
    mx = [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]]
    my = [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0]]
    return [[a + sign * b for a, b in zip(ra, rb)] for ra, rb in zip(mx, my)]


def dual_numbers_periodic_resolution_exact(length: int) -> bool:
    """``S <- S <- S ...`` with alternating ``x(x)1 -+ 1(x)x`` is exact in degrees 1..length-1."""
    d = {i: dual_numbers_s_multiplication(-1 if i % 2 else 1) for i in range(1, length + 1)}
    for i in range(1, length):
        if any(any(v for v in r) for r in matmul(d[i], d[i + 1])):
            return False
        if 4 - frac_rank(d[i]) != frac_rank(d[i + 1]):
            return False
    # augmentation S -> A has kernel of dim 2 = image of d_1
    return frac_rank(d[1]) == 2


def dual_numbers_hochschild(cutoff: int) -> dict:
    """Tensor the periodic resolution with the diagonal: ``S (x)_S A = A`` with basis 1, x.

    ``x(x)1 - 1(x)x`` acts as 0 and ``x(x)1 + 1(x)x`` as 2x.
    """
    zero = [[0, 0], [0, 0]]
    two_x = [[0, 0], [2, 0]]
    d = {i: (zero if i % 2 else two_x) for i in range(1, cutoff + 2)}
    dims = {}
    for i in range(cutoff + 1):
        rk_out = frac_rank(d[i]) if i >= 1 else 0
        rk_in = frac_rank(d[i + 1])
        dims[i] = 2 - rk_out - rk_in
    return dims


# -- Hom_S(Delta, S) by a direct linear solve ------------------------------------------

def hom_diag_to_s_dim(table, n) -> int:
    """``dim Hom_S(A, S)`` for ``S = A (x) A``, from a multiplication table alone.

    ``table[i][j]`` is the coefficient vector of ``b_i b_j``. Since ``A = S/I``
    with ``I`` the kernel of multiplication, the Hom space is the annihilator
    of ``I`` in ``S``.
    """
    N = n * n

    def s_mul(u, v):
        out = [Fraction(0)] * N
        for (i, j), (k, l) in itertools.product(itertools.product(range(n), repeat=2), repeat=2):
            c = u[i * n + j] * v[k * n + l]
            if c == 0:
                continue
            for p, a in enumerate(table[i][k]):
                if a == 0:
                    continue
                for q, b in enumerate(table[j][l]):
                    if b:
                        out[p * n + q] += c * a * b
        return out

    # multiplication S -> A: b_i (x) b_j |-> b_i b_j
    mult = [[Fraction(table[i][j][p]) for i in range(n) for j in range(n)] for p in range(n)]
    reduced, pivots = frac_rref(mult)
    free = [c for c in range(N) if c not in pivots]
    ideal = []
    for f in free:
        v = [Fraction(0)] * N
        v[f] = Fraction(1)
        for r, p in zip(reduced, pivots):
            v[p] = -r[f]
        ideal.append(v)
    # unknown s; equations s * g = 0 for each generator g of I, linear in s
    rows = []
    units = [[Fraction(int(a == b)) for b in range(N)] for a in range(N)]
    for g in ideal:
        images = [s_mul(e, g) for e in units]
        rows.extend([images[a][c] for a in range(N)] for c in range(N))
    return frac_nullity(rows, N) if rows else N


def table_of(a):
    n = a.dim
    return [[[to_frac(x) for x in a.basis_product(i, j)] for j in range(n)] for i in range(n)]
