"""Independent oracles shared by the test modules; they only use the package for its value types."""

from fractions import Fraction
from itertools import product

from su2cert.operators import SquareMatrix


# groups ----------------------------------------------------------------

def all_abelian_groups(max_order):
    """Invariant-factor tuples d1 | d2 | ... of every abelian group of order <= max_order."""
    out = [()]

    def grow(prefix, prod_):
        last = prefix[-1] if prefix else 1
        d = max(2, last)
        while prod_ * d <= max_order:
            if d % last == 0:
                t = prefix + (d,)
                out.append(t)
                grow(t, prod_ * d)
            d += 1

    grow((), 1)
    return out


def brute_force_reducibles(factors):
    """Enumerate characters (identified with group elements) and pair chi with chi^-1."""
    elems = list(product(*[range(d) for d in factors]))
    seen = set()
    classes = rank = 0
    for v in elems:
        if v in seen:
            continue
        inv = tuple((-x) % d for x, d in zip(v, factors))
        seen.update({v, inv})
        classes += 1
        rank += 1 if inv == v else 2  # a point or a 2-sphere of conjugates
    return classes, rank


# polynomials over Q as coefficient lists (index = degree) ---------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, b):
    a = [Fraction(x) for x in _trim(a)]
    b = _trim(b)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        a = _trim(a)
        if not a:
            break
    return a


def _polygcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _polymod(a, b)
    return a


def _polydiv_exact(a, b):
    """Quotient of a by b over Z (b monic), asserting zero remainder."""
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        q[i] = a[i + len(b) - 1]
        for j, y in enumerate(b):
            a[i + j] -= q[i] * y
    assert not any(a), "inexact division"
    return q


_PHI: dict = {}


def cyclotomic_coeffs(d):
    """Phi_d from t^d - 1 = prod_{e | d} Phi_e, built bottom-up."""
    if d not in _PHI:
        num = [-1] + [0] * (d - 1) + [1]
        for e in range(1, d):
            if d % e == 0:
                num = _polydiv_exact(num, cyclotomic_coeffs(e))
        _PHI[d] = num
    return _PHI[d]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


_CANDIDATES: dict = {}


def _orders_up_to_degree(deg):
    """Every d with phi(d) <= deg; phi(d) >= sqrt(d/2) bounds the search."""
    if deg not in _CANDIDATES:
        _CANDIDATES[deg] = [d for d in range(1, 2 * deg * deg + 3)
                            if sum(1 for k in range(1, d + 1) if _gcd(k, d) == 1) <= deg]
    return _CANDIDATES[deg]


def _monic_remainder(a, b):
    """a mod b for integer lists with b monic."""
    a = list(a)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1]
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return any(a[:len(b) - 1])


def oracle_root_of_unity(coeffs):
    """Least d with Phi_d dividing p (t = 0 zeros stripped first)."""
    c = _trim(coeffs)
    while c and c[0] == 0:
        c = c[1:]
    deg = len(c) - 1
    if deg < 1:
        return None
    for d in _orders_up_to_degree(deg):
        phi = cyclotomic_coeffs(d)
        if len(phi) - 1 <= deg and not _monic_remainder(c, phi):
            return d
    return None


# matrices with a prescribed Jordan structure ----------------------------

def random_jordan_blocks(rng, max_size=8):
    """Blocks ('real', v, size) or ('rot', b, copies); spectrum in {0, +-2, +-4, +-2i, +-4i}."""
    blocks = []
    total = 0
    target = rng.randint(1, max_size)
    while total < target:
        room = max_size - total
        if room >= 2 and rng.random() < 0.35:
            copies = 2 if room >= 4 and rng.random() < 0.3 else 1
            blocks.append(("rot", rng.choice([2, 4]), copies))
            total += 2 * copies
        else:
            size = rng.randint(1, min(3, room))
            blocks.append(("real", rng.choice([0, 2, -2, 4, -4]), size))
            total += size
    if not any(b[0] == "real" for b in blocks):
        if total == max_size:
            blocks.pop()
        blocks.append(("real", rng.choice([0, 2, -2, 4, -4]), 1))
    return blocks


def _block_matrix(block):
    kind, v, size = block
    if kind == "real":
        return [[v if i == j else (1 if j == i + 1 else 0) for j in range(size)] for i in range(size)]
    n = 2 * size
    M = [[0] * n for _ in range(n)]
    for c in range(size):
        M[2 * c][2 * c + 1] = -v
        M[2 * c + 1][2 * c] = v
        if c + 1 < size:  # couple the copies so the block is not semisimple
            M[2 * c][2 * c + 2] = 1
            M[2 * c + 1][2 * c + 3] = 1
    return M


def _matmul(X, Y):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*Y)] for row in X]


def conjugate_jordan(rng, blocks):
    """P J P^-1 for a random unimodular P; returns the matrix and real generalized eigenspace dims."""
    mats = [_block_matrix(b) for b in blocks]
    n = sum(len(m) for m in mats)
    J = [[0] * n for _ in range(n)]
    off = 0
    for m in mats:
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                J[off + i][off + j] = x
        off += len(m)
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    Pinv = [row[:] for row in P]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        # P <- E P with E = I + c e_ij; P^-1 <- P^-1 E^-1
        P[i] = [a + c * b for a, b in zip(P[i], P[j])]
        for r in range(n):
            Pinv[r][j] -= c * Pinv[r][i]
    assert _matmul(P, Pinv) == [[int(i == j) for j in range(n)] for i in range(n)]
    A = SquareMatrix(_matmul(_matmul(P, J), Pinv))
    dims = {}
    for kind, v, size in blocks:
        if kind == "real":
            dims[Fraction(v)] = dims.get(Fraction(v), 0) + size
    return A, dims


def terms_equal(a, b):
    def canon(ts):
        return sorted((t.key(), t.q) for t in ts if not t.is_zero())
    return canon(a) == canon(b)


# spectral projection from explicit kernels -------------------------------

def _rref_nullspace(M):
    """Basis of {x : M x = 0} over Q by row reduction."""
    rows = [[Fraction(x) for x in r] for r in M]
    n = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def _inverse(M):
    n = len(M)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        lead = aug[c][c]
        aug[c] = [x / lead for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def kernel_projection(A_rows, own, rest):
    """
    Projection onto ker own(A) along ker rest(A), built from kernel bases and
    a change of basis; own and rest are the matrices own(A), rest(A) as rows.
    """
    K1, K2 = _rref_nullspace(own), _rref_nullspace(rest)
    n = len(A_rows)
    assert len(K1) + len(K2) == n
    B = [[v[i] for v in K1 + K2] for i in range(n)]
    D = [[Fraction(int(i == j and i < len(K1))) for j in range(n)] for i in range(n)]
    return _matmul(_matmul(B, D), _inverse(B))
