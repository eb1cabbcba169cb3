"""Finite-field model of B_n(K) \\ G_n(K) / G_n(F).

K/F is replaced by F_{q^2}/F_q (q odd) with sigma the q-power Frobenius and
delta the least-code element with delta^sigma = -delta (so delta^2 is a
nonsquare of F_q).  Matrices are numpy arrays of field codes.

S = {M : M M^sigma = 1} is the image of g -> g^sigma g^-1, and B acts on it by
b . s = b^sigma s b^-1.  Every orbit contains exactly one permutation matrix
of order <= 2; ``reduce_to_involution`` finds it constructively.
"""

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from math import prod

import numpy
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import weyl
from .ffield import SingularMatrixError, field, prime_power

MAX_ENUM_N = 3
ENUM_BUDGET = 2 * 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


class OrbitAnomaly(AssertionError):
    pass


class ReductionAnomaly(AssertionError):
    pass


class QuadraticResidueModel:
    """F_{q^2} over F_q with Frobenius sigma and the element delta."""

    def __init__(self, q):
        p, f = prime_power(q)
        if p == 2:
            raise ValueError("q must be odd")
        self.q, self.p, self.f = q, p, f
        self.k = field(p, 2 * f)
        k = self.k
        self.sigma_t = k.frobenius_table(f)
        codes = numpy.arange(k.order)
        self.subfield = codes[self.sigma_t == codes]
        self.delta = int(next(x for x in codes[1:] if self.sigma_t[x] == k.neg_t[x]))
        self.delta_sq = int(k.mul_t[self.delta, self.delta])
        self.two = int(k.add_t[1, 1])

    def __repr__(self):
        return "QuadraticResidueModel(q=%d)" % self.q

    def sigma(self, A):
        return self.sigma_t[A]

    def matmul(self, *mats):
        out = mats[0]
        for M in mats[1:]:
            out = self.k.matmul(out, M)
        return out

    def inv(self, A):
        return self.k.matinv(A)

    def identity(self, n):
        return self.k.identity(n)

    def in_subfield(self, x):
        return bool(numpy.all(self.sigma_t[x] == x))


@lru_cache(maxsize=None)
def model(q):
    return QuadraticResidueModel(q)


def _model(q_or_model):
    return q_or_model if isinstance(q_or_model, QuadraticResidueModel) else model(q_or_model)


def gl_order(n, q):
    return prod(q ** n - q ** i for i in range(n))


def expected_S_size(n, q):
    """|GL_n(q^2)| / |GL_n(q)|"""
    a, b = gl_order(n, q * q), gl_order(n, q)
    assert a % b == 0
    return a // b


def u_matrix(M):
    """The 2x2 matrix (1, -delta; 1, delta)."""
    k = M.k
    return numpy.array([[1, k.neg_t[M.delta]], [1, M.delta]], dtype=numpy.int64)


def s_map(g, q):
    """g -> g^sigma g^-1."""
    M = _model(q)
    return M.matmul(M.sigma(g), M.inv(g))


def in_S(s, q):
    M = _model(q)
    n = s.shape[-1]
    return bool(numpy.array_equal(M.matmul(s, M.sigma(s)), numpy.broadcast_to(M.identity(n), s.shape)))


# -- enumeration -------------------------------------------------------------


def _hook_stages(n):
    # stage k fills row k from column k on, then column k below the diagonal
    return [[(k, j) for j in range(k, n)] + [(i, k) for i in range(k + 1, n)] for k in range(n)]


def enumerate_S(n, q, budget=ENUM_BUDGET):
    """All M in GL_n(F_{q^2}) with M M^sigma = 1, as an (N, n, n) array sorted by code.

    Entries are filled hook by hook (row k and column k together); after
    stage k every constraint (i, j) with i, j <= k is checked, which prunes
    the search to roughly |S| survivors per stage.
    """
    M = _model(q)
    k = M.k
    Q = k.order
    if n > MAX_ENUM_N:
        raise BudgetExceeded("full enumeration of S limited to n <= %d" % MAX_ENUM_N)
    partial = numpy.zeros((1, n, n), dtype=numpy.int64)
    for stage, cells in enumerate(_hook_stages(n)):
        work = len(partial) * Q ** len(cells)
        if work > budget:
            raise BudgetExceeded("enumerate_S(n=%d, q=%d): stage %d needs %d candidates > budget %d"
                                 % (n, q, stage, work, budget))
        choices = numpy.array(list(product(range(Q), repeat=len(cells))), dtype=numpy.int64)
        cand = numpy.repeat(partial, len(choices), axis=0)
        tiled = numpy.tile(choices, (len(partial), 1))
        for t, (i, j) in enumerate(cells):
            cand[:, i, j] = tiled[:, t]
        conj = M.sigma_t[cand]
        keep = numpy.ones(len(cand), dtype=bool)
        for i in range(stage + 1):
            for j in range(stage + 1):
                if max(i, j) != stage:
                    continue
                acc = numpy.zeros(len(cand), dtype=numpy.int64)
                for l in range(n):
                    acc = k.add_t[acc, k.mul_t[cand[:, i, l], conj[:, l, j]]]
                keep &= acc == (1 if i == j else 0)
        partial = cand[keep]
    keys = encode(partial, Q)
    order = numpy.argsort(keys)
    return partial[order]


def encode(mats, Q):
    """Integer key per matrix (row-major base-Q digits)."""
    flat = mats.reshape(len(mats), -1)
    weights = Q ** numpy.arange(flat.shape[1], dtype=numpy.int64)
    return flat @ weights


def borel_generators(n, q):
    """Diagonal generators diag(1,..,g,..,1) and root elements 1 + t E_ij (t in an F_p-basis)."""
    M = _model(q)
    k = M.k
    gens = []
    for i in range(n):
        d = M.identity(n)
        d[i, i] = k.gen
        gens.append(d)
    basis = [k.p ** e for e in range(k.m)]
    for i in range(n):
        for j in range(i + 1, n):
            for t in basis:
                x = M.identity(n)
                x[i, j] = t
                gens.append(x)
    return gens


def borel_act(b, s, q):
    """b . s = b^sigma s b^-1 (s may be a batch)."""
    M = _model(q)
    return M.matmul(M.sigma(b), s, M.inv(b))


@dataclass
class Orbit:
    representative: tuple
    size: int
    label: int = -1
    indices: numpy.ndarray = dc_field(default=None, repr=False)


@dataclass
class OrbitTable:
    n: int
    q: int
    S_size: int
    expected_size: int
    orbits: list
    elements: numpy.ndarray = dc_field(default=None, repr=False)
    labels: numpy.ndarray = dc_field(default=None, repr=False)
    _keys: numpy.ndarray = dc_field(default=None, repr=False)

    def orbit_of(self, s):
        """Representative involution of the orbit containing s."""
        Q = model(self.q).k.order
        if self._keys is None:
            self._keys = encode(self.elements, Q)
        keys = self._keys
        key = encode(s[None], Q)[0]
        idx = numpy.searchsorted(keys, key)
        if idx >= len(keys) or keys[idx] != key:
            raise KeyError("matrix is not in S")
        lab = self.labels[idx]
        return next(o.representative for o in self.orbits if o.label == lab)


def orbit_decomposition(n, q, keep_elements=True):
    """Borel orbits on S, each checked to contain exactly one involution."""
    M = _model(q)
    Q = M.k.order
    S = enumerate_S(n, q)
    N = len(S)
    keys = encode(S, Q)
    rows, cols = [], []
    for b in borel_generators(n, q):
        image = borel_act(b, S, q)
        ikeys = encode(image, Q)
        idx = numpy.searchsorted(keys, ikeys)
        if numpy.any(idx >= N) or not numpy.array_equal(keys[numpy.minimum(idx, N - 1)], ikeys):
            raise OrbitAnomaly("Borel action leaves S (n=%d, q=%d)" % (n, q))
        rows.append(numpy.arange(N))
        cols.append(idx)
    rows, cols = numpy.concatenate(rows), numpy.concatenate(cols)
    graph = coo_matrix((numpy.ones(len(rows), dtype=numpy.int8), (rows, cols)), shape=(N, N))
    count, labels = connected_components(graph, directed=True, connection="weak")

    invs = weyl.involutions(n)
    inv_keys = encode(numpy.array([weyl.matrix(w) for w in invs]), Q)
    inv_idx = numpy.searchsorted(keys, inv_keys)
    found = {}
    for w, key, idx in zip(invs, inv_keys, inv_idx):
        if idx >= N or keys[idx] != key:
            raise OrbitAnomaly("involution %s is not in S" % (w,))
        found.setdefault(int(labels[idx]), []).append(w)
    sizes = numpy.bincount(labels, minlength=count)
    for lab in range(count):
        ws = found.get(lab, [])
        if len(ws) != 1:
            members = S[labels == lab]
            raise OrbitAnomaly("orbit %d (size %d) contains %d involutions %s; first member:\n%s"
                               % (lab, sizes[lab], len(ws), ws, members[0]))
    orbits = []
    for lab, ws in sorted(found.items(), key=lambda kv: kv[1][0]):
        members = numpy.nonzero(labels == lab)[0] if keep_elements else None
        orbits.append(Orbit(ws[0], int(sizes[lab]), lab, members))
    return OrbitTable(n, q, N, expected_S_size(n, q), orbits,
                      S if keep_elements else None, labels if keep_elements else None)


# -- Bruhat decomposition and the constructive reduction ---------------------


@dataclass
class BruhatDecomposition:
    n1: numpy.ndarray
    a: numpy.ndarray
    w: tuple
    n2: numpy.ndarray


def bruhat_decompose(m, q):
    """m = n1 a w n2 with n1, n2 upper unipotent, a diagonal, w a permutation.

    Rows are processed bottom-up: the leftmost nonzero entry of the row is
    the pivot; column operations to its right and row operations above it
    (both upper unipotent) clear its row and column.
    """
    M = _model(q)
    k = M.k
    n = m.shape[0]
    if not k.is_invertible(m):
        raise SingularMatrixError("bruhat_decompose needs an invertible matrix")
    A = m.copy()
    L = M.identity(n)   # A = L m R throughout
    R = M.identity(n)
    perm = [None] * n
    for i in range(n - 1, -1, -1):
        j = int(numpy.nonzero(A[i])[0][0])
        perm[i] = j
        piv_inv = k.inv_t[A[i, j]]
        for col in range(j + 1, n):
            c = A[i, col]
            if c:
                f = k.neg_t[k.mul_t[c, piv_inv]]
                A[:, col] = k.add_t[A[:, col], k.mul_t[f, A[:, j]]]
                R[:, col] = k.add_t[R[:, col], k.mul_t[f, R[:, j]]]
        for row in range(i):
            c = A[row, j]
            if c:
                f = k.neg_t[k.mul_t[c, piv_inv]]
                A[row] = k.add_t[A[row], k.mul_t[f, A[i]]]
                L[row] = k.add_t[L[row], k.mul_t[f, L[i]]]
    w = tuple(perm)
    a = k.diag([A[i, w[i]] for i in range(n)])
    return BruhatDecomposition(M.inv(L), a, w, M.inv(R))


def positions_kept(w):
    """Root positions (i, j), i < j, with w E_ij w^-1 upper triangular."""
    n = len(w)
    winv = weyl.inverse(w)
    return {(i, j) for i in range(n) for j in range(i + 1, n) if winv[i] < winv[j]}


def factor_unipotent(u, w, q):
    """u = x v with x in U cap w^-1 U w and v in U cap w^-1 U^- w."""
    M = _model(q)
    k = M.k
    n = u.shape[0]
    keep = positions_kept(w)
    v = u.copy()
    X = M.identity(n)   # v = X^-1 u, X accumulated as a product of kept root elements
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            if (i, j) in keep and v[i, j]:
                c = v[i, j]
                v[i] = k.sub_t[v[i], k.mul_t[c, v[j]]]
                # X <- X (1 + c E_ij)
                X[:, j] = k.add_t[X[:, j], k.mul_t[c, X[:, i]]]
    return X, v


def unipotent_order(u, q):
    M = _model(q)
    one = M.identity(u.shape[0])
    x, order = u, 1
    while not numpy.array_equal(x, one):
        x = M.k.matpow(x, M.p)
        order *= M.p
    return order


def solve_unipotent_h90(n_mat, theta, q):
    """u with n = theta(u^-1) u, for n unipotent with n theta(n) = 1.

    U is a p-group with p odd, so n has a unique square root u = n^((m+1)/2)
    (m the order of n); theta(u) is then the square root of theta(n) = n^-1,
    i.e. u^-1, and theta(u^-1) u = u u = n.
    """
    M = _model(q)
    one = M.identity(n_mat.shape[0])
    if not numpy.array_equal(M.matmul(n_mat, theta(n_mat)), one):
        raise ValueError("solve_unipotent_h90 needs n theta(n) = 1")
    m = unipotent_order(n_mat, q)
    u = M.k.matpow(n_mat, (m + 1) // 2)
    if not numpy.array_equal(M.matmul(theta(M.inv(u)), u), n_mat):
        raise ReductionAnomaly("unipotent Hilbert 90 failed for\n%s" % n_mat)
    return u


def solve_unipotent_h90_exhaustive(n_mat, theta, candidates, q):
    """Oracle: first candidate u with theta(u^-1) u = n, or None."""
    M = _model(q)
    for u in candidates:
        if numpy.array_equal(M.matmul(theta(M.inv(u)), u), n_mat):
            return u
    return None


def torus_theta(t, w, q):
    """theta'(t) = w^-1 t^sigma w."""
    M = _model(q)
    W = weyl.matrix(w)
    return M.matmul(W.T, M.sigma(t), W)


def solve_torus_h90(t, w, q):
    """Diagonal a with t = a theta'(a)^-1, given t theta'(t) = 1 and w^2 = 1."""
    M = _model(q)
    k = M.k
    n = t.shape[0]
    w = tuple(w)
    if not weyl.is_involution(w):
        raise ValueError("w must have order <= 2")
    if not numpy.array_equal(M.matmul(t, torus_theta(t, w, q)), M.identity(n)):
        raise ValueError("solve_torus_h90 needs t theta'(t) = 1")
    a = [None] * n
    for i in range(n):
        j = w[i]
        if j == i:
            # t_i of norm one: t_i = a / a^sigma = a^(1-q)
            e = k.dlog(int(t[i, i]))
            assert e % (M.q - 1) == 0
            a[i] = k.element(-(e // (M.q - 1)))
        elif i < j:
            a[i], a[j] = int(t[i, i]), 1
    a = k.diag(a)
    check = M.matmul(a, M.inv(torus_theta(a, w, q)))
    if not numpy.array_equal(check, t):
        raise ReductionAnomaly("torus Hilbert 90 failed")
    return a


@dataclass
class Reduction:
    w: tuple
    y: numpy.ndarray


def reduce_to_involution(s, q):
    """(w, y) with s = y w y^-sigma, w an involution, following the orbit argument:
    Bruhat form, push into B w, unipotent Hilbert 90, torus Hilbert 90."""
    M = _model(q)
    k = M.k
    n = s.shape[0]
    one = M.identity(n)
    if not in_S(s, q):
        raise ValueError("reduce_to_involution needs s s^sigma = 1")

    bd = bruhat_decompose(s, q)
    w = bd.w
    W = weyl.matrix(w)
    if not weyl.is_involution(w):
        raise ReductionAnomaly("Bruhat cell of s is not an involution: %s" % (w,))

    # s = n1 a w x v; acting by v moves s into B w
    _, v = factor_unipotent(bd.n2, w, q)
    s1 = M.matmul(M.sigma(v), s, M.inv(v))
    beta = M.matmul(s1, W.T)
    if numpy.any(numpy.tril(beta, -1)):
        raise ReductionAnomaly("s1 w^-1 is not upper triangular")
    a = k.diag(numpy.diagonal(beta))
    nprime = M.matmul(M.inv(a), beta)
    nmat = M.matmul(W.T, nprime, W)          # s1 = a w nmat

    # a^w = a^-sigma
    if not numpy.array_equal(M.matmul(W.T, a, W), M.inv(M.sigma(a))):
        raise ReductionAnomaly("a^w != a^-sigma")

    aw = M.matmul(a, W)
    aw_inv = M.inv(aw)

    def theta(x):
        return M.matmul(aw_inv, M.sigma(x), aw)

    u = solve_unipotent_h90(nmat, theta, q)     # s1 = u^-sigma (a w) u
    y = solve_torus_h90(a, w, q)                # a w = y w y^-sigma
    Y = M.matmul(M.inv(M.sigma(v)), M.inv(M.sigma(u)), y)
    rebuilt = M.matmul(Y, W, M.inv(M.sigma(Y)))
    if not numpy.array_equal(rebuilt, s):
        raise ReductionAnomaly("s != y w y^-sigma after reduction")
    assert numpy.array_equal(M.matmul(W, W), one)
    return Reduction(w, Y)


def u_r_w_representatives(n, r, w, q):
    """U_r^w = w^-1 U_r w, with U_r = diag(u, .., u, I_{n-2r})."""
    if not 0 <= 2 * r <= n:
        raise ValueError("need 0 <= 2r <= n")
    if len(w) != n:
        raise ValueError("w must be a permutation of size n")
    M = _model(q)
    U = M.identity(n)
    u = u_matrix(M)
    for b in range(r):
        U[2 * b:2 * b + 2, 2 * b:2 * b + 2] = u
    W = weyl.matrix(w)
    return M.matmul(W.T, U, W)


def representative_coverage(n, q, table=None):
    """Map every s_map(U_r^w) to its orbit; returns (covered reps, all reps)."""
    hit = set()
    for r in range(n // 2 + 1):
        for w in weyl.cell_order(n):
            s = s_map(u_r_w_representatives(n, r, w, q), q)
            rep = table.orbit_of(s) if table is not None else reduce_to_involution(s, q).w
            hit.add(rep)
    return hit, set(weyl.involutions(n))


# -- random sampling ------------------------------------------------------


def random_matrix(rng, n, q):
    return rng.integers(0, _model(q).k.order, size=(n, n))


def random_invertible(rng, n, q):
    k = _model(q).k
    while True:
        g = random_matrix(rng, n, q)
        if k.is_invertible(g):
            return g


def random_borel(rng, n, q):
    k = _model(q).k
    b = numpy.triu(random_matrix(rng, n, q))
    b[range(n), range(n)] = rng.integers(1, k.order, size=n)
    return b


def torus_shape_check(q):
    """For every z in F_{q^2}^*, u^-1 diag(z, z^sigma) u = (x, D y; y, x) with x, y in F_q, D = delta^2."""
    M = _model(q)
    k = M.k
    u = u_matrix(M)
    ui = M.inv(u)
    bad = []
    for z in range(1, k.order):
        t = k.diag([z, int(M.sigma_t[z])])
        m = M.matmul(ui, t, u)
        x, y = m[0, 0], m[1, 0]
        ok = (m[1, 1] == x and m[0, 1] == k.mul_t[M.delta_sq, y]
              and M.in_subfield(x) and M.in_subfield(y))
        if not ok:
            bad.append(z)
    return bad
