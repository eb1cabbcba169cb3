"""Permutations of {0..n-1} in one-line notation, Bruhat order and cell order.

A permutation w is the tuple (w(0), ..., w(n-1)); its matrix has a 1 in
position (i, w(i)).  With this convention matrix(v) @ matrix(w) = matrix(w o v).
"""

from functools import lru_cache
from itertools import permutations

import numpy

MAX_CELL_N = 6


def identity(n):
    return tuple(range(n))


def compose(a, b):
    """a o b"""
    return tuple(a[i] for i in b)


def inverse(w):
    out = [0] * len(w)
    for i, x in enumerate(w):
        out[x] = i
    return tuple(out)


def is_involution(w):
    return compose(w, w) == identity(len(w))


def involutions(n):
    """Order <= 2 elements of S_n, sorted by one-line notation."""
    return [w for w in permutations(range(n)) if is_involution(w)]


def length(w):
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def matrix(w):
    n = len(w)
    out = numpy.zeros((n, n), dtype=numpy.int64)
    out[range(n), list(w)] = 1
    return out


def from_matrix(M):
    n = M.shape[0]
    w = []
    for i in range(n):
        nz = numpy.nonzero(M[i])[0]
        if len(nz) != 1:
            raise ValueError("not a monomial matrix")
        w.append(int(nz[0]))
    if sorted(w) != list(range(n)):
        raise ValueError("not a monomial matrix")
    return tuple(w)


def simple(i, n):
    """The adjacent transposition (i, i+1)."""
    w = list(range(n))
    w[i], w[i + 1] = w[i + 1], w[i]
    return tuple(w)


def reduced_word(w):
    """Indices i_1..i_l with w = s_{i_1} o ... o s_{i_l}, l = length(w)."""
    w = list(w)
    word = []
    # bubble sort w into the identity; each swap peels a simple reflection
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i)
                changed = True
    # w_orig o s_{a_1} o ... o s_{a_k} = id  =>  w_orig = s_{a_k} o ... o s_{a_1}
    return tuple(reversed(word))


def word_product(word, n):
    out = identity(n)
    for i in word:
        out = compose(out, simple(i, n))
    return out


@lru_cache(maxsize=None)
def lower_interval(w):
    """All products of subwords of one reduced word of w, i.e. [e, w]."""
    n = len(w)
    reach = {identity(n)}
    for i in reduced_word(w):
        s = simple(i, n)
        reach |= {compose(x, s) for x in reach}
    return frozenset(reach)


def bruhat_leq(v, w):
    """v <= w in Bruhat order (subword criterion)."""
    if len(v) != len(w):
        raise ValueError("permutations of different sizes")
    return tuple(v) in lower_interval(tuple(w))


def cell_order(n):
    """Permutations by ascending length, ties broken lexicographically."""
    if not 1 <= n <= MAX_CELL_N:
        raise ValueError("cell_order supports 1 <= n <= %d" % MAX_CELL_N)
    return sorted(permutations(range(n)), key=lambda w: (length(w), w))


def closure_violations(order):
    """Pairs (v, w) with v < w in Bruhat order but v placed after w."""
    pos = {w: k for k, w in enumerate(order)}
    bad = []
    for w in order:
        for v in lower_interval(w):
            if v != w and pos[v] > pos[w]:
                bad.append((v, w))
    return bad
