"""Lattice families shared by the module tests and the acceptance suite."""

import itertools
import random

from flatholo.exceptions import ValidationError
from flatholo.groups import NAMED_GROUPS, cyclic_group
from flatholo.lattices import GLattice, diagonal_lattice
from flatholo.linalg import IntMatrix, rational_inverse

MATRIX_GROUPS = ("C2", "C3", "C4", "C2xC2", "S3")

C3_ROT = [[0, -1], [1, -1]]
C4_ROT = [[0, -1], [1, 0]]
C6_ROT = [[1, -1], [1, 0]]
# companion matrix of 1 + x + x^2 + x^3 + x^4
C5_AUG = [[0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]]


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, r in enumerate(b):
            for j, x in enumerate(r):
                out[k + i][k + j] = x
        k += len(b)
    return out


def perm_matrix(p):
    n = len(p)
    return [[int(p[j] == i) for j in range(n)] for i in range(n)]


def diagonal_actions(G, max_rank=4):
    """Every assignment of diagonal sign matrices that is a homomorphism."""
    k = len(G.generators)
    for n in range(1, max_rank + 1):
        for signs in itertools.product(itertools.product([1, -1], repeat=n), repeat=k):
            try:
                yield f"diag{signs}", diagonal_lattice(G, signs)
            except ValidationError:
                continue


def rotation_actions(G, name, max_rank=4):
    """Rotation lattices of C3, C4 and the 2-dim S3 lattice, padded by diagonal blocks."""
    if name == "C3":
        base = [C3_ROT]
    elif name == "C4":
        base = [C4_ROT]
    elif name == "S3":
        # transposition swaps e1, e2; 3-cycle is the C3 rotation
        base = None
    else:
        return
    for pad in range(0, max_rank - 1):
        for signs in itertools.product([1, -1], repeat=pad):
            if name == "S3":
                gens = []
                for i, g in enumerate(G.generators):
                    p = G.elements[g]
                    rot = [[0, 1], [1, 0]] if p == (1, 0, 2) else [[0, -1], [1, -1]]
                    gens.append(block_diag(rot, *[[[s if i == 0 else 1]] for s in signs]))
            else:
                gens = [block_diag(base[0], *[[[s]] for s in signs])]
            try:
                yield f"rot+{signs}", GLattice(G, [IntMatrix(m) for m in gens])
            except ValidationError:
                continue


def matrix_cases(max_rank=4):
    """``(label, G, L)`` over the fixed group list, diagonal and rotation actions."""
    for name in MATRIX_GROUPS:
        G = NAMED_GROUPS[name]()
        for label, L in diagonal_actions(G, max_rank):
            yield f"{name} {label}", G, L
        for label, L in rotation_actions(G, name, max_rank):
            yield f"{name} {label}", G, L


def _blocks_for(n):
    blocks = [[[1]]]
    if n % 2 == 0:
        blocks += [[[-1]], perm_matrix((1, 0))]
    if n % 3 == 0:
        blocks += [C3_ROT, perm_matrix((1, 2, 0))]
    if n % 4 == 0:
        blocks += [C4_ROT, perm_matrix((1, 2, 3, 0))]
    if n == 5:
        blocks += [C5_AUG]
    if n == 6:
        blocks += [C6_ROT]
    return blocks


def random_unimodular(rng, n, steps=6):
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            A[i][k] += c * A[j][k]
    return IntMatrix(A)


def random_cyclic_lattices(count, seed=0, max_order=6, max_rank=4):
    """Seeded random lattices of cyclic groups, conjugated by unimodular matrices."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, max_order)
        blocks = []
        size = 0
        target = rng.randint(1, max_rank)
        options = _blocks_for(n)
        while size < target:
            b = rng.choice(options)
            if size + len(b) > max_rank:
                if size:
                    break
                continue
            blocks.append(b)
            size += len(b)
        A = IntMatrix(block_diag(*blocks))
        P = random_unimodular(rng, size)
        Pi = inverse_unimodular(P)
        G = cyclic_group(n)
        out.append((n, GLattice(G, [P @ A @ Pi])))
    return out


def inverse_unimodular(P):
    inv = rational_inverse(P.tolist())
    return IntMatrix([[int(x) for x in r] for r in inv])


def derived_subgroup_order(G):
    comms = {G.table[G.table[a][b]][G.table[G.inverse[a]][G.inverse[b]]]
             for a in range(G.order) for b in range(G.order)}
    return len(G.closure(sorted(comms)))


def degree_oracle(G):
    """All degree multisets allowed by class count, sum of squares and |G:G'| linear characters."""
    k = len(G.classes)
    linear = G.order // derived_subgroup_order(G)
    divisors = [d for d in range(2, G.order + 1) if G.order % d == 0 and d * d <= G.order]
    sols = []
    for rest in itertools.combinations_with_replacement(divisors, k - linear):
        if linear + sum(d * d for d in rest) == G.order:
            sols.append(sorted([1] * linear + list(rest)))
    return sols
