"""Complex character tables computed modulo a prime (Dixon-Burnside).

The class-algebra structure constants give commuting matrices whose common
eigenvectors are the central characters ``omega_chi``. Working over ``F_l``
with ``l = 1 (mod e)`` and ``l > 2|G|`` every eigenvalue lives in the prime
field, and integer data such as degrees and multiplicities are recovered from
their residues.

Values are kept mod ``l``; :func:`lift_to_cyclotomic` recovers exact values in
``Z[zeta_e]`` when the block test needs them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt, lcm
from typing import Optional, Sequence

from sympy import Poly, cyclotomic_poly, isprime, primitive_root, symbols, totient

from .exceptions import EmbeddingInvalid, InvalidPrime, InvariantViolation, NonCharacter
from .groups import FiniteGroup, is_prime


@dataclass(frozen=True)
class ClassAlgebra:
    """``constants[i][j][k] = #{(x, y) in C_i x C_j : x y = z_k}`` for a fixed ``z_k in C_k``."""

    constants: tuple
    class_sizes: tuple

    def check(self) -> bool:
        r = len(self.class_sizes)
        return all(
            sum(self.constants[i][j][k] * self.class_sizes[k] for k in range(r))
            == self.class_sizes[i] * self.class_sizes[j]
            for i in range(r) for j in range(r)
        )


def class_algebra(G: FiniteGroup) -> ClassAlgebra:
    r = len(G.classes)
    reps = G.class_reps
    inv, table, class_of = G.inverse, G.table, G.class_of
    a = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i, Ci in enumerate(G.classes):
        for k, z in enumerate(reps):
            for x in Ci:
                y = table[inv[x]][z]
                a[i][class_of[y]][k] += 1
    return ClassAlgebra(
        constants=tuple(tuple(tuple(row) for row in plane) for plane in a),
        class_sizes=tuple(G.class_sizes),
    )


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Irreducible characters of ``group`` as rows of residues mod ``prime``.

    ``root`` is a primitive ``conductor``-th root of unity in ``F_prime``;
    ``conductor`` is a multiple of the group exponent.
    """

    group: FiniteGroup
    prime: int
    conductor: int
    root: int
    values: tuple
    degrees: tuple
    seed: int = 0

    @property
    def class_count(self) -> int:
        return len(self.values[0])

    def root_of_order(self, m: int) -> int:
        if self.conductor % m:
            raise ValueError(f"{m} does not divide the conductor {self.conductor}")
        return pow(self.root, self.conductor // m, self.prime)

    def symmetric(self, x: int) -> int:
        x %= self.prime
        return x - self.prime if x > self.prime // 2 else x

    def row_orthogonality(self) -> bool:
        G, p = self.group, self.prime
        sizes = G.class_sizes
        invc = [G.inverse_class(c) for c in range(len(sizes))]
        for a, ra in enumerate(self.values):
            for b, rb in enumerate(self.values):
                s = sum(sizes[c] * ra[c] * rb[invc[c]] for c in range(len(sizes))) % p
                if s != (G.order % p if a == b else 0):
                    return False
        return True

    def column_orthogonality(self) -> bool:
        G, p = self.group, self.prime
        sizes = G.class_sizes
        r = len(sizes)
        for c in range(r):
            for c2 in range(r):
                ic2 = G.inverse_class(c2)
                s = sum(row[c] * row[ic2] for row in self.values) % p
                expected = (G.order // sizes[c]) % p if c == c2 else 0
                if s != expected:
                    return False
        return True


# class functions of degree below this are decomposed exactly
DEGREE_LIMIT = 64


def dixon_prime(order: int, modulus: int, floor: int = DEGREE_LIMIT) -> int:
    """Smallest prime ``l = 1 (mod modulus)`` with ``l > 2 * order`` and ``l > floor``."""
    bound = max(2 * order, floor)
    k = bound // modulus
    while True:
        ell = k * modulus + 1
        if ell > bound and isprime(ell):
            return ell
        k += 1


def _rref(vectors: list[list[int]], p: int) -> list[list[int]]:
    rows = [[x % p for x in v] for v in vectors]
    out: list[list[int]] = []
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rows and col < ncols:
        piv = next((i for i, r in enumerate(rows) if r[col]), None)
        if piv is None:
            col += 1
            continue
        pr = rows.pop(piv)
        inv = pow(pr[col], -1, p)
        pr = [x * inv % p for x in pr]
        rows = [[(x - r[col] * y) % p for x, y in zip(r, pr)] if r[col] else r for r in rows]
        out = [[(x - r[col] * y) % p for x, y in zip(r, pr)] if r[col] else r for r in out]
        out.append(pr)
        rows = [r for r in rows if any(r)]
        col += 1
    out.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return out


def _nullspace(M: list[list[int]], p: int, n: int) -> list[list[int]]:
    """Basis of ``{x in F_p^n : M x = 0}``."""
    R = _rref(M, p) if M else []
    pivots = [next(i for i, x in enumerate(r) if x) for r in R]
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, pc in zip(R, pivots):
            v[pc] = (-r[f]) % p
        basis.append(v)
    return basis


def _charpoly(X: list[list[int]], p: int) -> list[int]:
    """Characteristic polynomial mod p (Faddeev-LeVerrier), coefficients high to low."""
    n = len(X)
    coeffs = [1]
    M = [[0] * n for _ in range(n)]
    c_prev = 1
    for k in range(1, n + 1):
        M = [[(sum(X[i][t] * M[t][j] for t in range(n)) + (c_prev if i == j else 0)) % p
              for j in range(n)] for i in range(n)]
        XM_trace = sum(X[i][t] * M[t][i] for i in range(n) for t in range(n)) % p
        c = (-XM_trace * pow(k, -1, p)) % p
        coeffs.append(c)
        c_prev = c
    return coeffs


def _roots(coeffs: list[int], p: int) -> list[int]:
    roots = []
    for lam in range(p):
        acc = 0
        for c in coeffs:
            acc = (acc * lam + c) % p
        if acc == 0:
            roots.append(lam)
    return roots


def _split_space(space: list[list[int]], A: list[list[int]], p: int) -> list[list[list[int]]]:
    d = len(space)
    if d == 1:
        return [space]
    r = len(space[0])
    pivots = [next(i for i, x in enumerate(b) if x) for b in space]
    images = [[sum(A[j][k] * b[k] for k in range(r)) % p for j in range(r)] for b in space]
    X = [[images[s][pivots[t]] for s in range(d)] for t in range(d)]
    parts = []
    total = 0
    for lam in _roots(_charpoly(X, p), p):
        Y = [[(X[i][j] - (lam if i == j else 0)) % p for j in range(d)] for i in range(d)]
        coords = _nullspace(Y, p, d)
        vecs = [[sum(c[s] * space[s][k] for s in range(d)) % p for k in range(r)] for c in coords]
        parts.append(_rref(vecs, p))
        total += len(coords)
    if total != d:
        raise InvariantViolation("class matrix is not diagonalisable over F_l")
    return parts


def character_table(G: FiniteGroup, seed: int = 0, conductor: int = 1,
                    prime: Optional[int] = None) -> CharacterTable:
    """Irreducible characters of ``G`` modulo a Dixon prime.

    ``conductor`` widens the root of unity (needed when reducing characters of
    representations written over a larger cyclotomic field); ``prime`` pins
    the modulus so tables of a group and its subgroups can be compared.
    """
    L = lcm(G.exponent, conductor)
    if prime is None:
        prime = dixon_prime(G.order, L)
    elif not isprime(prime) or (prime - 1) % L or prime <= max(2 * G.order, DEGREE_LIMIT):
        raise ValueError(f"{prime} is not an admissible prime for this group")
    p = prime
    root = pow(primitive_root(p), (p - 1) // L, p)
    alg = class_algebra(G)
    r = len(G.classes)
    sizes = G.class_sizes
    mats = [[list(row) for row in alg.constants[i]] for i in range(r)]

    rng = random.Random(seed)
    spaces = [[[int(i == j) for j in range(r)] for i in range(r)]]
    for _ in range(3):
        if all(len(s) == 1 for s in spaces):
            break
        coeffs = [rng.randrange(p) for _ in range(r)]
        combo = [[sum(c * M[j][k] for c, M in zip(coeffs, mats)) % p for k in range(r)]
                 for j in range(r)]
        spaces = [part for s in spaces for part in _split_space(s, combo, p)]
    for M in mats[1:]:
        if all(len(s) == 1 for s in spaces):
            break
        spaces = [part for s in spaces for part in _split_space(s, M, p)]
    if len(spaces) != r or any(len(s) != 1 for s in spaces):
        raise InvariantViolation("common eigenspaces did not split into lines")

    invc = [G.inverse_class(c) for c in range(r)]
    rows, degrees = [], []
    for (omega,) in spaces:
        if omega[0] != 1:
            raise InvariantViolation("central character not normalised at the identity")
        s = sum(omega[k] * omega[invc[k]] * pow(sizes[k], -1, p) for k in range(r)) % p
        target = G.order * pow(s, -1, p) % p
        d = next((d for d in range(1, isqrt(G.order) + 1) if d * d % p == target), None)
        if d is None:
            raise InvariantViolation("no admissible degree for a central character")
        rows.append(tuple(omega[k] * d * pow(sizes[k], -1, p) % p for k in range(r)))
        degrees.append(d)

    order = sorted(range(r), key=lambda i: (any(v != 1 for v in rows[i]), degrees[i], rows[i]))
    table = CharacterTable(
        group=G, prime=p, conductor=L, root=root,
        values=tuple(rows[i] for i in order),
        degrees=tuple(degrees[i] for i in order),
        seed=seed,
    )
    if sum(d * d for d in table.degrees) != G.order or any(G.order % d for d in table.degrees):
        raise InvariantViolation("degree equation fails")
    if not table.row_orthogonality():
        raise InvariantViolation("row orthogonality fails")
    return table


def cached_table(G: FiniteGroup, seed: int = 0, conductor: int = 1) -> CharacterTable:
    """Per-group memo of :func:`character_table`."""
    cache = G.__dict__.setdefault("_table_cache", {})
    key = (seed, conductor)
    if key not in cache:
        cache[key] = character_table(G, seed=seed, conductor=conductor)
    return cache[key]


def galois_orbits(T: CharacterTable, G: Optional[FiniteGroup] = None) -> list[tuple[int, ...]]:
    """Rows grouped into orbits of ``chi -> chi o pi_k`` for ``k`` prime to the exponent."""
    G = T.group if G is None else G
    index = {row: i for i, row in enumerate(T.values)}
    maps = list(G.power_maps().values())
    seen = [False] * len(T.values)
    orbits = []
    for i in range(len(T.values)):
        if seen[i]:
            continue
        orbit = set()
        for pm in maps:
            image = tuple(T.values[i][pm[c]] for c in range(len(pm)))
            orbit.add(index[image])
        for j in orbit:
            seen[j] = True
        orbits.append(tuple(sorted(orbit)))
    return orbits


def inner_product(T: CharacterTable, xi: Sequence[int], row: int) -> int:
    G, p = T.group, T.prime
    sizes = G.class_sizes
    chi = T.values[row]
    s = sum(sizes[c] * xi[c] * chi[G.inverse_class(c)] for c in range(len(sizes)))
    return s * pow(G.order, -1, p) % p


def multiplicities(T: CharacterTable, xi: Sequence[int]) -> list[tuple[int, int]]:
    """Decompose a class function into irreducibles: ``[(row, multiplicity), ...]``.

    ``xi`` holds integers (or residues mod ``T.prime``) per class; ``xi[0]``
    must be the actual degree, which has to stay below the prime. Raises :class:`NonCharacter` unless the result is a
    genuine character.
    """
    p = T.prime
    degree = xi[0]
    if not 0 <= degree < p:
        raise NonCharacter(f"degree {degree} is outside [0, {p}); residues cannot recover multiplicities")
    xi = [x % p for x in xi]
    result = []
    for row in range(len(T.values)):
        m = inner_product(T, xi, row)
        if m > degree:
            raise NonCharacter(f"multiplicity residue {m} exceeds the degree {degree}")
        if m:
            result.append((row, m))
    if sum(m * T.degrees[r] for r, m in result) != degree:
        raise NonCharacter("multiplicities do not add up to the degree")
    for c in range(len(xi)):
        if sum(m * T.values[r][c] for r, m in result) % p != xi[c]:
            raise NonCharacter("class function is not a combination of irreducibles")
    return result


def restrict_character(T_G: CharacterTable, T_H: CharacterTable, embedding: Sequence[int],
                       row: int) -> list[tuple[int, int]]:
    """Decompose ``chi|_H``; ``embedding[h]`` is the index in ``G`` of element ``h`` of ``H``."""
    G, H = T_G.group, T_H.group
    if T_G.prime != T_H.prime:
        raise ValueError("tables must share their prime; build the subgroup table with prime=...")
    if len(embedding) != H.order or embedding[0] != 0:
        raise EmbeddingInvalid("embedding must send the identity to the identity")
    for a in range(H.order):
        for b in range(H.order):
            if embedding[H.table[a][b]] != G.table[embedding[a]][embedding[b]]:
                raise EmbeddingInvalid("embedding is not a homomorphism")
    xi = [T_G.values[row][G.class_of[embedding[h]]] for h in H.class_reps]
    return multiplicities(T_H, xi)


# cyclotomic integers ---------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of the ``n``-th cyclotomic polynomial, low degree first."""
    x = symbols("x")
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(n, x), x).all_coeffs()))


def _reduce_poly(coeffs: list[int], modulus: Sequence[int], p: Optional[int] = None) -> list[int]:
    """Remainder of ``coeffs`` by a monic ``modulus`` (both low degree first)."""
    c = list(coeffs)
    deg = len(modulus) - 1
    for i in range(len(c) - 1, deg - 1, -1):
        q = c[i]
        if q:
            for j in range(deg + 1):
                c[i - deg + j] -= q * modulus[j]
        if p is not None:
            c = [x % p for x in c]
    c = c[:deg] + [0] * max(0, deg - len(c))
    return [x % p for x in c] if p is not None else c


@dataclass(frozen=True)
class CyclotomicValue:
    """Element of ``Z[zeta_n]`` in the power basis ``1, zeta, ..., zeta^(phi(n)-1)``."""

    n: int
    coeffs: tuple

    @classmethod
    def from_exponents(cls, n: int, counts: dict[int, int]) -> "CyclotomicValue":
        raw = [0] * n
        for j, c in counts.items():
            raw[j % n] += c
        return cls(n, tuple(_reduce_poly(raw, cyclotomic_coeffs(n))))

    def reduce_mod(self, prime: int, root: int) -> int:
        """Image under ``zeta -> root`` in ``F_prime``."""
        return sum(c * pow(root, j, prime) for j, c in enumerate(self.coeffs)) % prime

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])


def lift_to_cyclotomic(T: CharacterTable, row: int) -> list[CyclotomicValue]:
    """Exact values of a character in ``Z[zeta_e]``, ``e`` the group exponent.

    For a class representative ``g`` of order ``m`` the eigenvalue
    multiplicities of ``g`` are recovered from ``chi(g^k)`` by a discrete
    Fourier inversion in ``F_l``.
    """
    G, p = T.group, T.prime
    e = G.exponent
    d = T.degrees[row]
    out = []
    for g in G.class_reps:
        m = G.orders[g]
        w = T.root_of_order(m)
        vals = [T.values[row][G.class_of[G.power(g, k)]] for k in range(m)]
        inv_m = pow(m, -1, p)
        counts = {}
        for j in range(m):
            nj = sum(vals[k] * pow(w, (-j * k) % m, p) for k in range(m)) * inv_m % p
            if nj > d:
                raise InvariantViolation("eigenvalue multiplicity residue exceeds the degree")
            if nj:
                counts[j * (e // m)] = nj
        value = CyclotomicValue.from_exponents(e, counts)
        if value.reduce_mod(p, T.root_of_order(e)) != T.values[row][G.class_of[g]]:
            raise InvariantViolation("cyclotomic lift does not reduce to the table value")
        out.append(value)
    return out


@lru_cache(maxsize=None)
def block_ideal(e: int, p: int) -> tuple[int, ...]:
    """Monic factor of ``Phi_e`` mod ``p`` defining the prime ideal above ``p``.

    The least factor is taken under the order (degree, coefficients from the
    top); block membership does not depend on this choice.
    """
    x = symbols("x")
    _, factors = Poly(cyclotomic_poly(e, x), x, modulus=p).factor_list()
    cands = []
    for f, _mult in factors:
        hi = [int(c) % p for c in f.all_coeffs()]
        inv = pow(hi[0], -1, p)
        hi = [c * inv % p for c in hi]
        cands.append((len(hi), tuple(hi)))
    _, best = min(cands)
    return tuple(reversed(best))


def principal_block_test(G: FiniteGroup, T: CharacterTable, row: int, p: int) -> bool:
    """Is ``chi`` in the principal ``p``-block?

    Compares central characters ``|C| chi(g_C) / chi(1)`` with ``|C|`` modulo a
    prime ideal above ``p`` in ``Z[zeta_e]``.
    """
    if not is_prime(p) or G.order % p:
        raise InvalidPrime(f"{p} is not a prime dividing |G| = {G.order}")
    d = T.degrees[row]
    e = G.exponent
    h = block_ideal(e, p)
    for size, value in zip(G.class_sizes, lift_to_cyclotomic(T, row)):
        scaled = [size * c for c in value.coeffs]
        if any(c % d for c in scaled):
            raise InvariantViolation("central character is not an algebraic integer")
        diff = [c // d for c in scaled]
        diff[0] -= size
        if any(_reduce_poly([c % p for c in diff], h, p)):
            return False
    return True


def degree_multiset(T: CharacterTable) -> list[int]:
    return sorted(T.degrees)


def phi(n: int) -> int:
    return int(totient(n))
