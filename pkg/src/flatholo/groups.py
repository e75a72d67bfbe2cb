"""Finite groups enumerated from generators.

Elements are stored in breadth-first discovery order from the generators,
index 0 being the identity. Every element carries the shortlex-least word in
the generators that reaches it; the crystal module uses these words to pick
sections. Subgroups are sorted tuples of element indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Callable, Hashable, Optional, Sequence

from sympy import factorint

from .exceptions import InvalidPrime, OrderCapExceeded, TrivialGroup, ValidationError
from .linalg import IntMatrix

DEFAULT_ORDER_CAP = 512

Subgroup = tuple  # sorted tuple of element indices


@dataclass(frozen=True)
class GroupSpec:
    """Generators plus an order cap.

    ``kind`` is ``"permutation"`` (0-based image tuples) or ``"matrix"``
    (square :class:`IntMatrix` with determinant +-1).
    """

    kind: str
    generators: tuple
    degree: int
    order_cap: int = DEFAULT_ORDER_CAP

    @classmethod
    def permutations(cls, perms: Sequence[Sequence[int]], degree: Optional[int] = None,
                     order_cap: int = DEFAULT_ORDER_CAP, one_based: bool = False) -> "GroupSpec":
        gens = []
        for p in perms:
            p = tuple(int(x) - 1 for x in p) if one_based else tuple(int(x) for x in p)
            gens.append(p)
        if degree is None:
            degree = len(gens[0]) if gens else 0
        for p in gens:
            if len(p) != degree or sorted(p) != list(range(degree)):
                raise ValidationError(f"not a permutation of {degree} points: {p}")
        return cls("permutation", tuple(gens), degree, order_cap)

    @classmethod
    def matrices(cls, mats: Sequence, degree: Optional[int] = None,
                 order_cap: int = DEFAULT_ORDER_CAP) -> "GroupSpec":
        gens = tuple(m if isinstance(m, IntMatrix) else IntMatrix(m) for m in mats)
        if degree is None:
            if not gens:
                raise ValidationError("degree required for an empty matrix generator list")
            degree = gens[0].rows
        for m in gens:
            if m.shape != (degree, degree):
                raise ValidationError(f"generator has shape {m.shape}, expected {degree}x{degree}")
            if abs(m.det()) != 1:
                raise ValidationError("matrix generators must have determinant +-1")
        return cls("matrix", gens, degree, order_cap)

    def identity(self):
        if self.kind == "permutation":
            return tuple(range(self.degree))
        return IntMatrix.identity(self.degree)

    def multiply(self, a, b):
        if self.kind == "permutation":
            # (a*b)(x) = a(b(x)): composition matching permutation matrices
            return tuple(a[x] for x in b)
        return a @ b


@dataclass
class FiniteGroup:
    """Fully enumerated finite group with its Cayley table and class data."""

    elements: list
    table: list[list[int]]
    generators: tuple[int, ...]
    words: list[tuple[int, ...]]
    kind: str = "abstract"
    inverse: list[int] = field(init=False)
    orders: list[int] = field(init=False)
    classes: list[tuple[int, ...]] = field(init=False)
    class_of: list[int] = field(init=False)
    exponent: int = field(init=False)

    def __post_init__(self):
        n = len(self.elements)
        if any(self.table[0][i] != i or self.table[i][0] != i for i in range(n)):
            raise ValidationError("index 0 must be the identity")
        self.inverse = [0] * n
        for a in range(n):
            row = self.table[a]
            for b in range(n):
                if row[b] == 0:
                    self.inverse[a] = b
                    break
            else:
                raise ValidationError("Cayley table has no inverses")
        self.orders = [self._element_order(a) for a in range(n)]
        self.exponent = lcm(*self.orders) if n else 1
        self._compute_classes()
        self._index = None
        self.parent_indices: Optional[list[int]] = None

    # construction -----------------------------------------------------------

    @classmethod
    def from_generators(cls, gens: Sequence, multiply: Callable, identity: Hashable,
                        order_cap: int = DEFAULT_ORDER_CAP, kind: str = "abstract") -> "FiniteGroup":
        """Breadth-first closure; raises :class:`OrderCapExceeded` past the cap."""
        elements = [identity]
        index = {identity: 0}
        words: list[tuple[int, ...]] = [()]
        right = [[None] * len(gens)]
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for i, g in enumerate(gens):
                y = multiply(elements[x], g)
                j = index.get(y)
                if j is None:
                    j = len(elements)
                    if j >= order_cap:
                        raise OrderCapExceeded(f"group order exceeds cap {order_cap}")
                    index[y] = j
                    elements.append(y)
                    words.append(words[x] + (i,))
                    right.append([None] * len(gens))
                    queue.append(j)
                right[x][i] = j
        n = len(elements)
        # table[a][b] built along the word of b: a*w*g = (a*w)*g
        table = [[0] * n for _ in range(n)]
        parent = [0] * n
        word_index = {w: i for i, w in enumerate(words)}
        for b in range(1, n):
            parent[b] = word_index[words[b][:-1]]
        for a in range(n):
            row = table[a]
            row[0] = a
            for b in range(1, n):
                row[b] = right[row[parent[b]]][words[b][-1]]
        gen_idx = tuple(index[g] for g in gens)
        group = cls(elements=elements, table=table, generators=gen_idx, words=words, kind=kind)
        group._index = index
        return group

    @classmethod
    def from_spec(cls, spec: GroupSpec) -> "FiniteGroup":
        return cls.from_generators(spec.generators, spec.multiply, spec.identity(),
                                   order_cap=spec.order_cap, kind=spec.kind)

    # basic queries -----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def power(self, a: int, k: int) -> int:
        k %= self.orders[a]
        r = 0
        for _ in range(k):
            r = self.table[r][a]
        return r

    def conjugate(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.table[self.table[g][x]][self.inverse[g]]

    def index_of(self, element) -> int:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
        return self._index[element]

    def is_abelian(self) -> bool:
        t = self.table
        gens = self.generators
        return all(t[a][b] == t[b][a] for a in gens for b in gens)

    def _element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def _compute_classes(self) -> None:
        n = len(self.elements)
        self.class_of = [-1] * n
        self.classes = []
        conj_by = self.generators or (0,)
        for x in range(n):
            if self.class_of[x] >= 0:
                continue
            orbit = {x}
            todo = [x]
            while todo:
                y = todo.pop()
                for g in conj_by:
                    z = self.conjugate(g, y)
                    if z not in orbit:
                        orbit.add(z)
                        todo.append(z)
            c = len(self.classes)
            for y in orbit:
                self.class_of[y] = c
            self.classes.append(tuple(sorted(orbit)))

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    @property
    def class_reps(self) -> list[int]:
        return [c[0] for c in self.classes]

    def inverse_class(self, c: int) -> int:
        return self.class_of[self.inverse[self.classes[c][0]]]

    def power_map(self, k: int) -> list[int]:
        """Class of ``g^k`` for each class; ``k`` should be coprime to the exponent."""
        return [self.class_of[self.power(c[0], k)] for c in self.classes]

    def power_maps(self) -> dict[int, list[int]]:
        e = self.exponent
        return {k: self.power_map(k) for k in range(1, max(e, 2)) if gcd(k, e) == 1}

    # subgroups ---------------------------------------------------------------

    def closure(self, gens: Sequence[int]) -> Subgroup:
        """Subgroup generated by the given element indices."""
        elems = {0}
        todo = [0]
        gens = [g for g in gens if g != 0]
        while todo:
            x = todo.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in elems:
                    elems.add(y)
                    todo.append(y)
        return tuple(sorted(elems))

    def is_subgroup(self, H: Sequence[int]) -> bool:
        s = set(H)
        return 0 in s and all(self.table[a][self.inverse[b]] in s for a in s for b in s)

    def is_normal(self, H: Sequence[int]) -> bool:
        s = set(H)
        return all(self.conjugate(g, h) in s for g in self.generators for h in s)

    def conjugate_subgroup(self, g: int, H: Sequence[int]) -> Subgroup:
        return tuple(sorted(self.conjugate(g, h) for h in H))

    def normal_closure(self, gens: Sequence[int]) -> Subgroup:
        conj = set()
        for x in gens:
            conj.update(self.classes[self.class_of[x]])
        return self.closure(sorted(conj))

    def subgroup_generators(self, H: Sequence[int]) -> tuple[int, ...]:
        """Greedy generating set, smallest indices first."""
        gens: list[int] = []
        current: Subgroup = (0,)
        for h in sorted(H):
            if h not in current:
                gens.append(h)
                current = self.closure(gens)
                if len(current) == len(H):
                    break
        return tuple(gens)

    def subgroup(self, H: Sequence[int]) -> "FiniteGroup":
        """``H`` as a standalone group; ``parent_indices`` maps back into ``self``."""
        H = tuple(sorted(H))
        if not self.is_subgroup(H):
            raise ValidationError("not a subgroup")
        gens = self.subgroup_generators(H)
        sub = FiniteGroup.from_generators(
            gens, multiply=self.mul, identity=0, order_cap=len(H) + 1, kind="subgroup")
        sub.parent_indices = list(sub.elements)
        sub.elements = [self.elements[i] for i in sub.parent_indices]
        sub._index = None
        return sub


# structural operations -------------------------------------------------------

def enumerate_elements(spec: GroupSpec) -> FiniteGroup:
    return FiniteGroup.from_spec(spec)


def conjugacy_classes(G: FiniteGroup) -> list[tuple[int, ...]]:
    return list(G.classes)


def is_prime(n: int) -> bool:
    return n > 1 and all(n % p for p in range(2, int(n ** 0.5) + 1))


def prime_order_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """One representative per conjugacy class of subgroups of prime order."""
    seen: set[Subgroup] = set()
    reps: list[Subgroup] = []
    for x in range(1, G.order):
        if not is_prime(G.orders[x]):
            continue
        H = G.closure([x])
        if H in seen:
            continue
        reps.append(H)
        for g in range(G.order):
            seen.add(G.conjugate_subgroup(g, H))
    return sorted(reps, key=lambda H: (len(H), H))


def minimal_normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    closures = sorted({G.normal_closure([x]) for x in range(1, G.order)}, key=lambda H: (len(H), H))
    minimal = []
    for N in closures:
        sN = set(N)
        if not any(len(K) < len(N) and set(K) <= sN for K in closures):
            minimal.append(N)
    return minimal


def socle(G: FiniteGroup) -> tuple[Subgroup, list[Subgroup]]:
    """Product of all minimal normal subgroups, and the list of them."""
    if G.order == 1:
        raise TrivialGroup("the trivial group has no minimal normal subgroups")
    mins = minimal_normal_subgroups(G)
    gens = sorted({x for N in mins for x in N})
    return G.closure(gens), mins


def is_abelian_subgroup(G: FiniteGroup, H: Sequence[int]) -> bool:
    t = G.table
    return all(t[a][b] == t[b][a] for a in H for b in H)


def is_elementary_abelian(G: FiniteGroup, H: Optional[Sequence[int]] = None) -> bool:
    H = tuple(range(G.order)) if H is None else tuple(H)
    if len(H) == 1:
        return True
    primes = {G.orders[h] for h in H if h != 0}
    return len(primes) == 1 and is_prime(primes.pop()) and is_abelian_subgroup(G, H)


def is_cyclic(G: FiniteGroup, H: Optional[Sequence[int]] = None) -> bool:
    H = tuple(range(G.order)) if H is None else tuple(H)
    return any(G.orders[h] == len(H) for h in H)


def cyclic_generator(G: FiniteGroup, H: Optional[Sequence[int]] = None) -> int:
    """Smallest-index generator of a cyclic subgroup (raises if not cyclic)."""
    from .exceptions import NotCyclic

    H = tuple(range(G.order)) if H is None else tuple(H)
    for h in sorted(H):
        if G.orders[h] == len(H):
            return h
    raise NotCyclic("subgroup is not cyclic")


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    if not is_prime(p) or G.order % p:
        raise InvalidPrime(f"{p} is not a prime dividing |G| = {G.order}")
    target = p ** factorint(G.order)[p]
    P: Subgroup = (0,)
    while len(P) < target:
        sP = set(P)
        for x in range(1, G.order):
            if x in sP or not _is_p_power(G.orders[x], p):
                continue
            if any(G.conjugate(x, h) not in sP for h in P):
                continue
            Q = G.closure(list(P) + [x])
            if _is_p_power(len(Q), p):
                P = Q
                break
        else:  # pragma: no cover - Sylow theory guarantees progress
            raise RuntimeError("Sylow construction stalled")
    return P


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


# standard groups ---------------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    gens = [tuple((i + 1) % n for i in range(n))] if n > 1 else []
    return FiniteGroup.from_spec(GroupSpec.permutations(gens, degree=n))


def symmetric_group(n: int) -> FiniteGroup:
    gens = []
    if n >= 2:
        gens.append(tuple([1, 0] + list(range(2, n))))
    if n >= 3:
        gens.append(tuple((i + 1) % n for i in range(n)))
    return FiniteGroup.from_spec(GroupSpec.permutations(gens, degree=n))


def alternating_group(n: int) -> FiniteGroup:
    gens = [tuple([1, 2, 0] + list(range(3, n)))] if n >= 3 else []
    for k in range(3, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return FiniteGroup.from_spec(GroupSpec.permutations(gens, degree=n))


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return FiniteGroup.from_spec(GroupSpec.permutations([rot, ref], degree=n))


def klein_four() -> FiniteGroup:
    return FiniteGroup.from_spec(GroupSpec.matrices([IntMatrix.diag([-1, 1]), IntMatrix.diag([1, -1])]))


def quaternion_group() -> FiniteGroup:
    # left multiplication by i and j on the basis 1, i, j, k of the quaternions
    qi = IntMatrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    qj = IntMatrix([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
    return FiniteGroup.from_spec(GroupSpec.matrices([qi, qj]))


def trivial_group() -> FiniteGroup:
    return FiniteGroup.from_spec(GroupSpec.permutations([], degree=1))


NAMED_GROUPS: dict[str, Callable[[], FiniteGroup]] = {
    "trivial": trivial_group,
    "C2": lambda: cyclic_group(2),
    "C3": lambda: cyclic_group(3),
    "C4": lambda: cyclic_group(4),
    "C5": lambda: cyclic_group(5),
    "C6": lambda: cyclic_group(6),
    "C2xC2": klein_four,
    "S3": lambda: symmetric_group(3),
    "D4": lambda: dihedral_group(4),
    "Q8": quaternion_group,
    "A4": lambda: alternating_group(4),
    "S4": lambda: symmetric_group(4),
}


def structure_summary(G: FiniteGroup) -> dict:
    return {
        "order": G.order,
        "abelian": G.is_abelian(),
        "cyclic": is_cyclic(G),
        "exponent": G.exponent,
        "class_count": len(G.classes),
        "class_sizes": G.class_sizes,
    }
