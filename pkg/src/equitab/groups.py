"""Concrete permutation groups small enough to enumerate, plus a named catalog.

Permutations are tuples of 0-based images.  Products compose left to right:
``mul(p, q)`` applies ``p`` first, then ``q``.  Commutators are
``[x, y] = x^-1 y^-1 x y``.
"""
from __future__ import annotations

import math
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

Perm = tuple[int, ...]

DEFAULT_CAP = 20000

NON_SOLVABLE = "non-solvable"


class GroupError(ValueError):
    pass


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[i] for i in p)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def perm_order(p: Perm) -> int:
    seen = [False] * len(p)
    order = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        n = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            n += 1
        order = math.lcm(order, n)
    return order


def from_cycles(degree: int, cycles: Iterable[Sequence[int]]) -> Perm:
    """Build a permutation from 1-based cycles."""
    img = list(range(degree))
    seen: set[int] = set()
    for cyc in cycles:
        for a in cyc:
            if not 1 <= a <= degree:
                raise GroupError(f"point {a} outside 1..{degree}")
            if a in seen:
                raise GroupError(f"point {a} repeated in cycles")
            seen.add(a)
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a - 1] = b - 1
    return tuple(img)


def cycle_string(p: Perm) -> str:
    """1-based disjoint cycle notation, ``()`` for the identity."""
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)
            j = p[j]
        parts.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def _check_perm(p: Sequence[int], degree: int) -> Perm:
    p = tuple(p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise GroupError(f"not a permutation of degree {degree}: {p}")
    return p


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(eq=False)
class PermutationGroup:
    """A permutation group given by generators, enumerated on first use.

    Elements are addressed by their index in a fixed breadth-first order, so
    class representatives and everything derived from them are reproducible.
    """

    degree: int
    generators: list[Perm]
    name: str = ""
    cap: int = DEFAULT_CAP
    _elements: Optional[list[Perm]] = field(default=None, repr=False)
    _index: Optional[dict[Perm, int]] = field(default=None, repr=False)
    _classes: Optional[list[ConjugacyClass]] = field(default=None, repr=False)
    _class_of: Optional[list[int]] = field(default=None, repr=False)
    _inverse: Optional[list[int]] = field(default=None, repr=False)

    # -- enumeration --------------------------------------------------------

    def _enumerate(self) -> None:
        e = identity(self.degree)
        gens = sorted(set(self.generators))
        elems = [e]
        index = {e: 0}
        queue = deque([e])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mul(x, g)
                if y not in index:
                    if len(elems) >= self.cap:
                        raise GroupError(f"group order exceeds cap {self.cap}")
                    index[y] = len(elems)
                    elems.append(y)
                    queue.append(y)
        self._elements = elems
        self._index = index

    @property
    def elements(self) -> list[Perm]:
        if self._elements is None:
            self._enumerate()
        return self._elements

    @property
    def index(self) -> dict[Perm, int]:
        if self._index is None:
            self._enumerate()
        return self._index

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul_idx(self, i: int, j: int) -> int:
        el = self.elements
        return self.index[mul(el[i], el[j])]

    def inv_idx(self, i: int) -> int:
        if self._inverse is None:
            idx = self.index
            self._inverse = [idx[inverse(p)] for p in self.elements]
        return self._inverse[i]

    def pow_idx(self, i: int, k: int) -> int:
        p = self.elements[i]
        r = identity(self.degree)
        k %= perm_order(p)
        base = p
        while k:
            if k & 1:
                r = mul(r, base)
            base = mul(base, base)
            k >>= 1
        return self.index[r]

    def element_order(self, i: int) -> int:
        return perm_order(self.elements[i])

    @property
    def exponent(self) -> int:
        return math.lcm(*(perm_order(p) for p in self.elements))

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(mul(a, b) == mul(b, a) for a in gens for b in gens)

    # -- classes ---------------------------------------------------------------

    def _compute_classes(self) -> None:
        el = self.elements
        idx = self.index
        gens = sorted(set(self.generators))
        ginv = [inverse(g) for g in gens]
        class_of = [-1] * len(el)
        classes = []
        for i in range(len(el)):
            if class_of[i] != -1:
                continue
            c = len(classes)
            orbit = [i]
            class_of[i] = c
            k = 0
            while k < len(orbit):
                x = el[orbit[k]]
                k += 1
                for g, gi in zip(gens, ginv):
                    j = idx[mul(mul(gi, x), g)]
                    if class_of[j] == -1:
                        class_of[j] = c
                        orbit.append(j)
            # i is the least unvisited index, hence the least member
            classes.append(ConjugacyClass(i, frozenset(orbit)))
        self._classes = classes
        self._class_of = class_of

    @property
    def classes(self) -> list[ConjugacyClass]:
        if self._classes is None:
            self._compute_classes()
        return self._classes

    def class_of(self, i: int) -> int:
        if self._class_of is None:
            self._compute_classes()
        return self._class_of[i]

    def power_map(self, k: int) -> list[int]:
        """Class index of g^k for a representative g of each class."""
        return [self.class_of(self.pow_idx(c.representative, k)) for c in self.classes]

    def freeze(self) -> "PermutationGroup":
        self.classes
        self.inv_idx(0)
        return self

    def __repr__(self) -> str:
        label = self.name or "PermutationGroup"
        return f"<{label} degree={self.degree} gens={len(self.generators)}>"


def conjugacy_classes(G: PermutationGroup) -> list[ConjugacyClass]:
    return G.classes


def power_map(G: PermutationGroup, k: int) -> list[int]:
    return G.power_map(k)


def from_generators(degree: int, perms: Iterable[Sequence[int]], name: str = "",
                    cap: int = DEFAULT_CAP) -> PermutationGroup:
    gens = [_check_perm(p, degree) for p in perms]
    if not gens:
        gens = [identity(degree)]
    return PermutationGroup(degree, gens, name=name, cap=cap)


def elements(G: PermutationGroup) -> list[Perm]:
    return G.elements


# -- subgroup-level queries ------------------------------------------------------


def _closure(G: PermutationGroup, seeds: Iterable[int]) -> frozenset[int]:
    """Index set of the subgroup generated by the given element indices."""
    seeds = sorted(set(seeds))
    sub = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = G.mul_idx(x, s)
                if y not in sub:
                    sub.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(sub)


def commutator_image(G: PermutationGroup) -> set[int]:
    """Indices of all elements of the form [x, y]."""
    n = G.order
    out = set()
    for x in range(n):
        xi = G.inv_idx(x)
        for y in range(n):
            yi = G.inv_idx(y)
            out.add(G.mul_idx(G.mul_idx(xi, yi), G.mul_idx(x, y)))
    return out


def squares_image(G: PermutationGroup) -> set[int]:
    """Indices of all squares x^2."""
    return {G.mul_idx(x, x) for x in range(G.order)}


def derived_subgroup(G: PermutationGroup, sub: Optional[frozenset[int]] = None) -> frozenset[int]:
    """Commutator subgroup of ``sub`` (all of G by default)."""
    members = sorted(sub) if sub is not None else range(G.order)
    comms = set()
    for x in members:
        xi = G.inv_idx(x)
        for y in members:
            comms.add(G.mul_idx(G.mul_idx(xi, G.inv_idx(y)), G.mul_idx(x, y)))
    return _closure(G, comms)


def derived_series(G: PermutationGroup) -> list[int]:
    """Orders of G = D0 > D1 > ... until the series stabilises."""
    cur = frozenset(range(G.order))
    orders = [len(cur)]
    for _ in range(G.order):
        nxt = derived_subgroup(G, cur)
        if nxt == cur:
            break
        cur = nxt
        orders.append(len(cur))
    return orders


def derived_length(G: PermutationGroup) -> Union[int, str]:
    """Number of strict steps down to the trivial group, or ``NON_SOLVABLE``.

    The trivial group has derived length 0 here; abelian nontrivial groups 1.
    """
    series = derived_series(G)
    if series[-1] != 1:
        return NON_SOLVABLE
    return len(series) - 1


def center(G: PermutationGroup) -> set[int]:
    return {c.representative for c in G.classes if c.size == 1}


# -- catalog -------------------------------------------------------------------


def cyclic(n: int) -> PermutationGroup:
    if n < 1:
        raise GroupError("cyclic(n) requires n >= 1")
    return from_generators(n, [tuple((i + 1) % n for i in range(n))], name=f"cyclic:{n}")


def abelian(*ns: int) -> PermutationGroup:
    if not ns or any(n < 1 for n in ns):
        raise GroupError("abelian requires positive factors")
    G = cyclic(ns[0])
    for n in ns[1:]:
        G = direct_product(G, cyclic(n))
    G.name = "abelian:" + ",".join(map(str, ns))
    return G


def dihedral(m: int) -> PermutationGroup:
    """Dihedral group of order m (m even)."""
    if m < 2 or m % 2:
        raise GroupError(f"dihedral({m}): order must be even and >= 2")
    k = m // 2
    if k == 1:
        G = cyclic(2)
    elif k == 2:
        G = abelian(2, 2)
    else:
        rot = tuple((i + 1) % k for i in range(k))
        ref = tuple((-i) % k for i in range(k))
        G = from_generators(k, [rot, ref])
    G.name = f"dihedral:{m}"
    return G


def _regular(order: int, mult, gens: Sequence[int], name: str) -> PermutationGroup:
    """Right regular representation of a group given on 0..order-1."""
    perms = [tuple(mult(h, g) for h in range(order)) for g in gens]
    return from_generators(order, perms, name=name)


def dicyclic(m: int) -> PermutationGroup:
    """Dicyclic group of order m (4 | m); generalised quaternion for m = 2^k."""
    if m < 4 or m % 4:
        raise GroupError(f"dicyclic({m}): order must be a positive multiple of 4")
    n = m // 4
    two_n = 2 * n

    # element (k, j) = a^k x^j encoded as k + two_n * j
    def mult(u: int, v: int) -> int:
        k1, j1 = u % two_n, u // two_n
        k2, j2 = v % two_n, v // two_n
        if j1 == 0:
            return (k1 + k2) % two_n + two_n * j2
        if j2 == 0:
            return (k1 - k2) % two_n + two_n
        return (k1 - k2 + n) % two_n

    return _regular(m, mult, [1, two_n], f"dicyclic:{m}")


def symmetric(n: int) -> PermutationGroup:
    if n < 1:
        raise GroupError("symmetric(n) requires n >= 1")
    gens = []
    if n >= 2:
        gens.append(from_cycles(n, [(1, 2)]))
    if n >= 3:
        gens.append(tuple((i + 1) % n for i in range(n)))
    return from_generators(n, gens, name=f"sym:{n}")


def alternating(n: int) -> PermutationGroup:
    if n < 1:
        raise GroupError("alternating(n) requires n >= 1")
    gens = [from_cycles(n, [(1, 2, i)]) for i in range(3, n + 1)]
    return from_generators(n, gens, name=f"alt:{n}")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def heisenberg(p: int) -> PermutationGroup:
    """Unitriangular 3x3 matrices over Z_p, as affine maps of (Z_p)^2.

    v -> M v + w with M = [[1, s], [0, 1]]; order p^3, exponent p for odd p.
    """
    if not _is_prime(p):
        raise GroupError(f"heisenberg({p}): p must be prime")

    def pt(a: int, b: int) -> int:
        return a * p + b

    shear = tuple(pt((a + b) % p, b) for a in range(p) for b in range(p))
    tx = tuple(pt((a + 1) % p, b) for a in range(p) for b in range(p))
    ty = tuple(pt(a, (b + 1) % p) for a in range(p) for b in range(p))
    return from_generators(p * p, [shear, tx, ty], name=f"heisenberg:{p}")


def extraspecial_p2(p: int) -> PermutationGroup:
    """Affine maps a -> (1+p)^s a + t of Z_{p^2}; order p^3, exponent p^2."""
    if not _is_prime(p):
        raise GroupError(f"extraspecial_p2({p}): p must be prime")
    q = p * p
    trans = tuple((a + 1) % q for a in range(q))
    scale = tuple(((1 + p) * a) % q for a in range(q))
    return from_generators(q, [trans, scale], name=f"extraspecial_p2:{p}")


def direct_product(G: PermutationGroup, H: PermutationGroup) -> PermutationGroup:
    """Disjoint-union action of G x H."""
    dg, dh = G.degree, H.degree
    gens = [tuple(g) + tuple(range(dg, dg + dh)) for g in G.generators]
    gens += [tuple(range(dg)) + tuple(dg + i for i in h) for h in H.generators]
    return from_generators(dg + dh, gens, name=f"dp:({G.name})x({H.name})",
                           cap=max(G.cap, H.cap))


def semidirect_cyclic(n: int, m: int, r: int) -> PermutationGroup:
    """Z_n x| Z_m where the generator of Z_m acts by x -> x^r (needs r^m = 1 mod n)."""
    if n < 1 or m < 1:
        raise GroupError("semidirect_cyclic requires n, m >= 1")
    if n > 1 and (math.gcd(r, n) != 1 or pow(r, m, n) != 1 % n):
        raise GroupError(f"semidirect_cyclic({n},{m},{r}): need r^m = 1 mod n")
    rpow = [pow(r, k, n) if n > 1 else 0 for k in range(m)]

    # (a, b) encoded as a + n*b; (a1,b1)(a2,b2) = (a1 + r^b1 a2, b1 + b2)
    def mult(u: int, v: int) -> int:
        a1, b1 = u % n, u // n
        a2, b2 = v % n, v // n
        return (a1 + rpow[b1] * a2) % n + n * ((b1 + b2) % m)

    gens = [1 % (n * m), n % (n * m)] if n * m > 1 else [0]
    return _regular(n * m, mult, gens, f"sdp:{n},{m},{r}")


def perm_group(text: str) -> PermutationGroup:
    """Group from ``;``-separated generators in 1-based cycle notation."""
    gens_cycles = []
    degree = 1
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not re.fullmatch(r"(\(\s*\d+(\s*,\s*\d+)*\s*\))+|\(\)", chunk):
            raise GroupError(f"bad generator {chunk!r}")
        cycles = [tuple(int(x) for x in c.split(",")) for c in re.findall(r"\(([^()]+)\)", chunk)]
        for c in cycles:
            degree = max(degree, *c)
        gens_cycles.append(cycles)
    gens = [from_cycles(degree, cyc) for cyc in gens_cycles]
    return from_generators(degree, gens, name=f"perm:{text}")


# -- spec strings -------------------------------------------------------------------


def _ints(arg: str, count: Optional[int] = None) -> list[int]:
    try:
        vals = [int(x) for x in arg.split(",")]
    except ValueError:
        raise GroupError(f"expected integers, got {arg!r}") from None
    if count is not None and len(vals) != count:
        raise GroupError(f"expected {count} integer(s), got {arg!r}")
    return vals


def _split_dp(arg: str) -> list[str]:
    parts = []
    depth = 0
    start = None
    for i, ch in enumerate(arg):
        if ch == "(":
            if depth == 0:
                start = i + 1
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                parts.append(arg[start:i])
        elif depth == 0 and ch not in "x ":
            raise GroupError(f"bad direct product {arg!r}")
    if depth != 0 or len(parts) < 2:
        raise GroupError(f"bad direct product {arg!r}")
    return parts


def from_spec(spec: str) -> PermutationGroup:
    """Build a catalog group from a string such as ``dihedral:8`` or ``sdp:9,3,4``."""
    spec = spec.strip()
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise GroupError(f"unknown group spec {spec!r}")
    if kind == "cyclic":
        G = cyclic(*_ints(arg, 1))
    elif kind == "abelian":
        G = abelian(*_ints(arg))
    elif kind == "dihedral":
        G = dihedral(*_ints(arg, 1))
    elif kind == "dicyclic":
        G = dicyclic(*_ints(arg, 1))
    elif kind in ("sym", "symmetric"):
        G = symmetric(*_ints(arg, 1))
    elif kind in ("alt", "alternating"):
        G = alternating(*_ints(arg, 1))
    elif kind == "heisenberg":
        G = heisenberg(*_ints(arg, 1))
    elif kind == "extraspecial_p2":
        G = extraspecial_p2(*_ints(arg, 1))
    elif kind == "sdp":
        G = semidirect_cyclic(*_ints(arg, 3))
    elif kind == "dp":
        factors = [from_spec(s) for s in _split_dp(arg)]
        G = factors[0]
        for H in factors[1:]:
            G = direct_product(G, H)
    elif kind == "perm":
        G = perm_group(arg)
    else:
        raise GroupError(f"unknown group family {kind!r}")
    G.name = spec
    return G


def split_spec_list(text: str) -> list[str]:
    """Split a comma-separated list of specs; commas inside a spec's arguments are kept.

    ``dihedral:8,abelian:2,4`` -> ``["dihedral:8", "abelian:2,4"]``.
    """
    out = []
    depth = 0
    cur = ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0 and re.match(r"[A-Za-z_][A-Za-z_0-9]*:", text[i + 1:]):
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
        i += 1
    if cur.strip():
        out.append(cur.strip())
    return out


def element_order_profile(G: PermutationGroup) -> tuple[tuple[int, int], ...]:
    """Sorted (order, count) pairs over all elements."""
    return tuple(sorted(Counter(perm_order(p) for p in G.elements).items()))
