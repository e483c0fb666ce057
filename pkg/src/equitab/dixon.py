"""Character tables of permutation groups by Burnside's class-algebra method.

Central characters are the common eigenvectors of the class multiplication
matrices, computed over a prime field GF(p) with p = 1 mod exp(G) so every
eigenvalue is available.  Each modular character is then lifted to exact
cyclotomic values from the multiplicities of the roots of unity on every
cyclic subgroup (Dixon's method).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .cyclo import Cyclotomic
from .groups import PermutationGroup
from .tables import CharacterTable, NotACharacterTable, check_orthogonality, identity_column

PRIME_BOUND = 10**9


class DixonError(RuntimeError):
    pass


@dataclass
class ClassAlgebra:
    """Structure constants a[i][j][k] = #{(x, y) in Ci x Cj : xy = z_k}."""

    n: int
    sizes: list[int]
    constants: list[list[list[int]]]
    exponent: int
    inverse_class: list[int]


def _pair_counts(G: PermutationGroup, z: int, n: int) -> list[list[int]]:
    counts = [[0] * n for _ in range(n)]
    for x in range(G.order):
        y = G.mul_idx(G.inv_idx(x), z)
        counts[G.class_of(x)][G.class_of(y)] += 1
    return counts


def class_algebra(G: PermutationGroup) -> ClassAlgebra:
    classes = G.classes
    n = len(classes)
    sizes = [c.size for c in classes]
    a = [[[0] * n for _ in range(n)] for _ in range(n)]
    for k, cls in enumerate(classes):
        counts = _pair_counts(G, cls.representative, n)
        for i in range(n):
            for j in range(n):
                a[i][j][k] = counts[i][j]
        # the constants must not depend on the chosen element of C_k
        other = max(cls.members)
        if other != cls.representative and _pair_counts(G, other, n) != counts:
            raise DixonError(f"class constants depend on representative in class {k}")
    for i in range(n):
        for j in range(n):
            if sum(a[i][j][k] * sizes[k] for k in range(n)) != sizes[i] * sizes[j]:
                raise DixonError(f"class constants fail the counting identity at ({i}, {j})")
    inv_class = [G.class_of(G.inv_idx(c.representative)) for c in classes]
    return ClassAlgebra(n, sizes, a, G.exponent, inv_class)


# -- arithmetic over GF(p) ------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def choose_prime(exponent: int, order: int) -> int:
    """Smallest prime p = 1 (mod exponent) with p > 2*sqrt(order)."""
    p = exponent + 1
    while p < PRIME_BOUND:
        if p * p > 4 * order and _is_prime(p):
            return p
        p += exponent
    raise DixonError(f"no suitable prime below {PRIME_BOUND} for exponent {exponent}")


def _primitive_root(p: int) -> int:
    factors = []
    m, d = p - 1, 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    return 1


def _rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    rows = [r[:] for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _nullspace(mat: list[list[int]], p: int) -> list[list[int]]:
    """Basis of {v : mat v = 0} over GF(p)."""
    ncols = len(mat[0])
    red, pivots = _rref(mat, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis


def _charpoly(mat: list[list[int]], p: int) -> list[int]:
    """Characteristic polynomial (low degree first) via Hessenberg reduction."""
    n = len(mat)
    H = [r[:] for r in mat]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1] % p), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        t = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = H[i][m - 1] * t % p
            if not u:
                continue
            H[i] = [(x - u * y) % p for x, y in zip(H[i], H[m])]
            for row in H:
                row[m] = (row[m] + u * row[i]) % p
    polys = [[1]]
    for m in range(1, n + 1):
        # (x - h_mm) * p_{m-1}
        prev = polys[m - 1]
        cur = [0] + prev
        for k, c in enumerate(prev):
            cur[k] = (cur[k] - H[m - 1][m - 1] * c) % p
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = prod * H[i][i - 1] % p
            coef = H[i - 1][m - 1] * prod % p
            if coef:
                for k, c in enumerate(polys[i - 1]):
                    cur[k] = (cur[k] - coef * c) % p
        polys.append(cur)
    return polys[n]


def _ptrim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        if c:
            for k, y in enumerate(b):
                a[shift + k] = (a[shift + k] - c * y) % p
        a.pop()
        _ptrim(a)
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(_ptrim(out), f, p)


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(a[:]), _ptrim(b[:])
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _ptrim([((a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0)) % p for k in range(n)])


def _pdiv(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - len(b) + 1)
    for shift in range(len(a) - len(b), -1, -1):
        c = a[shift + len(b) - 1] * inv % p
        q[shift] = c
        if c:
            for k, y in enumerate(b):
                a[shift + k] = (a[shift + k] - c * y) % p
    return _ptrim(q)


def _roots(f: list[int], p: int) -> list[int]:
    """Distinct roots in GF(p) of f (Cantor-Zassenhaus splitting, fixed seeds)."""
    f = _ptrim([c % p for c in f])
    g = _pgcd(f, _psub(_ppowmod([0, 1], p, f, p), [0, 1], p), p)
    out: list[int] = []
    stack = [g]
    while stack:
        h = stack.pop()
        if len(h) <= 1:
            continue
        if len(h) == 2:
            out.append((-h[0]) * pow(h[1], -1, p) % p)
            continue
        for a in range(p):
            s = _psub(_ppowmod([a, 1], (p - 1) // 2, h, p), [1], p)
            d = _pgcd(h, s, p)
            if 1 < len(d) < len(h):
                stack.append(d)
                stack.append(_pdiv(h, d, p))
                break
        else:
            raise DixonError("polynomial splitting failed")
    return sorted(out)


def _common_eigenvectors(mats: list[list[list[int]]], n: int, p: int) -> list[list[int]]:
    """Split GF(p)^n into 1-dimensional common eigenspaces of commuting matrices."""
    spaces = [[[int(i == j) for j in range(n)] for i in range(n)]]
    for M in mats:
        if all(len(s) == 1 for s in spaces):
            break
        nxt = []
        for basis in spaces:
            d = len(basis)
            if d == 1:
                nxt.append(basis)
                continue
            basis, pivots = _rref(basis, p)
            # restriction of M to the subspace, in coordinates at the pivots
            images = [[sum(M[r][c] * b[c] for c in range(n)) % p for r in range(n)] for b in basis]
            R = [[images[t][pivots[s]] for t in range(d)] for s in range(d)]
            total = 0
            for lam in _roots(_charpoly(R, p), p):
                shifted = [[(R[s][t] - (lam if s == t else 0)) % p for t in range(d)] for s in range(d)]
                coords = _nullspace(shifted, p)
                nxt.append([[sum(c[s] * basis[s][k] for s in range(d)) % p for k in range(n)] for c in coords])
                total += len(coords)
            if total != d:
                raise DixonError("class matrices are not simultaneously diagonalisable mod p")
        spaces = nxt
    if any(len(s) != 1 for s in spaces):
        raise DixonError("eigenspaces did not split into lines")
    return [s[0] for s in spaces]


def character_table(G: PermutationGroup, id: str = "") -> CharacterTable:
    """Exact character table; trivial row first, then rows by (degree, values under cmp_total)."""
    G.freeze()
    alg = class_algebra(G)
    n, sizes, order, e = alg.n, alg.sizes, G.order, alg.exponent
    p = choose_prime(e, order)
    zeta = pow(_primitive_root(p), (p - 1) // e, p)
    # (M_i)_{jk} = a[i][j][k]; central characters are common right eigenvectors
    mats = [[[alg.constants[i][j][k] % p for k in range(n)] for j in range(n)] for i in range(n)]
    vecs = _common_eigenvectors(mats, n, p)

    orders = [G.element_order(c.representative) for c in G.classes]
    powers = {}  # (class, j) -> class of rep^j
    for i, c in enumerate(G.classes):
        for j in range(orders[i]):
            powers[i, j] = G.class_of(G.pow_idx(c.representative, j))

    rows = []
    for w in vecs:
        inv0 = pow(w[0], -1, p)
        omega = [x * inv0 % p for x in w]
        s = sum(omega[i] * omega[alg.inverse_class[i]] * pow(sizes[i], -1, p) for i in range(n)) % p
        target = order * pow(s, -1, p) % p
        deg = next((d for d in range(1, math.isqrt(order) + 1) if order % d == 0 and d * d % p == target), None)
        if deg is None:
            raise DixonError("could not recover a character degree")
        modvals = [omega[i] * deg * pow(sizes[i], -1, p) % p for i in range(n)]
        row = []
        for i in range(n):
            o = orders[i]
            step = e // o
            inv_o = pow(o, -1, p)
            mult = {}
            for k in range(o):
                m = sum(modvals[powers[i, j]] * pow(zeta, (-step * j * k) % e, p) for j in range(o)) * inv_o % p
                if m > deg:
                    raise DixonError("root-of-unity multiplicity exceeds the degree")
                if m:
                    mult[k] = m
            row.append(Cyclotomic.from_powers(o, mult))
        rows.append(row)
    rows.sort(key=lambda r: (r[0].is_rational_integer(), any(x != 1 for x in r), tuple(x.sort_key() for x in r)))
    t = CharacterTable(id or G.name, tuple(map(tuple, rows)), order_hint=order, identity_hint=0,
                       sizes_hint=tuple(sizes))
    try:
        check_orthogonality(t)
    except NotACharacterTable as exc:
        raise DixonError(f"orthogonality check failed: {exc}") from exc
    identity_column(t)
    return t
