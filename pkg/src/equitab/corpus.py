"""Catalog spec lists covering every group of order at most 27.

Each order's list holds pairwise non-isomorphic groups; the test suite checks
that with brute-force invariants.  Groups that are not direct or cyclic
semidirect products are given as explicit permutation generators.
"""
from __future__ import annotations

# (C4 x C2) x| C2, SmallGroups id (16,3): swaps two central involutions
G16_3 = "perm:(1,2);(3,4);(1,3)(2,4)(5,6,7,8)"
# Pauli group C4 o D8 acting on {i^k e_j}, (16,13)
G16_13 = "perm:(1,5)(2,6)(3,7)(4,8);(5,7)(6,8);(1,2,3,4)(5,6,7,8)"
# (C3 x C3) x| C2 with inversion
G18_GENERALIZED_DIHEDRAL = "perm:(1,2,3);(4,5,6);(2,3)(5,6)"
# SL(2,3) on the nonzero vectors of GF(3)^2
G24_SL23 = "perm:(1,4,7)(2,8,5);(3,4,5)(6,8,7)"
# C3 x| D8 with kernel V4, (24,8)
G24_8 = "perm:(1,2,3);(2,3)(4,5,6,7);(4,6)"

BY_ORDER: dict[int, list[str]] = {
    1: ["cyclic:1"],
    2: ["cyclic:2"],
    3: ["cyclic:3"],
    4: ["cyclic:4", "abelian:2,2"],
    5: ["cyclic:5"],
    6: ["cyclic:6", "sym:3"],
    7: ["cyclic:7"],
    8: ["cyclic:8", "abelian:2,4", "abelian:2,2,2", "dihedral:8", "dicyclic:8"],
    9: ["cyclic:9", "abelian:3,3"],
    10: ["cyclic:10", "dihedral:10"],
    11: ["cyclic:11"],
    12: ["cyclic:12", "abelian:2,6", "dihedral:12", "dicyclic:12", "alt:4"],
    13: ["cyclic:13"],
    14: ["cyclic:14", "dihedral:14"],
    15: ["cyclic:15"],
    16: [
        "cyclic:16",
        "abelian:4,4",
        G16_3,
        "sdp:4,4,3",
        "abelian:2,8",
        "sdp:8,2,5",
        "dihedral:16",
        "sdp:8,2,3",
        "dicyclic:16",
        "abelian:2,2,4",
        "dp:(dihedral:8)x(cyclic:2)",
        "dp:(dicyclic:8)x(cyclic:2)",
        G16_13,
        "abelian:2,2,2,2",
    ],
    17: ["cyclic:17"],
    18: ["cyclic:18", "abelian:3,6", "dihedral:18", "dp:(cyclic:3)x(sym:3)", G18_GENERALIZED_DIHEDRAL],
    19: ["cyclic:19"],
    20: ["cyclic:20", "abelian:2,10", "dihedral:20", "dicyclic:20", "sdp:5,4,2"],
    21: ["cyclic:21", "sdp:7,3,2"],
    22: ["cyclic:22", "dihedral:22"],
    23: ["cyclic:23"],
    24: [
        "sdp:3,8,2",
        "cyclic:24",
        G24_SL23,
        "dicyclic:24",
        "dp:(cyclic:4)x(sym:3)",
        "dihedral:24",
        "dp:(cyclic:2)x(dicyclic:12)",
        G24_8,
        "abelian:2,12",
        "dp:(cyclic:3)x(dihedral:8)",
        "dp:(cyclic:3)x(dicyclic:8)",
        "sym:4",
        "dp:(cyclic:2)x(alt:4)",
        "dp:(abelian:2,2)x(sym:3)",
        "abelian:2,2,6",
    ],
    25: ["cyclic:25", "abelian:5,5"],
    26: ["cyclic:26", "dihedral:26"],
    27: ["cyclic:27", "abelian:3,9", "abelian:3,3,3", "heisenberg:3", "extraspecial_p2:3"],
}

ORDER_8 = BY_ORDER[8]
ORDER_16 = BY_ORDER[16]
ORDER_27 = BY_ORDER[27]

# every group of order <= 27, one spec per isomorphism type
CORPUS: list[str] = [s for o in sorted(BY_ORDER) for s in BY_ORDER[o]]

# extra groups up to order 60 for character-theory cross-checks
CROSSCHECK_EXTRA: list[str] = [
    "dihedral:30",
    "dicyclic:32",
    "sdp:16,2,7",
    "dp:(sym:3)x(sym:3)",
    "sdp:13,3,3",
    "sdp:7,6,3",
    "dihedral:48",
    "dp:(alt:4)x(cyclic:4)",
    "sdp:11,5,3",
    "alt:5",
    "dicyclic:60",
]
