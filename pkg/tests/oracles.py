"""Independent reference computations used to derive frozen test values.

Nothing here imports starcat.  Algebras are hand-coded multiplication tables of
the star zigzag algebra and its quotient; ranks come from sympy.
"""

from itertools import product

import sympy


def star_paths(n, max_len):
    """All paths of length ≤ max_len in the doubled star quiver, composition order."""
    arrows = {}
    for k in range(1, n + 1):
        arrows["a%d" % k] = (0, k)  # a_k: 0 → k
        arrows["b%d" % k] = (k, 0)
    out = [("e%d" % v,) for v in range(n + 1)]
    frontier = [(a,) for a in arrows]
    for _ in range(max_len):
        out += frontier
        nxt = []
        for p in frontier:
            for a, (s, t) in arrows.items():
                # p after a needs source(p) = target(a)
                if arrows[p[-1]][0] == t:
                    nxt.append(p + (a,))
        frontier = nxt
    return out, arrows


def path_algebra_dim(n, star=False):
    """dim of the zigzag (or star-quotient) algebra as span(paths ≤ 3) / relations."""
    paths, arrows = star_paths(n, 3)
    idx = {p: i for i, p in enumerate(paths)}
    rels = []
    for p in paths:
        if len(p) == 3:
            rels.append({idx[p]: 1})
    for k in range(2, n + 1):
        rels.append({idx[("b%d" % k, "a%d" % k)]: 1, idx[("b1", "a1")]: -1})
    for j, k in product(range(1, n + 1), repeat=2):
        if j != k:
            rels.append({idx[("a%d" % j, "b%d" % k)]: 1})
    if star:
        for k in range(1, n + 1):
            rels.append({idx[("a%d" % k, "b%d" % k)]: 1})
    M = sympy.zeros(len(rels), len(paths))
    for r, rel in enumerate(rels):
        for c, x in rel.items():
            M[r, c] = x
    return len(paths) - M.rank()


class TableAlgebra:
    """Basis e_i, a_k, b_k, c and (zigzag only) c_k with explicit products."""

    def __init__(self, n, star):
        self.n = n
        self.names = ["e%d" % v for v in range(n + 1)]
        self.names += ["a%d" % k for k in range(1, n + 1)] + ["b%d" % k for k in range(1, n + 1)]
        self.names.append("c")
        if not star:
            self.names += ["c%d" % k for k in range(1, n + 1)]
        self.ends = {}
        for v in range(n + 1):
            self.ends["e%d" % v] = (v, v)
        for k in range(1, n + 1):
            self.ends["a%d" % k] = (0, k)
            self.ends["b%d" % k] = (k, 0)
            self.ends["c%d" % k] = (k, k)
        self.ends["c"] = (0, 0)
        self.index = {x: i for i, x in enumerate(self.names)}

    def mul(self, x, y):
        """x·y = x after y, as a basis name or None."""
        sx, tx = self.ends[x]
        sy, ty = self.ends[y]
        if sx != ty:
            return None
        if x.startswith("e"):
            return y
        if y.startswith("e"):
            return x
        if x[0] == "b" and y[0] == "a" and x[1:] == y[1:]:
            return "c"
        if x[0] == "a" and y[0] == "b" and x[1:] == y[1:]:
            name = "c" + x[1:]
            return name if name in self.index else None
        return None

    def source(self, x):
        return self.ends[x][0]

    def target(self, x):
        return self.ends[x][1]


def _nullity(rows, ncols):
    if not rows:
        return ncols
    M = sympy.Matrix(rows)
    return ncols - M.rank()


def hom_reg_to_projective(n, j, star):
    """dim Hom_{A-A}(A, A e_j ⊗ e_0 A) = dim {m : x m = m x for all basis x}."""
    A = TableAlgebra(n, star)
    left = [p for p in A.names if A.source(p) == j]
    right = [q for q in A.names if A.target(q) == 0]
    pairs = [(p, q) for p in left for q in right]
    pos = {pq: i for i, pq in enumerate(pairs)}
    rows = []
    for x in A.names:
        eq = {}
        for (p, q), i in pos.items():
            xp = A.mul(x, p)
            if xp is not None:
                eq.setdefault((xp, q), {})
                eq[(xp, q)][i] = eq[(xp, q)].get(i, 0) + 1
            qx = A.mul(q, x)
            if qx is not None:
                eq.setdefault((p, qx), {})
                eq[(p, qx)][i] = eq[(p, qx)].get(i, 0) - 1
        for key, coeffs in eq.items():
            rows.append([coeffs.get(i, 0) for i in range(len(pairs))])
    return _nullity(rows, len(pairs))


def center_dim(n, star):
    A = TableAlgebra(n, star)
    m = len(A.names)
    rows = []
    for x in A.names:
        eq = {}
        for i, z in enumerate(A.names):
            xz, zx = A.mul(x, z), A.mul(z, x)
            if xz is not None:
                eq.setdefault(xz, {})[i] = eq.get(xz, {}).get(i, 0) + 1
            if zx is not None:
                eq.setdefault(zx, {})[i] = eq.get(zx, {}).get(i, 0) - 1
        for coeffs in eq.values():
            rows.append([coeffs.get(i, 0) for i in range(m)])
    return _nullity(rows, m)


def is_morphism_image(n, j, element):
    """Is 1 ↦ element a bimodule map A → A e_j ⊗ e_0 A?  element: {(p, q): coeff}."""
    A = TableAlgebra(n, False)
    for x in A.names:
        lhs, rhs = {}, {}
        for (p, q), c in element.items():
            xp = A.mul(x, p)
            if xp is not None:
                lhs[(xp, q)] = lhs.get((xp, q), 0) + c
            qx = A.mul(q, x)
            if qx is not None:
                rhs[(p, qx)] = rhs.get((p, qx), 0) + c
        if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
            return False
    return True


def bell(n):
    return int(sympy.bell(n))


def restricted_growth_strings(n):
    """Set partitions of {1..n} as restricted growth strings, by brute force over all words."""
    out = []
    for w in product(range(n), repeat=n):
        if w[0] != 0:
            continue
        if all(w[i] <= max(w[:i]) + 1 for i in range(1, n)):
            out.append(w)
    return out


def radical_power_dims(names, mul, radical):
    """dims of rad, rad², ... for an algebra given by basis names and a basis product."""
    out = []
    cur = set(radical)
    while cur:
        out.append(len(cur))
        nxt = set()
        for x in cur:
            for y in radical:
                z = mul(x, y)
                if z is not None:
                    nxt.add(z)
        cur = nxt
    return out
