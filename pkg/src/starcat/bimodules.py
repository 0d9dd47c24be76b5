"""Bimodules over finite-dimensional algebras given by action matrices.

Every basis vector of a bimodule is homogeneous for the vertex idempotents:
``grading[k] = (v, w)`` means the vector lies in ``e_v M e_w``.  Actions are
stored on generators (vertex idempotents and arrows) and extended to basis
paths by composing arrow matrices.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .quiver_algebra import (Algebra, AlgebraPresentation, FiniteDimAlgebra, Quiver,
                             algebra_from_presentation)
from .exact_linalg import (Echelon, Field, Matrix, Subspace, block_diag, hstack, kernel_vectors,
                           vstack)


class BimoduleError(ValueError):
    pass


class DecompositionError(BimoduleError):
    pass


_GROUND: dict = {}


def ground_algebra(field: Field) -> FiniteDimAlgebra:
    """The ground field as a one-vertex algebra (right algebra of left modules)."""
    if field not in _GROUND:
        p = AlgebraPresentation(Quiver(1, ()), (), 1)
        _GROUND[field] = algebra_from_presentation(p, field, "k")
    return _GROUND[field]


class Bimodule:
    _counter = 0

    def __init__(self, left: FiniteDimAlgebra, right: FiniteDimAlgebra, dim: int,
                 grading: Sequence[tuple], left_action: dict, right_action: dict,
                 label: str | None = None, names: Sequence[str] | None = None):
        if len(grading) != dim:
            raise BimoduleError("grading length %d for dim %d" % (len(grading), dim))
        self.left = left
        self.right = right
        self.dim = dim
        self.grading = list(grading)
        self.left_action = left_action
        self.right_action = right_action
        self.label = label
        self.names = list(names) if names is not None else None
        self.field = left.field
        self._lcache: dict = {}
        self._rcache: dict = {}
        Bimodule._counter += 1
        self.uid = Bimodule._counter

    def __repr__(self):
        return "Bimodule(%s, dim %d)" % (self.label or "#%d" % self.uid, self.dim)

    # actions of basis elements and arbitrary elements
    def L(self, i: int) -> Matrix:
        """Left action of basis element i of the left algebra."""
        if i not in self._lcache:
            b = self.left.basis[i]
            if b.length == 0:
                m = self.left_action["e%d" % b.source]
            else:
                m = self.left_action[b.path[0]]
                for g in b.path[1:]:
                    m = m @ self.left_action[g]
            self._lcache[i] = m
        return self._lcache[i]

    def R(self, i: int) -> Matrix:
        """Right action m ↦ m·b_i of basis element i of the right algebra."""
        if i not in self._rcache:
            b = self.right.basis[i]
            if b.length == 0:
                m = self.right_action["e%d" % b.source]
            else:
                m = self.right_action[b.path[0]]
                for g in b.path[1:]:
                    m = self.right_action[g] @ m
            self._rcache[i] = m
        return self._rcache[i]

    def L_elem(self, x: dict) -> Matrix:
        m = Matrix.zeros(self.dim, self.dim)
        for i, c in x.items():
            m = m + self.L(i).scale(c)
        return m

    def R_elem(self, x: dict) -> Matrix:
        m = Matrix.zeros(self.dim, self.dim)
        for i, c in x.items():
            m = m + self.R(i).scale(c)
        return m

    def arrow_generators(self):
        """(label, matrix) pairs for arrows: left then right."""
        ls = [(lab, self.left_action[lab]) for lab, _, _ in self.left.quiver.arrows]
        rs = [(lab, self.right_action[lab]) for lab, _, _ in self.right.quiver.arrows]
        return ls, rs

    def grading_dims(self) -> Counter:
        return Counter(self.grading)

    def check(self) -> bool:
        """Bimodule axioms: relations of both algebras, unit, commuting actions."""
        for alg, act in ((self.left, self.L), (self.right, None)):
            for i in range(alg.dim):
                for j in range(alg.dim):
                    prod = alg.mult.get((i, j), {})
                    if act is not None:
                        lhs = self.L(i) @ self.L(j)
                        rhs = self.L_elem(prod)
                    else:
                        lhs = self.R(j) @ self.R(i)
                        rhs = self.R_elem(prod)
                    if lhs != rhs:
                        return False
        ident = Matrix.identity(self.dim, self.field)
        if self.L_elem(self.left.unit) != ident or self.R_elem(self.right.unit) != ident:
            return False
        for g, lm in self.left_action.items():
            for h, rm in self.right_action.items():
                if lm @ rm != rm @ lm:
                    return False
        return True


@dataclass(eq=False)
class BimoduleMorphism:
    source: Bimodule
    target: Bimodule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise BimoduleError("matrix shape %s for %s → %s" % (self.matrix.shape, self.source, self.target))

    def __matmul__(self, other: "BimoduleMorphism") -> "BimoduleMorphism":
        """Composition self ∘ other."""
        if other.target is not self.source:
            raise BimoduleError("composing non-composable morphisms")
        return BimoduleMorphism(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other):
        return BimoduleMorphism(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other):
        return BimoduleMorphism(self.source, self.target, self.matrix - other.matrix)

    def scale(self, c):
        return BimoduleMorphism(self.source, self.target, self.matrix.scale(c))

    def is_zero(self):
        return self.matrix.is_zero()

    def is_iso(self):
        return self.matrix.is_invertible()

    def inverse(self) -> "BimoduleMorphism":
        return BimoduleMorphism(self.target, self.source, self.matrix.inverse())


def identity_morphism(M: Bimodule) -> BimoduleMorphism:
    return BimoduleMorphism(M, M, Matrix.identity(M.dim, M.field))


def zero_morphism(M: Bimodule, N: Bimodule) -> BimoduleMorphism:
    return BimoduleMorphism(M, N, Matrix.zeros(N.dim, M.dim))


def intertwiner_check(f: BimoduleMorphism) -> bool:
    M, N, X = f.source, f.target, f.matrix
    for g in M.left_action:
        if X @ M.left_action[g] != N.left_action[g] @ X:
            return False
    for g in M.right_action:
        if X @ M.right_action[g] != N.right_action[g] @ X:
            return False
    return True


# ------------------------------------------------------------ constructions

def _actions_from_mult(a: FiniteDimAlgebra, idx: list, side: str) -> dict:
    """Generator actions on the span of basis elements ``idx`` of a."""
    pos = {b: k for k, b in enumerate(idx)}
    acts = {}
    for name, g in a.generators():
        cols = []
        for b in idx:
            prod = a.mul(g, {b: a.field(1)}) if side == "L" else a.mul({b: a.field(1)}, g)
            cols.append({pos[k]: x for k, x in prod.items()})
        acts[name] = Matrix.from_columns(len(idx), cols)
    return acts


def regular_bimodule(a: FiniteDimAlgebra) -> Bimodule:
    idx = list(range(a.dim))
    grading = [(b.target, b.source) for b in a.basis]
    return Bimodule(a, a, a.dim, grading, _actions_from_mult(a, idx, "L"),
                    _actions_from_mult(a, idx, "R"), label="Reg", names=a.names)


def projective_bimodule(a: FiniteDimAlgebra, i: int, j: int, label: str | None = None) -> Bimodule:
    """A e_i ⊗_k e_j A with basis pairs (p, q), lexicographic."""
    left = a.left_projective(i)
    right = a.right_projective(j)
    lacts = _actions_from_mult(a, left, "L")
    racts = _actions_from_mult(a, right, "R")
    dl, dr = len(left), len(right)
    pairs = [(p, q) for p in range(dl) for q in range(dr)]
    grading = [(a.basis[left[p]].target, a.basis[right[q]].source) for p, q in pairs]
    LA, RA = {}, {}
    for g, m in lacts.items():
        cols = []
        for p, q in pairs:
            cols.append({pp * dr + q: x for pp, x in m.column(p).items()})
        LA[g] = Matrix.from_columns(len(pairs), cols)
    for g, m in racts.items():
        cols = []
        for p, q in pairs:
            cols.append({p * dr + qq: x for qq, x in m.column(q).items()})
        RA[g] = Matrix.from_columns(len(pairs), cols)
    names = ["%s⊗%s" % (a.names[left[p]], a.names[right[q]]) for p, q in pairs]
    M = Bimodule(a, a, len(pairs), grading, LA, RA,
                 label=label if label is not None else ("F%d" % i if j == 0 else "P%d,%d" % (i, j)),
                 names=names)
    M.pair_index = {(left[p], right[q]): p * dr + q for p, q in pairs}
    return M


def left_projective_module(a: FiniteDimAlgebra, j: int) -> Bimodule:
    """A e_j as an (A, k)-bimodule."""
    k = ground_algebra(a.field)
    idx = a.left_projective(j)
    grading = [(a.basis[b].target, 0) for b in idx]
    R = {"e0": Matrix.identity(len(idx), a.field)}
    M = Bimodule(a, k, len(idx), grading, _actions_from_mult(a, idx, "L"), R,
                 label="P%d" % j, names=[a.names[b] for b in idx])
    M.basis_index = {b: t for t, b in enumerate(idx)}
    return M


def direct_sum(mods: Sequence[Bimodule], label: str | None = None):
    """⊕ mods with inclusion and projection morphisms."""
    if not mods:
        raise BimoduleError("empty direct sum")
    L0, R0 = mods[0].left, mods[0].right
    for m in mods:
        if m.left is not L0 or m.right is not R0:
            raise BimoduleError("direct sum over different algebras")
    LA = {g: block_diag([m.left_action[g] for m in mods]) for g in mods[0].left_action}
    RA = {g: block_diag([m.right_action[g] for m in mods]) for g in mods[0].right_action}
    grading = [g for m in mods for g in m.grading]
    S = Bimodule(L0, R0, len(grading), grading, LA, RA,
                 label=label or "⊕".join(m.label or "?" for m in mods))
    incl, proj = [], []
    off = 0
    for m in mods:
        data = [{} for _ in range(S.dim)]
        for t in range(m.dim):
            data[off + t] = {t: m.field(1)}
        inc = Matrix(S.dim, m.dim, data)
        incl.append(BimoduleMorphism(m, S, inc))
        proj.append(BimoduleMorphism(S, m, inc.transpose()))
        off += m.dim
    S.summands = list(mods)
    S.inclusions = incl
    S.projections = proj
    return S


# ----------------------------------------------------------------- tensor

class TensorProduct(Bimodule):
    """M ⊗_B N as the quotient of the vertex-matched pairs by the arrow relations."""

    def __init__(self, M: Bimodule, N: Bimodule):
        if M.right is not N.left:
            raise BimoduleError("tensor_over: right algebra of M differs from left algebra of N")
        B = M.right
        pairs = [(i, j) for i in range(M.dim) for j in range(N.dim)
                 if M.grading[i][1] == N.grading[j][0]]
        pidx = {p: k for k, p in enumerate(pairs)}
        ech = Echelon()
        for lab, s, t in B.quiver.arrows:
            Rm = M.right_action[lab]
            Ln = N.left_action[lab]
            Rcols = Rm.columns()
            Lcols = Ln.columns()
            # m in e_? M e_t, n in e_s N e_?
            ms = [i for i in range(M.dim) if M.grading[i][1] == t]
            ns = [j for j in range(N.dim) if N.grading[j][0] == s]
            for i in ms:
                mi = Rcols[i]
                for j in ns:
                    vec = {}
                    for i2, x in mi.items():
                        k = pidx[(i2, j)]
                        vec[k] = vec.get(k, 0) + x
                    for j2, y in Lcols[j].items():
                        k = pidx[(i, j2)]
                        vec[k] = vec.get(k, 0) - y
                    vec = {k: x for k, x in vec.items() if x != 0}
                    if vec:
                        ech.add(vec)
        free = [k for k in range(len(pairs)) if k not in ech.rows]
        self.factors = (M, N)
        self.pairs = pairs
        self.pair_pos = pidx
        self.basis_pairs = [pairs[k] for k in free]
        self._free_pos = {k: t for t, k in enumerate(free)}
        self._ech = ech
        grading = [(M.grading[i][0], N.grading[j][1]) for i, j in self.basis_pairs]
        dim = len(free)
        self.dim = dim  # needed by project during action construction
        LA = {}
        for g, Lm in M.left_action.items():
            cols = []
            for i, j in self.basis_pairs:
                cols.append(self.project({(i2, j): x for i2, x in Lm.column(i).items()}))
            LA[g] = Matrix.from_columns(dim, cols)
        RA = {}
        for g, Rn in N.right_action.items():
            cols = []
            for i, j in self.basis_pairs:
                cols.append(self.project({(i, j2): x for j2, x in Rn.column(j).items()}))
            RA[g] = Matrix.from_columns(dim, cols)
        names = None
        if M.names and N.names:
            names = ["%s⊗%s" % (M.names[i], N.names[j]) for i, j in self.basis_pairs]
        super().__init__(M.left, N.right, dim, grading, LA, RA,
                         label="(%s⊗%s)" % (M.label or "?", N.label or "?"), names=names)

    def project(self, v: dict) -> dict:
        """Class in M⊗N of a combination of pairs {(i, j): coeff}."""
        vec = {}
        for p, x in v.items():
            k = self.pair_pos.get(p)
            if k is None:
                continue  # vertex mismatch: the pure tensor vanishes
            vec[k] = vec.get(k, 0) + x
        red = self._ech.reduce({k: x for k, x in vec.items() if x != 0})
        return {self._free_pos[k]: x for k, x in red.items()}

    def pure(self, m: dict, n: dict) -> dict:
        """Class of m ⊗ n for sparse vectors m ∈ M, n ∈ N."""
        return self.project({(i, j): x * y for i, x in m.items() for j, y in n.items()})


_TENSOR_CACHE: dict = {}


def tensor_over(M: Bimodule, N: Bimodule) -> TensorProduct:
    key = (M.uid, N.uid)
    T = _TENSOR_CACHE.get(key)
    if T is None:
        T = TensorProduct(M, N)
        _TENSOR_CACHE[key] = T
    return T


def tensor_morphisms(f: BimoduleMorphism, g: BimoduleMorphism) -> BimoduleMorphism:
    """f ⊗ g : M⊗N → M'⊗N'."""
    S = tensor_over(f.source, g.source)
    T = tensor_over(f.target, g.target)
    fc = f.matrix.columns()
    gc = g.matrix.columns()
    cols = [T.pure(fc[i], gc[j]) for i, j in S.basis_pairs]
    return BimoduleMorphism(S, T, Matrix.from_columns(T.dim, cols))


def associator(M: Bimodule, N: Bimodule, P: Bimodule) -> BimoduleMorphism:
    """(M⊗N)⊗P → M⊗(N⊗P) on representatives m⊗n⊗p."""
    MN = tensor_over(M, N)
    src = tensor_over(MN, P)
    NP = tensor_over(N, P)
    tgt = tensor_over(M, NP)
    cols = []
    for k, l in src.basis_pairs:
        i, j = MN.basis_pairs[k]
        np_vec = NP.pure({j: 1}, {l: 1})
        cols.append(tgt.project({(i, q): x for q, x in np_vec.items()}))
    return BimoduleMorphism(src, tgt, Matrix.from_columns(tgt.dim, cols))


def left_unitor(M: Bimodule) -> BimoduleMorphism:
    """A ⊗_A M → M, a ⊗ m ↦ a·m, where A is the regular bimodule of M's left algebra."""
    A = regular_of(M.left)
    S = tensor_over(A, M)
    cols = [M.L(a).column(m) for a, m in S.basis_pairs]
    return BimoduleMorphism(S, M, Matrix.from_columns(M.dim, cols))


def right_unitor(M: Bimodule) -> BimoduleMorphism:
    """M ⊗_A A → M, m ⊗ a ↦ m·a."""
    A = regular_of(M.right)
    S = tensor_over(M, A)
    cols = [M.R(a).column(m) for m, a in S.basis_pairs]
    return BimoduleMorphism(S, M, Matrix.from_columns(M.dim, cols))


_REG: dict = {}


def regular_of(a: FiniteDimAlgebra) -> Bimodule:
    key = id(a)
    if key not in _REG:
        _REG[key] = (a, regular_bimodule(a))
    return _REG[key][1]


# --------------------------------------------------------------- Hom spaces

class HomSpaceBasis:
    """Canonical basis of Hom(M, N), coordinates = flattened (target × source) matrix."""

    def __init__(self, source: Bimodule, target: Bimodule, space: Subspace):
        self.source = source
        self.target = target
        self.space = space
        self.basis = [BimoduleMorphism(source, target, Matrix.unflatten(v, target.dim, source.dim))
                      for v in space.sparse_basis()]

    @property
    def dim(self):
        return self.space.dim

    def __len__(self):
        return self.dim

    def coordinates(self, f: BimoduleMorphism) -> list:
        return self.space.coordinates(f.matrix.flatten())

    def contains(self, f: BimoduleMorphism) -> bool:
        return self.space.contains(f.matrix.flatten())

    def combine(self, coeffs: Sequence) -> BimoduleMorphism:
        m = Matrix.zeros(self.target.dim, self.source.dim)
        for c, b in zip(coeffs, self.basis):
            if c != 0:
                m = m + b.matrix.scale(c)
        return BimoduleMorphism(self.source, self.target, m)


_HOM_CACHE: dict = {}


def hom_space(M: Bimodule, N: Bimodule) -> HomSpaceBasis:
    if M.left is not N.left or M.right is not N.right:
        raise BimoduleError("hom_space: bimodules over different algebras")
    key = (M.uid, N.uid)
    H = _HOM_CACHE.get(key)
    if H is not None:
        return H
    # unknowns X[r][c] with matching grading
    by_grade: dict = {}
    for c in range(M.dim):
        by_grade.setdefault(M.grading[c], []).append(c)
    unknowns = []
    for r in range(N.dim):
        for c in by_grade.get(N.grading[r], ()):
            unknowns.append((r, c))
    upos = {u: k for k, u in enumerate(unknowns)}
    eqs: dict = {}
    gens = [(M.left_action[lab], N.left_action[lab]) for lab, _, _ in M.left.quiver.arrows]
    gens += [(M.right_action[lab], N.right_action[lab]) for lab, _, _ in M.right.quiver.arrows]
    for t, (AM, AN) in enumerate(gens):
        ANc = AN.columns()
        for (r, c), k in upos.items():
            # (X·AM)[r][c'] gets X[r][c]·AM[c][c']
            for c2, x in AM.row(c).items():
                key2 = (t, r, c2)
                d = eqs.setdefault(key2, {})
                d[k] = d.get(k, 0) + x
            # (AN·X)[r'][c] gets AN[r'][r]·X[r][c]
            for r2, y in ANc[r].items():
                key2 = (t, r2, c)
                d = eqs.setdefault(key2, {})
                d[k] = d.get(k, 0) - y
    rows = [{k: x for k, x in d.items() if x != 0} for d in eqs.values()]
    ker = kernel_vectors(rows, len(unknowns))
    flat = [{unknowns[k][0] * M.dim + unknowns[k][1]: x for k, x in v.items()} for v in ker]
    H = HomSpaceBasis(M, N, Subspace(N.dim * M.dim, flat))
    _HOM_CACHE[key] = H
    return H


def end_algebra(M: Bimodule) -> tuple[Algebra, HomSpaceBasis]:
    """End(M) with product f·g = f∘g, in the canonical Hom basis."""
    H = hom_space(M, M)
    mats = [b.matrix for b in H.basis]
    mult = {}
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            prod = a @ b
            if not prod.is_zero():
                co = H.space.coordinates(prod.flatten())
                mult[(i, j)] = {k: x for k, x in enumerate(co) if x != 0}
    unit = {k: x for k, x in enumerate(H.coordinates(identity_morphism(M))) if x != 0}
    return Algebra(H.dim, mult, unit, M.field), H


# ------------------------------------------------------------ decomposition

@dataclass
class Decomposition:
    source: Bimodule
    labels: list  # catalog labels of the summands, in catalog order
    inclusions: list  # BimoduleMorphism catalog[label] → source
    projections: list  # BimoduleMorphism source → catalog[label]

    def multiset(self) -> Counter:
        return Counter(self.labels)

    def iso_matrices(self) -> tuple[Matrix, Matrix]:
        """(Φ, Ψ): Φ = [ι_1 … ι_t] : ⊕P → M and Ψ its inverse."""
        if not self.labels:
            return Matrix.zeros(self.source.dim, 0), Matrix.zeros(0, self.source.dim)
        phi = hstack([f.matrix for f in self.inclusions])
        psi = vstack([g.matrix for g in self.projections])
        return phi, psi


def _image_grading(M: Bimodule, e: Matrix) -> Counter:
    blocks: dict = {}
    for k, g in enumerate(M.grading):
        blocks.setdefault(g, []).append(k)
    out = Counter()
    for g, idx in blocks.items():
        r = e.restrict_rows(idx).restrict_cols(idx).rank()
        if r:
            out[g] = r
    return out


_DECOMP_CACHE: dict = {}


def decompose(M: Bimodule, catalog: Sequence[Bimodule], seed: int = 0) -> Decomposition:
    """Krull–Schmidt decomposition of M into catalog objects with explicit isos."""
    key = (M.uid, tuple(P.uid for P in catalog))
    if key in _DECOMP_CACHE:
        return _DECOMP_CACHE[key]
    if M.dim == 0:
        d = Decomposition(M, [], [], [])
        _DECOMP_CACHE[key] = d
        return d
    E, H = end_algebra(M)
    idems = E.primitive_idempotents(seed)
    rng = random.Random(seed)
    found = []
    for u in idems:
        e = H.combine([u.get(k, 0) for k in range(H.dim)]).matrix
        gdims = _image_grading(M, e)
        match = None
        for ci, P in enumerate(catalog):
            if P.dim != sum(gdims.values()) or P.grading_dims() != gdims:
                continue
            iso = _find_iso(P, M, e, rng)
            if iso is not None:
                match = (ci, iso)
                break
        if match is None:
            raise DecompositionError("summand with dimension vector %s matches no catalog object"
                                     % sorted(gdims.items()))
        found.append(match)
    found.sort(key=lambda t: t[0])
    d = Decomposition(M, [catalog[ci].label for ci, _ in found],
                      [iso[0] for _, iso in found], [iso[1] for _, iso in found])
    _DECOMP_CACHE[key] = d
    return d


def _find_iso(P: Bimodule, M: Bimodule, e: Matrix, rng):
    HPM = hom_space(P, M)
    HMP = hom_space(M, P)
    if HPM.dim == 0 or HMP.dim == 0:
        return None
    fs = [b.matrix for b in HPM.basis]
    gs = [b.matrix for b in HMP.basis]
    efs = [e @ f for f in fs]
    ge = [g @ e for g in gs]

    def attempt(f, g):
        h = g @ f
        if h.is_invertible():
            hinv = h.inverse()
            return (BimoduleMorphism(P, M, f), BimoduleMorphism(M, P, hinv @ g))
        return None

    for f in efs:
        for g in ge:
            r = attempt(f, g)
            if r:
                return r
    for _ in range(20):
        f = Matrix.zeros(M.dim, P.dim)
        for x in efs:
            f = f + x.scale(M.field(rng.randint(-3, 3)))
        g = Matrix.zeros(P.dim, M.dim)
        for x in ge:
            g = g + x.scale(M.field(rng.randint(-3, 3)))
        r = attempt(f, g)
        if r:
            return r
    return None


def multiplicity_by_pairing(P: Bimodule, M: Bimodule) -> int:
    """Multiplicity of an indecomposable P (local End) in M.

    Independent of idempotent splitting: the rank of the pairing
    (f, g) ↦ tr(g∘f)/dim P, since the radical of a local End is traceless.
    """
    HPM = hom_space(P, M)
    HMP = hom_space(M, P)
    rows = []
    for g in HMP.basis:
        row = {}
        for k, f in enumerate(HPM.basis):
            h = g.matrix @ f.matrix
            tr = sum((h[i, i] for i in range(P.dim)), 0)
            if tr != 0:
                row[k] = tr
        rows.append(row)
    return Matrix(len(rows), HPM.dim, rows).rank() if rows else 0
