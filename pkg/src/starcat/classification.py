"""Set partitions, the C^WR models and the classification of simple transitive
birepresentations with the apex add{F_0, ..., F_n}."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .quiver_algebra import (FiniteDimAlgebra, algebra_from_presentation, build_star_quotient,
                             final_remark_presentation)
from .star_bicategory import (Birepresentation, StableIdeal, _left_projectives, action_matrix,
                              get_bicategory, proper_stable_ideals, stable_closure,
                              subrepresentation_N, cell_birepresentation)
from .bimodules import (Bimodule, BimoduleMorphism, decompose, end_algebra,
                        identity_morphism, tensor_morphisms, tensor_over)
from .exact_linalg import QQ, Field, Matrix, Subspace, kernel_vectors, solve_sparse, vadd, vscale
from .presented_category import (AlgebraFunctor, EnvelopeError, PresentedFunctor, additive_karoubi_envelope,
                                 cwr_presentation, xi)


class ClassificationError(RuntimeError):
    """A certification step failed; ``witness`` says where."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ModificationError(ValueError):
    pass


class ScalarMismatchError(ValueError):
    pass


# ------------------------------------------------------------------ partitions

@dataclass(frozen=True)
class SetPartition:
    """A partition of [0, n] whose block containing 0 is {0}."""

    n: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0]))
        object.__setattr__(self, "blocks", blocks)
        flat = [k for b in blocks for k in b]
        if sorted(flat) != list(range(self.n + 1)) or any(not b for b in blocks):
            raise ValueError("blocks do not partition [0, %d]: %s" % (self.n, self.blocks))
        if blocks[0] != (0,):
            raise ValueError("the block containing 0 must be {0}")

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]]) -> "SetPartition":
        n = max(max(b) for b in blocks)
        return cls(n, tuple(tuple(b) for b in blocks))

    @classmethod
    def discrete(cls, n: int) -> "SetPartition":
        return cls(n, tuple((k,) for k in range(n + 1)))

    @classmethod
    def total(cls, n: int) -> "SetPartition":
        return cls(n, ((0,), tuple(range(1, n + 1))))

    @property
    def rank(self) -> int:
        """Number of nonzero blocks."""
        return len(self.blocks) - 1

    @property
    def block_of(self) -> dict:
        """index → block id, with {0} ↦ 0 and the others numbered 1..r by least element."""
        return {k: i for i, b in enumerate(self.blocks) for k in b}

    def coarsens(self, finer: "SetPartition") -> bool:
        """True iff every block of ``finer`` lies inside a block of self."""
        if finer.n != self.n:
            return False
        mine = self.block_of
        return all(len({mine[k] for k in b}) == 1 for b in finer.blocks)

    def transversal(self) -> list[int]:
        return [b[0] for b in self.blocks]

    def to_json(self) -> list:
        return [list(b) for b in self.blocks]

    def __str__(self):
        return "".join("{%s}" % ",".join(map(str, b)) for b in self.blocks)


def enumerate_partitions(n: int) -> list[SetPartition]:
    """All partitions of [0, n] with {0} a block, via restricted growth strings on 1..n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out = []

    def rec(rgs, top):
        if len(rgs) == n:
            blocks: dict = {}
            for k, b in enumerate(rgs, 1):
                blocks.setdefault(b, []).append(k)
            out.append(SetPartition(n, ((0,),) + tuple(tuple(v) for v in blocks.values())))
            return
        for b in range(top + 2):
            rec(rgs + [b], max(top, b))

    rec([], -1)
    return out


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


# ---------------------------------------------------------------- the models

def build_CWR_model(P: SetPartition, field: Field = QQ) -> Birepresentation:
    """A_r-proj with F_k acting by A_r e_{𝔓(k)} ⊗ e_0 A_r and Reg by A_r."""
    S = get_bicategory(P.rank, "star", field)
    blk = P.block_of
    images = {"Reg": S.objects["Reg"]}
    for k in range(P.n + 1):
        images["F%d" % k] = S.objects["F%d" % blk[k]]
    labels = ["Reg"] + ["F%d" % k for k in range(P.n + 1)]
    rep = Birepresentation(S.algebra, images, _left_projectives(S.algebra), "C^WR%s" % P,
                           generator_order=labels)
    rep.partition = P
    return rep


def labeled_action_matrices(rep: Birepresentation) -> dict:
    return {g: action_matrix(rep, g) for g in rep.generators}


def _presentation_images(P: SetPartition, cat, algebra: FiniteDimAlgebra) -> AlgebraFunctor:
    blk = P.block_of
    objs = {"Ae%d" % k: blk[k] for k in range(P.n + 1)}
    imgs = {"c": algebra.element("c")}
    for k in range(1, P.n + 1):
        imgs["a%d" % k] = algebra.element("a%d" % blk[k])
        imgs["b%d" % k] = algebra.element("b%d" % blk[k])
    for s, t in cat.pairs:
        g = xi(s, t, "A")
        if g in cat.generators:
            imgs[g] = algebra.e(blk[s])
            imgs[g + "^-1"] = algebra.e(blk[s])
    return AlgebraFunctor(cat, algebra, objs, imgs)


@dataclass
class ConsistencyReport:
    partition: SetPartition
    ok: bool
    indecomposables: int
    expected_indecomposables: int
    hom_table: list  # envelope Hom dims, ordered by block
    model_table: list  # dim e_i A_r e_j
    comparison: dict  # (x, y) → (dim source Hom, dim target Hom, rank) on the transversal
    confluent: bool
    saturated: bool
    witness: object = None


def consistency_CWR_presentation_vs_model(P: SetPartition, field: Field = QQ,
                                          length_cap: int = 12, strict: bool = True) -> ConsistencyReport:
    """Compare the envelope of the presented C^WR(𝔓) with A_r-proj."""
    pres = cwr_presentation(P.n, [list(b) for b in P.blocks], field, length_cap)
    cat = pres["CWR"]
    conf = cat.check_confluence()
    R = get_bicategory(P.rank, "star", field).algebra
    model = [[len(R.peirce(i, j)) for j in range(P.rank + 1)] for i in range(P.rank + 1)]
    witness = None
    try:
        env = additive_karoubi_envelope(cat)
        saturated = True
    except EnvelopeError as exc:
        env, saturated, witness = None, False, str(exc)
    blk = P.block_of
    table, count = [], 0
    ok = conf.ok and saturated
    if env is not None:
        count = len(env.indecomposables)
        cls_of_block = {}
        for k in range(P.n + 1):
            cs = env.object_class["Ae%d" % k]
            if len(cs) != 1:
                ok, witness = False, ("Ae%d" % k, "not indecomposable")
                break
            if cls_of_block.setdefault(blk[k], cs[0]) != cs[0]:
                ok, witness = False, ("Ae%d" % k, "not isomorphic to its block representative")
                break
        if ok and sorted(cls_of_block.values()) != list(range(count)):
            ok, witness = False, ("classes", cls_of_block)
        if ok:
            order = [cls_of_block[b] for b in range(P.rank + 1)]
            # env.hom_dims[i][j] = dim Hom(class i, class j); the model's Hom(P_i, P_j) = e_i R e_j
            table = [[env.hom_dims[order[i]][order[j]] for j in range(P.rank + 1)]
                     for i in range(P.rank + 1)]
            for i in range(P.rank + 1):
                for j in range(P.rank + 1):
                    if ok and table[i][j] != model[i][j]:
                        ok, witness = False, ("Hom", i, j, table[i][j], model[i][j])
    F = _presentation_images(P, cat, R)
    good, bad = F.well_defined()
    if not good:
        ok, witness = False, ("functor", bad)
    comp = {}
    if good and saturated:
        tv = ["Ae%d" % u for u in P.transversal()]
        for x in tv:
            for y in tv:
                d = F.hom_matrix_rank(x, y)
                comp[(x, y)] = d
                if not d[0] == d[1] == d[2]:
                    ok, witness = False, ("transversal", x, y, d)
    report = ConsistencyReport(P, ok, count, P.rank + 1, table, model, comp, conf.ok, saturated, witness)
    if strict and not ok:
        raise ClassificationError("presentation and model disagree for %s" % P, witness)
    return report


# ---------------------------------------------------------- simple transitivity

@dataclass
class SimpleTransitivityReport:
    verdict: bool
    transitive: bool
    proper_ideals: list  # StableIdeal
    socle_certificate: bool  # every socle Peirce block is ≤ 1-dim and generates everything
    socle_dims: dict

    @property
    def ideal_dims(self) -> list:
        return [I.dims() for I in self.proper_ideals]


def is_transitive(rep: Birepresentation) -> bool:
    m = len(rep.objects)
    reach = [[i == j for j in range(m)] for i in range(m)]
    for g in rep.generators:
        M = action_matrix(rep, g)
        for i in range(m):
            for j in range(m):
                if M[i][j]:
                    reach[j][i] = True
    for k in range(m):
        for i in range(m):
            if reach[i][k]:
                for j in range(m):
                    if reach[k][j]:
                        reach[i][j] = True
    return all(all(r) for r in reach)


def _radical_basis(rep: Birepresentation, i: int, j: int) -> list:
    H = rep.hom(i, j)
    if i != j:
        return list(H.basis)
    E, emb = end_algebra(rep.objects[i])
    return [H.combine([v.get(k, 0) for k in range(H.dim)]) for v in E.radical().sparse_basis()]


def two_sided_socle(rep: Birepresentation) -> dict:
    """(i, j) → Subspace of f ∈ Hom(i, j) with rad∘f = 0 and f∘rad = 0."""
    m = len(rep.objects)
    rad = {(i, j): _radical_basis(rep, i, j) for i in range(m) for j in range(m)}
    out = {}
    for i in range(m):
        for j in range(m):
            H = rep.hom(i, j)
            rows = []
            # conditions are linear in the coordinates of f
            for k in range(m):
                for h in rad[(j, k)]:
                    imgs = [(h @ f).matrix.flatten() for f in H.basis]
                    rows += _coordinate_rows(imgs)
                for g in rad[(k, i)]:
                    imgs = [(f @ g).matrix.flatten() for f in H.basis]
                    rows += _coordinate_rows(imgs)
            out[(i, j)] = Subspace(H.dim, kernel_vectors(rows, H.dim)) if rows else Subspace.full(H.dim)
    return out


def _coordinate_rows(imgs: list) -> list:
    """Rows of the linear map coefficient-vector ↦ Σ c_k imgs[k]."""
    rows: dict = {}
    for k, v in enumerate(imgs):
        for pos, x in v.items():
            rows.setdefault(pos, {})[k] = x
    return list(rows.values())


def simple_transitive_check(rep: Birepresentation) -> SimpleTransitivityReport:
    """Exhaustive stable-ideal search plus transitivity via action matrices.

    Every nonzero ideal contains a nonzero element of the two-sided socle
    (compose with radical morphisms until the next composite vanishes), so when
    each Peirce block of the socle is at most one-dimensional the closures of
    the socle basis vectors decide simplicity exactly.
    """
    transitive = is_transitive(rep)
    props = proper_stable_ideals(rep)
    soc = two_sided_socle(rep)
    dims = {k: v.dim for k, v in soc.items() if v.dim}
    cert = all(d <= 1 for d in dims.values())
    if cert:
        for (i, j), S in soc.items():
            for v in S.sparse_basis():
                if not stable_closure(rep, {(i, j): Subspace(S.ambient_dim, [v])}).is_everything():
                    cert = False
    return SimpleTransitivityReport(transitive and not props, transitive, props, cert, dims)


# --------------------------------------------------------------- pullbacks

class CollapseFunctor:
    """A_n-proj → A_r-proj induced by the vertex map k ↦ 𝔓(k) on paths.

    On morphisms it sends right multiplication by u ∈ e_i A_n e_j to right
    multiplication by the collapsed path.  It commutes with the action of
    every F_k, which acts by F_{𝔓(k)} on the target.
    """

    def __init__(self, P: SetPartition, field: Field = QQ):
        self.partition = P
        self.source = cell_birepresentation(P.n, field)
        self.target = build_CWR_model(P, field)
        self.blk = P.block_of
        A = self.source.base_algebra
        R = self.target.base_algebra
        ren = {}
        for k in range(1, P.n + 1):
            ren["a%d" % k] = "a%d" % self.blk[k]
            ren["b%d" % k] = "b%d" % self.blk[k]
        self.on_basis = []
        for b in A.basis:
            if not b.path:
                x = R.e(self.blk[b.source])
            else:
                x = R.e(self.blk[b.source])
                for g in reversed(b.path):
                    x = R.mul(R.element(ren[g]), x)
            self.on_basis.append(x)

    def objects(self, i: int) -> int:
        return self.blk[i]

    def _element(self, f: BimoduleMorphism, i: int) -> dict:
        """u with f = right multiplication by u, read off from f(e_i)."""
        X = self.source.objects[i]
        Y = f.target
        inv = {t: b for b, t in Y.basis_index.items()}
        col = f.matrix.column(X.basis_index[self.source.base_algebra.idempotents[i]])
        return {inv[t]: x for t, x in col.items()}

    def hom_map(self, i: int, j: int) -> Matrix:
        """Matrix of Hom(P_i, P_j) → Hom(P_𝔓(i), P_𝔓(j)) in Hom-space coordinates."""
        H = self.source.hom(i, j)
        bi, bj = self.blk[i], self.blk[j]
        T = self.target.hom(bi, bj)
        tgt_elems = [self._target_element(g, bi) for g in T.basis]
        cols = []
        for f in H.basis:
            u = self._element(f, i)
            v: dict = {}
            for b, x in u.items():
                v = vadd(v, self.on_basis[b], x)
            c = solve_sparse(tgt_elems, v)
            if c is None:
                raise ClassificationError("collapse image is not a morphism", (i, j))
            cols.append(c)
        return Matrix.from_columns(T.dim, cols)

    def _target_element(self, g: BimoduleMorphism, bi: int) -> dict:
        X = self.target.objects[bi]
        inv = {t: b for b, t in g.target.basis_index.items()}
        col = g.matrix.column(X.basis_index[self.target.base_algebra.idempotents[bi]])
        return {inv[t]: x for t, x in col.items()}


def pullback_ideal(theta: CollapseFunctor, I: StableIdeal) -> StableIdeal:
    """Componentwise preimage Θ⁻¹(I) of a stable ideal of the target."""
    src = theta.source
    m = len(src.objects)
    comps = {}
    for i in range(m):
        for j in range(m):
            M = theta.hom_map(i, j)
            C = I.component(theta.objects(i), theta.objects(j))
            # x ↦ M x modulo C: preimage = kernel of (quotient map ∘ M)
            Q = _quotient_rows(C)
            rows = []
            for q in Q:
                r: dict = {}
                for t, x in q.items():
                    for c, y in M.row(t).items():
                        r[c] = r.get(c, 0) + x * y
                r = {c: y for c, y in r.items() if y}
                if r:
                    rows.append(r)
            H = src.hom(i, j)
            comps[(i, j)] = Subspace(H.dim, kernel_vectors(rows, H.dim)) if rows else Subspace.full(H.dim)
    return StableIdeal(src, comps)


def _quotient_rows(C: Subspace) -> list:
    """Linear functionals cutting out C."""
    basis = C.sparse_basis()
    return kernel_vectors(basis, C.ambient_dim) if basis else \
        [{k: 1} for k in range(C.ambient_dim)]


# ----------------------------------------------------------- modifications

@dataclass
class Component:
    rows: list  # basis indices of X e_k
    cols: list  # basis indices of X e_j
    matrix: Matrix

    def full(self, dim: int) -> Matrix:
        """The component extended by zero to all of X."""
        data = [dict() for _ in range(dim)]
        for c, col in zip(self.cols, self.matrix.columns()):
            data[c] = {self.rows[r]: x for r, x in col.items()}
        return Matrix.from_columns(dim, data)


@dataclass
class Modification:
    rep: Birepresentation
    source: str
    target: str
    components: dict  # object label → Component

    def scaled(self, c) -> "Modification":
        return Modification(self.rep, self.source, self.target,
                            {k: Component(v.rows, v.cols, v.matrix.scale(c)) for k, v in self.components.items()})

    def perturbed(self, label: str, c) -> "Modification":
        comps = dict(self.components)
        v = comps[label]
        comps[label] = Component(v.rows, v.cols, v.matrix.scale(c))
        return Modification(self.rep, self.source, self.target, comps)

    def then(self, other: "Modification") -> "Modification":
        """Vertical composite other ∘ self."""
        if self.target != other.source:
            raise ModificationError("modifications are not composable")
        comps = {k: Component(other.components[k].rows, v.cols, other.components[k].matrix @ v.matrix)
                 for k, v in self.components.items()}
        return Modification(self.rep, self.source, other.target, comps)

    def is_invertible(self) -> bool:
        return all(v.matrix.shape[0] == v.matrix.shape[1] and v.matrix.is_invertible()
                   for v in self.components.values())

    def __eq__(self, other):
        return (isinstance(other, Modification) and self.source == other.source
                and self.target == other.target
                and all(self.components[k].matrix == other.components[k].matrix for k in self.components))


def _right_part(X: Bimodule, j: int) -> list:
    return [t for t, g in enumerate(X.grading) if g[1] == j]


def _restricted_right_mult(X: Bimodule, elem: dict, cols: list, rows: list) -> Matrix:
    """Matrix of x ↦ x·elem from span(cols) into span(rows)."""
    R = X.R_elem(elem)
    pos = {r: k for k, r in enumerate(rows)}
    data = []
    for c in cols:
        col = R.column(c)
        if any(r not in pos for r in col):
            raise ModificationError("right multiplication leaves the expected summand")
        data.append({pos[r]: x for r, x in col.items()})
    return Matrix.from_columns(len(rows), data)


def phi_component(X: Bimodule, j: int, k: int) -> Component:
    """(·a_k)⁻¹ ∘ (·a_j) : X e_j → X e_k, both maps landing in X c ⊂ X e_0."""
    A = X.right
    cj, ck, c0 = _right_part(X, j), _right_part(X, k), _right_part(X, 0)
    mj = _restricted_right_mult(X, A.element("a%d" % j), cj, c0)
    mk = _restricted_right_mult(X, A.element("a%d" % k), ck, c0)
    if mj.rank() != len(cj) or mk.rank() != len(ck):
        raise ModificationError("right multiplication by a_j is not injective on %s e_j" % X.label)
    img_j = Subspace(len(c0), mj.columns())
    img_k = Subspace(len(c0), mk.columns())
    if img_j.key() != img_k.key():
        raise ModificationError("X a_j and X a_k differ on %s" % X.label)
    kcols = mk.columns()
    out = []
    for col in mj.columns():
        s = solve_sparse(kcols, col)
        out.append(s)
    return Component(ck, cj, Matrix.from_columns(len(ck), out))


def build_s_modification(j: int, k: int, n: int | None = None, rep: Birepresentation | None = None,
                         field: Field = QQ) -> Modification:
    """s_{j,k}: Θ_j ⇒ Θ_k on the objects of N, with the identifications c^j taken canonical."""
    if rep is None:
        if n is None:
            raise ValueError("give n or a birepresentation")
        rep = subrepresentation_N(n, field)
    nv = rep.base_algebra.vertex_count - 1
    if not (1 <= j <= nv and 1 <= k <= nv):
        raise ValueError("j, k must lie in [1, %d]" % nv)
    comps = {X.label: phi_component(X, j, k) for X in rep.objects}
    return Modification(rep, "Theta_%d" % j, "Theta_%d" % k, comps)


def identity_modification(j: int, n: int, field: Field = QQ) -> Modification:
    rep = subrepresentation_N(n, field)
    comps = {}
    for X in rep.objects:
        idx = _right_part(X, j)
        comps[X.label] = Component(idx, idx, Matrix.identity(len(idx), field))
    return Modification(rep, "Theta_%d" % j, "Theta_%d" % j, comps)


@dataclass
class ModificationAxiomReport:
    ok: bool
    checked: int
    witness: tuple | None = None  # (generator, object label)


def check_modification_axiom(m: Modification) -> ModificationAxiomReport:
    """For each generator M and object X: M ⊗ m_X = m_{M⊗X} through the decomposition of M ⊗ X."""
    rep = m.rep
    checked = 0
    for gen in rep.generators:
        M = rep.generator_images[gen]
        for X in rep.objects:
            w = BimoduleMorphism(X, X, m.components[X.label].full(X.dim))
            lhs = tensor_morphisms(identity_morphism(M), w).matrix
            Y = tensor_over(M, X)
            d = decompose(Y, rep.objects)
            rhs = Matrix.zeros(Y.dim, Y.dim)
            for lab, inc, pr in zip(d.labels, d.inclusions, d.projections):
                Z = inc.source
                rhs = rhs + inc.matrix @ m.components[lab].full(Z.dim) @ pr.matrix
            checked += 1
            if lhs != rhs:
                return ModificationAxiomReport(False, checked, (gen, X.label))
    return ModificationAxiomReport(True, checked)


def induced_component_is_identity(m: Modification, label: str) -> bool:
    """Under X e_j ≅ A e_l ≅ X e_k (x⊗b_j ↔ x ↔ x⊗b_k) the component is id."""
    X = next(Y for Y in m.rep.objects if Y.label == label)
    comp = m.components[label]
    left = lambda t: X.names[t].split("⊗")[0]
    if len(comp.rows) != len(comp.cols):
        return False
    for c, col in zip(comp.cols, comp.matrix.columns()):
        if len(col) != 1:
            return False
        (r, x), = col.items()
        if x != 1 or left(comp.rows[r]) != left(c):
            return False
    return True


def scalar_proportionality(m: Modification, m2: Modification, anchor: str = "F0"):
    """The unique λ with m2 = λ·m, read off at the anchor object and checked everywhere."""
    if (m.source, m.target) != (m2.source, m2.target):
        raise ScalarMismatchError("modifications between different transformations")
    a, b = m.components[anchor].matrix, m2.components[anchor].matrix
    lam = None
    for j, col in enumerate(a.columns()):
        if col:
            i, x = next(iter(col.items()))
            lam = b[i, j] / x
            break
    if lam is None or lam == 0:
        raise ScalarMismatchError("anchor component is zero")
    for lab, comp in m.components.items():
        if comp.matrix.scale(lam) != m2.components[lab].matrix:
            raise ScalarMismatchError("no single scalar fits component %s" % lab)
    return lam


def normalize_modification(t_prime: Modification, s: Modification) -> Modification:
    """t = (1/λ) t′ where t′ = λ s."""
    lam = scalar_proportionality(s, t_prime)
    return t_prime.scaled(1 / lam)


def transported_s_modification(P: SetPartition, j: int, k: int, field: Field = QQ) -> Modification:
    """Σ∙s_{j,k} for the model C^WR(𝔓): s_{𝔓(j),𝔓(k)} on the model's N over A_r."""
    blk = P.block_of
    r = P.rank
    rep = subrepresentation_N(r, field)
    return build_s_modification(blk[j], blk[k], rep=rep)


# --------------------------------------------------------------- χ invariant

class DiagonalFunctor:
    """Endofunctor of A-proj fixing objects and scaling each arrow: g ↦ scales[g]·g."""

    def __init__(self, algebra: FiniteDimAlgebra, scales: dict):
        self.algebra = algebra
        one = algebra.field(1)
        self.scales = {g: algebra.field(scales.get(g, one)) for g in algebra.arrow_index}

    @classmethod
    def with_chi(cls, algebra: FiniteDimAlgebra, chi) -> "DiagonalFunctor":
        """a_i ↦ χ a_i, b_i ↦ b_i."""
        return cls(algebra, {g: chi for g in algebra.arrow_index if g.startswith("a")})

    def on_basis(self, b: int):
        x = self.algebra.field(1)
        for g in self.algebra.basis[b].path:
            x = x * self.scales[g]
        return x

    def apply(self, x: dict) -> dict:
        return {b: c * self.on_basis(b) for b, c in x.items() if c * self.on_basis(b)}

    def is_functor(self) -> tuple[bool, object]:
        A = self.algebra
        for i in range(A.dim):
            for j in range(A.dim):
                p = A.mul({i: 1}, {j: 1})
                if not p:
                    continue
                if self.apply(p) != vscale(p, self.on_basis(i) * self.on_basis(j)):
                    return False, (A.names[i], A.names[j])
        return True, None


def chi_invariant(F: DiagonalFunctor):
    """χ_F with F(c) = χ_F c."""
    ok, bad = F.is_functor()
    if not ok:
        raise ValueError("not a functor: products %s disagree" % (bad,))
    A = F.algebra
    chi = F.on_basis(A.index["c"])
    if chi == 0:
        raise ValueError("χ_F = 0: F is not faithful")
    return chi


@dataclass
class NaturalitySolution:
    dim: int
    invertible_exists: bool


def natural_transformations(F: DiagonalFunctor, G: DiagonalFunctor) -> NaturalitySolution:
    """Solve for η_v ∈ e_v A e_v with F(u)·η_y = η_x·G(u) for each arrow u ∈ e_x A e_y."""
    A = F.algebra
    unknowns = [(v, b) for v in range(A.vertex_count) for b in A.peirce(v, v)]
    pos = {u: k for k, u in enumerate(unknowns)}
    rows: dict = {}
    for g, u in A.arrow_index.items():
        x, y = A.basis[u].target, A.basis[u].source
        fu = F.apply({u: 1})
        gu = G.apply({u: 1})
        for b in A.peirce(y, y):
            for t, c in A.mul(fu, {b: 1}).items():
                rows.setdefault((g, t), {})
                rows[(g, t)][pos[(y, b)]] = rows[(g, t)].get(pos[(y, b)], 0) + c
        for b in A.peirce(x, x):
            for t, c in A.mul({b: 1}, gu).items():
                rows.setdefault((g, t), {})
                rows[(g, t)][pos[(x, b)]] = rows[(g, t)].get(pos[(x, b)], 0) - c
    eqs = [{k: c for k, c in r.items() if c} for r in rows.values()]
    eqs = [r for r in eqs if r]
    sol = kernel_vectors(eqs, len(unknowns)) if eqs else Subspace.full(len(unknowns)).sparse_basis()
    # invertible iff every unit coordinate can be nonzero (the solution set is a linear space)
    inv = all(any(v.get(pos[(w, A.idempotents[w])], 0) for v in sol) for w in range(A.vertex_count))
    return NaturalitySolution(len(sol), inv)


# ----------------------------------------------------------------- classify

def _classify_one(args) -> dict:
    P, field, check_presentation, length_cap = args
    rep = build_CWR_model(P, field)
    st = simple_transitive_check(rep)
    mats = labeled_action_matrices(rep)
    rec = {"partition": P.to_json(), "label": str(P), "base_algebra_rank": P.rank,
           "action_matrices": mats, "simple_transitive": st.verdict and st.socle_certificate,
           "transitive": st.transitive}
    if check_presentation:
        rec["presentation_consistent"] = consistency_CWR_presentation_vs_model(
            P, field, length_cap, strict=False).ok
    else:
        rec["presentation_consistent"] = None
    return rec


def _equivalent_labeled(m1: dict, m2: dict) -> bool:
    """Is there a simultaneous object permutation carrying every labeled matrix of m1 to m2?"""
    if m1.keys() != m2.keys():
        return False
    size = len(next(iter(m1.values())))
    if size != len(next(iter(m2.values()))):
        return False
    for perm in itertools.permutations(range(size)):
        if all(m2[g][perm[i]][perm[j]] == m1[g][i][j]
               for g in m1 for i in range(size) for j in range(size)):
            return True
    return False


def default_parallelism() -> int:
    v = os.environ.get("STARCAT_THREADS")
    if v:
        try:
            return max(1, int(v))
        except ValueError:
            pass
    return 1


def classify(n: int, field: Field = QQ, parallelism: int | None = None,
             check_presentation: bool = True, length_cap: int = 12, strict: bool = True) -> dict:
    """Certify one simple transitive class per partition and their pairwise inequivalence."""
    parts = enumerate_partitions(n)
    jobs = [(P, field, check_presentation, length_cap) for P in parts]
    workers = parallelism or default_parallelism()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            classes = list(ex.map(_classify_one, jobs))
    else:
        classes = [_classify_one(j) for j in jobs]
    pairwise = True
    witness = None
    for a, b in itertools.combinations(range(len(classes)), 2):
        if _equivalent_labeled(classes[a]["action_matrices"], classes[b]["action_matrices"]):
            pairwise = False
            witness = (classes[a]["label"], classes[b]["label"])
            break
    report = {"n": n, "bell_number": bell_number(n), "classes": classes,
              "pairwise_inequivalent": pairwise}
    if strict:
        for c in classes:
            if not c["simple_transitive"]:
                raise ClassificationError("C^WR%s is not simple transitive" % c["label"], c["label"])
            if c["presentation_consistent"] is False:
                raise ClassificationError("presentation mismatch for %s" % c["label"], c["label"])
        if not pairwise:
            raise ClassificationError("two partitions give equivalent models", witness)
        if len(classes) != report["bell_number"]:
            raise ClassificationError("class count differs from the Bell number")
    return report


# ---------------------------------------------------------------- refinement

@dataclass
class RefinementResult:
    functor: PresentedFunctor
    well_defined: bool
    cone_compatible: bool  # Ω̃ ∘ Ω^WR(𝔓) = Ω^WR(𝔓′) on generators


def _chain(P: SetPartition, s: int, t: int) -> list:
    blk = P.blocks[P.block_of[s]]
    return [k for k in blk if s <= k <= t]


def refinement_transformation(P: SetPartition, P2: SetPartition, field: Field = QQ,
                              length_cap: int = 12, cats: dict | None = None) -> RefinementResult:
    """Ω̃: C^WR(𝔓) → C^WR(𝔓′) for a coarsening 𝔓′ of 𝔓."""
    if not P2.coarsens(P):
        raise ValueError("%s does not coarsen %s" % (P2, P))
    cats = cats if cats is not None else {}

    def get(Q):
        if Q not in cats:
            cats[Q] = cwr_presentation(Q.n, [list(b) for b in Q.blocks], field, length_cap)
        return cats[Q]

    src, tgt = get(P), get(P2)
    C, D = src["CWR"], tgt["CWR"]
    images = {}
    for g in C.base_generators:
        if g.name.startswith("xi"):
            s, t = map(int, g.name[2:].split("(")[0].split("_"))
            ch = _chain(P2, s, t)
            word = tuple(xi(u, v, "A") for u, v in zip(ch, ch[1:]))[::-1]
            images[g.name] = D.word(word, "Ae%d" % s)
        else:
            images[g.name] = D.single(g.name)
    F = PresentedFunctor(C, D, {o: o for o in C.objects}, images)
    ok, _ = F.well_defined()
    cone_src = src["W"].then(src["R"])
    cone_tgt = tgt["W"].then(tgt["R"])
    compat = cone_src.then(F).agrees_with(cone_tgt)
    return RefinementResult(F, ok, compat)


def coarsening_chains(n: int) -> list:
    """All chains 𝔓 → 𝔓′ → 𝔓″ of coarsenings among partitions of [0, n]."""
    parts = enumerate_partitions(n)
    out = []
    for a in parts:
        for b in parts:
            if not b.coarsens(a):
                continue
            for c in parts:
                if c.coarsens(b):
                    out.append((a, b, c))
    return out


def check_refinement_chain(P: SetPartition, P1: SetPartition, P2: SetPartition,
                           field: Field = QQ, cats: dict | None = None) -> bool:
    cats = cats if cats is not None else {}
    f = refinement_transformation(P, P1, field, cats=cats)
    g = refinement_transformation(P1, P2, field, cats=cats)
    h = refinement_transformation(P, P2, field, cats=cats)
    return (f.well_defined and g.well_defined and h.well_defined
            and f.functor.then(g.functor).agrees_with(h.functor))


# ------------------------------------------------------ naturality example

@dataclass
class NaturalityVerdict:
    passes: bool
    witness: tuple | None = None  # (u, x, u·ψ(x), ψ(u·x)) as path names


def vertex_swap(algebra: FiniteDimAlgebra, i: int, j: int) -> dict:
    """Arrow renaming of the quiver automorphism swapping vertices i and j."""
    out = {}
    for g, k in algebra.arrow_index.items():
        b = algebra.basis[k]
        sw = lambda v: j if v == i else i if v == j else v
        s, t = sw(b.source), sw(b.target)
        match = [h for h, m in algebra.arrow_index.items()
                 if algebra.basis[m].source == s and algebra.basis[m].target == t
                 and h[0] == g[0]]
        if len(match) != 1:
            raise ValueError("no unique image for arrow %s" % g)
        out[g] = match[0]
    return out


def _automorphism(algebra: FiniteDimAlgebra, arrows: dict) -> list:
    A = algebra
    imgs = []
    for b in A.basis:
        if not b.path:
            # vertex image from any arrow touching it, else fixed
            imgs.append(None)
            continue
        x = None
        for g in reversed(b.path):
            y = A.element(arrows[g])
            x = y if x is None else A.mul(y, x)
        imgs.append(x)
    for k, b in enumerate(A.basis):
        if not b.path:
            v = b.source
            w = v
            for g, h in arrows.items():
                gb, hb = A.basis[A.arrow_index[g]], A.basis[A.arrow_index[h]]
                if gb.source == v:
                    w = hb.source
                    break
                if gb.target == v:
                    w = hb.target
                    break
            imgs[k] = A.e(w)
    return imgs


def _apply_linear(imgs: list, x: dict) -> dict:
    out: dict = {}
    for b, c in x.items():
        out = vadd(out, imgs[b], c)
    return out


def naturality_check(algebra: FiniteDimAlgebra, arrows: dict, i: int, j: int,
                     base: int = 0) -> NaturalityVerdict:
    """Does ψ: f_0 B f_i → f_0 B f_j commute with left multiplication by every u ∈ f_0 B f_0?"""
    A = algebra
    imgs = _automorphism(A, arrows)
    for u in A.peirce(base, base):
        for x in A.peirce(base, i):
            lhs = A.mul({u: 1}, _apply_linear(imgs, {x: 1}))
            rhs = _apply_linear(imgs, A.mul({u: 1}, {x: 1}))
            if lhs != rhs:
                return NaturalityVerdict(False, (A.names[u], A.names[x], A.format(lhs), A.format(rhs)))
    return NaturalityVerdict(True)


def naturality_counterexample() -> NaturalityVerdict:
    """The 2 ⇄ 0 ⇄ 1 algebra modulo paths of length four with ψ swapping 1 and 2."""
    B = algebra_from_presentation(final_remark_presentation())
    return naturality_check(B, vertex_swap(B, 1, 2), 1, 2)


def star_leaf_swaps(n: int, field: Field = QQ) -> dict:
    A = build_star_quotient(n, field)
    return {(j, k): naturality_check(A, vertex_swap(A, j, k), j, k)
            for j in range(1, n + 1) for k in range(1, n + 1) if j != k}


# ------------------------------------------------------------ suites

CHI_SAMPLE = (Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2))


def modification_suite(n: int, field: Field = QQ) -> dict:
    """s_{j,k} axioms, perturbation witnesses, scalar proportionality and χ checks."""
    axiom_ok = True
    failures = []
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            m = build_s_modification(j, k, n, field=field)
            r = check_modification_axiom(m)
            if not (r.ok and m.is_invertible()):
                axiom_ok = False
                failures.append([j, k, list(r.witness or ())])
    m = build_s_modification(1, min(2, n), n, field=field)
    witnesses = {}
    for lab in m.components:
        r = check_modification_axiom(m.perturbed(lab, field(2)))
        witnesses[lab] = list(r.witness) if not r.ok else None
    perturbation = {"detected": all(w is not None for w in witnesses.values()), "witnesses": witnesses}
    # pairs of invertible modifications with the same source and target
    lambdas_ok = True
    tested = 0
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            s = build_s_modification(j, k, n, field=field)
            for c in (field(3), field(-1), field(1) / field(2)):
                tested += 1
                lambdas_ok &= scalar_proportionality(s, s.scaled(c)) == c
            for l in range(1, n + 1):
                via = build_s_modification(j, l, n, field=field).then(build_s_modification(l, k, n, field=field))
                tested += 1
                lambdas_ok &= scalar_proportionality(s, via) == 1
    R = build_star_quotient(n, field)
    chi_ok = True
    for a in CHI_SAMPLE:
        F = DiagonalFunctor.with_chi(R, field(a))
        chi_ok &= chi_invariant(F) == field(a)
        for b in CHI_SAMPLE:
            G = DiagonalFunctor.with_chi(R, field(b))
            chi_ok &= natural_transformations(F, G).invertible_exists == (a == b)
    ok = axiom_ok and lambdas_ok and chi_ok and perturbation["detected"]
    return {"n": n, "axiom_ok": axiom_ok, "axiom_failures": failures, "perturbation": perturbation,
            "scalar_pairs_tested": tested, "scalar_proportionality_ok": lambdas_ok,
            "chi_sample": [str(a) for a in CHI_SAMPLE], "chi_ok": chi_ok, "ok": ok}
