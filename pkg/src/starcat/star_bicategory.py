"""The star bicategories over Λ_n and A_n, the biideal 𝓘, birepresentation
models given by bimodules, and 𝓑-stable ideals.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from .quiver_algebra import FiniteDimAlgebra, build_star_quotient, build_zigzag, projection_map
from .bimodules import (Bimodule, BimoduleError, BimoduleMorphism, decompose, direct_sum,
                        end_algebra, hom_space, identity_morphism, intertwiner_check,
                        left_projective_module, projective_bimodule, regular_bimodule,
                        tensor_morphisms, tensor_over)
from .exact_linalg import QQ, Field, Matrix, Subspace


class BiidealError(ValueError):
    pass


# ------------------------------------------------------------------ bicategory

class StarBicategory:
    """1-morphisms add{Reg, F_0..F_n} over Λ_n ("zigzag") or A_n ("star")."""

    def __init__(self, n: int, kind: str, field: Field = QQ):
        if kind not in ("zigzag", "star"):
            raise ValueError("kind must be 'zigzag' or 'star'")
        self.n = n
        self.kind = kind
        self.algebra = build_zigzag(n, field) if kind == "zigzag" else build_star_quotient(n, field)
        self.labels = ["Reg"] + ["F%d" % k for k in range(n + 1)]
        self.objects = {"Reg": regular_bimodule(self.algebra)}
        for k in range(n + 1):
            self.objects["F%d" % k] = projective_bimodule(self.algebra, k, 0, label="F%d" % k)
        self.catalog = [self.objects[l] for l in self.labels]

    def hom(self, s: str, t: str):
        return hom_space(self.objects[s], self.objects[t])

    def tensor(self, s: str, t: str):
        return tensor_over(self.objects[s], self.objects[t])

    def decompose(self, M: Bimodule):
        return decompose(M, self.catalog)

    def label_of(self, M: Bimodule) -> str:
        return M.label

    def __repr__(self):
        return "StarBicategory(%s, n=%d)" % (self.kind, self.n)


_BICATS: dict = {}


def get_bicategory(n: int, kind: str = "star", field: Field = QQ) -> StarBicategory:
    key = (n, kind, field)
    if key not in _BICATS:
        _BICATS[key] = StarBicategory(n, kind, field)
    return _BICATS[key]


@dataclass
class OneMorphism:
    bicategory: StarBicategory
    summands: Counter

    @property
    def realization(self) -> Bimodule:
        mods = [self.bicategory.objects[l] for l in self.bicategory.labels
                for _ in range(self.summands.get(l, 0))]
        if len(mods) == 1:
            return mods[0]
        return direct_sum(mods)

    def __repr__(self):
        parts = ["%d·%s" % (self.summands[l], l) if self.summands[l] > 1 else l
                 for l in self.bicategory.labels if self.summands.get(l)]
        return " ⊕ ".join(parts) or "0"


def one_morphism(bicat: StarBicategory, label: str) -> OneMorphism:
    return OneMorphism(bicat, Counter({label: 1}))


def compose_1morphisms(x: OneMorphism, y: OneMorphism) -> OneMorphism:
    """x ∘ y realized as x ⊗ y, then decomposed."""
    if x.bicategory is not y.bicategory:
        raise BimoduleError("1-morphisms from different bicategories")
    T = tensor_over(x.realization, y.realization)
    d = x.bicategory.decompose(T)
    return OneMorphism(x.bicategory, d.multiset())


# ------------------------------------------------------- generator-image morphisms

def element_in(bicat: StarBicategory, label: str, left: str, right: str | None = None) -> dict:
    """Basis vector of an indecomposable: an algebra element for Reg, a pair for F_k."""
    A = bicat.algebra
    M = bicat.objects[label]
    if label == "Reg":
        return {A.index[left]: A.field(1)}
    return {M.pair_index[(A.index[left], A.index[right])]: A.field(1)}


def generator_morphism(bicat: StarBicategory, src: str, tgt: str, v: dict) -> BimoduleMorphism:
    """The morphism determined by the image v of the generator (1 or e_j ⊗ e_0)."""
    A = bicat.algebra
    M = bicat.objects[src]
    N = bicat.objects[tgt]
    cols = []
    if src == "Reg":
        for x in range(A.dim):
            cols.append(N.L(x).apply(v))
    else:
        for p, q in [(p, q) for (p, q), _ in sorted(M.pair_index.items(), key=lambda t: t[1])]:
            cols.append(N.L(p).apply(N.R(q).apply(v)))
    f = BimoduleMorphism(M, N, Matrix.from_columns(N.dim, cols))
    if not intertwiner_check(f):
        raise BiidealError("generator image does not define a bimodule morphism %s → %s" % (src, tgt))
    return f


# --------------------------------------------------------------------- biideals

@dataclass
class Biideal:
    bicategory: StarBicategory
    components: dict  # (src label, tgt label) → Subspace of Hom-coordinates

    def component(self, s: str, t: str) -> Subspace:
        c = self.components.get((s, t))
        if c is None:
            return Subspace(self.bicategory.hom(s, t).dim)
        return c

    def morphisms(self, s: str, t: str) -> list:
        H = self.bicategory.hom(s, t)
        return [H.combine([v.get(k, 0) for k in range(H.dim)]) for v in self.component(s, t).sparse_basis()]

    def dims(self) -> dict:
        return {(s, t): self.component(s, t).dim
                for s in self.bicategory.labels for t in self.bicategory.labels}

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims().values())


def _span(bicat, s, t, morphisms) -> Subspace:
    H = bicat.hom(s, t)
    return Subspace(H.dim, [H.coordinates(f) for f in morphisms])


def build_biideal_I(n: int, field: Field = QQ, literal: bool = False) -> Biideal:
    """The biideal 𝓘 of 𝓑̃_n built from its generator images.

    The published (Λ, F_j) generator c_j⊗c sits in e_j F_j e_0, so it is not
    the image of 1 under any bimodule map.  By default that component is the
    zero space, which is what the dimension identity forces; ``literal=True``
    tries the stated image and raises BiidealError.
    """
    B = get_bicategory(n, "zigzag", field)
    comps = {}
    comps[("Reg", "Reg")] = _span(B, "Reg", "Reg", [
        generator_morphism(B, "Reg", "Reg", element_in(B, "Reg", "c%d" % k)) for k in range(1, n + 1)])
    for j in range(1, n + 1):
        F = "F%d" % j
        if literal:
            generator_morphism(B, "Reg", F, element_in(B, F, "c%d" % j, "c"))
        comps[("Reg", F)] = Subspace(B.hom("Reg", F).dim)
        comps[(F, F)] = _span(B, F, F, [
            generator_morphism(B, F, F, element_in(B, F, "c%d" % j, "e0")),
            generator_morphism(B, F, F, element_in(B, F, "c%d" % j, "c"))])
    return Biideal(B, comps)


def radical_biideal(bicat: StarBicategory) -> Biideal:
    """Radical of the additive category of 1-morphisms, on indecomposables."""
    comps = {}
    for s in bicat.labels:
        for t in bicat.labels:
            H = bicat.hom(s, t)
            if s != t:
                comps[(s, t)] = Subspace.full(H.dim) if H.dim else Subspace(0)
            else:
                E, _ = end_algebra(bicat.objects[s])
                comps[(s, t)] = E.radical()
    return Biideal(bicat, comps)


def zero_biideal(bicat: StarBicategory) -> Biideal:
    return Biideal(bicat, {})


def entries(bicat_catalog_labels, f: BimoduleMorphism, dsrc, dtgt) -> list:
    """Matrix entries ρ_t ∘ f ∘ ι_s between catalog summands: (s_label, t_label, morphism)."""
    out = []
    for s, inc in zip(dsrc.labels, dsrc.inclusions):
        g = f.matrix @ inc.matrix
        for t, pr in zip(dtgt.labels, dtgt.projections):
            out.append((s, t, BimoduleMorphism(inc.source, pr.target, pr.matrix @ g)))
    return out


@dataclass
class BiidealCertificate:
    ok: bool
    checks: list
    witness: dict | None = None


def verify_biideal(I: Biideal) -> BiidealCertificate:
    """Check vertical ideal closure and whisker stability of every component."""
    B = I.bicategory
    labels = B.labels
    for (s, t), sub in I.components.items():
        if sub.ambient_dim != B.hom(s, t).dim:
            raise BiidealError("component (%s, %s) is not a subspace of the Hom space" % (s, t))
    checks = []
    witness = None

    def record(kind, gen, side, comp, idx, target, ok):
        nonlocal witness
        rec = {"kind": kind, "generator": gen, "side": side, "component": list(comp),
               "basis_index": idx, "lands_in": list(target), "ok": ok}
        checks.append(rec)
        if not ok and witness is None:
            witness = rec

    for s in labels:
        for t in labels:
            mors = I.morphisms(s, t)
            for idx, g in enumerate(mors):
                # vertical composition on both sides
                for u in labels:
                    ok = all(I.component(s, u).contains(B.hom(s, u).coordinates(h @ g))
                             for h in B.hom(t, u).basis)
                    record("compose", u, "post", (s, t), idx, (s, u), ok)
                    ok = all(I.component(u, t).contains(B.hom(u, t).coordinates(g @ h))
                             for h in B.hom(u, s).basis)
                    record("compose", u, "pre", (s, t), idx, (u, t), ok)
                # whiskering by generators
                for G in labels:
                    idG = identity_morphism(B.objects[G])
                    for side in ("left", "right"):
                        w = tensor_morphisms(idG, g) if side == "left" else tensor_morphisms(g, idG)
                        ds = B.decompose(w.source)
                        dt = B.decompose(w.target)
                        ok = True
                        bad = None
                        for a, b, e in entries(labels, w, ds, dt):
                            if not I.component(a, b).contains(B.hom(a, b).coordinates(e)):
                                ok = False
                                bad = (a, b)
                                break
                        record("whisker", G, side, (s, t), idx, bad or (s, t), ok)
    return BiidealCertificate(witness is None, checks, witness)


def biideal_power(I: Biideal, m: int) -> Biideal:
    """I^m via vertical composition through every indecomposable."""
    if m < 1:
        raise ValueError("power must be at least 1")
    B = I.bicategory
    cur = I
    for _ in range(m - 1):
        comps = {}
        for s in B.labels:
            for t in B.labels:
                vecs = []
                H = B.hom(s, t)
                for u in B.labels:
                    for a in cur.morphisms(s, u):
                        for b in I.morphisms(u, t):
                            vecs.append(H.coordinates(b @ a))
                if vecs:
                    comps[(s, t)] = Subspace(H.dim, vecs)
        cur = Biideal(B, comps)
    return cur


def nilpotency_degree(I: Biideal, bound: int = 12) -> int | None:
    for m in range(1, bound + 1):
        if biideal_power(I, m).is_zero():
            return m
    return None


def horizontal_power_contained(I: Biideal, m: int) -> tuple[bool, dict | None]:
    """Every horizontal composite of m basis 2-morphisms of I has entries in I^m."""
    B = I.bicategory
    Im = biideal_power(I, m)
    gens = [(s, t, g) for s in B.labels for t in B.labels for g in I.morphisms(s, t)]

    def rec(depth, acc):
        if depth == m:
            ds = B.decompose(acc.source)
            dt = B.decompose(acc.target)
            for a, b, e in entries(B.labels, acc, ds, dt):
                if not Im.component(a, b).contains(B.hom(a, b).coordinates(e)):
                    return {"entry": (a, b)}
            return None
        for s, t, g in gens:
            nxt = g if acc is None else tensor_morphisms(acc, g)
            bad = rec(depth + 1, nxt)
            if bad:
                return bad
        return None

    bad = rec(0, None)
    return bad is None, bad


# ------------------------------------------------------------------- Q functor

def _basis_map(L: StarBicategory, A: StarBicategory, label: str) -> list:
    """Basis of the Λ-indecomposable → basis of its A-counterpart (None if killed by J)."""
    pm = projection_map(L.algebra, A.algebra)
    M = L.objects[label]
    N = A.objects[label]
    if label == "Reg":
        return [pm[i] for i in range(M.dim)]
    out = [None] * M.dim
    for (p, q), k in M.pair_index.items():
        pp, qq = pm[p], pm[q]
        if pp is not None and qq is not None:
            out[k] = N.pair_index.get((pp, qq))
    return out


def quotient_morphism(f: BimoduleMorphism, src: str, tgt: str, n: int, field: Field = QQ) -> BimoduleMorphism:
    """Q(f): the morphism induced on M/(JM + MJ) for indecomposables over Λ_n."""
    L = get_bicategory(n, "zigzag", field)
    A = get_bicategory(n, "star", field)
    ms = _basis_map(L, A, src)
    mt = _basis_map(L, A, tgt)
    inv_s = {k2: k for k, k2 in enumerate(ms) if k2 is not None}
    cols = f.matrix.columns()
    for k, k2 in enumerate(ms):
        if k2 is None and any(mt[r] is not None for r in cols[k]):
            raise BiidealError("morphism does not preserve the J-submodule")
    S, T = A.objects[src], A.objects[tgt]
    out = []
    for k2 in range(S.dim):
        col = cols[inv_s[k2]]
        out.append({mt[r]: x for r, x in col.items() if mt[r] is not None})
    g = BimoduleMorphism(S, T, Matrix.from_columns(T.dim, out))
    if not intertwiner_check(g):
        raise BiidealError("induced quotient map is not a bimodule morphism")
    return g


@dataclass
class DimensionIdentityReport:
    n: int
    rows: list  # (M, N, dim Hom_Λ, dim Hom_A, dim I)
    ok: bool


def quotient_dimension_identity(n: int, field: Field = QQ) -> DimensionIdentityReport:
    L = get_bicategory(n, "zigzag", field)
    A = get_bicategory(n, "star", field)
    I = build_biideal_I(n, field)
    rows = []
    ok = True
    for s in L.labels:
        for t in L.labels:
            a, b, c = L.hom(s, t).dim, A.hom(s, t).dim, I.component(s, t).dim
            rows.append((s, t, a, b, c))
            ok &= a == b + c
    return DimensionIdentityReport(n, rows, ok)


# ------------------------------------------------------------ birepresentations

class Birepresentation:
    """A birepresentation modeled by bimodules.

    Objects are bimodules X with left algebra R; a generator label G acts by
    ``image[G] ⊗_R −``.  ``two_morphism_map(s, t, α)`` sends a 2-morphism of the
    acting bicategory to a morphism image[s] → image[t].
    """

    def __init__(self, base_algebra: FiniteDimAlgebra, generator_images: dict,
                 objects: Sequence[Bimodule], name: str = "",
                 two_morphism_map: Callable | None = None, generator_order: Sequence[str] = ()):
        self.base_algebra = base_algebra
        self.generator_images = dict(generator_images)
        self.generators = list(generator_order) or list(generator_images)
        self.objects = list(objects)
        self.object_labels = [X.label for X in objects]
        if len(set(self.object_labels)) != len(self.object_labels):
            raise BimoduleError("object labels must be distinct")
        self.index = {l: i for i, l in enumerate(self.object_labels)}
        self.name = name
        self.two_morphism_map = two_morphism_map

    @property
    def reg_image(self):
        return self.generator_images.get("Reg")

    def hom(self, i: int, j: int):
        return hom_space(self.objects[i], self.objects[j])

    def act(self, gen: str, X: Bimodule) -> Bimodule:
        return tensor_over(self.generator_images[gen], X)

    def decomposition(self, M: Bimodule):
        return decompose(M, self.objects)

    def action_on(self, gen: str, j: int):
        return self.decomposition(self.act(gen, self.objects[j]))

    def entries(self, f: BimoduleMorphism, dsrc, dtgt) -> list:
        out = []
        for s, inc in zip(dsrc.labels, dsrc.inclusions):
            g = f.matrix @ inc.matrix
            for t, pr in zip(dtgt.labels, dtgt.projections):
                out.append((self.index[s], self.index[t],
                            BimoduleMorphism(inc.source, pr.target, pr.matrix @ g)))
        return out

    def __repr__(self):
        return "Birepresentation(%s, %d objects)" % (self.name, len(self.objects))


def action_matrix(rep: Birepresentation, gen: str) -> list[list[int]]:
    """Entry (i, j): multiplicity of object i in image(gen) ⊗ X_j."""
    m = len(rep.objects)
    out = [[0] * m for _ in range(m)]
    for j in range(m):
        c = rep.action_on(gen, j).multiset()
        for lab, k in c.items():
            out[rep.index[lab]][j] = k
    return out


def star_objects(R: FiniteDimAlgebra) -> list:
    return _left_projectives(R)


_LP: dict = {}


def _left_projectives(R: FiniteDimAlgebra) -> list:
    if id(R) not in _LP:
        _LP[id(R)] = (R, [left_projective_module(R, j) for j in range(R.vertex_count)])
    return _LP[id(R)][1]


def cell_birepresentation(n: int, field: Field = QQ) -> Birepresentation:
    """Cell birepresentation: A_n-proj with F_k acting by A e_k ⊗ e_0 A ⊗_A −."""
    B = get_bicategory(n, "star", field)
    images = {l: B.objects[l] for l in B.labels}

    def q(s, t, alpha):
        return quotient_morphism(alpha, s, t, n, field)

    return Birepresentation(B.algebra, images, _left_projectives(B.algebra), "cell(n=%d)" % n,
                            two_morphism_map=q, generator_order=B.labels)


def defining_birepresentation(n: int, field: Field = QQ) -> Birepresentation:
    """𝓑̃_n acting on Λ_n-proj."""
    B = get_bicategory(n, "zigzag", field)
    images = {l: B.objects[l] for l in B.labels}
    return Birepresentation(B.algebra, images, _left_projectives(B.algebra), "defining(n=%d)" % n,
                            two_morphism_map=lambda s, t, a: a, generator_order=B.labels)


def subrepresentation_N(n: int, field: Field = QQ) -> Birepresentation:
    """The subbirepresentation of the principal one on add{F_0..F_n} over A_n."""
    B = get_bicategory(n, "star", field)
    images = {l: B.objects[l] for l in B.labels}
    return Birepresentation(B.algebra, images, [B.objects["F%d" % k] for k in range(n + 1)],
                            "N(n=%d)" % n, two_morphism_map=lambda s, t, a: a,
                            generator_order=B.labels)


# ---------------------------------------------------------------- stable ideals

@dataclass
class StableIdeal:
    birep: Birepresentation
    components: dict  # (i, j) → Subspace of hom(i, j) coordinates

    def component(self, i: int, j: int) -> Subspace:
        c = self.components.get((i, j))
        return c if c is not None else Subspace(self.birep.hom(i, j).dim)

    def dims(self) -> dict:
        m = len(self.birep.objects)
        return {(i, j): self.component(i, j).dim for i in range(m) for j in range(m)}

    def total_dim(self) -> int:
        return sum(self.dims().values())

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def is_everything(self) -> bool:
        m = len(self.birep.objects)
        return all(self.component(i, j).dim == self.birep.hom(i, j).dim
                   for i in range(m) for j in range(m))

    def morphisms(self, i: int, j: int) -> list:
        H = self.birep.hom(i, j)
        return [H.combine([v.get(k, 0) for k in range(H.dim)]) for v in self.component(i, j).sparse_basis()]

    def key(self):
        m = len(self.birep.objects)
        return tuple(self.component(i, j).key() for i in range(m) for j in range(m))

    def __eq__(self, other):
        return isinstance(other, StableIdeal) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other):
        m = len(self.birep.objects)
        return StableIdeal(self.birep, {(i, j): self.component(i, j) + other.component(i, j)
                                        for i in range(m) for j in range(m)})


def _composition_closure(rep: Birepresentation, comps: dict) -> dict:
    m = len(rep.objects)
    comps = {(i, j): comps.get((i, j), Subspace(rep.hom(i, j).dim)) for i in range(m) for j in range(m)}
    changed = True
    while changed:
        changed = False
        for i in range(m):
            for j in range(m):
                Hij = rep.hom(i, j)
                mors = [Hij.combine([v.get(k, 0) for k in range(Hij.dim)])
                        for v in comps[(i, j)].sparse_basis()]
                if not mors:
                    continue
                for k in range(m):
                    Hik = rep.hom(i, k)
                    new = [Hik.coordinates(h @ f) for f in mors for h in rep.hom(j, k).basis]
                    if new:
                        s = comps[(i, k)] + Subspace(Hik.dim, new)
                        if s.dim > comps[(i, k)].dim:
                            comps[(i, k)] = s
                            changed = True
                    Hkj = rep.hom(k, j)
                    new = [Hkj.coordinates(f @ g) for f in mors for g in rep.hom(k, i).basis]
                    if new:
                        s = comps[(k, j)] + Subspace(Hkj.dim, new)
                        if s.dim > comps[(k, j)].dim:
                            comps[(k, j)] = s
                            changed = True
    return comps


def _generator_images_of(rep: Birepresentation, gen: str, f: BimoduleMorphism, i: int, j: int) -> list:
    P = rep.generator_images[gen]
    w = tensor_morphisms(identity_morphism(P), f)
    ds = rep.action_on(gen, i)
    dt = rep.action_on(gen, j)
    return rep.entries(w, ds, dt)


def stable_closure(rep: Birepresentation, comps: dict) -> StableIdeal:
    """Smallest 𝓑-stable ideal containing the given components (worklist fixpoint)."""
    m = len(rep.objects)
    comps = _composition_closure(rep, comps)
    while True:
        grew = False
        for i in range(m):
            for j in range(m):
                H = rep.hom(i, j)
                for v in comps[(i, j)].sparse_basis():
                    f = H.combine([v.get(k, 0) for k in range(H.dim)])
                    for gen in rep.generators:
                        for a, b, e in _generator_images_of(rep, gen, f, i, j):
                            Hab = rep.hom(a, b)
                            x = Hab.coordinates(e)
                            if not comps[(a, b)].contains(x):
                                comps[(a, b)] = comps[(a, b)] + Subspace(Hab.dim, [x])
                                grew = True
        if not grew:
            return StableIdeal(rep, comps)
        comps = _composition_closure(rep, comps)


def is_stable(I: StableIdeal) -> bool:
    rep = I.birep
    again = stable_closure(rep, dict(I.components))
    return again == I


def ev_ideal(rep: Birepresentation, I: Biideal) -> StableIdeal:
    """ev_M(I): the stable ideal generated by all (Mα)_X, α ∈ I between indecomposables."""
    if rep.two_morphism_map is None:
        raise ValueError("birepresentation has no action on 2-morphisms")
    seeds: dict = {}
    B = I.bicategory
    for s in B.labels:
        for t in B.labels:
            for alpha in I.morphisms(s, t):
                image = rep.two_morphism_map(s, t, alpha)
                for j, X in enumerate(rep.objects):
                    w = tensor_morphisms(image, identity_morphism(X))
                    ds = rep.decomposition(w.source)
                    dt = rep.decomposition(w.target)
                    for a, b, e in rep.entries(w, ds, dt):
                        H = rep.hom(a, b)
                        x = H.coordinates(e)
                        seeds.setdefault((a, b), []).append(x)
    comps = {(a, b): Subspace(rep.hom(a, b).dim, v) for (a, b), v in seeds.items()}
    return stable_closure(rep, comps)


def radical_seeds(rep: Birepresentation) -> list:
    """(i, j, coordinate vector) for a basis of the radical of each Hom space."""
    m = len(rep.objects)
    out = []
    for i in range(m):
        for j in range(m):
            H = rep.hom(i, j)
            if i != j:
                vecs = Subspace.full(H.dim).sparse_basis() if H.dim else []
            else:
                E, _ = end_algebra(rep.objects[i])
                vecs = E.radical().sparse_basis()
            out.extend((i, j, v) for v in vecs)
    return out


def proper_stable_ideals(rep: Birepresentation) -> list:
    """Distinct proper nonzero stable ideals among seed closures and their sums."""
    seen = []
    for i, j, v in radical_seeds(rep):
        I = stable_closure(rep, {(i, j): Subspace(rep.hom(i, j).dim, [v])})
        if not I.is_everything() and I not in seen:
            seen.append(I)
    # close under sums
    grew = True
    while grew:
        grew = False
        for a in list(seen):
            for b in list(seen):
                s = a + b
                if s not in seen:
                    s = stable_closure(rep, dict(s.components))
                    if not s.is_everything() and s not in seen:
                        seen.append(s)
                        grew = True
    return seen


def subrep_N_maximal_ideal(n: int, field: Field = QQ) -> StableIdeal:
    """The unique maximal stable ideal of N (sum of all proper seed closures)."""
    rep = subrepresentation_N(n, field)
    props = proper_stable_ideals(rep)
    if not props:
        raise ValueError("N has no proper stable ideal")
    top = props[0]
    for p in props[1:]:
        top = top + p
    top = stable_closure(rep, dict(top.components))
    if top.is_everything():
        raise ValueError("proper ideals do not have a proper sum")
    return top
