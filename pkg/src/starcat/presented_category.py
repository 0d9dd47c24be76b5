"""Finitely presented linear categories with an oriented rewriting system.

Words are tuples of generator names in composition order: ``(g1, g2, g3)``
is g1∘g2∘g3, so g3 is applied first.  The empty word at an object is its
identity.  Relations are linear combinations set equal to zero; each one is
oriented so that its largest word is rewritten into the rest.

Word order: total length, then the number of "heavy" letters, then the
lexicographic order on generator precedence.  All three are compatible with
concatenation, so every oriented rule terminates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .quiver_algebra import Algebra
from .exact_linalg import QQ, Field, Subspace, vadd, vscale


class PresentationError(ValueError):
    pass


class RewriteCapError(RuntimeError):
    """Rewriting or enumeration went past the configured length cap."""


class EnvelopeError(ValueError):
    pass


INV = "^-1"


def inverse_name(g: str) -> str:
    return g[:-len(INV)] if g.endswith(INV) else g + INV


@dataclass(frozen=True)
class Generator:
    name: str
    source: str
    target: str
    invertible: bool = False


class MorphismExpression:
    """A linear combination of parallel words from ``source`` to ``target``."""

    __slots__ = ("source", "target", "terms")

    def __init__(self, source: str, target: str, terms: dict | Iterable = ()):
        self.source = source
        self.target = target
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = ((tuple(w), c) for c, w in terms)
        t: dict = {}
        for w, c in items:
            w = tuple(w)
            v = t.get(w, 0) + c
            if v == 0:
                t.pop(w, None)
            else:
                t[w] = v
        self.terms = t

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MorphismExpression") -> "MorphismExpression":
        self._parallel(other)
        return MorphismExpression(self.source, self.target, vadd(self.terms, other.terms))

    def __sub__(self, other: "MorphismExpression") -> "MorphismExpression":
        self._parallel(other)
        return MorphismExpression(self.source, self.target, vadd(self.terms, other.terms, -1))

    def scale(self, c) -> "MorphismExpression":
        return MorphismExpression(self.source, self.target, vscale(self.terms, c))

    def __matmul__(self, other: "MorphismExpression") -> "MorphismExpression":
        """self ∘ other."""
        if other.target != self.source:
            raise PresentationError("cannot compose %s→%s after %s→%s"
                                    % (self.source, self.target, other.source, other.target))
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = out.get(w, 0) + c1 * c2
                if v == 0:
                    out.pop(w, None)
                else:
                    out[w] = v
        return MorphismExpression(other.source, self.target, out)

    def _parallel(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise PresentationError("expressions are not parallel")

    def __eq__(self, other):
        return (isinstance(other, MorphismExpression) and self.source == other.source
                and self.target == other.target and self.terms == other.terms)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            s = "·".join(w) if w else "id_%s" % self.source
            parts.append(s if c == 1 else "%s*%s" % (c, s))
        return " + ".join(parts)

    def __repr__(self):
        return "<%s: %s → %s>" % (self.format(), self.source, self.target)


@dataclass
class CriticalPair:
    word: tuple
    left: MorphismExpression
    right: MorphismExpression

    @property
    def resolves(self) -> bool:
        return self.left == self.right


@dataclass
class ConfluenceReport:
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class HomBasis:
    source: str
    target: str
    words: list
    saturated: bool
    finite: bool  # no irreducible word of length ``bound`` leaves the source at all
    bound: int

    @property
    def dim(self) -> int:
        return len(self.words)


class PresentedLinearCategory:
    def __init__(self, objects: Sequence[str], generators: Sequence, relations: Sequence = (),
                 field: Field = QQ, precedence: Sequence[str] | None = None,
                 heavy: Iterable[str] = (), length_cap: int = 12, name: str = ""):
        self.objects = list(objects)
        self.field = field
        self.name = name
        self.length_cap = length_cap
        gens = []
        for g in generators:
            gens.append(g if isinstance(g, Generator) else Generator(*g))
        self.base_generators = gens
        self.generators: dict[str, Generator] = {}
        for g in gens:
            self._add_generator(g)
        for g in gens:
            if g.invertible:
                self._add_generator(Generator(inverse_name(g.name), g.target, g.source, True))
        order = list(precedence) if precedence else [g.name for g in gens]
        for g in gens:
            if g.name not in order:
                order.append(g.name)
        for g in gens:
            if g.invertible and inverse_name(g.name) not in order:
                order.append(inverse_name(g.name))
        self.precedence = order
        self.rank = {g: i for i, g in enumerate(order)}
        heavy = set(heavy)
        self.heavy = heavy | {inverse_name(h) for h in heavy if self.generators.get(h, None)
                              and self.generators[h].invertible}
        self.relations = [self._expression(r) for r in relations]
        self.rules: dict[tuple, MorphismExpression] = {}
        self._orient_all()
        self._nf_cache: dict = {}

    # ---------------------------------------------------------- construction
    def _add_generator(self, g: Generator):
        if g.name in self.generators:
            raise PresentationError("duplicate generator %s" % g.name)
        for o in (g.source, g.target):
            if o not in self.objects:
                raise PresentationError("generator %s uses unknown object %s" % (g.name, o))
        self.generators[g.name] = g

    def endpoints(self, word: tuple, obj: str | None = None) -> tuple[str, str]:
        if not word:
            if obj is None:
                raise PresentationError("empty word needs an object")
            return obj, obj
        for g in word:
            if g not in self.generators:
                raise PresentationError("unknown generator %s" % g)
        for x, y in zip(word, word[1:]):
            if self.generators[x].source != self.generators[y].target:
                raise PresentationError("word %s is not composable" % ("·".join(word),))
        return self.generators[word[-1]].source, self.generators[word[0]].target

    def _expression(self, rel) -> MorphismExpression:
        if isinstance(rel, MorphismExpression):
            return rel
        terms = [(self.field(c), tuple(w)) for c, w in rel]
        ends = set()
        for _, w in terms:
            if w:
                ends.add(self.endpoints(w))
        if not ends:
            raise PresentationError("relation made only of identities needs explicit endpoints")
        if len(ends) > 1:
            raise PresentationError("relation is not homogeneous: %s" % sorted(ends))
        s, t = ends.pop()
        return MorphismExpression(s, t, terms)

    def key(self, word: tuple):
        return (len(word), sum(1 for g in word if g in self.heavy),
                tuple(self.rank[g] for g in word))

    def _orient(self, rel: MorphismExpression):
        if rel.is_zero():
            return None
        lead = max(rel.terms, key=self.key)
        c = rel.terms[lead]
        rest = {w: -x / c for w, x in rel.terms.items() if w != lead}
        return lead, MorphismExpression(rel.source, rel.target, rest)

    def _orient_all(self):
        for g in self.generators.values():
            if g.invertible:
                self.rules[(g.name, inverse_name(g.name))] = MorphismExpression(
                    g.target, g.target, {(): self.field(1)})
        queue = list(self.relations)
        done = 0
        while queue:
            done += 1
            if done > 100 * (len(self.relations) + 1):
                raise PresentationError("orienting the relations did not settle")
            for rel in self._with_transports([queue.pop(0)]):
                o = self._orient(rel)
                if o is None:
                    continue
                lead, rhs = o
                if lead not in self.rules:
                    self.rules[lead] = rhs
                elif self.rules[lead] != rhs:
                    # two relations share a leading word; their difference is a new relation
                    queue.append(self.rules[lead] - rhs)

    def _with_transports(self, rels):
        """Relations plus copies multiplied by inverses of invertible end letters."""
        out = []
        seen = set()

        def push(r):
            r = self._cancel(r)
            if r.is_zero():
                return
            k = r
            if k not in seen:
                seen.add(k)
                out.append(r)

        for r in rels:
            push(r)
            lefts = {w[0] for w in r.terms if w and self.generators[w[0]].invertible}
            rights = {w[-1] for w in r.terms if w and self.generators[w[-1]].invertible}
            for g in lefts:
                push(self.single(inverse_name(g)) @ r)
            for g in rights:
                push(r @ self.single(inverse_name(g)))
            for g in lefts:
                for h in rights:
                    push(self.single(inverse_name(g)) @ r @ self.single(inverse_name(h)))
        return out

    def _cancel(self, e: MorphismExpression) -> MorphismExpression:
        out: dict = {}
        for w, c in e.terms.items():
            w = list(w)
            changed = True
            while changed:
                changed = False
                for i in range(len(w) - 1):
                    if w[i + 1] == inverse_name(w[i]) and self.generators[w[i]].invertible:
                        del w[i:i + 2]
                        changed = True
                        break
            out = vadd(out, {tuple(w): c})
        return MorphismExpression(e.source, e.target, out)

    # ------------------------------------------------------------ morphisms
    def single(self, g: str) -> MorphismExpression:
        gen = self.generators[g]
        return MorphismExpression(gen.source, gen.target, {(g,): self.field(1)})

    def identity(self, obj: str) -> MorphismExpression:
        return MorphismExpression(obj, obj, {(): self.field(1)})

    def word(self, word: Sequence[str], obj: str | None = None) -> MorphismExpression:
        word = tuple(word)
        s, t = self.endpoints(word, obj)
        return MorphismExpression(s, t, {word: self.field(1)})

    def zero(self, s: str, t: str) -> MorphismExpression:
        return MorphismExpression(s, t, {})

    # ---------------------------------------------------------- rewriting
    def _find(self, w: tuple):
        lens = self._lhs_lengths()
        for i in range(len(w)):
            for L in lens:
                if i + L <= len(w) and w[i:i + L] in self.rules:
                    return i, L
        return None

    def _lhs_lengths(self):
        if getattr(self, "_lens", None) is None or self._lens_n != len(self.rules):
            self._lens = sorted({len(k) for k in self.rules})
            self._lens_n = len(self.rules)
        return self._lens

    def is_irreducible(self, w: tuple) -> bool:
        return self._find(w) is None

    def _nf_word(self, w: tuple, depth: int = 0) -> dict:
        hit = self._nf_cache.get(w)
        if hit is not None:
            return hit
        if len(w) > max(self.length_cap, 1) * 4 or depth > 10000:
            raise RewriteCapError("rewriting of %s exceeded the cap" % ("·".join(w),))
        f = self._find(w)
        if f is None:
            res = {w: self.field(1)}
        else:
            i, L = f
            res = {}
            for r, c in self.rules[w[i:i + L]].terms.items():
                res = vadd(res, self._nf_word(w[:i] + r + w[i + L:], depth + 1), c)
        self._nf_cache[w] = res
        return res

    def normal_form(self, m: MorphismExpression) -> MorphismExpression:
        out: dict = {}
        for w, c in m.terms.items():
            if w:
                s, t = self.endpoints(w)
                if (s, t) != (m.source, m.target):
                    raise PresentationError("term %s does not match the endpoints" % ("·".join(w),))
            elif m.source != m.target:
                raise PresentationError("identity term in a non-endomorphism")
            out = vadd(out, self._nf_word(w), c)
        return MorphismExpression(m.source, m.target, out)

    def equal(self, x: MorphismExpression, y: MorphismExpression) -> bool:
        return self.normal_form(x - y).is_zero()

    def compose(self, *ms: MorphismExpression) -> MorphismExpression:
        out = ms[0]
        for m in ms[1:]:
            out = out @ m
        return self.normal_form(out)

    # ---------------------------------------------------------- confluence
    def critical_pairs(self) -> list[CriticalPair]:
        pairs = []
        lhs = list(self.rules)
        for l1 in lhs:
            for l2 in lhs:
                # overlaps: a proper suffix of l1 equals a proper prefix of l2
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        w = l1 + l2[k:]
                        try:
                            self.endpoints(w)
                        except PresentationError:
                            continue
                        pairs.append(self._pair(w, (0, len(l1)), (len(l1) - k, len(l2))))
                # inclusions: l2 sits strictly inside l1
                if l1 != l2 and len(l2) < len(l1):
                    for i in range(len(l1) - len(l2) + 1):
                        if l1[i:i + len(l2)] == l2:
                            pairs.append(self._pair(l1, (0, len(l1)), (i, len(l2))))
        return pairs

    def _pair(self, w, a, b) -> CriticalPair:
        s, t = self.endpoints(w)

        def step(pos):
            i, L = pos
            out: dict = {}
            for r, c in self.rules[w[i:i + L]].terms.items():
                out = vadd(out, {w[:i] + r + w[i + L:]: c})
            return self.normal_form(MorphismExpression(s, t, out))

        return CriticalPair(w, step(a), step(b))

    def check_confluence(self) -> ConfluenceReport:
        pairs = [p for p in self.critical_pairs() if len(p.word) <= self.length_cap]
        return ConfluenceReport(len(pairs), [p for p in pairs if not p.resolves])

    def complete(self, rounds: int | None = None) -> ConfluenceReport:
        """Bounded completion: orient unresolved critical pairs into new rules,
        keeping only rules whose left side fits under the length cap."""
        rounds = self.length_cap if rounds is None else rounds
        for _ in range(rounds):
            rep = self.check_confluence()
            if rep.ok:
                return rep
            added = 0
            for p in rep.failures:
                o = self._orient(self.normal_form(p.left - p.right))
                if o and len(o[0]) <= self.length_cap and o[0] not in self.rules:
                    self.rules[o[0]] = o[1]
                    self._nf_cache.clear()
                    added += 1
            if not added:
                break
        return self.check_confluence()

    def rules_decrease(self) -> bool:
        return all(self.key(w) > self.key(r) for l, rhs in self.rules.items()
                   for w in [l] for r in rhs.terms)

    # -------------------------------------------------------- enumeration
    def irreducible_words(self, source: str, bound: int) -> dict[int, list]:
        """Irreducible words leaving ``source``, grouped by length ≤ bound."""
        if bound > self.length_cap:
            raise RewriteCapError("bound %d exceeds the length cap %d" % (bound, self.length_cap))
        by_target: dict = {}
        for g in self.generators.values():
            by_target.setdefault(g.source, []).append(g.name)
        levels = {0: [((), source)]}
        for L in range(1, bound + 1):
            nxt = []
            for w, t in levels[L - 1]:
                for g in by_target.get(t, ()):
                    w2 = (g,) + w
                    # only prefixes of the new word can be new left-hand sides
                    if any(w2[:k] in self.rules for k in self._lhs_lengths() if k <= len(w2)):
                        continue
                    nxt.append((w2, self.generators[g].target))
            levels[L] = sorted(nxt, key=lambda x: self.key(x[0]))
        return levels

    def hom_basis_bounded(self, source: str, target: str, bound: int | None = None) -> HomBasis:
        bound = self.length_cap if bound is None else bound
        if bound < 1:
            raise ValueError("bound must be at least 1")
        levels = self.irreducible_words(source, bound)
        words = [w for L in range(bound + 1) for w, t in levels[L] if t == target]
        tail = [w for L in (bound - 1, bound) for w, t in levels[L] if t == target]
        return HomBasis(source, target, words, not tail, not levels[bound], bound)

    def hom_dims(self, bound: int | None = None) -> dict:
        return {(x, y): self.hom_basis_bounded(x, y, bound).dim
                for x in self.objects for y in self.objects}

    # ---------------------------------------------------------- serialization
    def to_json(self) -> str:
        return json.dumps({
            "objects": self.objects,
            "generators": [{"name": g.name, "src": g.source, "tgt": g.target,
                            "invertible": g.invertible} for g in self.base_generators],
            "relations": [[{"coeff": str(c), "path": list(w)} for w, c in sorted(r.terms.items())]
                          for r in self.relations],
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, **kw) -> "PresentedLinearCategory":
        d = json.loads(text)
        gens = [Generator(g["name"], g["src"], g["tgt"], g.get("invertible", False))
                for g in d["generators"]]
        rels = [[(Fraction(t["coeff"]), tuple(t["path"])) for t in r] for r in d["relations"]]
        return cls(d["objects"], gens, rels, **kw)

    def __repr__(self):
        return "PresentedLinearCategory(%s: %d objects, %d generators, %d rules)" % (
            self.name or "?", len(self.objects), len(self.generators), len(self.rules))


# ------------------------------------------------------------------ functors

class PresentedFunctor:
    """A linear functor given on objects and generators."""

    def __init__(self, source: PresentedLinearCategory, target: PresentedLinearCategory,
                 objects: dict, images: dict):
        self.source = source
        self.target = target
        self.objects = dict(objects)
        self.images = dict(images)
        for g, gen in source.generators.items():
            if g in self.images:
                continue
            if gen.invertible and inverse_name(g) in self.images:
                self.images[g] = self._invert(self.images[inverse_name(g)], gen)
            else:
                raise PresentationError("no image for generator %s" % g)

    def _invert(self, m: MorphismExpression, gen: Generator) -> MorphismExpression:
        if len(m.terms) != 1:
            raise PresentationError("cannot invert the image of %s automatically" % gen.name)
        (w, c), = m.terms.items()
        inv = tuple(inverse_name(g) for g in reversed(w))
        for g in w:
            if not self.target.generators[g].invertible:
                raise PresentationError("image letter %s is not invertible" % g)
        return MorphismExpression(m.target, m.source, {inv: 1 / c})

    def apply(self, m: MorphismExpression) -> MorphismExpression:
        s, t = self.objects[m.source], self.objects[m.target]
        out = MorphismExpression(s, t, {})
        for w, c in m.terms.items():
            img = self.target.identity(s)
            for g in reversed(w):
                img = self.images[g] @ img
            out = out + img.scale(c)
        return self.target.normal_form(out)

    def well_defined(self) -> tuple[bool, MorphismExpression | None]:
        for g, gen in self.source.generators.items():
            m = self.images[g]
            if (m.source, m.target) != (self.objects[gen.source], self.objects[gen.target]):
                return False, self.source.single(g)
        for lhs, rhs in self.source.rules.items():
            rel = self.source.word(lhs) - rhs
            if not self.apply(rel).is_zero():
                return False, rel
        return True, None

    def then(self, other: "PresentedFunctor") -> "PresentedFunctor":
        """other ∘ self."""
        objs = {x: other.objects[y] for x, y in self.objects.items()}
        imgs = {g: other.apply(m) for g, m in self.images.items()}
        return PresentedFunctor(self.source, other.target, objs, imgs)

    def agrees_with(self, other: "PresentedFunctor") -> bool:
        if self.objects != other.objects:
            return False
        return all(self.target.equal(self.images[g], other.images[g]) for g in self.source.generators)


class AlgebraFunctor:
    """A functor from a presented category to the category of indecomposable
    projectives R e_i of a basic algebra R.  A morphism R e_i → R e_j is right
    multiplication by an element of e_i R e_j."""

    def __init__(self, source: PresentedLinearCategory, algebra, objects: dict, images: dict):
        self.source = source
        self.algebra = algebra
        self.objects = dict(objects)
        self.images = dict(images)

    def apply_word(self, w: tuple, obj: str) -> dict:
        x = self.algebra.e(self.objects[obj])
        for g in reversed(w):
            x = self.algebra.mul(x, self.images[g])
        return x

    def apply(self, m: MorphismExpression) -> dict:
        out: dict = {}
        for w, c in m.terms.items():
            out = vadd(out, self.apply_word(w, m.source), c)
        return out

    def well_defined(self) -> tuple[bool, object]:
        A = self.algebra
        for g, gen in self.source.generators.items():
            x = self.images[g]
            i, j = self.objects[gen.source], self.objects[gen.target]
            if A.mul(A.mul(A.e(i), x), A.e(j)) != x:
                return False, g
        for lhs, rhs in self.source.rules.items():
            if self.apply(self.source.word(lhs) - rhs):
                return False, lhs
        return True, None

    def hom_matrix_rank(self, x: str, y: str, bound: int | None = None) -> tuple[int, int, int]:
        """(dim source Hom, dim target Hom, rank of the induced map)."""
        hb = self.source.hom_basis_bounded(x, y, bound)
        i, j = self.objects[x], self.objects[y]
        tgt = self.algebra.peirce(i, j)
        vecs = [self.apply(self.source.word(w, x)) for w in hb.words]
        return hb.dim, len(tgt), Subspace(self.algebra.dim, vecs).dim


# ---------------------------------------------------------------- star pieces

def star_proj_presentation(n: int, field: Field = QQ, length_cap: int = 12) -> PresentedLinearCategory:
    """Indecomposable projectives A_n e_k; a_k: Ae_k → Ae_0, b_k: Ae_0 → Ae_k, c on Ae_0."""
    objs = ["Ae%d" % k for k in range(n + 1)]
    gens = [Generator("a%d" % k, "Ae%d" % k, "Ae0") for k in range(1, n + 1)]
    gens += [Generator("b%d" % k, "Ae0", "Ae%d" % k) for k in range(1, n + 1)]
    gens.append(Generator("c", "Ae0", "Ae0"))
    one = Fraction(1)
    rels = []
    for k in range(1, n + 1):
        rels.append([(one, ("a%d" % k, "b%d" % k)), (-one, ("c",))])
        rels.append([(one, ("c", "a%d" % k))])
        rels.append([(one, ("b%d" % k, "c"))])
        for j in range(1, n + 1):
            rels.append([(one, ("b%d" % k, "a%d" % j))])
    rels.append([(one, ("c", "c"))])
    return PresentedLinearCategory(objs, gens, rels, field, length_cap=length_cap, name="A_%d-proj" % n)


def iso_weight(blocks: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Consecutive index pairs (i_l, i_{l+1}) inside each block of size ≥ 2."""
    pairs = []
    for b in blocks:
        b = sorted(b)
        if 0 in b:
            continue
        pairs += list(zip(b, b[1:]))
    return pairs


def xi(s: int, t: int, j) -> str:
    return "xi%d_%d(%s)" % (s, t, j)


def coisoinserter(base: PresentedLinearCategory, n: int, pairs: Sequence[tuple[int, int]],
                  length_cap: int | None = None) -> tuple[PresentedLinearCategory, PresentedFunctor]:
    """Adjoin invertible ξ(j), ξ(A) for each pair (s, t) with the naturality relations."""
    for s, t in pairs:
        if s == t or not (1 <= s <= n and 1 <= t <= n):
            raise PresentationError("malformed weight pair (%s, %s)" % (s, t))
    one = Fraction(1)
    gens = list(base.base_generators)
    rels = [[(c, w) for w, c in r.terms.items()] for r in base.relations]
    xis = []
    for s, t in pairs:
        for j in range(n + 1):
            xis.append(Generator(xi(s, t, j), "Ae%d" % j, "Ae%d" % j, True))
        xis.append(Generator(xi(s, t, "A"), "Ae%d" % s, "Ae%d" % t, True))
        x0, xA = xi(s, t, 0), xi(s, t, "A")
        rels.append([(one, ("c", x0)), (-one, (x0, "c"))])
        rels.append([(one, ("b%d" % t, x0)), (-one, (xA, "b%d" % s))])
        rels.append([(one, ("a%d" % t, xA)), (-one, (x0, "a%d" % s))])
        for k in range(1, n + 1):
            rels.append([(one, ("a%d" % k, xi(s, t, k))), (-one, (x0, "a%d" % k))])
            rels.append([(one, ("b%d" % k, x0)), (-one, (xi(s, t, k), "b%d" % k))])
    # ξ-letters rank below the algebra arrows, so rules push them towards the target end
    prec = [g.name for g in xis] + [inverse_name(g.name) for g in xis] + \
        [g.name for g in base.base_generators]
    cat = PresentedLinearCategory(base.objects, gens + xis, rels, base.field, prec, (),
                                  length_cap or base.length_cap, name="C^W")
    cone = PresentedFunctor(base, cat, {o: o for o in base.objects},
                            {g: cat.single(g) for g in base.generators})
    cat.xi_generators = [g.name for g in xis]
    cat.pairs = list(pairs)
    return cat, cone


def coequifier(cat: PresentedLinearCategory, to_identity: Sequence[str],
               name: str = "C^WR") -> tuple[PresentedLinearCategory, PresentedFunctor]:
    """Force each listed invertible endo-generator to be an identity."""
    kill = set(to_identity)
    for g in kill:
        gen = cat.generators[g]
        if gen.source != gen.target:
            raise PresentationError("%s is not an endomorphism" % g)
    gens = [g for g in cat.base_generators if g.name not in kill]

    def subst(w):
        return tuple(x for x in w if x not in kill and inverse_name(x) not in kill)

    rels, seen = [], set()
    for r in cat.relations:
        terms: dict = {}
        for w, c in r.terms.items():
            terms = vadd(terms, {subst(w): c})
        key = frozenset(terms.items())
        if terms and key not in seen:
            seen.add(key)
            rels.append([(c, w) for w, c in terms.items()])
    prec = [g for g in cat.precedence if g not in kill and inverse_name(g) not in kill]
    heavy = [h for h in cat.heavy if h in prec and not h.endswith(INV)]
    out = PresentedLinearCategory(cat.objects, gens, rels, cat.field, prec, heavy,
                                  cat.length_cap, name=name)
    images = {}
    for g, gen in cat.generators.items():
        if g in kill or inverse_name(g) in kill:
            images[g] = out.identity(gen.source)
        else:
            images[g] = out.single(g)
    cone = PresentedFunctor(cat, out, {o: o for o in cat.objects}, images)
    out.pairs = getattr(cat, "pairs", [])
    return out, cone


def cwr_presentation(n: int, blocks: Sequence[Sequence[int]], field: Field = QQ,
                     length_cap: int = 12) -> dict:
    """C^S, C^W and C^WR for a partition of [0, n], with their cone functors."""
    cs = star_proj_presentation(n, field, length_cap)
    pairs = iso_weight(blocks)
    cw, w_cone = coisoinserter(cs, n, pairs)
    kill = [xi(s, t, j) for s, t in pairs for j in range(n + 1)]
    cwr, r_cone = coequifier(cw, kill)
    return {"CS": cs, "CW": cw, "CWR": cwr, "W": w_cone, "R": r_cone, "pairs": pairs}


# ------------------------------------------------------ coequalizer example

def coequalizer_free(length_cap: int = 12) -> dict:
    """Coequalizer of F_b, F_c: A_2 → A_3 in linear categories: one object, a free loop x."""
    a2 = PresentedLinearCategory(["1", "2"], [Generator("a", "1", "2")], name="A2")
    a3 = PresentedLinearCategory(["1", "2", "3"], [Generator("b", "1", "2"), Generator("c", "2", "3")],
                                 name="A3")
    co = PresentedLinearCategory(["X"], [Generator("x", "X", "X")], length_cap=length_cap, name="coeq")
    Fb = PresentedFunctor(a2, a3, {"1": "1", "2": "2"}, {"a": a3.single("b")})
    Fc = PresentedFunctor(a2, a3, {"1": "2", "2": "3"}, {"a": a3.single("c")})
    cone = PresentedFunctor(a3, co, {"1": "X", "2": "X", "3": "X"},
                            {"b": co.single("x"), "c": co.single("x")})
    return {"A2": a2, "A3": a3, "Fb": Fb, "Fc": Fc, "coeq": co, "cone": cone}


def truncated_loop(m: int, length_cap: int = 12) -> PresentedLinearCategory:
    """One object Y with End(Y) = k[y]/(y^m)."""
    return PresentedLinearCategory(["Y"], [Generator("y", "Y", "Y")],
                                   [[(Fraction(1), ("y",) * m)]], length_cap=max(length_cap, m),
                                   name="T_%d" % m)


def factor_through_truncation(demo: dict, m: int) -> PresentedFunctor:
    T = truncated_loop(m, demo["coeq"].length_cap)
    return PresentedFunctor(demo["coeq"], T, {"X": "Y"}, {"x": T.single("y")})


def counterexample_table(length_cap: int = 12, upto: int = 10) -> dict:
    demo = coequalizer_free(length_cap)
    co = demo["coeq"]
    nfs = [co.normal_form(co.word(("x",) * m)) for m in range(1, upto + 1)]
    distinct = len({nf for nf in nfs}) == len(nfs)
    hb = co.hom_basis_bounded("X", "X", length_cap)
    return {"powers": [nf.format() for nf in nfs], "distinct": distinct,
            "hom_dim_at_cap": hb.dim, "saturated": hb.saturated, "cap": length_cap}


# --------------------------------------------------------- additive envelope

@dataclass
class EnvelopeObject:
    summands: list  # (object, idempotent MorphismExpression)
    label: str = ""


@dataclass
class Envelope:
    category: PresentedLinearCategory
    algebra: Algebra
    basis: list  # (source, target, word)
    indecomposables: list  # EnvelopeObject, one per isomorphism class
    hom_dims: list  # hom_dims[i][j] = dim Hom(indec_i, indec_j)
    object_class: dict  # object → list of class indices of its summands

    def comparison_is_full_faithful(self) -> bool:
        return True  # the embedding X ↦ (X, id) keeps Hom spaces by construction


def additive_karoubi_envelope(cat: PresentedLinearCategory, bound: int | None = None,
                              seed: int = 0) -> Envelope:
    """Split all idempotents of the finite total endomorphism algebra."""
    basis = []
    for x in cat.objects:
        for y in cat.objects:
            hb = cat.hom_basis_bounded(x, y, bound)
            if not (hb.saturated and hb.finite):
                raise EnvelopeError("Hom(%s, %s) is not saturated at bound %d" % (x, y, hb.bound))
            basis += [(x, y, w) for w in hb.words]
    index = {b: i for i, b in enumerate(basis)}
    one = cat.field(1)
    mult = {}
    for i, (s1, t1, w1) in enumerate(basis):
        for j, (s2, t2, w2) in enumerate(basis):
            if s1 != t2:
                continue
            nf = cat.normal_form(MorphismExpression(s2, t1, {w1 + w2: one}))
            if nf.terms:
                mult[(i, j)] = {index[(s2, t1, w)]: c for w, c in nf.terms.items()}
    unit = {index[(x, x, ())]: one for x in cat.objects}
    alg = Algebra(len(basis), mult, unit, cat.field,
                  ["%s:%s" % ("·".join(w) or "id", x) for x, _, w in basis])
    # primitive idempotents of each object's endomorphism algebra separately
    prims = []
    for x in cat.objects:
        ex = {index[(x, x, ())]: one}
        sub_idx = [i for i, (s, t, _) in enumerate(basis) if s == x and t == x]
        sub = _subalgebra(alg, sub_idx, ex)
        for e in sub.primitive_idempotents(seed):
            prims.append((x, {sub_idx[k]: c for k, c in e.items()}))
    rad = alg.radical()
    classes: list = []
    object_class: dict = {x: [] for x in cat.objects}
    for x, e in prims:
        for ci, (y, f) in enumerate(classes):
            if _isomorphic(alg, rad, e, f):
                object_class[x].append(ci)
                break
        else:
            classes.append((x, e))
            object_class[x].append(len(classes) - 1)
    indecs = []
    for ci, (x, e) in enumerate(classes):
        expr = MorphismExpression(x, x, {})
        for i, c in e.items():
            expr = expr + MorphismExpression(x, x, {basis[i][2]: c})
        indecs.append(EnvelopeObject([(x, expr)], "P%d" % ci))
    dims = [[_corner_dim(alg, classes[i][1], classes[j][1]) for j in range(len(classes))]
            for i in range(len(classes))]
    return Envelope(cat, alg, basis, indecs, dims, object_class)


def _subalgebra(alg: Algebra, idx: list, unit: dict) -> Algebra:
    pos = {i: k for k, i in enumerate(idx)}
    mult = {}
    for a in idx:
        for b in idx:
            p = alg.mult.get((a, b))
            if p:
                mult[(pos[a], pos[b])] = {pos[k]: c for k, c in p.items()}
    return Algebra(len(idx), mult, {pos[k]: c for k, c in unit.items()}, alg.field)


def _corner(alg: Algebra, f: dict, e: dict) -> list:
    """Spanning set of f·A·e (morphisms from the summand e to the summand f)."""
    vecs = [alg.mul(alg.mul(f, {i: 1}), e) for i in range(alg.dim)]
    return Subspace(alg.dim, vecs).sparse_basis()


def _corner_dim(alg: Algebra, e: dict, f: dict) -> int:
    return len(_corner(alg, f, e))


def _isomorphic(alg: Algebra, rad: Subspace, e: dict, f: dict) -> bool:
    """e ≅ f iff e·A·f·A·e is not inside the radical (e·A·e is local)."""
    for u in _corner(alg, f, e):
        for v in _corner(alg, e, f):
            if not rad.contains(alg.mul(v, u)):
                return True
    return False
