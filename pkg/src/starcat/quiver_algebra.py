"""Finite-dimensional algebras: structure constants, quiver presentations,
the zigzag algebra on a star and its star quotient.

Product convention: ``x·y`` is "x after y".  A path is a tuple of arrow labels
in composition order, so the last label is traversed first; its source is the
source of the last arrow and its target the target of the first.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .exact_linalg import QQ, Echelon, Field, Matrix, Subspace, solve_sparse, vadd, vscale


class PresentationError(ValueError):
    pass


class NotSplitError(ValueError):
    """Raised when an idempotent cannot be split by the polynomial method."""


# --------------------------------------------------------------- Algebra

class Algebra:
    """Associative unital algebra given by structure constants.

    ``mult[(i, j)]`` is the sparse coefficient vector of ``b_i · b_j``.
    """

    def __init__(self, dim: int, mult: dict, unit: dict, field: Field = QQ, names=None):
        self.dim = dim
        self.mult = mult
        self.unit = unit
        self.field = field
        self.names = list(names) if names is not None else ["x%d" % i for i in range(dim)]
        self._rad = None

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                prod = self.mult.get((i, j))
                if prod:
                    ab = a * b
                    for k, c in prod.items():
                        v = out.get(k, 0) + ab * c
                        if v == 0:
                            out.pop(k, None)
                        else:
                            out[k] = v
        return out

    def basis_vector(self, i: int) -> dict:
        return {i: self.field(1)}

    def left_mult_matrix(self, x: dict) -> Matrix:
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(self.dim, cols)

    def right_mult_matrix(self, x: dict) -> Matrix:
        cols = [self.mul(self.basis_vector(j), x) for j in range(self.dim)]
        return Matrix.from_columns(self.dim, cols)

    def is_associative(self) -> bool:
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.mult.get((i, j), {})
                for k in range(self.dim):
                    lhs = self.mul(ij, {k: 1})
                    rhs = self.mul({i: 1}, self.mult.get((j, k), {}))
                    if lhs != rhs:
                        return False
        return True

    # radical and idempotents
    def radical(self) -> Subspace:
        """Kernel of the trace form (x, y) ↦ tr(L_{xy})."""
        if self._rad is None:
            p = self.field.characteristic
            if p and p <= self.dim:
                raise NotImplementedError("trace-form radical needs characteristic 0 or p > dim")
            tau = [sum((self.mult.get((k, l), {}).get(l, 0) for l in range(self.dim)), 0)
                   for k in range(self.dim)]
            rows = []
            for i in range(self.dim):
                row = {}
                for j in range(self.dim):
                    s = sum((c * tau[k] for k, c in self.mult.get((i, j), {}).items()), 0)
                    if s != 0:
                        row[j] = s
                rows.append(row)
            from .exact_linalg import kernel_vectors
            self._rad = Subspace(self.dim, kernel_vectors(rows, self.dim))
        return self._rad

    def is_idempotent(self, e: dict) -> bool:
        return self.mul(e, e) == e

    def corner(self, e: dict) -> Subspace:
        return Subspace(self.dim, [self.mul(self.mul(e, {i: 1}), e) for i in range(self.dim)])

    def is_local_corner(self, e: dict) -> bool:
        c = self.corner(e)
        return c.dim - (c & self.radical()).dim == 1

    def _min_poly_mod_rad(self, x: dict, e: dict) -> list:
        """Monic coefficients (low degree first) of the minimal polynomial of x in eAe/rad."""
        rad = Echelon()
        for r in self.radical().sparse_basis():
            rad.add(r)
        reduced = []
        power = e
        for _ in range(self.dim + 2):
            red = rad.reduce(power)
            sol = solve_sparse(reduced, red) if reduced else ({} if not red else None)
            if sol is not None:
                k = len(reduced)
                return [-sol.get(i, 0) for i in range(k)] + [self.field(1)]
            reduced.append(red)
            power = self.mul(power, x)
        raise ArithmeticError("minimal polynomial search did not terminate")

    def _poly(self, coeffs):
        t = sympy.Symbol("t")
        p = self.field.characteristic
        if p:
            return sympy.Poly([int(self.field(c).v) for c in reversed(coeffs)], t, modulus=p)
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)],
                          t, domain="QQ")

    def _eval_poly(self, poly, x: dict, e: dict) -> dict:
        out: dict = {}
        power = e
        coeffs = list(reversed(poly.all_coeffs()))
        for c in coeffs:
            c = self._scalar(c)
            if c != 0:
                out = vadd(out, power, c)
            power = self.mul(power, x)
        return out

    def _scalar(self, c):
        p = self.field.characteristic
        if p:
            return self.field(int(c))
        c = sympy.Rational(c)
        return Fraction(int(c.p), int(c.q))

    def _split(self, x: dict, e: dict):
        coeffs = self._min_poly_mod_rad(x, e)
        poly = self._poly(coeffs)
        _, factors = poly.factor_list()
        if len(factors) < 2:
            return None
        f1, m1 = factors[0]
        g1 = f1 ** m1
        g2 = sympy.Poly(1, poly.gen, domain=poly.domain)
        for f, m in factors[1:]:
            g2 = g2 * f ** m
        s, t, h = g1.gcdex(g2)
        eps = (t * g2).rem(poly)
        return self._eval_poly(eps, x, e)

    def lift_idempotent(self, u: dict) -> dict:
        for _ in range(64):
            u2 = self.mul(u, u)
            if u2 == u:
                return u
            u3 = self.mul(u2, u)
            u = vadd(vscale(u2, 3), u3, -2)
        raise ArithmeticError("idempotent lifting did not converge")

    def primitive_idempotents(self, seed: int = 0) -> list[dict]:
        """A complete set of orthogonal primitive idempotents summing to 1."""
        work = [dict(self.unit)]
        done = []
        rng = random.Random(seed)
        while work:
            e = work.pop(0)
            if not e:
                continue
            corner = self.corner(e)
            rad = corner & self.radical()
            if corner.dim - rad.dim == 1:
                done.append(e)
                continue
            u = None
            for x in self._candidates(corner, rng):
                u = self._split(x, e)
                if u is not None:
                    break
            if u is None:
                raise NotSplitError("corner of dimension %d does not split" % corner.dim)
            u = self.lift_idempotent(u)
            v = vadd(e, u, -1)
            work = [u, v] + work
        return done

    def _candidates(self, corner: Subspace, rng):
        basis = corner.sparse_basis()
        for b in basis:
            yield b
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                yield vadd(basis[i], basis[j])
                yield self.mul(basis[i], basis[j])
        for _ in range(200):
            x: dict = {}
            for b in basis:
                x = vadd(x, b, self.field(rng.randint(-3, 3)))
            yield x


# ------------------------------------------------------------ presentations

@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple  # of (label, source, target)

    def __post_init__(self):
        labels = [a[0] for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise PresentationError("arrow labels must be unique")
        for lab, s, t in self.arrows:
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise PresentationError("arrow %s has an invalid endpoint" % lab)

    def arrow(self, label):
        for a in self.arrows:
            if a[0] == label:
                return a
        raise KeyError(label)


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    relations: tuple  # of tuples of (coeff, path-tuple)
    nilpotency: int
    names: tuple = ()  # optional (path, display name) aliases

    def __post_init__(self):
        if self.nilpotency < 1:
            raise PresentationError("arrow_ideal_nilpotency must be at least 1")

    def to_json(self) -> str:
        doc = {
            "vertices": self.quiver.vertex_count,
            "arrows": [{"label": l, "src": s, "tgt": t} for l, s, t in self.quiver.arrows],
            "relations": [[{"coeff": str(c), "path": list(p)} for c, p in rel]
                          for rel in self.relations],
            "nilpotency": self.nilpotency,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AlgebraPresentation":
        doc = json.loads(text)
        q = Quiver(int(doc["vertices"]),
                   tuple((a["label"], int(a["src"]), int(a["tgt"])) for a in doc["arrows"]))
        rels = tuple(tuple((Fraction(str(t["coeff"])), tuple(t["path"])) for t in rel)
                     for rel in doc["relations"])
        return cls(q, rels, int(doc["nilpotency"]))


@dataclass(frozen=True)
class BasisElement:
    name: str
    source: int
    target: int
    length: int
    path: tuple


class FiniteDimAlgebra(Algebra):
    """Algebra with a basis of reduced paths of a bound quiver."""

    def __init__(self, presentation: AlgebraPresentation, basis: list, mult: dict,
                 field: Field = QQ, label: str = ""):
        self.presentation = presentation
        self.quiver = presentation.quiver
        self.basis = basis
        self.label = label
        self.vertex_count = self.quiver.vertex_count
        self.idempotents = {b.source: i for i, b in enumerate(basis) if b.length == 0}
        self.index = {b.name: i for i, b in enumerate(basis)}
        self.path_index = {(b.path if b.length else ("e", b.source)): i for i, b in enumerate(basis)}
        one = field(1)
        unit = {i: one for i in self.idempotents.values()}
        super().__init__(len(basis), mult, unit, field, [b.name for b in basis])
        self.arrow_index = {lab: self.path_index[(lab,)] for lab, _, _ in self.quiver.arrows
                            if (lab,) in self.path_index}

    @property
    def radical_basis(self) -> list[int]:
        return [i for i, b in enumerate(self.basis) if b.length > 0]

    def radical(self) -> Subspace:
        if self._rad is None:
            self._rad = Subspace(self.dim, [{i: self.field(1)} for i in self.radical_basis])
        return self._rad

    def element(self, name: str) -> dict:
        return {self.index[name]: self.field(1)}

    def e(self, v: int) -> dict:
        return {self.idempotents[v]: self.field(1)}

    def peirce(self, v: int, w: int) -> list[int]:
        """Basis indices spanning e_v A e_w."""
        return [i for i, b in enumerate(self.basis) if b.target == v and b.source == w]

    def left_projective(self, j: int) -> list[int]:
        """Basis indices spanning A e_j."""
        return [i for i, b in enumerate(self.basis) if b.source == j]

    def right_projective(self, j: int) -> list[int]:
        """Basis indices spanning e_j A."""
        return [i for i, b in enumerate(self.basis) if b.target == j]

    def generators(self) -> list[tuple]:
        """(name, sparse element) for idempotents then arrows."""
        gens = [("e%d" % v, self.e(v)) for v in range(self.vertex_count)]
        gens += [(lab, {i: self.field(1)}) for lab, i in self.arrow_index.items()]
        return gens

    def format(self, x: dict) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            c = x[i]
            parts.append(self.names[i] if c == 1 else "%s*%s" % (c, self.names[i]))
        return " + ".join(parts)

    def __repr__(self):
        return "FiniteDimAlgebra(%s, dim %d)" % (self.label or "?", self.dim)


def _paths(quiver: Quiver, max_len: int) -> list[tuple]:
    """All paths of length < max_len as (path, source, target), BFS order."""
    out = [((), v, v) for v in range(quiver.vertex_count)]
    frontier = [((lab,), s, t) for lab, s, t in quiver.arrows] if max_len > 1 else []
    while frontier:
        out.extend(frontier)
        nxt = []
        for p, s, t in frontier:
            if len(p) + 1 >= max_len:
                continue
            for lab, s2, t2 in quiver.arrows:
                if t2 == s:  # p after arrow
                    nxt.append((p + (lab,), s2, t))
        frontier = nxt
    return out


def algebra_from_presentation(p: AlgebraPresentation, field: Field = QQ,
                              label: str = "") -> FiniteDimAlgebra:
    q = p.quiver
    ends = {lab: (s, t) for lab, s, t in q.arrows}
    paths = _paths(q, p.nilpotency)
    order = {lab: i for i, (lab, _, _) in enumerate(q.arrows)}

    def key(entry):
        path, s, t = entry
        return (len(path), tuple(order[a] for a in path), s)

    # columns in decreasing key order, so elimination removes the largest paths
    ranked = sorted(paths, key=key, reverse=True)
    col = {}
    for i, (path, s, t) in enumerate(ranked):
        col[path if path else ("e", s)] = i

    def endpoints(path):
        for a in path:
            if a not in ends:
                raise PresentationError("unknown arrow %r" % a)
        for x, y in zip(path, path[1:]):
            if ends[x][0] != ends[y][1]:
                raise PresentationError("path %r is not composable" % (path,))
        return ends[path[-1]][0], ends[path[0]][1]

    ech = Echelon()
    for rel in p.relations:
        st = None
        terms = []
        for c, path in rel:
            path = tuple(path)
            if not path:
                raise PresentationError("relation terms must be paths; use an explicit vertex path")
            se = endpoints(path)
            if st is None:
                st = se
            elif st != se:
                raise PresentationError("relation mixes paths with different endpoints")
            terms.append((field(c), path))
        s0, t0 = st
        lefts = [pp for pp in paths if pp[1] == t0]
        rights = [pp for pp in paths if pp[2] == s0]
        for lp, _, _ in lefts:
            for rp, _, _ in rights:
                vec = {}
                for c, path in terms:
                    w = lp + path + rp
                    if len(w) >= p.nilpotency:
                        continue
                    k = col[w]
                    vec[k] = vec.get(k, 0) + c
                vec = {k: x for k, x in vec.items() if x != 0}
                if vec:
                    ech.add(vec)
    for v in range(q.vertex_count):
        if col[("e", v)] in ech.rows:
            raise PresentationError("relations force e_%d = 0" % v)

    free = [e for e in sorted(paths, key=key) if col[e[0] if e[0] else ("e", e[1])] not in ech.rows]
    alias = dict(p.names)
    basis = []
    for path, s, t in free:
        if path:
            name = alias.get(path, "".join(path))
        else:
            name = "e%d" % s
        basis.append(BasisElement(name, s, t, len(path), path))
    col_to_basis = {col[b.path if b.length else ("e", b.source)]: i for i, b in enumerate(basis)}

    def reduce_path(w) -> dict:
        if len(w) >= p.nilpotency:
            return {}
        red = ech.reduce({col[w]: field(1)})
        return {col_to_basis[k]: x for k, x in red.items()}

    mult = {}
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            if x.source != y.target:
                continue
            if x.length == 0:
                prod = {j: field(1)}
            elif y.length == 0:
                prod = {i: field(1)}
            else:
                prod = reduce_path(x.path + y.path)
            if prod:
                mult[(i, j)] = prod
    return FiniteDimAlgebra(p, basis, mult, field, label)


# ---------------------------------------------------------------- star algebras

def star_quiver(n: int) -> Quiver:
    arrows = [("a%d" % k, 0, k) for k in range(1, n + 1)]
    arrows += [("b%d" % k, k, 0) for k in range(1, n + 1)]
    return Quiver(n + 1, tuple(arrows))


def zigzag_presentation(n: int) -> AlgebraPresentation:
    if n < 1:
        raise PresentationError("n must be a positive integer")
    one = Fraction(1)
    rels = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                rels.append(((one, ("a%d" % j, "b%d" % i)),))
    for k in range(2, n + 1):
        rels.append(((one, ("b%d" % k, "a%d" % k)), (-one, ("b1", "a1"))))
    names = [(("b1", "a1"), "c")] + [(("a%d" % k, "b%d" % k), "c%d" % k) for k in range(1, n + 1)]
    return AlgebraPresentation(star_quiver(n), tuple(rels), 3, tuple(names))


def star_quotient_presentation(n: int) -> AlgebraPresentation:
    z = zigzag_presentation(n)
    one = Fraction(1)
    extra = tuple(((one, ("a%d" % k, "b%d" % k)),) for k in range(1, n + 1))
    return AlgebraPresentation(z.quiver, z.relations + extra, 3, z.names)


_CACHE: dict = {}


def build_zigzag(n: int, field: Field = QQ) -> FiniteDimAlgebra:
    """The zigzag algebra Λ_n on the star with n leaves (dimension 4n+2)."""
    if n < 1:
        raise PresentationError("n must be a positive integer")
    key = ("zigzag", n, field)
    if key not in _CACHE:
        _CACHE[key] = algebra_from_presentation(zigzag_presentation(n), field, "Lambda_%d" % n)
    return _CACHE[key]


def build_star_quotient(n: int, field: Field = QQ) -> FiniteDimAlgebra:
    """A_n = Λ_n / span{c_1..c_n} (dimension 3n+2)."""
    if n < 1:
        raise PresentationError("n must be a positive integer")
    key = ("star", n, field)
    if key not in _CACHE:
        _CACHE[key] = algebra_from_presentation(star_quotient_presentation(n), field, "A_%d" % n)
    return _CACHE[key]


def radical_and_nilpotency(a: Algebra) -> tuple[list, int]:
    """Radical basis and the least m with Rad^m = 0."""
    rad = a.radical()
    gens = rad.sparse_basis()
    if isinstance(a, FiniteDimAlgebra):
        basis_out = a.radical_basis
    else:
        basis_out = gens
    power = gens
    m = 1
    while power:
        sp = Subspace(a.dim, [a.mul(x, y) for x in power for y in gens])
        power = sp.sparse_basis()
        m += 1
    return basis_out, m


def projection_map(big: FiniteDimAlgebra, small: FiniteDimAlgebra) -> dict:
    """Basis map big → small by path name; elements absent from small go to 0."""
    return {i: small.path_index.get(b.path if b.length else ("e", b.source))
            for i, b in enumerate(big.basis)}


def final_remark_presentation() -> AlgebraPresentation:
    """Path algebra of 2 ⇄ 0 ⇄ 1 modulo paths of length four."""
    q = Quiver(3, (("a1", 0, 1), ("a2", 0, 2), ("b1", 1, 0), ("b2", 2, 0)))
    return AlgebraPresentation(q, (), 4)
