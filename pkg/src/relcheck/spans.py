"""Double categories whose proarrows are spans and whose cells are mediating arrows.

Composition of m: A⇸B and n: B⇸C is described by the canonical pullback P of
the inner legs together with an arrow e: P -> apex(m⊗n).  For spans e is a
permutation; for relations it is the cover onto the image.  Horizontal
composites of cells and all comparison cells are then forced by e.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as cartesian

from .category import BoundaryError, MissingStructure
from .double import Cell, DoubleCategory, TabulatorWitness
from .finset import FinSet, Fn, show_pairs, identity as fid


@dataclass(frozen=True)
class Proarrow:
    src: object
    tgt: object
    apex: object
    left: object
    right: object

    def pairs(self):
        return [(self.left.table[i], self.right.table[i]) for i in range(self.apex)]

    def __str__(self):
        if isinstance(self.left, Fn):
            ps = self.pairs()
            if len(set(ps)) == len(ps):
                return f"{show_pairs(ps)}:{self.src}⇸{self.tgt}"
            return f"span({self.apex};{self.left};{self.right})"
        return f"span({self.apex};{self.left};{self.right})"

    __repr__ = __str__


def span_of_pairs(a, b, pairs):
    """Canonical span for a list of pairs: sorted, duplicates kept."""
    ps = sorted(pairs)
    n = len(ps)
    return Proarrow(a, b, n, Fn(n, a, tuple(p[0] for p in ps)), Fn(n, b, tuple(p[1] for p in ps)))


def relation(a, b, pairs):
    return span_of_pairs(a, b, set(pairs))


def sorting_iso(pairs):
    """Permutation sending position i to its slot in the stable sort."""
    order = sorted(range(len(pairs)), key=lambda i: (pairs[i], i))
    slot = [0] * len(pairs)
    for k, i in enumerate(order):
        slot[i] = k
    return Fn(len(pairs), len(pairs), tuple(slot))


class SpanDouble(DoubleCategory):
    """Cells are arrows between apexes commuting with the legs."""

    def __init__(self, D0, window):
        self.D0 = D0
        self.window = tuple(window)
        self._cdata = {}

    # -- basic structure ---------------------------------------------------------
    def psrc(self, m):
        return m.src

    def ptgt(self, m):
        return m.tgt

    def unit(self, a):
        i = self.D0.identity(a)
        return Proarrow(a, a, a, i, i)

    def cells(self, m, n, f, g):
        C = self.D0
        if C.src(f) != m.src or C.tgt(f) != n.src or C.src(g) != m.tgt or C.tgt(g) != n.tgt:
            return []
        meds = C.solve_post(m.apex, n.apex, [(n.left, C.compose(m.left, f)),
                                             (n.right, C.compose(m.right, g))])
        return [Cell(m, n, f, g, t) for t in meds]

    def vcomp(self, alpha, beta):
        if alpha.target != beta.source:
            raise BoundaryError("vertical composite: target of the upper cell is not the source of the lower")
        C = self.D0
        return Cell(alpha.source, beta.target, C.compose(alpha.left, beta.left),
                    C.compose(alpha.right, beta.right), C.compose(alpha.data, beta.data))

    def unit_cell(self, f):
        C = self.D0
        return Cell(self.unit(C.src(f)), self.unit(C.tgt(f)), f, f, f)

    def id_cell(self, m):
        C = self.D0
        return Cell(m, m, C.identity(m.src), C.identity(m.tgt), C.identity(m.apex))

    # -- composition -----------------------------------------------------------------
    def compose_data(self, m, n):
        """(m⊗n, pullback cone of the inner legs, e: P -> apex)."""
        if m.tgt != n.src:
            raise BoundaryError(f"cannot compose {self.show(m)} with {self.show(n)}")
        key = (m, n)
        if key not in self._cdata:
            self._cdata[key] = self._compose(m, n)
        return self._cdata[key]

    def _compose(self, m, n):
        raise NotImplementedError

    def _pullback(self, f, g):
        cone = self.D0.pullback(f, g)
        if cone is None:
            raise MissingStructure(f"pullback of {self.show_arrow(f)} and {self.show_arrow(g)}")
        return cone

    def hcomp(self, m, n):
        return self.compose_data(m, n)[0]

    def _unique_pre(self, e, value):
        found = self.D0.solve_pre(e, value, limit=2)
        if len(found) != 1:
            raise MissingStructure("comparison arrow is not unique")
        return found[0]

    def hcomp_cells(self, alpha, beta):
        if alpha.right != beta.left:
            raise BoundaryError("horizontal composite: inner arrows differ")
        C = self.D0
        k, cone, e = self.compose_data(alpha.source, beta.source)
        k2, cone2, e2 = self.compose_data(alpha.target, beta.target)
        pi = C.lift(cone2.legs, (C.compose(cone.legs[0], alpha.data), C.compose(cone.legs[1], beta.data)))
        if pi is None:
            raise MissingStructure("no induced map between pullbacks")
        theta = self._unique_pre(e, C.compose(pi, e2))
        return Cell(k, k2, alpha.left, beta.right, theta)

    def left_unitor(self, m):
        k, cone, e = self.compose_data(self.unit(m.src), m)
        return Cell(k, m, self.D0.identity(m.src), self.D0.identity(m.tgt),
                    self._unique_pre(e, cone.legs[1]))

    def right_unitor(self, m):
        k, cone, e = self.compose_data(m, self.unit(m.tgt))
        return Cell(k, m, self.D0.identity(m.src), self.D0.identity(m.tgt),
                    self._unique_pre(e, cone.legs[0]))

    def associator(self, m, n, p):
        """(m⊗n)⊗p => m⊗(n⊗p), fixed by the covers out of the triple pullback."""
        C = self.D0
        mn, c1, e1 = self.compose_data(m, n)
        L, c2, e2 = self.compose_data(mn, p)
        np_, c3, e3 = self.compose_data(n, p)
        R, c4, e4 = self.compose_data(m, np_)
        # triple pullback Q over P_mn and apex(p)
        q = self._pullback(C.compose(c1.legs[1], n.right), p.left)
        qm = C.compose(q.legs[0], c1.legs[0])
        qn = C.compose(q.legs[0], c1.legs[1])
        qp = q.legs[1]
        s_l = C.lift(c2.legs, (C.compose(q.legs[0], e1), qp))
        t = C.lift(c3.legs, (qn, qp))
        s_r = C.lift(c4.legs, (qm, C.compose(t, e3)))
        if None in (s_l, t, s_r):
            raise MissingStructure("triple pullback does not map to the composites")
        theta = self._unique_pre(C.compose(s_l, e2), C.compose(s_r, e4))
        return Cell(L, R, C.identity(m.src), C.identity(p.tgt), theta)

    # -- constructions shared by spans and relations ------------------------------------
    def canonical(self, s):
        """(canonical representative, iso from s.apex to its apex)."""
        if isinstance(self.D0, FinSet):
            ps = s.pairs()
            rep = span_of_pairs(s.src, s.tgt, ps)
            return rep, sorting_iso(ps)
        return s, self.D0.identity(s.apex)

    def _product(self, a, b):
        cone = self.D0.product(a, b)
        if cone is None:
            raise MissingStructure(f"product of {a} and {b}")
        return cone

    def pairing(self, m):
        """⟨l, r⟩: apex -> A×B."""
        cone = self._product(m.src, m.tgt)
        return self.D0.lift(cone.legs, (m.left, m.right))

    def extension_data(self, f, m, g):
        C = self.D0
        s = Proarrow(C.tgt(f), C.tgt(g), m.apex, C.compose(m.left, f), C.compose(m.right, g))
        n, iso = self.canonical(s)
        return n, Cell(m, n, f, g, iso)

    def restriction_data(self, f, n, g):
        C = self.D0
        x, y = C.src(f), C.src(g)
        pn = self._product(n.src, n.tgt)
        pxy = self._product(x, y)
        fg = C.lift(pn.legs, (C.compose(pxy.legs[0], f), C.compose(pxy.legs[1], g)))
        cone = self._pullback(fg, self.pairing(n))
        leg = cone.legs[0]
        s = Proarrow(x, y, C.src(leg), C.compose(leg, pxy.legs[0]), C.compose(leg, pxy.legs[1]))
        m, iso = self.canonical(s)
        return m, Cell(m, n, f, g, C.compose(C.inverse(iso), cone.legs[1]))

    def companion_data(self, f):
        C = self.D0
        a, b = C.src(f), C.tgt(f)
        p, iso = self.canonical(Proarrow(a, b, a, C.identity(a), f))
        inv = C.inverse(iso)
        return (p, Cell(self.unit(a), p, C.identity(a), f, iso),
                Cell(p, self.unit(b), f, C.identity(b), C.compose(inv, f)))

    def conjoint_data(self, f):
        C = self.D0
        a, b = C.src(f), C.tgt(f)
        p, iso = self.canonical(Proarrow(b, a, a, f, C.identity(a)))
        inv = C.inverse(iso)
        return (p, Cell(self.unit(a), p, f, C.identity(a), iso),
                Cell(p, self.unit(b), C.identity(b), f, C.compose(inv, f)))

    def tabulator_candidates(self, m):
        return (m.apex,)

    def tabulator_data(self, m):
        return TabulatorWitness(m, m.apex, Cell(self.unit(m.apex), m, m.left, m.right,
                                                self.D0.identity(m.apex)))

    def in_scope(self, m):
        return m.apex in self.test_objects()

    def tabulator_factor_data(self, tab, delta):
        if tab.counit.data == self.D0.identity(tab.apex):
            return delta.data
        return None

    def product_proarrow(self, m, n):
        """m×n: A×C ⇸ B×D with its two projection cells."""
        C = self.D0
        ac = self._product(m.src, n.src)
        bd = self._product(m.tgt, n.tgt)
        rs = self._product(m.apex, n.apex)
        left = C.lift(ac.legs, (C.compose(rs.legs[0], m.left), C.compose(rs.legs[1], n.left)))
        right = C.lift(bd.legs, (C.compose(rs.legs[0], m.right), C.compose(rs.legs[1], n.right)))
        k, iso = self.canonical(Proarrow(ac.apex, bd.apex, rs.apex, left, right))
        inv = C.inverse(iso)
        return (k, Cell(k, m, ac.legs[0], bd.legs[0], C.compose(inv, rs.legs[0])),
                Cell(k, n, ac.legs[1], bd.legs[1], C.compose(inv, rs.legs[1])))

    def diagonal(self, a):
        C = self.D0
        cone = self._product(a, a)
        return C.lift(cone.legs, (C.identity(a), C.identity(a)))

    def local_product_data(self, m, n):
        """Restriction of m×n along the two diagonals."""
        C = self.D0
        k, pi1, pi2 = self.product_proarrow(m, n)
        da, db = self.diagonal(m.src), self.diagonal(m.tgt)
        p, rho = self.restriction_data(da, k, db)
        i, j = C.identity(m.src), C.identity(m.tgt)
        return (p, Cell(p, m, i, j, C.compose(rho.data, pi1.data)),
                Cell(p, n, i, j, C.compose(rho.data, pi2.data)))

    # -- reports -------------------------------------------------------------------------
    def show(self, m):
        return str(m)

    def encode_proarrow(self, m):
        C = self.D0
        return f"span {m.src} {m.tgt} {m.apex} {C.describe(m.left)} {C.describe(m.right)}"

    def decode_proarrow(self, text):
        parts = text.split()
        if len(parts) != 6 or parts[0] != "span":
            raise ValueError(f"not a span literal: {text!r}")
        C = self.D0
        a, b, r = (C.parse_object(x) for x in parts[1:4])
        m = Proarrow(a, b, r, C.parse_arrow(parts[4]), C.parse_arrow(parts[5]))
        if (C.src(m.left), C.tgt(m.left), C.src(m.right), C.tgt(m.right)) != (r, a, r, b):
            raise ValueError(f"span legs do not match its endpoints: {text!r}")
        return m

    def jointly_monic(self, m):
        if isinstance(self.D0, FinSet):
            ps = m.pairs()
            return len(set(ps)) == len(ps)
        C = self.D0
        return all(len(C.solve_post(x, m.apex, [(m.left, h), (m.right, k)], limit=2)) <= 1
                   for x in self.test_objects()
                   for h in C.hom(x, m.src) for k in C.hom(x, m.tgt))


class RelDouble(SpanDouble):
    """Rel(C;F): proarrows are M-monic spans, composition is pullback then image."""

    thin = True

    def __init__(self, C, fs, window=None):
        if isinstance(C, FinSet):
            window = tuple(range(C.max_size + 1)) if window is None else window
            D0 = FinSet(None)
        else:
            window = C.objects if window is None else window
            D0 = C
        super().__init__(D0, window)
        self.category = C
        self.fs = fs
        self._props = {}
        self._finset = isinstance(D0, FinSet)

    def native_fs(self):
        return self.fs

    def test_objects(self):
        return self.window

    def is_relation(self, m):
        if self._finset:
            ps = m.pairs()
            return len(set(ps)) == len(ps)
        u = self.pairing(m)
        return u is not None and self.fs.in_right(u)

    def proarrows(self, a, b):
        key = (a, b)
        if key not in self._props:
            self._props[key] = self._enumerate(a, b)
        return self._props[key]

    def _enumerate(self, a, b):
        if self._finset:
            out = []
            cells = [(x, y) for x in range(a) for y in range(b)]
            for bits in range(1 << len(cells)):
                out.append(relation(a, b, [c for k, c in enumerate(cells) if bits >> k & 1]))
            return out
        C = self.D0
        cone = self._product(a, b)
        reps = []
        for r in C.objects:
            for u in C.hom(r, cone.apex):
                if not self.fs.in_right(u):
                    continue
                s = Proarrow(a, b, r, C.compose(u, cone.legs[0]), C.compose(u, cone.legs[1]))
                if not any(self._iso_to(s, t) is not None for t in reps):
                    reps.append(s)
        return reps

    def _iso_to(self, s, t):
        C = self.D0
        for u in C.solve_post(s.apex, t.apex, [(t.left, s.left), (t.right, s.right)]):
            if C.is_iso(u):
                return u
        return None

    def canonical(self, s):
        """(canonical representative, iso from s.apex to its apex)."""
        if self._finset:
            ps = s.pairs()
            if len(set(ps)) != len(ps):
                raise MissingStructure(f"{self.show(s)} is not a relation")
            rep = relation(s.src, s.tgt, ps)
            index = {p: i for i, p in enumerate(rep.pairs())}
            return rep, Fn(s.apex, rep.apex, tuple(index[p] for p in ps))
        for t in self.proarrows(s.src, s.tgt):
            u = self._iso_to(s, t)
            if u is not None:
                return t, u
        raise MissingStructure(f"{self.show(s)} is not a relation")

    def relation_from_arrow(self, u, a, b):
        """Image of u: X -> A×B as a canonical relation, with the cover onto it."""
        C = self.D0
        cone = self._product(a, b)
        e, m = self.fs.factorize(u)
        s = Proarrow(a, b, C.tgt(e), C.compose(m, cone.legs[0]), C.compose(m, cone.legs[1]))
        rep, iso = self.canonical(s)
        return rep, C.compose(e, iso)

    def _compose(self, m, n):
        C = self.D0
        cone = self._pullback(m.right, n.left)
        prod = self._product(m.src, n.tgt)
        u = C.lift(prod.legs, (C.compose(cone.legs[0], m.left), C.compose(cone.legs[1], n.right)))
        k, e = self.relation_from_arrow(u, m.src, n.tgt)
        return k, cone, e

    # -- constructions -----------------------------------------------------------------------
    def _only_cell(self, m, n, f, g):
        cs = self.cells(m, n, f, g)
        if len(cs) != 1:
            raise MissingStructure(f"expected exactly one cell {self.show(m)} => {self.show(n)}")
        return cs[0]

    def extension_data(self, f, m, g):
        C = self.D0
        a, b = C.tgt(f), C.tgt(g)
        prod = self._product(a, b)
        u = C.lift(prod.legs, (C.compose(m.left, f), C.compose(m.right, g)))
        n, e = self.relation_from_arrow(u, a, b)
        return n, Cell(m, n, f, g, e)

    def restriction_data(self, f, n, g):
        C = self.D0
        x, y = C.src(f), C.src(g)
        if self._finset:
            keep = set(n.pairs())
            m = relation(x, y, [(i, j) for i in range(x) for j in range(y) if (f.table[i], g.table[j]) in keep])
            return m, self._only_cell(m, n, f, g)
        return super().restriction_data(f, n, g)

def build_rel_double(C, fs):
    return RelDouble(C, fs)


def all_spans(a, b, max_apex):
    """Every span a ⇸ b with apex ≤ max_apex, one per isomorphism class."""
    from itertools import combinations_with_replacement
    cells = [(x, y) for x in range(a) for y in range(b)]
    out = []
    for k in range(max_apex + 1):
        for combo in combinations_with_replacement(cells, k):
            out.append(span_of_pairs(a, b, combo))
    return out
