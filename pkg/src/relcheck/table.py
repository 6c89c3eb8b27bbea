"""Double categories presented by finite tables.

SpanTable lists proarrows as spans over a base category and tabulates their
composites; cells are the mediating arrows, computed from the base.  It is
what a .dblcat file in span mode loads into.

TableDouble lists everything explicitly: proarrows, cells, both compositions,
units and comparison cells.  Small hand-made controls use it.
"""
from collections import defaultdict

from .category import BoundaryError, MissingStructure, CategoryError, as_table
from .double import Cell, DoubleCategory
from .finset import FinSet
from .spans import SpanDouble, Proarrow, all_spans, span_of_pairs, sorting_iso


class SpanTable(SpanDouble):
    def __init__(self, D0, window, objects, proarrows, compositions, extra=(), names=None):
        super().__init__(D0, window)
        self.objects = tuple(objects)
        self._by_pair = defaultdict(list)
        for m in proarrows:
            self._by_pair[(m.src, m.tgt)].append(m)
        self.listed = list(proarrows)
        self.extra = list(extra)
        self.compositions = dict(compositions)
        self.names = dict(names or {})
        self.thin = all(self.jointly_monic(m) for m in self.listed + self.extra)
        self.known = set(self.listed) | set(self.extra)

    def proarrows(self, a, b):
        return self._by_pair.get((a, b), [])

    def test_objects(self):
        return self.objects

    def _compose(self, m, n):
        entry = self.compositions.get((m, n))
        if entry is None:
            u = self.unit(m.src)
            if m == u and n == u:
                cone = self._pullback(m.right, n.left)
                return u, cone, cone.legs[0]
            raise MissingStructure(f"composite of {self.show(m)} and {self.show(n)} is not tabulated")
        k, e = entry
        return k, self._pullback(m.right, n.left), e

    def show(self, m):
        return self.names.get(m) or str(m)

    # inside the window a construction must land in the table, else search the table;
    # outside it the span construction is the only structure there is
    def _tabulated(self, built):
        if built is None or built[0] in self.known:
            return built
        m = built[0]
        return None if m.src in self.window and m.tgt in self.window else built

    def extension_data(self, f, m, g):
        return self._tabulated(super().extension_data(f, m, g))

    def restriction_data(self, f, n, g):
        return self._tabulated(super().restriction_data(f, n, g))

    def companion_data(self, f):
        return self._tabulated(super().companion_data(f))

    def conjoint_data(self, f):
        return self._tabulated(super().conjoint_data(f))

    def local_product_data(self, m, n):
        return self._tabulated(super().local_product_data(m, n))


def _span_compose(D0, m, n):
    cone = D0.pullback(m.right, n.left)
    pairs = [(m.left.table[cone.legs[0].table[i]], n.right.table[cone.legs[1].table[i]])
             for i in range(cone.apex)]
    return span_of_pairs(m.src, n.tgt, pairs), sorting_iso(pairs)


def auto_compositions(D0, listed):
    """Composites of every composable pair of listed spans, plus the new spans they produce."""
    known = set(listed)
    comps, extra = {}, []
    by_src = defaultdict(list)
    for s in listed:
        by_src[s.src].append(s)
    for m in listed:
        for n in by_src[m.tgt]:
            k, e = _span_compose(D0, m, n)
            comps[(m, n)] = (k, e)
            if k not in known:
                known.add(k)
                extra.append(k)
    return comps, extra


def span_control(max_endpoint=2, max_apex=4):
    """All spans between sets of size ≤ max_endpoint with apex ≤ max_apex.

    Composites of listed spans are tabulated (their apex may exceed the cap;
    such composites are recorded but not enumerated)."""
    D0 = FinSet(None)
    window = tuple(range(max_endpoint + 1))
    listed = [s for a in window for b in window for s in all_spans(a, b, max_apex)]
    comps, extra = auto_compositions(D0, listed)
    return SpanTable(D0, window, range(max_apex + 1), listed, comps, extra)


def table_copy(D):
    """Tabulate a span-presented double category over its window."""
    listed = D.all_proarrows()
    known = set(listed)
    comps, extra = {}, []
    by_src = defaultdict(list)
    for s in listed:
        by_src[s.src].append(s)
    for m in listed:
        for n in by_src[m.tgt]:
            k, _, e = D.compose_data(m, n)
            comps[(m, n)] = (k, e)
            if k not in known:
                known.add(k)
                extra.append(k)
    objects = sorted(set(D.window) | {m.apex for m in listed})
    return SpanTable(D.D0, D.window, objects, listed, comps, extra)


class TableDouble(DoubleCategory):
    """Fully explicit finite double category; proarrows and cells are string ids."""

    def __init__(self, D0, proarrows, cells, vertical, horizontal, hcells, units, unit_cells,
                 id_cells, associators, lunitors, runitors, thin=False):
        self.D0 = D0
        self.window = tuple(D0.objects)
        self.pro = dict(proarrows)                # id -> (src, tgt)
        self.cell_table = dict(cells)             # id -> (source, target, left, right)
        self.vertical = dict(vertical)            # (upper, lower) -> id
        self.horizontal = dict(horizontal)        # (m, n) -> id
        self.hcells = dict(hcells)                # (alpha, beta) -> id
        self.units = dict(units)                  # object -> proarrow id
        self.unit_cells = dict(unit_cells)        # arrow -> cell id
        self.id_cells = dict(id_cells)            # proarrow -> cell id
        self.associators = dict(associators)      # (m, n, p) -> cell id
        self.lunitors = dict(lunitors)
        self.runitors = dict(runitors)
        self.thin = thin
        self._by_pair = defaultdict(list)
        for m, (a, b) in self.pro.items():
            self._by_pair[(a, b)].append(m)
        self._by_boundary = defaultdict(list)
        for c, bd in self.cell_table.items():
            self._by_boundary[bd].append(c)

    def _cell(self, cid):
        s, t, f, g = self.cell_table[cid]
        return Cell(s, t, f, g, cid)

    def _get(self, table, key, what):
        try:
            return table[key]
        except KeyError:
            raise MissingStructure(f"{what} {key} is not tabulated") from None

    def proarrows(self, a, b):
        return self._by_pair.get((a, b), [])

    def psrc(self, m):
        return self.pro[m][0]

    def ptgt(self, m):
        return self.pro[m][1]

    def unit(self, a):
        return self._get(self.units, a, "unit on")

    def cells(self, m, n, f, g):
        return [self._cell(c) for c in self._by_boundary.get((m, n, f, g), ())]

    def vcomp(self, alpha, beta):
        if alpha.target != beta.source:
            raise BoundaryError("vertical composite: boundaries differ")
        return self._cell(self._get(self.vertical, (alpha.data, beta.data), "vertical composite"))

    def hcomp(self, m, n):
        if self.ptgt(m) != self.psrc(n):
            raise BoundaryError(f"cannot compose {m} with {n}")
        return self._get(self.horizontal, (m, n), "composite")

    def hcomp_cells(self, alpha, beta):
        if alpha.right != beta.left:
            raise BoundaryError("horizontal composite: inner arrows differ")
        return self._cell(self._get(self.hcells, (alpha.data, beta.data), "horizontal composite"))

    def unit_cell(self, f):
        return self._cell(self._get(self.unit_cells, f, "unit cell of"))

    def id_cell(self, m):
        return self._cell(self._get(self.id_cells, m, "identity cell of"))

    def associator(self, m, n, p):
        return self._cell(self._get(self.associators, (m, n, p), "associator"))

    def left_unitor(self, m):
        return self._cell(self._get(self.lunitors, m, "left unitor"))

    def right_unitor(self, m):
        return self._cell(self._get(self.runitors, m, "right unitor"))

    def encode_proarrow(self, m):
        return m

    def decode_proarrow(self, text):
        if text not in self.pro:
            raise KeyError(text)
        return text

    def validate(self):
        """Vertical category axioms and interchange where everything is defined."""
        C = self.D0
        for c, (s, t, f, g) in self.cell_table.items():
            if s not in self.pro or t not in self.pro:
                raise CategoryError(f"cell {c} mentions an unknown proarrow")
            if (C.src(f), C.tgt(f), C.src(g), C.tgt(g)) != (self.psrc(s), self.psrc(t), self.ptgt(s), self.ptgt(t)):
                raise CategoryError(f"cell {c} has a boundary that does not line up")
        for (a, b), c in self.vertical.items():
            A, B, X = self._cell(a), self._cell(b), self._cell(c)
            if A.target != B.source or (X.source, X.target) != (A.source, B.target):
                raise CategoryError(f"vertical composite {a};{b} = {c} has the wrong boundary")
        for c in self.cell_table:
            cc = self._cell(c)
            for m, side in ((cc.source, 0), (cc.target, 1)):
                i = self.id_cells.get(m)
                if i is None:
                    raise CategoryError(f"proarrow {m} has no identity cell")
                key = (i, c) if side == 0 else (c, i)
                if self.vertical.get(key) != c:
                    raise CategoryError(f"identity law fails at cell {c}")
        for (a, b), ab in self.vertical.items():
            for (b2, c), bc in self.vertical.items():
                if b2 != b:
                    continue
                l = self.vertical.get((ab, c))
                r = self.vertical.get((a, bc))
                if l != r:
                    raise CategoryError(f"vertical associativity fails at {a},{b},{c}")
        for (a, b), ab in self.hcells.items():
            for (c, d), cd in self.hcells.items():
                ac, bd = self.vertical.get((a, c)), self.vertical.get((b, d))
                if ac is None or bd is None or (ac, bd) not in self.hcells:
                    continue
                if self.vertical.get((ab, cd)) != self.hcells[(ac, bd)]:
                    raise CategoryError(f"interchange fails at {a},{b},{c},{d}")
        return True


def explicit_copy(D, names=None):
    """Enumerate every cell of a small span-presented double category into tables."""
    C = D.D0
    base = as_table(D.category) if isinstance(D.category, FinSet) else D.category
    props = D.all_proarrows()
    name = {}
    for i, m in enumerate(props):
        name[m] = (names or {}).get(m) or f"p{i}"
    pro = {name[m]: (str(m.src), str(m.tgt)) for m in props}
    arrows = D.arrows()
    cells, cid = {}, {}

    def add(c):
        if c not in cid:
            k = f"c{len(cid)}"
            cid[c] = k
            cells[k] = (name[c.source], name[c.target], C.describe(c.left), C.describe(c.right))
        return cid[c]

    every = []
    for m in props:
        for n in props:
            for f in C.hom(m.src, n.src):
                for g in C.hom(m.tgt, n.tgt):
                    for c in D.cells(m, n, f, g):
                        add(c)
                        every.append(c)
    vertical = {}
    for a in every:
        for b in every:
            if a.target == b.source:
                vertical[(cid[a], cid[b])] = add(D.vcomp(a, b))
    horizontal, hcells = {}, {}
    for m in props:
        for n in props:
            if m.tgt == n.src:
                k = D.hcomp(m, n)
                if k in name:
                    horizontal[(name[m], name[n])] = name[k]
    for a in every:
        for b in every:
            if a.right == b.left and (name[a.source], name[b.source]) in horizontal \
                    and (name[a.target], name[b.target]) in horizontal:
                hcells[(cid[a], cid[b])] = add(D.hcomp_cells(a, b))
    units = {str(x): name[D.unit(x)] for x in D.window}
    unit_cells = {C.describe(f): add(D.unit_cell(f)) for f in arrows}
    id_cells = {name[m]: add(D.id_cell(m)) for m in props}
    assoc, lu, ru = {}, {}, {}
    for m in props:
        lu[name[m]] = add(D.left_unitor(m))
        ru[name[m]] = add(D.right_unitor(m))
        for n in props:
            if m.tgt != n.src:
                continue
            for p in props:
                if n.tgt != p.src:
                    continue
                if D.hcomp(m, n) in name and D.hcomp(n, p) in name:
                    assoc[(name[m], name[n], name[p])] = add(D.associator(m, n, p))
    return TableDouble(base, pro, cells, vertical, horizontal, hcells, units, unit_cells,
                       id_cells, assoc, lu, ru, thin=D.thin)


# -- controls ----------------------------------------------------------------------------------

def doubled_cells(T):
    """Every cell of T in two copies, plain and marked; composites are marked if any factor is.

    Identity, unit and comparison cells stay plain, so the result is again a
    double category, but every boundary now carries two cells."""
    mark = lambda c: c + "*"
    cells = dict(T.cell_table)
    cells.update({mark(c): bd for c, bd in T.cell_table.items()})

    def combine(table):
        out = {}
        for (a, b), c in table.items():
            out[(a, b)] = c
            out[(mark(a), b)] = mark(c)
            out[(a, mark(b))] = mark(c)
            out[(mark(a), mark(b))] = mark(c)
        return out

    return TableDouble(T.D0, T.pro, cells, combine(T.vertical), T.horizontal, combine(T.hcells),
                       T.units, T.unit_cells, T.id_cells, T.associators, T.lunitors, T.runitors,
                       thin=False)


def without_proarrow(T, m):
    """T with proarrow m and everything mentioning it removed."""
    if m in T.units.values():
        raise ValueError(f"{m} is a unit and cannot be removed")
    gone = {c for c, (s, t, _, _) in T.cell_table.items() if m in (s, t)}
    keep = lambda *ids: not any(i in gone or i == m for i in ids)
    cells = {c: bd for c, bd in T.cell_table.items() if c not in gone}
    vertical = {k: v for k, v in T.vertical.items() if keep(*k, v)}
    horizontal = {k: v for k, v in T.horizontal.items() if keep(*k, v)}
    hcells = {k: v for k, v in T.hcells.items() if keep(*k, v)}
    pro = {p: e for p, e in T.pro.items() if p != m}
    return TableDouble(T.D0, pro, cells, vertical, horizontal, hcells, T.units, T.unit_cells,
                       {k: v for k, v in T.id_cells.items() if keep(k, v)},
                       {k: v for k, v in T.associators.items() if keep(*k, v)},
                       {k: v for k, v in T.lunitors.items() if keep(k, v)},
                       {k: v for k, v in T.runitors.items() if keep(k, v)}, thin=T.thin)
