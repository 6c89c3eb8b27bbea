"""Abstract double categories and the searches that only use the interface.

A backend provides proarrows, cells by boundary, the two compositions and
the comparison cells.  Backends with a construction for restrictions,
tabulators and so on expose it through the *_data hooks; everything here
falls back to searching the window and always re-checks universal
properties rather than trusting a construction.
"""
from collections import Counter
from dataclasses import dataclass
from itertools import product as cartesian

from .category import BoundaryError, MissingStructure


@dataclass(frozen=True)
class Cell:
    source: object   # proarrow on top
    target: object   # proarrow on the bottom
    left: object     # arrow between sources of the proarrows
    right: object    # arrow between targets
    data: object = None


@dataclass(frozen=True)
class Companion:
    arrow: object
    proarrow: object
    unit: Cell
    counit: Cell


@dataclass(frozen=True)
class TabulatorWitness:
    proarrow: object
    apex: object
    counit: Cell

    @property
    def left(self):
        return self.counit.left

    @property
    def right(self):
        return self.counit.right


class DoubleCategory:
    """Interface.  vcomp(a, b) is a on top of b; hcomp(m, n) is m then n."""

    thin = False
    D0 = None
    window = ()

    def proarrows(self, a, b):
        raise NotImplementedError

    def all_proarrows(self):
        return [m for a in self.window for b in self.window for m in self.proarrows(a, b)]

    def arrows(self):
        C = self.D0
        return [f for a in self.window for b in self.window for f in C.hom(a, b)]

    def test_objects(self):
        return tuple(self.window)

    def tabulator_candidates(self, m):
        return self.test_objects()

    # structure every backend supplies
    def psrc(self, m): raise NotImplementedError
    def ptgt(self, m): raise NotImplementedError
    def unit(self, a): raise NotImplementedError
    def cells(self, m, n, f, g): raise NotImplementedError
    def vcomp(self, alpha, beta): raise NotImplementedError
    def hcomp(self, m, n): raise NotImplementedError
    def hcomp_cells(self, alpha, beta): raise NotImplementedError
    def unit_cell(self, f): raise NotImplementedError
    def id_cell(self, m): raise NotImplementedError
    def associator(self, m, n, p): raise NotImplementedError
    def left_unitor(self, m): raise NotImplementedError
    def right_unitor(self, m): raise NotImplementedError

    # optional constructions
    def restriction_data(self, f, n, g): return None
    def extension_data(self, f, m, g): return None
    def companion_data(self, f): return None
    def conjoint_data(self, f): return None
    def tabulator_data(self, m): return None
    def tabulator_factor_data(self, tab, delta): return None
    def local_product_data(self, m, n): return None
    def product_proarrow(self, m, n): return None
    def native_fs(self): return None

    # text forms for reports
    def show(self, m): return str(m)
    def show_arrow(self, f): return self.D0.describe(f)

    def encode_proarrow(self, m): return str(m)
    def decode_proarrow(self, text): raise NotImplementedError
    def decode_arrow(self, text): return self.D0.parse_arrow(text)
    def decode_object(self, text): return self.D0.parse_object(text)

    def in_scope(self, m):
        """Whether cells into m are small enough to enumerate."""
        return True

    def globular(self, m, n):
        C = self.D0
        return self.cells(m, n, C.identity(self.psrc(m)), C.identity(self.ptgt(m)))


def ident2(D, m):
    C = D.D0
    return C.identity(D.psrc(m)), C.identity(D.ptgt(m))


# -- equivalence of proarrows ---------------------------------------------------

def invert_globular(D, alpha):
    for beta in D.globular(alpha.target, alpha.source):
        if D.vcomp(alpha, beta) == D.id_cell(alpha.source) and D.vcomp(beta, alpha) == D.id_cell(alpha.target):
            return beta
    return None


def globular_iso(D, m, n):
    """An invertible globular cell m => n with its inverse, or None."""
    if D.psrc(m) != D.psrc(n) or D.ptgt(m) != D.ptgt(n):
        return None
    for alpha in D.globular(m, n):
        beta = invert_globular(D, alpha)
        if beta is not None:
            return alpha, beta
    return None


def equivalent(D, m, n):
    return globular_iso(D, m, n) is not None


# -- cartesian and opcartesian cells -----------------------------------------------

def _pairs(D, xs, ys):
    for x in xs:
        for y in ys:
            for p in D.proarrows(x, y):
                yield x, y, p


def is_cartesian(D, theta):
    """Every δ: p => n over (u;f, v;g) factors uniquely through θ."""
    C = D.D0
    m = theta.source
    a, b = D.psrc(m), D.ptgt(m)
    for x, y, p in _pairs(D, D.window, D.window):
        for u in C.hom(x, a):
            uf = C.compose(u, theta.left)
            for v in C.hom(y, b):
                vg = C.compose(v, theta.right)
                deltas = D.cells(p, theta.target, uf, vg)
                if not deltas:
                    continue
                gammas = D.cells(p, m, u, v)
                if D.thin:
                    counts = None
                else:
                    counts = Counter(D.vcomp(g, theta) for g in gammas)
                for delta in deltas:
                    n_ok = len(gammas) if counts is None else counts[delta]
                    if n_ok != 1:
                        return False, (p, u, v, delta, n_ok)
    return True, None


def is_opcartesian(D, xi):
    """Every δ: m => p over (f;u, g;v) factors uniquely through ξ."""
    C = D.D0
    n = xi.target
    c, d = D.psrc(n), D.ptgt(n)
    for x, y, p in _pairs(D, D.window, D.window):
        for u in C.hom(c, x):
            fu = C.compose(xi.left, u)
            for v in C.hom(d, y):
                gv = C.compose(xi.right, v)
                deltas = D.cells(xi.source, p, fu, gv)
                if not deltas:
                    continue
                gammas = D.cells(n, p, u, v)
                if D.thin:
                    counts = None
                else:
                    counts = Counter(D.vcomp(xi, g) for g in gammas)
                for delta in deltas:
                    n_ok = len(gammas) if counts is None else counts[delta]
                    if n_ok != 1:
                        return False, (p, u, v, delta, n_ok)
    return True, None


def _in_window(D, *objs):
    w = set(D.window)
    return all(o in w for o in objs)


def restrict(D, f, n, g, verify=True):
    """Restriction of n along (f, g) with its cartesian cell."""
    C = D.D0
    if C.tgt(f) != D.psrc(n) or C.tgt(g) != D.ptgt(n):
        raise BoundaryError("restriction niche does not line up")
    built = D.restriction_data(f, n, g)
    if built is not None:
        if verify and not is_cartesian(D, built[1])[0]:
            raise MissingStructure(f"constructed restriction is not cartesian: {D.show(built[0])}")
        return built
    x, y = C.src(f), C.src(g)
    if not _in_window(D, x, y):
        raise MissingStructure(f"restriction to {x},{y} lies outside the window")
    cands = [(m, rho) for m in D.proarrows(x, y) for rho in D.cells(m, n, f, g)]
    for m, rho in cands:
        # cheap filter: other candidates must factor through this one
        ok = True
        for m2, rho2 in cands:
            gs = [gm for gm in D.globular(m2, m) if D.vcomp(gm, rho) == rho2]
            if len(gs) != 1:
                ok = False
                break
        if ok and is_cartesian(D, rho)[0]:
            return m, rho
    raise MissingStructure(f"no restriction of {D.show(n)} along ({D.show_arrow(f)}, {D.show_arrow(g)})")


def extend(D, f, m, g, verify=True):
    """Extension of m along (f, g) with its opcartesian cell."""
    C = D.D0
    if C.src(f) != D.psrc(m) or C.src(g) != D.ptgt(m):
        raise BoundaryError("extension niche does not line up")
    built = D.extension_data(f, m, g)
    if built is not None:
        if verify and not is_opcartesian(D, built[1])[0]:
            raise MissingStructure(f"constructed extension is not opcartesian: {D.show(built[0])}")
        return built
    x, y = C.tgt(f), C.tgt(g)
    if not _in_window(D, x, y):
        raise MissingStructure(f"extension to {x},{y} lies outside the window")
    cands = [(n, xi) for n in D.proarrows(x, y) for xi in D.cells(m, n, f, g)]
    for n, xi in cands:
        ok = True
        for n2, xi2 in cands:
            gs = [gm for gm in D.globular(n, n2) if D.vcomp(xi, gm) == xi2]
            if len(gs) != 1:
                ok = False
                break
        if ok and is_opcartesian(D, xi)[0]:
            return n, xi
    raise MissingStructure(f"no extension of {D.show(m)} along ({D.show_arrow(f)}, {D.show_arrow(g)})")


# -- companions and conjoints --------------------------------------------------------

def companion_ok(D, p, eta, eps):
    f = eta.right
    if D.vcomp(eta, eps) != D.unit_cell(f):
        return False
    return D.vcomp(D.hcomp_cells(eta, eps), D.right_unitor(p)) == D.left_unitor(p)


def conjoint_ok(D, p, eta, eps):
    f = eta.left
    if D.vcomp(eta, eps) != D.unit_cell(f):
        return False
    return D.vcomp(D.hcomp_cells(eps, eta), D.left_unitor(p)) == D.right_unitor(p)


def companion(D, f, verify=True):
    C = D.D0
    a, b = C.src(f), C.tgt(f)
    built = D.companion_data(f)
    if built is not None:
        p, eta, eps = built
        if verify and not companion_ok(D, p, eta, eps):
            raise MissingStructure(f"constructed companion of {D.show_arrow(f)} fails its equations")
        return Companion(f, p, eta, eps)
    if not _in_window(D, a, b):
        raise MissingStructure(f"companion of {D.show_arrow(f)} lies outside the window")
    ya, yb = D.unit(a), D.unit(b)
    for p in D.proarrows(a, b):
        for eta in D.cells(ya, p, C.identity(a), f):
            for eps in D.cells(p, yb, f, C.identity(b)):
                if companion_ok(D, p, eta, eps):
                    return Companion(f, p, eta, eps)
    raise MissingStructure(f"no companion for {D.show_arrow(f)}")


def conjoint(D, f, verify=True):
    C = D.D0
    a, b = C.src(f), C.tgt(f)
    built = D.conjoint_data(f)
    if built is not None:
        p, eta, eps = built
        if verify and not conjoint_ok(D, p, eta, eps):
            raise MissingStructure(f"constructed conjoint of {D.show_arrow(f)} fails its equations")
        return Companion(f, p, eta, eps)
    if not _in_window(D, a, b):
        raise MissingStructure(f"conjoint of {D.show_arrow(f)} lies outside the window")
    ya, yb = D.unit(a), D.unit(b)
    for p in D.proarrows(b, a):
        for eta in D.cells(ya, p, f, C.identity(a)):
            for eps in D.cells(p, yb, C.identity(b), f):
                if conjoint_ok(D, p, eta, eps):
                    return Companion(f, p, eta, eps)
    raise MissingStructure(f"no conjoint for {D.show_arrow(f)}")


# -- tabulators -------------------------------------------------------------------------

def cells_from_unit(D, x, m):
    C = D.D0
    out = []
    for h in C.hom(x, D.psrc(m)):
        for k in C.hom(x, D.ptgt(m)):
            out.extend(D.cells(D.unit(x), m, h, k))
    return out


def tabulator_up(D, tab, objects=None):
    """Check that u ↦ y_u;τ is a bijection hom(X, ⊤m) -> cells y_X => m."""
    C = D.D0
    objects = objects if objects is not None else D.test_objects()
    for x in objects:
        target = cells_from_unit(D, x, tab.proarrow)
        seen = set()
        for u in C.hom(x, tab.apex):
            seen.add(D.vcomp(D.unit_cell(u), tab.counit))
        if len(seen) != len(C.hom(x, tab.apex)) or seen != set(target):
            return False, x
    return True, None


def tabulator(D, m, verify=True):
    C = D.D0
    built = D.tabulator_data(m)
    if built is not None:
        if verify and (D.thin or D.in_scope(m)) and not tabulator_up(D, built)[0]:
            raise MissingStructure(f"constructed tabulator of {D.show(m)} is not universal")
        return built
    objs = D.test_objects()
    counts = {x: len(cells_from_unit(D, x, m)) for x in objs}
    for t in D.tabulator_candidates(m):
        if any(len(C.hom(x, t)) != counts[x] for x in objs):
            continue
        for tau in cells_from_unit(D, t, m):
            tab = TabulatorWitness(m, t, tau)
            if tabulator_up(D, tab, objs)[0]:
                return tab
    raise MissingStructure(f"no tabulator for {D.show(m)}")


def tabulator_factor(D, tab, delta):
    """The unique u with y_u;τ = δ."""
    C = D.D0
    u = D.tabulator_factor_data(tab, delta)
    if u is not None:
        if D.vcomp(D.unit_cell(u), tab.counit) != delta:
            raise MissingStructure(f"constructed factorization through the tabulator of {D.show(tab.proarrow)} is wrong")
        return u
    x = D.psrc(delta.source)
    found = [u for u in C.hom(x, tab.apex) if D.vcomp(D.unit_cell(u), tab.counit) == delta]
    if len(found) != 1:
        raise MissingStructure(f"{len(found)} factorizations through the tabulator of {D.show(tab.proarrow)}")
    return found[0]


# -- local products ---------------------------------------------------------------------

def local_product_up(D, m, n, p, pi1, pi2):
    a, b = D.psrc(m), D.ptgt(m)
    if not _in_window(D, a, b):
        return True, None      # nothing to quantify over inside the window
    if not D.thin and not D.in_scope(p):
        return True, None      # apex too large to enumerate cells into
    for q in D.proarrows(a, b):
        gam = D.globular(q, p)
        alphas, betas = D.globular(q, m), D.globular(q, n)
        if D.thin:
            if alphas and betas and len(gam) != 1:
                return False, (q, len(gam))
            continue
        # γ ↦ (γ;π1, γ;π2) must be a bijection onto pairs of cells
        image = Counter((D.vcomp(g, pi1), D.vcomp(g, pi2)) for g in gam)
        if sum(image.values()) != len(alphas) * len(betas) or any(k != 1 for k in image.values()):
            return False, (q, len(gam))
    return True, None


def local_product(D, m, n, verify=True):
    if D.psrc(m) != D.psrc(n) or D.ptgt(m) != D.ptgt(n):
        raise BoundaryError("local product of non-parallel proarrows")
    built = D.local_product_data(m, n)
    if built is not None:
        if verify and not local_product_up(D, m, n, *built)[0]:
            raise MissingStructure("constructed local product is not universal")
        return built
    a, b = D.psrc(m), D.ptgt(m)
    if not _in_window(D, a, b):
        raise MissingStructure("local product outside the window")
    for p in D.proarrows(a, b):
        for pi1 in D.globular(p, m):
            for pi2 in D.globular(p, n):
                if local_product_up(D, m, n, p, pi1, pi2)[0]:
                    return p, pi1, pi2
    raise MissingStructure(f"no local product of {D.show(m)} and {D.show(n)}")


# -- pasting ---------------------------------------------------------------------------------

def hpaste(D, row):
    out = row[0]
    for c in row[1:]:
        out = D.hcomp_cells(out, c)
    return out


def paste(D, rows):
    """Rows of cells, each composed horizontally (left bracketed), stacked top to bottom."""
    out = None
    for row in rows:
        r = hpaste(D, list(row))
        out = r if out is None else D.vcomp(out, r)
    return out


def kernel(D, f, verify=True):
    """Restriction of the unit on the target along (f, f)."""
    b = D.D0.tgt(f)
    return restrict(D, f, D.unit(b), f, verify)


def cokernel(D, f, verify=True):
    """Extension of the unit on the source along (f, f)."""
    a = D.D0.src(f)
    return extend(D, f, D.unit(a), f, verify)


def kernel_cokernel(D, f, verify=True):
    return kernel(D, f, verify), cokernel(D, f, verify)


def classify_cover_inclusion(D, f, verify=True):
    """cover: the comparison cokernel => y_B is invertible; inclusion: y_A => kernel is."""
    C = D.D0
    a, b = C.src(f), C.tgt(f)
    yf = D.unit_cell(f)
    c, xi = cokernel(D, f, verify)
    gam = [g for g in D.globular(c, D.unit(b)) if D.vcomp(xi, g) == yf]
    cover = len(gam) == 1 and invert_globular(D, gam[0]) is not None
    k, rho = kernel(D, f, verify)
    gam = [g for g in D.globular(D.unit(a), k) if D.vcomp(g, rho) == yf]
    inclusion = len(gam) == 1 and invert_globular(D, gam[0]) is not None
    return {"cover": cover, "inclusion": inclusion}
