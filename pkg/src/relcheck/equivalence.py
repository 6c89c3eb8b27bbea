"""The comparison functors between Rel(D0;F) and a double category D.

F sends a relation R -> A×B to the extension of y_R along its legs; G sends
a proarrow to the relation presented by its tabulator.  Everything is
computed lazily and cached, so components are only built for the instances
a check actually visits.
"""
from dataclasses import dataclass, field

from .audit import Budget, InstanceSpace, Context, Witness, derive_classes, CONDITION_NAMES
from .category import MissingStructure, BoundaryError
from .double import Cell, extend, invert_globular, is_opcartesian, equivalent
from .factorization import FactorizationSystem, epimono
from .finset import FinSet
from .spans import Proarrow, RelDouble


def rel_of(D, fs=None):
    """Rel(D0;F) over the window of D, with F native, given, or derived."""
    C = D.D0
    fs = fs if fs is not None else D.native_fs()
    if isinstance(C, FinSet):
        n = max(D.window) if D.window else 0
        if fs is None:
            fs = epimono()
        return RelDouble(FinSet(n), fs)
    if fs is None:
        Cw, E, M = derive_classes(D)
        fs = FactorizationSystem(Cw, E, M, name="derived")
    return RelDouble(C, fs)


class Equivalence:
    """F: Rel(D0;F) -> D (oplax) and G: D -> Rel(D0;F) (lax) with η, ε."""

    def __init__(self, D, fs=None):
        self.D = D
        self.C = D.D0
        self.R = rel_of(D, fs)
        self.ctx = Context(D, fs)
        self._cache = {}

    def _memo(self, key, build):
        if key not in self._cache:
            try:
                self._cache[key] = build()
            except (MissingStructure, BoundaryError) as exc:
                self._cache[key] = MissingStructure(str(exc))
        v = self._cache[key]
        if isinstance(v, MissingStructure):
            raise v
        return v

    def _solve_globular(self, m, n, top, target):
        """The unique globular γ: m => n with top;γ == target."""
        D = self.D
        found = [g for g in D.globular(m, n) if D.vcomp(top, g) == target]
        if len(found) != 1:
            raise MissingStructure(f"{len(found)} factorizations through an extension")
        return found[0]

    def _unitor_inverse(self, x):
        D = self.D
        inv = invert_globular(D, D.left_unitor(D.unit(x)))
        if inv is None:
            raise MissingStructure("unitor on a unit is not invertible")
        return inv

    # -- F ---------------------------------------------------------------------------------
    def F(self, r):
        """(F(R), ξ_R) with ξ_R: y_R => F(R) opcartesian."""
        return self._memo(("F", r), lambda: extend(self.D, r.left, self.D.unit(r.apex), r.right))

    def F_cell(self, theta):
        """F on a cell θ: R => S of relations."""
        D = self.D
        def build():
            fr, xr = self.F(theta.source)
            fs_, xs = self.F(theta.target)
            target = D.vcomp(D.unit_cell(theta.data), xs)
            found = [g for g in D.cells(fr, fs_, theta.left, theta.right) if D.vcomp(xr, g) == target]
            if len(found) != 1:
                raise MissingStructure(f"{len(found)} candidate images of a cell under F")
            return found[0]
        return self._memo(("Fc", theta), build)

    def phi(self, r, s):
        """Oplax comparison φ_{R,S}: F(R⊙S) => F(R)⊗F(S)."""
        D, R = self.D, self.R
        def build():
            k, cone, e = R.compose_data(r, s)
            fr, xr = self.F(r)
            fs_, xs = self.F(s)
            frs, xrs = self.F(k)
            P = cone.apex
            lam = D.hcomp_cells(D.vcomp(D.unit_cell(cone.legs[0]), xr),
                                D.vcomp(D.unit_cell(cone.legs[1]), xs))
            lam = D.vcomp(self._unitor_inverse(P), lam)
            top = D.vcomp(D.unit_cell(e), xrs)
            return self._solve_globular(frs, D.hcomp(fr, fs_), top, lam)
        return self._memo(("phi", r, s), build)

    # -- G ---------------------------------------------------------------------------------
    def G(self, p):
        """(G(p), κ, tabulator) with κ: ⊤p -> apex G(p) an iso of spans."""
        def build():
            tab = self.ctx.tab(p)
            s = Proarrow(self.D.psrc(p), self.D.ptgt(p), tab.apex, tab.left, tab.right)
            g, kappa = self.R.canonical(s)
            return g, kappa, tab
        return self._memo(("G", p), build)

    def _counit_on(self, p):
        """τ_p transported to y_{apex G(p)} => p."""
        D, C = self.D, self.C
        g, kappa, tab = self.G(p)
        return D.vcomp(D.unit_cell(C.inverse(kappa)), tab.counit)

    def _factor(self, q, delta):
        """Mediator into apex G(q) for a cell y_X => q."""
        from .double import tabulator_factor
        g, kappa, tab = self.G(q)
        return self.C.compose(tabulator_factor(self.D, tab, delta), kappa)

    def G_cell(self, alpha):
        """G on a cell α: p => q of D."""
        D = self.D
        def build():
            gp = self.G(alpha.source)[0]
            gq = self.G(alpha.target)[0]
            u = self._factor(alpha.target, D.vcomp(self._counit_on(alpha.source), alpha))
            return Cell(gp, gq, alpha.left, alpha.right, u)
        return self._memo(("Gc", alpha), build)

    def gamma(self, p, q):
        """Lax comparison γ_{p,q}: G(p)⊙G(q) => G(p⊗q) as a cell of relations."""
        D, C, R = self.D, self.C, self.R
        def build():
            gp, gq = self.G(p)[0], self.G(q)[0]
            k, cone, e = R.compose_data(gp, gq)
            pq = D.hcomp(p, q)
            gpq = self.G(pq)[0]
            top = D.hcomp_cells(D.vcomp(D.unit_cell(cone.legs[0]), self._counit_on(p)),
                                D.vcomp(D.unit_cell(cone.legs[1]), self._counit_on(q)))
            delta = D.vcomp(self._unitor_inverse(cone.apex), top)
            u = self._factor(pq, delta)
            found = C.solve_pre(e, u, limit=2)
            if len(found) != 1:
                raise MissingStructure("lax comparison does not descend along the image")
            return Cell(k, gpq, C.identity(gp.src), C.identity(gq.tgt), found[0])
        return self._memo(("gamma", p, q), build)

    def gamma_unit(self, a):
        """γ_A: Δ_A => G(y_A)."""
        D, C = self.D, self.C
        def build():
            y = D.unit(a)
            u = self._factor(y, D.unit_cell(C.identity(a)))
            return Cell(self.R.unit(a), self.G(y)[0], C.identity(a), C.identity(a), u)
        return self._memo(("gammaA", a), build)

    # -- unit and counit ---------------------------------------------------------------------
    def eta(self, r):
        """η_R: R => G F R, a globular cell of relations."""
        C = self.C
        def build():
            fr, xr = self.F(r)
            u = self._factor(fr, xr)
            return Cell(r, self.G(fr)[0], C.identity(r.src), C.identity(r.tgt), u)
        return self._memo(("eta", r), build)

    def eps(self, p):
        """ε_p: F G p => p, the unique globular cell with ξ_{Gp};ε = τ_p."""
        def build():
            g = self.G(p)[0]
            fg, xi = self.F(g)
            return self._solve_globular(fg, p, xi, self._counit_on(p))
        return self._memo(("eps", p), build)


# -- checks ---------------------------------------------------------------------------------------

def _rel_cells(eq):
    R, C = eq.R, eq.C
    rels = R.all_proarrows()
    out = []
    for r in rels:
        for s in rels:
            for f in C.hom(r.src, s.src):
                for g in C.hom(r.tgt, s.tgt):
                    out.extend(R.cells(r, s, f, g))
    return out


def _d_cells(eq):
    D, C = eq.D, eq.C
    ps = D.all_proarrows()
    out = []
    for p in ps:
        for q in ps:
            for f in C.hom(D.psrc(p), D.psrc(q)):
                for g in C.hom(D.ptgt(p), D.ptgt(q)):
                    out.extend(D.cells(p, q, f, g))
    return out


def _composable(rels, src, tgt):
    return [(r, s) for r in rels for s in rels if tgt(r) == src(s)]


def _is_iso_cell_rel(eq, cell):
    return eq.C.is_iso(cell.data)


def t_extensions(eq, r):
    fr, xi = eq.F(r)
    if not is_opcartesian(eq.D, xi)[0]:
        return "extension cell is not opcartesian"
    return None


def t_cover_units(eq, e):
    if not eq.R.fs.in_left(e):
        return None
    if not is_opcartesian(eq.D, eq.D.unit_cell(e))[0]:
        return "unit cell of a cover is not an extension"
    return None


def t_opnormal(eq, a):
    D = eq.D
    fa = eq.F(eq.R.unit(a))[0]
    if not equivalent(D, fa, D.unit(a)):
        return "F does not preserve the unit"
    return None


def t_g_tabulator(eq, p):
    try:
        eq.ctx.tab(p)
    except MissingStructure:
        return "no tabulator"
    return None


def t_g_relation(eq, p):
    try:
        eq.ctx.tab(p)
    except MissingStructure:
        return None
    try:
        eq.G(p)
    except MissingStructure:
        return "tabulator legs are not jointly in M"
    return None


def t_normal(eq, a):
    if not _is_iso_cell_rel(eq, eq.gamma_unit(a)):
        return "unit comparison of G is not invertible"
    return None


def t_eta(eq, r):
    if not _is_iso_cell_rel(eq, eq.eta(r)):
        return "unit component is not invertible"
    return None


def t_eps(eq, p):
    if invert_globular(eq.D, eq.eps(p)) is None:
        return "counit component is not invertible"
    return None


def t_phi(eq, r, s):
    if invert_globular(eq.D, eq.phi(r, s)) is None:
        return "oplax comparison is not invertible"
    return None


def t_gamma(eq, p, q):
    if not _is_iso_cell_rel(eq, eq.gamma(p, q)):
        return "lax comparison is not invertible"
    return None


def t_triangle_F(eq, r):
    D = eq.D
    fr = eq.F(r)[0]
    lhs = D.vcomp(eq.F_cell(eq.eta(r)), eq.eps(fr))
    if lhs != D.id_cell(fr):
        return "F η ; ε F is not the identity"
    return None


def t_triangle_G(eq, p):
    R, C = eq.R, eq.C
    g = eq.G(p)[0]
    lhs = R.vcomp(eq.eta(g), eq.G_cell(eq.eps(p)))
    if lhs.data != C.identity(g.apex):
        return "η G ; G ε is not the identity"
    return None


def t_eta_natural(eq, theta):
    R = eq.R
    lhs = R.vcomp(theta, eq.eta(theta.target))
    rhs = R.vcomp(eq.eta(theta.source), eq.G_cell(eq.F_cell(theta)))
    if lhs.data != rhs.data:
        return "η is not natural"
    return None


def t_eps_natural(eq, alpha):
    D = eq.D
    lhs = D.vcomp(eq.F_cell(eq.G_cell(alpha)), eq.eps(alpha.target))
    rhs = D.vcomp(eq.eps(alpha.source), alpha)
    if lhs != rhs:
        return "ε is not natural"
    return None


def t_compat_eta(eq, r, s):
    R, D = eq.R, eq.D
    fr, fs_ = eq.F(r)[0], eq.F(s)[0]
    lhs = R.vcomp(R.hcomp_cells(eq.eta(r), eq.eta(s)), eq.gamma(fr, fs_))
    rhs = R.vcomp(eq.eta(R.hcomp(r, s)), eq.G_cell(eq.phi(r, s)))
    if lhs.data != rhs.data:
        return "η does not respect the comparison cells"
    return None


def t_compat_eps(eq, p, q):
    D, R = eq.D, eq.R
    gp, gq = eq.G(p)[0], eq.G(q)[0]
    lhs = D.vcomp(eq.phi(gp, gq), D.hcomp_cells(eq.eps(p), eq.eps(q)))
    rhs = D.vcomp(eq.F_cell(eq.gamma(p, q)), eq.eps(D.hcomp(p, q)))
    if lhs != rhs:
        return "ε does not respect the comparison cells"
    return None


def t_fs_agrees(eq):
    ctx, fs = eq.ctx, eq.R.fs
    for f in eq.D.arrows():
        if ctx.is_cover(f) != fs.in_left(f) or ctx.is_inclusion(f) != fs.in_right(f):
            return f"derived classes disagree with the factorization system at {eq.C.describe(f)}"
    return None


def _sp(*lists):
    sp = InstanceSpace()
    sp.add((), *lists)
    return sp


def _rels(eq):
    return [("rel", r) for r in eq.R.all_proarrows()]


def _pros(eq):
    return [("pro", p) for p in eq.D.all_proarrows()]


def _objs(eq):
    return [("obj", a) for a in eq.D.window]


def _pairs(items, src, tgt):
    return [(a, b) for a in items for b in items if tgt(a[1]) == src(b[1])]


def _pair_space(pairs):
    sp = InstanceSpace()
    for a, b in pairs:
        sp.add((a, b))
    return sp


def _rel_pairs(eq):
    return _pair_space(_pairs(_rels(eq), lambda m: m.src, lambda m: m.tgt))


def _pro_pairs(eq):
    D = eq.D
    return _pair_space(_pairs(_pros(eq), D.psrc, D.ptgt))


# (name, space, test, audit condition that explains a failure)
COMPONENTS = (
    ("fs-agrees", lambda eq: _single(), t_fs_agrees, "derived-factorization-system"),
    ("F-extensions", lambda eq: _sp(_rels(eq)), t_extensions, "equipment"),
    ("F-cover-units", lambda eq: _sp([("arrow", f) for f in eq.D.arrows()]), t_cover_units, "cover-extensions"),
    ("F-opnormal", lambda eq: _sp(_objs(eq)), t_opnormal, "unit-pure"),
    ("G-tabulators", lambda eq: _sp(_pros(eq)), t_g_tabulator, "tabulators"),
    ("G-relations", lambda eq: _sp(_pros(eq)), t_g_relation, "tabulators-discrete"),
    ("G-normal", lambda eq: _sp(_objs(eq)), t_normal, "unit-pure"),
    ("eta-invertible", lambda eq: _sp(_rels(eq)), t_eta, "relations-are-tabulators"),
    ("eps-invertible", lambda eq: _sp(_pros(eq)), t_eps, "tabulators-strong"),
    ("phi-invertible", _rel_pairs, t_phi, "beck-chevalley"),
    ("gamma-invertible", _pro_pairs, t_gamma, "tabulators-functorial"),
    ("triangle-F", lambda eq: _sp(_rels(eq)), t_triangle_F, None),
    ("triangle-G", lambda eq: _sp(_pros(eq)), t_triangle_G, None),
    ("eta-natural", lambda eq: _sp([("relcell", c) for c in _rel_cells(eq)]), t_eta_natural, None),
    ("eps-natural", lambda eq: _sp([("cell", c) for c in _d_cells(eq)]), t_eps_natural, None),
    ("compat-eta", _rel_pairs, t_compat_eta, None),
    ("compat-eps", _pro_pairs, t_compat_eps, None),
)

COMPONENT_NAMES = tuple(c[0] for c in COMPONENTS)
_BY_NAME = {c[0]: c for c in COMPONENTS}


def _single():
    sp = InstanceSpace()
    sp.add(())
    return sp


NOT_BUILT = "not constructible"


@dataclass
class ComponentResult:
    name: str
    status: str
    exhaustive: bool
    checked: int = 0
    note: str = ""
    witness: Witness = None


@dataclass
class EquivalenceReport:
    components: dict = field(default_factory=dict)
    explained_by: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.status == "pass" for c in self.components.values())

    @property
    def exhaustive(self):
        return all(c.exhaustive for c in self.components.values())

    @property
    def witnesses(self):
        return [c.witness for c in self.components.values() if c.witness is not None]

    def failed(self):
        return [n for n, c in self.components.items() if c.status != "pass"]


def _cell_text(eq, kind, c):
    X = eq.R if kind == "relcell" else eq.D
    return " | ".join((X.encode_proarrow(c.source), X.encode_proarrow(c.target),
                       eq.C.describe(c.left), eq.C.describe(c.right), str(c.data)))


def encode_instance(eq, inst):
    out = []
    for kind, v in inst:
        if kind == "rel":
            out.append((kind, eq.R.encode_proarrow(v)))
        elif kind == "pro":
            out.append((kind, eq.D.encode_proarrow(v)))
        elif kind == "arrow":
            out.append((kind, eq.C.describe(v)))
        elif kind in ("cell", "relcell"):
            out.append((kind, _cell_text(eq, kind, v)))
        else:
            out.append((kind, str(v)))
    return tuple(out)


def decode_instance(eq, items):
    out = []
    for kind, text in items:
        if kind == "rel":
            out.append(eq.R.decode_proarrow(text))
        elif kind == "pro":
            out.append(eq.D.decode_proarrow(text))
        elif kind == "arrow":
            out.append(eq.D.decode_arrow(text))
        elif kind == "obj":
            out.append(eq.D.decode_object(text))
        elif kind in ("cell", "relcell"):
            X = eq.R if kind == "relcell" else eq.D
            m, n, f, g, data = (x.strip() for x in text.split(" | "))
            m, n = X.decode_proarrow(m), X.decode_proarrow(n)
            f, g = eq.D.decode_arrow(f), eq.D.decode_arrow(g)
            found = [c for c in X.cells(m, n, f, g) if str(c.data) == data]
            if not found:
                raise ValueError(f"no such cell: {text}")
            out.append(found[0])
        else:
            raise ValueError(f"unknown witness item kind {kind!r}")
    return out


def _apply(eq, test, values):
    """The failure note for one instance, or None when it holds."""
    try:
        return test(eq, *values)
    except (MissingStructure, BoundaryError) as exc:
        # a component that cannot be built is a failure of the construction
        return f"{NOT_BUILT}: {exc}"


def run_component(eq, name, budget, wid=None):
    _, space_fn, test, _ = _BY_NAME[name]
    try:
        space = space_fn(eq)
    except MissingStructure as exc:
        return ComponentResult(name, "skip", False, note=str(exc))
    idx, complete = budget.choose("equivalence:" + name, space)
    checked = 0
    for i in idx:
        inst = space[i]
        note = _apply(eq, test, [v for _, v in inst])
        checked += 1
        if note is not None:
            w = Witness(wid or f"e-{name}", "equivalence:" + name, encode_instance(eq, inst), note)
            return ComponentResult(name, "fail", complete, checked, note, w)
    return ComponentResult(name, "pass", complete, checked)


def replay_component(D, witness, fs=None):
    """True when a recorded equivalence witness still fails."""
    name = witness.condition.split(":", 1)[1]
    eq = Equivalence(D, fs)
    return _apply(eq, _BY_NAME[name][2], decode_instance(eq, witness.items)) is not None


def check_equivalence(D, budget=None, fs=None, report=None):
    """Build F, G, η, ε and check every component; name the audit condition behind a failure."""
    budget = budget or Budget()
    eq = Equivalence(D, fs)
    out = EquivalenceReport()
    for k, name in enumerate(COMPONENT_NAMES):
        out.components[name] = run_component(eq, name, budget, f"e{k + 1}")
    failed_audit = report.failed() if report is not None else []
    for name in out.failed():
        cond = _BY_NAME[name][3] or (failed_audit[0] if failed_audit else None)
        if cond is not None and cond not in out.explained_by:
            out.explained_by.append(cond)
    # with an audit attached, keep the explanations it confirms
    confirmed = [c for c in out.explained_by if c in failed_audit]
    if confirmed:
        out.explained_by = confirmed
    out.explained_by.sort(key=CONDITION_NAMES.index)
    return out


def build_F(D, fs=None):
    eq = Equivalence(D, fs)
    for r in eq.R.all_proarrows():
        eq.F(r)
    return eq


def build_G(D, fs=None):
    eq = Equivalence(D, fs)
    for p in D.all_proarrows():
        eq.G(p)
    return eq


def adjunction_witness(D, fs=None, budget=None):
    """η and ε on every instance in budget, with both triangle identities."""
    budget = budget or Budget(exhaustive=True)
    eq = Equivalence(D, fs)
    names = ("eta-invertible", "eps-invertible", "triangle-F", "triangle-G", "eta-natural", "eps-natural")
    return eq, {n: run_component(eq, n, budget) for n in names}
