"""Audit a finite double category against the hypotheses of the characterization.

Every condition is a quantified statement over an instance space (arrows,
proarrows, composable pairs, ...).  A condition passes when every instance
in budget passes; the first failing instance becomes a replayable witness.
Instances whose structure is unavailable (a composite that is not tabulated,
a limit outside the window) are skipped, never failed.
"""
from dataclasses import dataclass, field
import random
import time

from .category import MissingStructure, BoundaryError
from .double import (companion, conjoint, restrict, extend, tabulator, tabulator_factor,
                     local_product, equivalent, invert_globular, is_opcartesian,
                     classify_cover_inclusion, kernel, cokernel)
from .factorization import check_factorization_system
from .finset import FinSet


# -- budgets and instance spaces ------------------------------------------------------------

@dataclass
class Budget:
    exhaustive: bool = False
    samples: int = 200
    seed: int = 0

    def choose(self, name, space):
        """Indices to check and whether that is every instance."""
        n = len(space)
        if self.exhaustive or n <= self.samples:
            return range(n), True
        rng = random.Random(f"{self.seed}:{name}")
        return sorted(rng.sample(range(n), self.samples)), False


class InstanceSpace:
    """Disjoint union of cartesian products, indexed without materializing them.

    Each block is (prefix, [list1, list2, ...]); instance i is the prefix
    followed by one element from each list.
    """

    def __init__(self):
        self.blocks = []
        self._sizes = []

    def add(self, prefix, *lists):
        size = 1
        for xs in lists:
            size *= len(xs)
        if size:
            self.blocks.append((tuple(prefix), [list(xs) for xs in lists]))
            self._sizes.append(size)

    def __len__(self):
        return sum(self._sizes)

    def __getitem__(self, i):
        for (prefix, lists), size in zip(self.blocks, self._sizes):
            if i < size:
                picks = []
                for xs in reversed(lists):
                    i, r = divmod(i, len(xs))
                    picks.append(xs[r])
                return prefix + tuple(reversed(picks))
            i -= size
        raise IndexError(i)


# -- verdicts and reports ---------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    id: str
    condition: str
    items: tuple          # ((kind, text), ...) with kind in arrow | pro | obj
    note: str = ""


@dataclass
class Verdict:
    condition: str
    status: str           # pass | fail | skip
    exhaustive: bool
    checked: int = 0
    skipped: int = 0
    witness: Witness = None
    note: str = ""
    seconds: float = 0.0

    @property
    def ok(self):
        return self.status != "fail"


@dataclass
class AuditReport:
    verdicts: dict = field(default_factory=dict)
    covers: list = field(default_factory=list)
    inclusions: list = field(default_factory=list)
    budget: Budget = None
    equivalence: object = None

    @property
    def ok(self):
        return all(v.ok for v in self.verdicts.values()) and \
            (self.equivalence is None or self.equivalence.ok)

    def failed(self):
        return [n for n, v in self.verdicts.items() if v.status == "fail"]

    def __getitem__(self, name):
        return self.verdicts[name]

    def witnesses(self):
        return [v.witness for v in self.verdicts.values() if v.witness is not None]


# -- shared context -------------------------------------------------------------------------------

class Context:
    """The double category under audit plus cached derived classifications."""

    def __init__(self, D, fs=None):
        self.D = D
        self.C = D.D0
        self.fs = fs if fs is not None else D.native_fs()
        self._classes = {}
        self._tabs = {}

    def classes(self, f):
        if f not in self._classes:
            self._classes[f] = classify_cover_inclusion(self.D, f, verify=False)
        return self._classes[f]

    def is_cover(self, f):
        return self.classes(f)["cover"]

    def is_inclusion(self, f):
        return self.classes(f)["inclusion"]

    def in_M(self, f):
        if self.fs is not None:
            return self.fs.in_right(f)
        return self.is_inclusion(f)

    def tab(self, m):
        if m not in self._tabs:
            try:
                self._tabs[m] = tabulator(self.D, m)
            except MissingStructure as exc:
                self._tabs[m] = exc
        t = self._tabs[m]
        if isinstance(t, Exception):
            raise MissingStructure(str(t))
        return t

    def arrows(self):
        return self.D.arrows()

    def window_category(self):
        C, w = self.C, tuple(self.D.window)
        if isinstance(C, FinSet):
            if C.max_size is None:
                if w != tuple(range(len(w))):
                    raise MissingStructure("window is not an initial segment of the skeleton")
                return FinSet(len(w) - 1) if w else FinSet(0)
            return C
        if set(w) != set(C.objects):
            raise MissingStructure("window does not cover the arrow category")
        return C


def _pros(D):
    return D.all_proarrows()


# -- the conditions ---------------------------------------------------------------------------------
# Each condition: space(ctx) -> InstanceSpace of ((kind, value), ...) tuples,
# test(ctx, *values) -> None when the instance holds, else a short note.

def _a(x):
    return ("arrow", x)


def _p(x):
    return ("pro", x)


def _o(x):
    return ("obj", x)


def space_arrows(ctx):
    sp = InstanceSpace()
    sp.add((), [_a(f) for f in ctx.arrows()])
    return sp


def space_pros(ctx):
    sp = InstanceSpace()
    sp.add((), [_p(m) for m in _pros(ctx.D)])
    return sp


def space_parallel_arrows(ctx):
    D, C = ctx.D, ctx.C
    sp = InstanceSpace()
    for a in D.window:
        for b in D.window:
            hs = [_a(f) for f in C.hom(a, b)]
            sp.add((), hs, hs)
    return sp


def test_unit_pure(ctx, f, g):
    D, C = ctx.D, ctx.C
    a, b = C.src(f), C.tgt(f)
    cs = D.cells(D.unit(a), D.unit(b), f, g)
    if f != g:
        return "cell between units over two different arrows" if cs else None
    yf = D.unit_cell(f)
    if any(c != yf for c in cs):
        return "cell between units that is not the unit of an arrow"
    return None


def test_equipment(ctx, f):
    for name, find in (("companion", companion), ("conjoint", conjoint)):
        try:
            find(ctx.D, f)
        except MissingStructure:
            return f"no {name}"
    return None


def space_cartesian(ctx):
    D = ctx.D
    sp = InstanceSpace()
    sp.add([("tag", "objects")], [_o(a) for a in D.window], [_o(b) for b in D.window])
    ps = [_p(m) for m in _pros(D)]
    sp.add([("tag", "proarrows")], ps, ps)
    return sp


def test_cartesian(ctx, tag, x, y):
    D, C = ctx.D, ctx.C
    if tag == "objects":
        if C.product(x, y) is None:
            return "no product in the arrow category"
        if C.terminal() is None:
            return "no terminal object"
        return None
    m, n = x, y
    built = D.product_proarrow(m, n)
    if built is None:
        raise MissingStructure("no product of proarrows")
    k, pi1, pi2 = built
    ac = C.product(D.psrc(m), D.psrc(n))
    bd = C.product(D.ptgt(m), D.ptgt(n))
    if (pi1.left, pi1.right, pi2.left, pi2.right) != (ac.legs[0], bd.legs[0], ac.legs[1], bd.legs[1]):
        return "projection cells do not lie over the product projections"
    w = set(D.window)
    if ac.apex in w and bd.apex in w and (D.thin or D.in_scope(k)):
        # γ ↦ (γ;π1, γ;π2) must be a bijection onto pairs of cells
        for q in D.proarrows(ac.apex, bd.apex):
            alphas = D.cells(q, m, ac.legs[0], bd.legs[0])
            betas = D.cells(q, n, ac.legs[1], bd.legs[1])
            image = [(D.vcomp(g, pi1), D.vcomp(g, pi2)) for g in D.globular(q, k)]
            if len(image) != len(alphas) * len(betas) or len(set(image)) != len(image):
                return f"cells from {D.show(q)} do not factor uniquely through the product"
    return None


def space_parallel_pros(ctx):
    D = ctx.D
    sp = InstanceSpace()
    for a in D.window:
        for b in D.window:
            ps = [_p(m) for m in D.proarrows(a, b)]
            sp.add((), ps, ps)
    return sp


def test_local_products(ctx, m, n):
    try:
        local_product(ctx.D, m, n)
    except MissingStructure:
        return "no local product"
    return None


def test_tabulators(ctx, m):
    try:
        ctx.tab(m)
    except MissingStructure:
        return "no tabulator"
    return None


def test_strong(ctx, m):
    D = ctx.D
    tab = ctx.tab(m)
    n, xi = extend(D, tab.left, D.unit(tab.apex), tab.right)
    gam = [g for g in D.globular(n, m) if D.vcomp(xi, g) == tab.counit]
    if len(gam) != 1:
        return f"{len(gam)} comparison cells from the canonical extension"
    if invert_globular(D, gam[0]) is None:
        return "the canonical extension is not equivalent to the proarrow"
    return None


def test_discrete(ctx, m):
    D = ctx.D
    tab = ctx.tab(m)
    kl, _ = kernel(D, tab.left, verify=False)
    kr, _ = kernel(D, tab.right, verify=False)
    p, _, _ = local_product(D, kl, kr, verify=False)
    if not equivalent(D, p, D.unit(tab.apex)):
        return "kernel(l) ∧ kernel(r) is not the unit on the tabulator"
    return None


def space_composable(ctx):
    D = ctx.D
    sp = InstanceSpace()
    for a in D.window:
        for b in D.window:
            left = [_p(m) for m in D.proarrows(a, b)]
            for c in D.window:
                sp.add((), left, [_p(n) for n in D.proarrows(b, c)])
    return sp


def comparison_to_tabulator(ctx, p, q):
    """(P, u): the pullback of the tabulators and the induced P -> ⊤(p⊗q)."""
    D, C = ctx.D, ctx.C
    tp, tq = ctx.tab(p), ctx.tab(q)
    pq = D.hcomp(p, q)
    tpq = ctx.tab(pq)
    cone = C.pullback(tp.right, tq.left)
    if cone is None:
        raise MissingStructure("pullback of tabulator legs")
    P = cone.apex
    top = D.hcomp_cells(D.vcomp(D.unit_cell(cone.legs[0]), tp.counit),
                        D.vcomp(D.unit_cell(cone.legs[1]), tq.counit))
    lam = D.left_unitor(D.unit(P))
    inv = invert_globular(D, lam)
    if inv is None:
        raise MissingStructure("unitor is not invertible")
    delta = D.vcomp(inv, top)
    return cone, tabulator_factor(D, tpq, delta)


def test_functorial(ctx, p, q):
    _, u = comparison_to_tabulator(ctx, p, q)
    if not ctx.is_cover(u):
        return "induced arrow into the tabulator of the composite is not a cover"
    return None


def space_relations(ctx):
    D, C = ctx.D, ctx.C
    sp = InstanceSpace()
    for r in D.test_objects():
        for a in D.window:
            for b in D.window:
                pairs = []
                cone = C.product(a, b)
                if cone is None:
                    continue
                for l in C.hom(r, a):
                    for rr in C.hom(r, b):
                        u = C.lift(cone.legs, (l, rr))
                        if u is not None and ctx.in_M(u):
                            pairs.append((_a(l), _a(rr)))
                for l, rr in pairs:
                    sp.add((_o(r), l, rr))
    return sp


def test_relations_are_tabulators(ctx, r, l, rr):
    D, C = ctx.D, ctx.C
    n, xi = extend(D, l, D.unit(r), rr)
    tab = ctx.tab(n)
    eta = tabulator_factor(D, tab, xi)
    if not C.is_iso(eta):
        return f"comparison {C.describe(eta)} into the tabulator of the extension is not invertible"
    return None


def space_frobenius(ctx):
    D, C = ctx.D, ctx.C
    sp = InstanceSpace()
    for a in D.window:
        for b in D.window:
            fs = [_a(f) for f in C.hom(a, b)]
            for x in D.window:
                sp.add((), fs, [_p(m) for m in D.proarrows(b, x)], [_p(m) for m in D.proarrows(a, x)])
    return sp


def frobenius_sides(D, f, r, q):
    """r ∧ f^*⊗q and f^*⊗(f_!⊗r ∧ q) for f: A->B, r: B⇸X, q: A⇸X."""
    fs, fa = conjoint(D, f, verify=False).proarrow, companion(D, f, verify=False).proarrow
    lhs = local_product(D, r, D.hcomp(fs, q), verify=False)[0]
    inner = local_product(D, D.hcomp(fa, r), q, verify=False)[0]
    rhs = D.hcomp(fs, inner)
    return lhs, rhs


def test_frobenius(ctx, f, r, q):
    lhs, rhs = frobenius_sides(ctx.D, f, r, q)
    if not equivalent(ctx.D, lhs, rhs):
        return f"sides differ: {ctx.D.show(lhs)} vs {ctx.D.show(rhs)}"
    return None


def space_cospans(ctx):
    D, C = ctx.D, ctx.C
    sp = InstanceSpace()
    for c in D.window:
        for a in D.window:
            fs = [_a(f) for f in C.hom(a, c)]
            for b in D.window:
                sp.add((), fs, [_a(g) for g in C.hom(b, c)])
    return sp


def beck_chevalley_cell(D, f, g, p=None, q=None):
    """Composite cell p^*⊗q_! => f_!⊗g^* for a pullback square, or None if not a pullback."""
    C = D.D0
    cone = C.pullback(f, g)
    if cone is None:
        raise MissingStructure("pullback")
    if p is None:
        p, q = cone.legs
    else:
        u = C.lift(cone.legs, (p, q))
        if u is None or not C.is_iso(u):
            return None
    cp, cq = conjoint(D, p, verify=False), companion(D, q, verify=False)
    cf, cg = companion(D, f, verify=False), conjoint(D, g, verify=False)
    left = D.vcomp(cp.counit, cf.unit)
    right = D.vcomp(cq.counit, cg.unit)
    return D.hcomp_cells(left, right)


def test_beck_chevalley(ctx, f, g):
    cell = beck_chevalley_cell(ctx.D, f, g)
    if invert_globular(ctx.D, cell) is None:
        return "Beck-Chevalley cell is not invertible"
    return None


def test_covers_inclusions_proper(ctx, f):
    C = ctx.C
    if ctx.is_cover(f) and not C.is_epi(f):
        return "cover that is not an epimorphism"
    if ctx.is_inclusion(f) and not C.is_mono(f):
        return "inclusion that is not a monomorphism"
    return None


def test_idempotence(ctx, f):
    D = ctx.D
    c = companion(D, f, verify=False).proarrow
    p = local_product(D, c, c)[0]
    if not equivalent(D, p, c):
        return "companion ∧ companion is not the companion"
    return None


def space_covers(ctx):
    sp = InstanceSpace()
    sp.add((), [_a(f) for f in ctx.arrows() if ctx.is_cover(f)])
    return sp


def space_inclusions(ctx):
    sp = InstanceSpace()
    sp.add((), [_a(f) for f in ctx.arrows() if ctx.is_inclusion(f)])
    return sp


def test_cover_extension(ctx, e):
    ok, _ = is_opcartesian(ctx.D, ctx.D.unit_cell(e))
    return None if ok else "unit cell of a cover is not opcartesian"


def space_single(ctx):
    sp = InstanceSpace()
    sp.add(())
    return sp


def canonical_factorization(D, f, ctx=None):
    """f = m∘e with e into the tabulator of the cokernel and m its left leg."""
    c, xi = cokernel(D, f, verify=False)
    tab = ctx.tab(c) if ctx is not None else tabulator(D, c)
    e = tabulator_factor(D, tab, xi)
    return e, tab.left


def derive_classes(D, ctx=None):
    ctx = ctx or Context(D)
    Cw = ctx.window_category()
    mors = Cw.morphisms()
    E = [f for f in mors if ctx.is_cover(f)]
    M = [f for f in mors if ctx.is_inclusion(f)]
    return Cw, E, M


def test_derived_fs(ctx):
    D = ctx.D
    Cw, E, M = derive_classes(D, ctx)
    rep = check_factorization_system(Cw, E, M)
    if not rep.ok:
        return "derived classes fail: " + ", ".join(rep.failing())
    Es, Ms = set(E), set(M)
    for f in Cw.morphisms():
        e, m = canonical_factorization(D, f, ctx)
        if e not in Es or m not in Ms or Cw.compose(e, m) != f:
            return f"canonical factorization of {Cw.describe(f)} is not a cover then an inclusion"
    return None


class PreconditionError(ValueError):
    """A hypothesis needed for a derived construction failed in the audit."""


def derive_factorization_system(D, report=None, fs=None):
    """(covers, inclusions) on the window with the tabulator-of-cokernel factorizations.

    With an audit report attached, refuses when a hypothesis of the
    characterization failed, naming it."""
    if report is not None:
        broken = [n for n in THEOREM if n in report.verdicts and report.verdicts[n].status == "fail"]
        if broken:
            raise PreconditionError("hypotheses failed: " + ", ".join(broken))
    ctx = Context(D, fs)
    Cw, E, M = derive_classes(D, ctx)
    chosen = {}
    for f in Cw.morphisms():
        try:
            chosen[f] = canonical_factorization(D, f, ctx)
        except MissingStructure:
            pass
    from .factorization import FactorizationSystem
    return FactorizationSystem(Cw, E, M, chosen, name="derived")


def test_pullback_via_tabulator(ctx, h, e):
    D, C = ctx.D, ctx.C
    n = D.hcomp(companion(D, h, verify=False).proarrow, conjoint(D, e, verify=False).proarrow)
    tab = ctx.tab(n)
    l, r = tab.left, tab.right
    if C.compose(l, h) != C.compose(r, e):
        return "tabulator legs do not form a commuting square"
    for x in D.test_objects():
        cones = {(a, b) for a in C.hom(x, C.src(h)) for b in C.hom(x, C.src(e))
                 if C.compose(a, h) == C.compose(b, e)}
        image = [(C.compose(u, l), C.compose(u, r)) for u in C.hom(x, tab.apex)]
        if len(set(image)) != len(image) or set(image) != cones:
            return f"tabulator is not a pullback when tested against {x}"
    return None


def test_regular_inclusion(ctx, m):
    D, C = ctx.D, ctx.C
    c, xi = cokernel(D, m, verify=False)
    tab = ctx.tab(c)
    u = tabulator_factor(D, tab, xi)
    if not C.is_iso(u):
        return "inclusion is not the tabulator of its cokernel"
    return None


CONDITIONS = (
    ("unit-pure", space_parallel_arrows, test_unit_pure),
    ("equipment", space_arrows, test_equipment),
    ("cartesian", space_cartesian, test_cartesian),
    ("local-products", space_parallel_pros, test_local_products),
    ("tabulators", space_pros, test_tabulators),
    ("tabulators-strong", space_pros, test_strong),
    ("tabulators-discrete", space_pros, test_discrete),
    ("tabulators-functorial", space_composable, test_functorial),
    ("relations-are-tabulators", space_relations, test_relations_are_tabulators),
    ("frobenius", space_frobenius, test_frobenius),
    ("beck-chevalley", space_cospans, test_beck_chevalley),
    ("covers-inclusions-proper", space_arrows, test_covers_inclusions_proper),
    ("local-product-idempotence", space_arrows, test_idempotence),
    ("cover-extensions", space_covers, test_cover_extension),
    ("derived-factorization-system", space_single, test_derived_fs),
    ("pullbacks-via-tabulators", space_cospans, test_pullback_via_tabulator),
    ("regular-inclusions", space_inclusions, test_regular_inclusion),
)

CONDITION_NAMES = tuple(c[0] for c in CONDITIONS)

# the hypotheses of the characterization; the rest are derived structure
THEOREM = ("unit-pure", "equipment", "cartesian", "local-products", "tabulators",
           "tabulators-strong", "tabulators-discrete", "tabulators-functorial",
           "relations-are-tabulators", "frobenius")

# derived structure that is only meaningful when the hypotheses hold
PRECONDITIONS = {"derived-factorization-system": THEOREM}

_BY_NAME = {c[0]: c for c in CONDITIONS}


# -- running ---------------------------------------------------------------------------------------

def encode_items(D, inst):
    out = []
    for kind, value in inst:
        if kind == "arrow":
            out.append((kind, D.D0.describe(value)))
        elif kind == "pro":
            out.append((kind, D.encode_proarrow(value)))
        else:
            out.append((kind, str(value)))
    return tuple(out)


def decode_items(D, items):
    out = []
    for kind, text in items:
        if kind == "arrow":
            out.append(D.decode_arrow(text))
        elif kind == "pro":
            out.append(D.decode_proarrow(text))
        elif kind == "obj":
            out.append(D.decode_object(text))
        elif kind == "tag":
            out.append(text)
        else:
            raise ValueError(f"unknown witness item kind {kind!r}")
    return out


def _size(inst):
    """Total size of the objects an instance mentions (0 for non-numeric objects)."""
    total = 0
    for kind, v in inst:
        parts = {"arrow": ("src", "tgt"), "pro": ("src", "tgt", "apex")}.get(kind, ())
        vals = [getattr(v, a, None) for a in parts] if parts else [v]
        total += sum(x for x in vals if isinstance(x, int) and not isinstance(x, bool))
    return total


SHRINK_LIMIT = 20000


def _shrink(ctx, space, test, inst, note):
    """Greedily trade a failing instance for the smallest failing one of lower size."""
    if len(space) > SHRINK_LIMIT:
        return inst, note
    best = _size(inst)
    smaller = sorted((i for i in range(len(space)) if _size(space[i]) < best), key=lambda i: (_size(space[i]), i))
    for i in smaller:
        cand = space[i]
        try:
            n = test(ctx, *(v for _, v in cand))
        except (MissingStructure, BoundaryError):
            continue
        if n is not None:
            return cand, n
    return inst, note


def run_condition(ctx, name, budget, wid=None):
    _, space_fn, test = _BY_NAME[name]
    start = time.perf_counter()
    try:
        space = space_fn(ctx)
    except MissingStructure as exc:
        return Verdict(name, "skip", False, note=str(exc), seconds=time.perf_counter() - start)
    idx, complete = budget.choose(name, space)
    checked = skipped = 0
    for i in idx:
        inst = space[i]
        try:
            note = test(ctx, *(v for _, v in inst))
        except (MissingStructure, BoundaryError):
            skipped += 1
            continue
        checked += 1
        if note is not None:
            inst, note = _shrink(ctx, space, test, inst, note)
            w = Witness(wid or f"w-{name}", name, encode_items(ctx.D, inst), note)
            return Verdict(name, "fail", complete and skipped == 0, checked, skipped, w, note,
                           time.perf_counter() - start)
    if skipped and not checked:
        return Verdict(name, "skip", False, 0, skipped, note="required structure unavailable",
                       seconds=time.perf_counter() - start)
    note = f"{skipped} instances skipped" if skipped else ""
    return Verdict(name, "pass", complete and skipped == 0, checked, skipped, None, note,
                   time.perf_counter() - start)


def audit(D, budget=None, fs=None, conditions=None):
    budget = budget or Budget()
    ctx = Context(D, fs)
    report = AuditReport(budget=budget)
    names = conditions or CONDITION_NAMES
    for k, name in enumerate(CONDITION_NAMES):
        if name not in names:
            continue
        broken = [n for n in PRECONDITIONS.get(name, ()) if n in report.verdicts
                  and report.verdicts[n].status == "fail"]
        if broken:
            report.verdicts[name] = Verdict(name, "skip", False,
                                            note="hypothesis failed: " + ", ".join(broken))
            continue
        report.verdicts[name] = run_condition(ctx, name, budget, f"w{k + 1}")
    try:
        report.covers = [ctx.C.describe(f) for f in ctx.arrows() if ctx.is_cover(f)]
        report.inclusions = [ctx.C.describe(f) for f in ctx.arrows() if ctx.is_inclusion(f)]
    except MissingStructure:
        pass
    return report


def check(D, name, budget=None, fs=None):
    return run_condition(Context(D, fs), name, budget or Budget())


def replay_witness(D, witness, fs=None):
    """True when the recorded instance still fails its condition."""
    if witness.condition.startswith("equivalence:"):
        from .equivalence import replay_component
        return replay_component(D, witness, fs)
    _, _, test = _BY_NAME[witness.condition]
    values = decode_items(D, witness.items)
    return test(Context(D, fs), *values) is not None
