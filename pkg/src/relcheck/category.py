"""Finite categories given by tables, plus limit search by universal property."""
from dataclasses import dataclass, field
from itertools import product as cartesian


class BoundaryError(ValueError):
    """Two morphisms that do not compose, or a cell whose edges do not line up."""


class UnknownMorphism(KeyError):
    pass


class MissingStructure(LookupError):
    """A limit, composite or other piece of structure is not available."""


class CategoryError(ValueError):
    """A table that fails the category axioms."""


@dataclass(frozen=True)
class Product:
    a: object
    b: object

    def __str__(self):
        return f"product({self.a},{self.b})"


@dataclass(frozen=True)
class Pullback:
    f: object
    g: object

    def __str__(self):
        return f"pullback({self.f},{self.g})"


@dataclass(frozen=True)
class Terminal:
    def __str__(self):
        return "terminal"


@dataclass(frozen=True)
class LimitCone:
    apex: object
    legs: tuple
    diagram: object = None


class Category:
    """Shared algorithms. Subclasses supply objects, hom, src, tgt, identity, compose.

    compose(f, g) is g∘f: first f, then g.
    """

    objects = ()

    # -- generic derived structure ------------------------------------------
    def morphisms(self):
        out = []
        for a in self.objects:
            for b in self.objects:
                out.extend(self.hom(a, b))
        return out

    def key(self, f):
        return f

    def is_iso(self, f):
        return self.inverse(f) is not None

    def inverse(self, f):
        a, b = self.src(f), self.tgt(f)
        for g in self.hom(b, a):
            if self.compose(f, g) == self.identity(a) and self.compose(g, f) == self.identity(b):
                return g
        return None

    def is_mono(self, f):
        return classify_morphism(self, f)["mono"]

    def is_epi(self, f):
        return classify_morphism(self, f)["epi"]

    def product(self, a, b):
        return find_limit(self, Product(a, b))

    def pullback(self, f, g):
        return find_limit(self, Pullback(f, g))

    def terminal(self):
        return find_limit(self, Terminal())

    def solve_post(self, q, p, constraints, limit=None):
        """All u: q -> p with leg∘u == value for each (leg, value)."""
        out = []
        for u in self.hom(q, p):
            if all(self.compose(u, leg) == value for leg, value in constraints):
                out.append(u)
                if limit and len(out) >= limit:
                    break
        return out

    def solve_pre(self, e, value, limit=None):
        """All t: tgt(e) -> tgt(value) with t∘e == value."""
        out = []
        for t in self.hom(self.tgt(e), self.tgt(value)):
            if self.compose(e, t) == value:
                out.append(t)
                if limit and len(out) >= limit:
                    break
        return out

    def lift(self, legs, values):
        """The unique arrow into a jointly monic cone, or None."""
        q = self.src(values[0])
        p = self.src(legs[0])
        found = self.solve_post(q, p, list(zip(legs, values)), limit=2)
        return found[0] if len(found) == 1 else None

    def pair(self, cone, f, g):
        return self.lift(cone.legs, (f, g))

    def describe(self, f):
        return str(f)

    def parse_arrow(self, text):
        for f in self.morphisms():
            if self.describe(f) == text:
                return f
        raise UnknownMorphism(text)

    def parse_object(self, text):
        for a in self.objects:
            if str(a) == text:
                return a
        raise KeyError(text)


class TableCategory(Category):
    """A category stored as explicit tables of string ids."""

    def __init__(self, objects, morphisms, identity, composition, validate=True):
        # morphisms: {id: (src, tgt)} in order; composition: {(g, f): h}
        self.objects = tuple(objects)
        self._mor = dict(morphisms)
        self._order = {m: i for i, m in enumerate(self._mor)}
        self._ident = dict(identity)
        self._comp = {(f, g): h for (g, f), h in composition.items()}
        self._hom = {(a, b): [] for a in self.objects for b in self.objects}
        for m, (a, b) in self._mor.items():
            if (a, b) not in self._hom:
                raise CategoryError(f"morphism {m} has unknown endpoint")
            self._hom[(a, b)].append(m)
        self._hom = {k: tuple(v) for k, v in self._hom.items()}
        if validate:
            self.validate()

    def hom(self, a, b):
        return self._hom.get((a, b), ())

    def morphisms(self):
        return list(self._mor)

    def key(self, f):
        return self._order[f]

    def src(self, f):
        try:
            return self._mor[f][0]
        except KeyError:
            raise UnknownMorphism(f) from None

    def tgt(self, f):
        try:
            return self._mor[f][1]
        except KeyError:
            raise UnknownMorphism(f) from None

    def identity(self, a):
        return self._ident[a]

    def compose(self, f, g):
        try:
            return self._comp[(f, g)]
        except KeyError:
            if f not in self._mor:
                raise UnknownMorphism(f) from None
            if g not in self._mor:
                raise UnknownMorphism(g) from None
            raise BoundaryError(f"{g} after {f}: target of {f} is not the source of {g}") from None

    def composition_table(self):
        """{(g, f): g∘f}"""
        return {(g, f): h for (f, g), h in self._comp.items()}

    def validate(self):
        for a in self.objects:
            i = self._ident.get(a)
            if i is None or self._mor.get(i) != (a, a):
                raise CategoryError(f"object {a} has no identity")
        for (f, g), h in self._comp.items():
            if f not in self._mor or g not in self._mor or h not in self._mor:
                raise CategoryError(f"composition mentions an unknown id: {g} {f} = {h}")
            if self._mor[f][1] != self._mor[g][0]:
                raise CategoryError(f"composite {g}∘{f} is not composable")
            if self._mor[h] != (self._mor[f][0], self._mor[g][1]):
                raise CategoryError(f"{g}∘{f} = {h} has the wrong boundary")
        for f, (a, b) in self._mor.items():
            for g in self.morphisms():
                if self._mor[g][0] == b and (f, g) not in self._comp:
                    raise CategoryError(f"composite {g}∘{f} missing")
            if self._comp.get((self._ident[a], f)) != f or self._comp.get((f, self._ident[b])) != f:
                raise CategoryError(f"identity law fails at {f}")
        for (f, g), fg in self._comp.items():
            for h in self.hom_from(self._mor[g][1]):
                if self._comp[(fg, h)] != self._comp[(f, self._comp[(g, h)])]:
                    raise CategoryError(f"associativity fails at {h},{g},{f}")

    def hom_from(self, a):
        return [m for m, (s, _) in self._mor.items() if s == a]


def compose(C, f, g):
    return C.compose(f, g)


def as_table(C):
    """Copy any finite category into a TableCategory with string ids."""
    name = {}
    mors = {}
    for f in C.morphisms():
        s = C.describe(f)
        name[f] = s
        mors[s] = (str(C.src(f)), str(C.tgt(f)))
    objs = [str(a) for a in C.objects]
    ident = {str(a): name[C.identity(a)] for a in C.objects}
    comp = {}
    for f in C.morphisms():
        for g in C.morphisms():
            if C.tgt(f) == C.src(g):
                comp[(name[g], name[f])] = name[C.compose(f, g)]
    return TableCategory(objs, mors, ident, comp, validate=False)


# -- limits -------------------------------------------------------------------

def _cones(C, diagram, x):
    if isinstance(diagram, Terminal):
        return [()]
    if isinstance(diagram, Product):
        return list(cartesian(C.hom(x, diagram.a), C.hom(x, diagram.b)))
    f, g = diagram.f, diagram.g
    return [(u, v) for u in C.hom(x, C.src(f)) for v in C.hom(x, C.src(g))
            if C.compose(u, f) == C.compose(v, g)]


def _restrict(C, legs, u):
    return tuple(C.compose(u, leg) for leg in legs)


def is_limit(C, cone, diagram=None):
    """Re-check the universal property against every object of C."""
    diagram = diagram if diagram is not None else cone.diagram
    if tuple(cone.legs) not in set(_cones(C, diagram, cone.apex)):
        return False
    for x in C.objects:
        target = _cones(C, diagram, x)
        seen = set()
        for u in C.hom(x, cone.apex):
            seen.add(_restrict(C, cone.legs, u))
        if len(seen) != len(C.hom(x, cone.apex)) or seen != set(target):
            return False
    return True


def find_limit(C, diagram):
    """Least apex, then lexicographically least legs; None when absent."""
    counts = {x: len(_cones(C, diagram, x)) for x in C.objects}
    for p in C.objects:
        if any(len(C.hom(x, p)) != counts[x] for x in C.objects):
            continue
        candidates = sorted(_cones(C, diagram, p), key=lambda legs: [C.key(l) for l in legs])
        for legs in candidates:
            ok = True
            for x in C.objects:
                images = {_restrict(C, legs, u) for u in C.hom(x, p)}
                if len(images) != counts[x]:
                    ok = False
                    break
            if ok:
                return LimitCone(p, tuple(legs), diagram)
    return None


def classify_morphism(C, f, witness=False):
    a, b = C.src(f), C.tgt(f)
    mono, epi = True, True
    mono_w = epi_w = None
    for x in C.objects:
        seen = {}
        for u in C.hom(x, a):
            k = C.compose(u, f)
            if k in seen:
                mono, mono_w = False, (seen[k], u)
                break
            seen[k] = u
        if not mono:
            break
    for y in C.objects:
        seen = {}
        for v in C.hom(b, y):
            k = C.compose(f, v)
            if k in seen:
                epi, epi_w = False, (seen[k], v)
                break
            seen[k] = v
        if not epi:
            break
    out = {"mono": mono, "epi": epi, "iso": C.inverse(f) is not None}
    if witness:
        out["mono_witness"] = mono_w
        out["epi_witness"] = epi_w
    return out
