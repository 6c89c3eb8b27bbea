"""Orthogonal factorization systems on finite categories."""
from dataclasses import dataclass, field

from .category import classify_morphism, UnknownMorphism
from .finset import FinSet, sorted_factorize


class OrthogonalityViolation(ValueError):
    pass


@dataclass(frozen=True)
class LiftingSquare:
    e: object
    m: object
    top: object
    bottom: object


class FactorizationSystem:
    """Classes E (left) and M (right) with a chosen factorization.

    left/right are either finite collections or membership predicates.
    """

    def __init__(self, category, left, right, chosen=None, name=None):
        self.category = category
        self._left = left if callable(left) else frozenset(left)
        self._right = right if callable(right) else frozenset(right)
        self._chosen = dict(chosen or {})
        self._chooser = None
        self.name = name

    def in_left(self, f):
        return self._left(f) if callable(self._left) else f in self._left

    def in_right(self, f):
        return self._right(f) if callable(self._right) else f in self._right

    def left(self):
        C = self.category
        return frozenset(f for f in C.morphisms() if self.in_left(f))

    def right(self):
        C = self.category
        return frozenset(f for f in C.morphisms() if self.in_right(f))

    def factorize(self, f):
        if f in self._chosen:
            return self._chosen[f]
        if self._chooser is not None:
            out = self._chooser(f)
        else:
            out = search_factorization(self.category, self.in_left, self.in_right, f)
            if out is None:
                raise UnknownMorphism(f"no factorization of {f}")
        self._chosen[f] = out
        return out

    def chosen(self):
        return {f: self.factorize(f) for f in self.category.morphisms()}


def epimono(C=None):
    """(surjections, injections) on a finite-set skeleton."""
    C = C if C is not None else FinSet()
    fs = FactorizationSystem(C, lambda f: f.surjective(), lambda f: f.injective(), name="epimono")
    fs._chooser = sorted_factorize
    return fs


def search_factorization(C, in_left, in_right, f):
    """Canonical factorization: least middle object, then least m, then least e.

    Comparing m first makes f = id∘f whenever f is itself in E.
    """
    a, b = C.src(f), C.tgt(f)
    for x in C.objects:
        best = None
        for m in C.hom(x, b):
            if not in_right(m):
                continue
            for e in C.hom(a, x):
                if in_left(e) and C.compose(e, m) == f:
                    cand = (C.key(m), C.key(e))
                    if best is None or cand < best[0]:
                        best = (cand, (e, m))
        if best is not None:
            return best[1]
    return None


def factorize(C, FS, f):
    return FS.factorize(f)


def fillers(C, square):
    e, m = square.e, square.m
    return [d for d in C.hom(C.tgt(e), C.src(m))
            if C.compose(e, d) == square.top and C.compose(d, m) == square.bottom]


def fill_diagonal(C, FS, square):
    if C.compose(square.top, square.m) != C.compose(square.e, square.bottom):
        raise OrthogonalityViolation(f"square does not commute: {square}")
    found = fillers(C, square)
    if len(found) != 1:
        raise OrthogonalityViolation(f"{len(found)} diagonal fillers for {square}")
    return found[0]


@dataclass
class Clause:
    ok: bool = True
    witnesses: list = field(default_factory=list)

    def fail(self, w):
        self.ok = False
        self.witnesses.append(w)


CLAUSES = ("existence", "uniqueness", "orthogonality", "closure", "stability", "properness")


@dataclass
class FsReport:
    clauses: dict

    @property
    def ok(self):
        return all(c.ok for c in self.clauses.values())

    def failing(self):
        return [n for n in CLAUSES if not self.clauses[n].ok]

    def __str__(self):
        lines = []
        for n in CLAUSES:
            c = self.clauses[n]
            w = "" if c.ok else f"  witness {_show(c.witnesses[0])}"
            lines.append(f"{n:14s} {'pass' if c.ok else 'fail'}{w}")
        return "\n".join(lines)


def _show(w):
    if isinstance(w, tuple):
        return "(" + ", ".join(_show(x) for x in w) + ")"
    return str(w)


def _factorizations(C, E, M, f):
    a, b = C.src(f), C.tgt(f)
    out = []
    for x in C.objects:
        for e in C.hom(a, x):
            if e not in E:
                continue
            for m in C.hom(x, b):
                if m in M and C.compose(e, m) == f:
                    out.append((x, e, m))
    return out


def _non_unique(C, facs):
    for x, e, m in facs:
        for y, e2, m2 in facs:
            isos = [u for u in C.hom(x, y) if C.is_iso(u)
                    and C.compose(e, u) == e2 and C.compose(u, m2) == m]
            if len(isos) != 1:
                return ((e, m), (e2, m2))
    return None


def check_factorization_system(C, E, M):
    E, M = frozenset(E), frozenset(M)
    mors = C.morphisms()
    known = set(mors)
    for f in E | M:
        if f not in known:
            raise UnknownMorphism(f)
    rep = {n: Clause() for n in CLAUSES}

    # existence and uniqueness up to unique iso
    for f in mors:
        facs = _factorizations(C, E, M, f)
        if not facs:
            rep["existence"].fail(f)
            continue
        bad = _non_unique(C, facs)
        if bad:
            rep["uniqueness"].fail((f,) + bad)

    # orthogonality: every lifting square has exactly one filler
    for e in sorted(E, key=C.key):
        a, c = C.src(e), C.tgt(e)
        for m in sorted(M, key=C.key):
            b, d = C.src(m), C.tgt(m)
            count = {}
            for k in C.hom(c, b):
                t = (C.compose(e, k), C.compose(k, m))
                count[t] = count.get(t, 0) + 1
            by_diag = {}
            for bot in C.hom(c, d):
                by_diag.setdefault(C.compose(e, bot), []).append(bot)
            for top in C.hom(a, b):
                for bot in by_diag.get(C.compose(top, m), ()):
                    n = count.get((top, bot), 0)
                    if n != 1:
                        rep["orthogonality"].fail((LiftingSquare(e, m, top, bot), n))

    # closure under composition, isos in both classes
    for cls, name in ((E, "E"), (M, "M")):
        ordered = sorted(cls, key=C.key)
        for f in ordered:
            for g in ordered:
                if C.tgt(f) == C.src(g) and C.compose(f, g) not in cls:
                    rep["closure"].fail((name, f, g))
    for f in mors:
        if C.is_iso(f) and (f not in E or f not in M):
            rep["closure"].fail(("iso", f))

    # stability of E under the pullbacks that exist
    for e in sorted(E, key=C.key):
        for a in C.objects:
            for h in C.hom(a, C.tgt(e)):
                cone = C.pullback(h, e)
                if cone is not None and cone.legs[0] not in E:
                    rep["stability"].fail((e, h, cone.legs[0]))

    # properness
    for f in sorted(E, key=C.key):
        if not classify_morphism(C, f)["epi"]:
            rep["properness"].fail(f)
    for f in sorted(M, key=C.key):
        if not classify_morphism(C, f)["mono"]:
            rep["properness"].fail(f)

    return FsReport(rep)
