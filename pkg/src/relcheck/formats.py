"""Line-oriented text formats.

.fcat    finite category: object / morphism / identity / compose lines
.fs      factorization system: left: / right: / factor lines, or the alias epimono
.dblcat  double category, either span-presented over finite sets or fully explicit
.dblrep  audit report: one record per condition plus replayable witness blocks
"""
from dataclasses import dataclass
import os
import re

from .audit import AuditReport, Budget, Verdict, Witness, CONDITION_NAMES
from .category import TableCategory, CategoryError, UnknownMorphism
from .factorization import FactorizationSystem, epimono
from .finset import FinSet, fn
from .spans import Proarrow, SpanDouble
from .table import SpanTable, TableDouble, auto_compositions, _span_compose


class ParseError(ValueError):
    def __init__(self, message, source="<input>", line=None):
        self.source, self.line, self.message = source, line, message
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


_FINSET = re.compile(r"^\s*finset\(\s*(\d+)\s*\)\s*$")


def _read(spec):
    """(text, name) from a path or from literal text."""
    if "\n" not in spec and os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return fh.read(), spec
    return spec, "<input>"


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


# -- .fcat ----------------------------------------------------------------------------------------

_MOR = re.compile(r"^morphism\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_IDENT = re.compile(r"^identity\s+(\S+)\s*=\s*(\S+)$")
_COMP = re.compile(r"^compose\s+(\S+)\s+(\S+)\s*=\s*(\S+)$")


class _CategoryLines:
    """Accumulates object / morphism / identity / compose lines."""

    def __init__(self, source):
        self.source = source
        self.objects, self.mors, self.ident, self.comp = [], {}, {}, {}
        self.where = {}

    def take(self, no, line):
        err = lambda msg: ParseError(msg, self.source, no)
        if line.startswith("object"):
            parts = line.split()
            if len(parts) != 2:
                raise err("expected: object <name>")
            if parts[1] in self.objects:
                raise err(f"object {parts[1]} declared twice")
            self.objects.append(parts[1])
            return True
        if line.startswith("morphism"):
            m = _MOR.match(line)
            if not m:
                raise err("expected: morphism <name> : <src> -> <tgt>")
            name, a, b = m.groups()
            if name in self.mors:
                raise err(f"morphism {name} declared twice")
            for o in (a, b):
                if o not in self.objects:
                    raise err(f"unknown object {o}")
            self.mors[name] = (a, b)
            return True
        if line.startswith("identity"):
            m = _IDENT.match(line)
            if not m:
                raise err("expected: identity <object> = <morphism>")
            a, name = m.groups()
            if a not in self.objects:
                raise err(f"unknown object {a}")
            if self.mors.get(name) != (a, a):
                raise err(f"{name} is not an endomorphism of {a}")
            self.ident[a] = name
            return True
        if line.startswith("compose"):
            m = _COMP.match(line)
            if not m:
                raise err("expected: compose <g> <f> = <h>")
            g, f, h = m.groups()
            for x in (g, f, h):
                if x not in self.mors:
                    raise err(f"unknown morphism {x}")
            if self.mors[f][1] != self.mors[g][0]:
                raise err(f"{g} and {f} are not composable")
            self.comp[(g, f)] = h
            self.where[(g, f)] = no
            return True
        return False

    def build(self):
        for a in self.objects:
            if a not in self.ident:
                raise ParseError(f"object {a} has no identity", self.source)
        comp = dict(self.comp)
        # identity laws are implied; only the non-trivial composites need listing
        for f, (a, b) in self.mors.items():
            comp.setdefault((self.ident[b], f), f)
            comp.setdefault((f, self.ident[a]), f)
        try:
            return TableCategory(self.objects, self.mors, self.ident, comp)
        except CategoryError as exc:
            raise ParseError(str(exc), self.source) from None


def parse_category(spec, max_size=None):
    """A .fcat path or text, or the literal finset(N)."""
    m = _FINSET.match(spec)
    if m:
        n = int(m.group(1))
        if max_size is not None and n > max_size:
            raise ParseError(f"exceeds the size budget {max_size}", spec)
        return FinSet(n)
    text, source = _read(spec)
    acc = _CategoryLines(source)
    for no, line in _lines(text):
        if not acc.take(no, line):
            raise ParseError(f"unrecognized line: {line}", source, no)
    return acc.build()


def _category_lines(C):
    out = [f"object {a}" for a in C.objects]
    out += [f"morphism {f} : {C.src(f)} -> {C.tgt(f)}" for f in C.morphisms()]
    out += [f"identity {a} = {C.identity(a)}" for a in C.objects]
    idents = {C.identity(a) for a in C.objects}
    for f in C.morphisms():
        for g in C.morphisms():
            if C.tgt(f) == C.src(g) and f not in idents and g not in idents:
                out.append(f"compose {g} {f} = {C.compose(f, g)}")
    return out


def emit_category(C):
    if isinstance(C, FinSet):
        return f"finset({C.max_size})\n"
    return "\n".join(_category_lines(C)) + "\n"


# -- .fs ------------------------------------------------------------------------------------------

_FACTOR = re.compile(r"^factor\s+(\S+)\s*=\s*(\S+)\s*;\s*(\S+)$")


def parse_fs(spec, C):
    """A .fs path or text against the category C; 'epimono' needs a finset(N) category."""
    if spec.strip() == "epimono":
        if not isinstance(C, FinSet):
            raise ParseError("epimono is only defined on finset(N) categories", spec)
        return epimono(C)
    text, source = _read(spec)
    if text.strip() == "epimono":
        return parse_fs("epimono", C)

    def arrow(name, no):
        try:
            return C.parse_arrow(name)
        except (UnknownMorphism, KeyError, ValueError):
            raise ParseError(f"unknown morphism {name}", source, no) from None

    left, right, chosen = [], [], {}
    for no, line in _lines(text):
        if line.startswith("left:") or line.startswith("right:"):
            side, _, rest = line.partition(":")
            target = left if side == "left" else right
            target.extend(arrow(x, no) for x in rest.split())
            continue
        m = _FACTOR.match(line)
        if m:
            f, e, mm = (arrow(x, no) for x in m.groups())
            if C.compose(e, mm) != f:
                raise ParseError(f"{m.group(3)} after {m.group(2)} is not {m.group(1)}", source, no)
            chosen[f] = (e, mm)
            continue
        raise ParseError(f"unrecognized line: {line}", source, no)
    return FactorizationSystem(C, left, right, chosen or None, name=source)


def emit_fs(fs, C=None):
    C = C or fs.category
    if fs.name == "epimono" and isinstance(C, FinSet):
        return "epimono\n"
    left = " ".join(C.describe(f) for f in C.morphisms() if fs.in_left(f))
    right = " ".join(C.describe(f) for f in C.morphisms() if fs.in_right(f))
    out = [f"left: {left}", f"right: {right}"]
    for f in C.morphisms():
        e, m = fs.factorize(f)
        out.append(f"factor {C.describe(f)} = {C.describe(e)} ; {C.describe(m)}")
    return "\n".join(out) + "\n"


# -- .dblcat ------------------------------------------------------------------------------------------

def parse_double(spec):
    text, source = _read(spec)
    lines = list(_lines(text))
    if not lines or not lines[0][1].startswith("mode"):
        raise ParseError("first line must be: mode span | mode explicit", source, lines[0][0] if lines else None)
    mode = lines[0][1].split()
    if mode == ["mode", "span"]:
        return _parse_span(lines[1:], source)
    if mode == ["mode", "explicit"]:
        return _parse_explicit(lines[1:], source)
    raise ParseError("unknown mode", source, lines[0][0])


_SPANDEF = re.compile(r"^(proarrow|extra)\s+(\S+)\s*=\s*(span\s+.*)$")
_HCOMP_SPAN = re.compile(r"^hcomp\s+(\S+)\s+(\S+)\s*=\s*(\S+)\s+via\s+(\S+)$")


def _parse_span(lines, source):
    D0 = FinSet(None)
    window = objects = None
    named, listed, extra, comps = {}, [], [], []
    auto = False
    for no, line in lines:
        err = lambda msg: ParseError(msg, source, no)
        head = line.split()[0]
        if head == "base":
            if line.split()[1:] != ["finset"]:
                raise err("span mode supports only: base finset")
        elif head in ("window", "objects"):
            try:
                vals = tuple(int(x) for x in line.split()[1:])
            except ValueError:
                raise err(f"{head} takes object sizes") from None
            if head == "window":
                window = vals
            else:
                objects = vals
        elif head in ("proarrow", "extra"):
            m = _SPANDEF.match(line)
            if not m:
                raise err(f"expected: {head} <name> = span <a> <b> <apex> <left> <right>")
            kind, name, body = m.groups()
            if name in named:
                raise err(f"proarrow {name} declared twice")
            try:
                p = SpanDouble(D0, ()).decode_proarrow(body)
            except ValueError as exc:
                raise err(str(exc)) from None
            named[name] = p
            (listed if kind == "proarrow" else extra).append(p)
        elif head == "hcomp":
            if line == "hcomp auto":
                auto = True
                continue
            m = _HCOMP_SPAN.match(line)
            if not m:
                raise err("expected: hcomp <m> <n> = <k> via <arrow> or hcomp auto")
            comps.append((no,) + m.groups())
        else:
            raise err(f"unrecognized line: {line}")
    if window is None:
        raise ParseError("missing window line", source)
    for p in listed + extra:
        if p.src not in window or p.tgt not in window:
            raise ParseError(f"proarrow {p} has an endpoint outside the window", source)
    table = {}
    if auto:
        table, new = auto_compositions(D0, listed)
        known = set(listed) | set(extra)
        extra += [k for k in new if k not in known]
    for no, a, b, c, e in comps:
        try:
            m, n, k = named[a], named[b], named[c]
        except KeyError as exc:
            raise ParseError(f"unknown proarrow {exc.args[0]}", source, no) from None
        if m.tgt != n.src:
            raise ParseError(f"{a} and {b} are not composable", source, no)
        try:
            ea = fn(e)
        except ValueError as exc:
            raise ParseError(str(exc), source, no) from None
        cone = D0.pullback(m.right, n.left)
        if (ea.src, ea.tgt) != (cone.apex, k.apex) \
                or D0.compose(ea, k.left) != D0.compose(cone.legs[0], m.left) \
                or D0.compose(ea, k.right) != D0.compose(cone.legs[1], n.right):
            raise ParseError(f"{e} does not map the pullback onto {c}", source, no)
        table[(m, n)] = (k, ea)
    names = {p: name for name, p in named.items()}
    return SpanTable(D0, window, objects if objects is not None else window, listed, table, extra, names)


def emit_span(D):
    """Span-mode text; composites are written as 'hcomp auto' when they agree with it."""
    names = dict(D.names)
    for i, p in enumerate(D.listed):
        names.setdefault(p, f"p{i}")
    for i, p in enumerate(D.extra):
        names.setdefault(p, f"x{i}")
    out = ["mode span", "base finset",
           "window " + " ".join(map(str, D.window)),
           "objects " + " ".join(map(str, D.objects))]
    out += [f"proarrow {names[p]} = {D.encode_proarrow(p)}" for p in D.listed]
    auto, new = auto_compositions(D.D0, D.listed)
    if auto == D.compositions:
        out += [f"extra {names[p]} = {D.encode_proarrow(p)}" for p in D.extra if p not in set(new)]
        out.append("hcomp auto")
    else:
        out += [f"extra {names[p]} = {D.encode_proarrow(p)}" for p in D.extra]
        for (m, n), (k, e) in D.compositions.items():
            out.append(f"hcomp {names[m]} {names[n]} = {names[k]} via {e}")
    return "\n".join(out) + "\n"


_EXPLICIT = {
    "proarrow": re.compile(r"^proarrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$"),
    "cell": re.compile(r"^cell\s+(\S+)\s*:\s*(\S+)\s*=>\s*(\S+)\s+over\s+(\S+)\s*,\s*(\S+)$"),
    "vcomp": re.compile(r"^vcomp\s+(\S+)\s+(\S+)\s*=\s*(\S+)$"),
    "hcomp": re.compile(r"^hcomp\s+(\S+)\s+(\S+)\s*=\s*(\S+)$"),
    "hcell": re.compile(r"^hcell\s+(\S+)\s+(\S+)\s*=\s*(\S+)$"),
    "unit": re.compile(r"^unit\s+(\S+)\s*=\s*(\S+)$"),
    "unitcell": re.compile(r"^unitcell\s+(\S+)\s*=\s*(\S+)$"),
    "idcell": re.compile(r"^idcell\s+(\S+)\s*=\s*(\S+)$"),
    "assoc": re.compile(r"^assoc\s+(\S+)\s+(\S+)\s+(\S+)\s*=\s*(\S+)$"),
    "lunitor": re.compile(r"^lunitor\s+(\S+)\s*=\s*(\S+)$"),
    "runitor": re.compile(r"^runitor\s+(\S+)\s*=\s*(\S+)$"),
    "thin": re.compile(r"^thin\s+(yes|no)$"),
}


# line head -> (table, key, value) from the regex groups
_EXPLICIT_ENTRY = {
    "proarrow": lambda g: ("pro", g[0], (g[1], g[2])),
    "cell": lambda g: ("cells", g[0], g[1:]),
    "vcomp": lambda g: ("vertical", (g[0], g[1]), g[2]),
    "hcomp": lambda g: ("horizontal", (g[0], g[1]), g[2]),
    "hcell": lambda g: ("hcells", (g[0], g[1]), g[2]),
    "unit": lambda g: ("units", g[0], g[1]),
    "unitcell": lambda g: ("unit_cells", g[0], g[1]),
    "idcell": lambda g: ("id_cells", g[0], g[1]),
    "assoc": lambda g: ("assoc", g[:3], g[3]),
    "lunitor": lambda g: ("lu", g[0], g[1]),
    "runitor": lambda g: ("ru", g[0], g[1]),
}


def _parse_explicit(lines, source):
    cat = _CategoryLines(source)
    t = {k: {} for k in ("pro", "cells", "vertical", "horizontal", "hcells", "units",
                         "unit_cells", "id_cells", "assoc", "lu", "ru")}
    thin = False
    at = {}           # (table, key) -> line number, for error positions
    body = []
    for no, line in lines:
        if cat.take(no, line):
            continue
        body.append((no, line))
    C = cat.build()
    for no, line in body:
        head = line.split()[0]
        rx = _EXPLICIT.get(head)
        m = rx.match(line) if rx else None
        if not m:
            raise ParseError(f"unrecognized line: {line}", source, no)
        g = m.groups()
        if head == "thin":
            thin = g[0] == "yes"
            continue
        key, k, v = _EXPLICIT_ENTRY[head](g)
        t[key][k] = v
        at[(key, k)] = no
    _check_refs(C, t, source, at)
    D = TableDouble(C, t["pro"], t["cells"], t["vertical"], t["horizontal"], t["hcells"],
                    t["units"], t["unit_cells"], t["id_cells"], t["assoc"], t["lu"], t["ru"], thin)
    try:
        D.validate()
    except CategoryError as exc:
        raise ParseError(str(exc), source) from None
    return D


def _check_refs(C, t, source, at):
    objs, mors = set(C.objects), set(C.morphisms())
    pros, cells = set(t["pro"]), set(t["cells"])
    for p, (a, b) in t["pro"].items():
        if a not in objs or b not in objs:
            raise ParseError(f"proarrow {p} has an unknown endpoint", source, at.get(("pro", p)))
    for c, (s, tt, f, g) in t["cells"].items():
        if s not in pros or tt not in pros or f not in mors or g not in mors:
            raise ParseError(f"cell {c} mentions an unknown id", source, at.get(("cells", c)))
    checks = (("vertical", cells, cells), ("hcells", cells, cells), ("horizontal", pros, pros),
              ("units", objs, pros), ("unit_cells", mors, cells), ("id_cells", pros, cells),
              ("lu", pros, cells), ("ru", pros, cells), ("assoc", pros, cells))
    for key, dom, cod in checks:
        for k, v in t[key].items():
            ks = k if isinstance(k, tuple) else (k,)
            if any(x not in dom for x in ks) or v not in cod:
                raise ParseError(f"{key} entry {k} = {v} mentions an unknown id", source, at.get((key, k)))


def emit_explicit(D):
    out = ["mode explicit"] + _category_lines(D.D0)
    out.append("thin yes" if D.thin else "thin no")
    out += [f"proarrow {p} : {a} -> {b}" for p, (a, b) in D.pro.items()]
    out += [f"cell {c} : {s} => {t} over {f} , {g}" for c, (s, t, f, g) in D.cell_table.items()]
    out += [f"vcomp {a} {b} = {c}" for (a, b), c in D.vertical.items()]
    out += [f"hcomp {a} {b} = {c}" for (a, b), c in D.horizontal.items()]
    out += [f"hcell {a} {b} = {c}" for (a, b), c in D.hcells.items()]
    out += [f"unit {a} = {p}" for a, p in D.units.items()]
    out += [f"unitcell {f} = {c}" for f, c in D.unit_cells.items()]
    out += [f"idcell {p} = {c}" for p, c in D.id_cells.items()]
    out += [f"assoc {a} {b} {c} = {d}" for (a, b, c), d in D.associators.items()]
    out += [f"lunitor {p} = {c}" for p, c in D.lunitors.items()]
    out += [f"runitor {p} = {c}" for p, c in D.runitors.items()]
    return "\n".join(out) + "\n"


def emit_double(D):
    if isinstance(D, SpanTable):
        return emit_span(D)
    if isinstance(D, TableDouble):
        return emit_explicit(D)
    raise TypeError(f"no file format for {type(D).__name__}")


def double_key(D):
    """Structural content of a table-presented double category, for round-trip checks."""
    if isinstance(D, SpanTable):
        return ("span", D.window, D.objects, tuple(D.listed), frozenset(D.extra),
                frozenset(D.compositions.items()))
    C = D.D0
    cat = (tuple(C.objects), tuple((f, C.src(f), C.tgt(f)) for f in C.morphisms()),
           frozenset(C.composition_table().items()))
    tabs = tuple(frozenset(x.items()) for x in (
        D.pro, D.cell_table, D.vertical, D.horizontal, D.hcells, D.units, D.unit_cells,
        D.id_cells, D.associators, D.lunitors, D.runitors))
    return ("explicit", cat, D.thin) + tabs


# -- .dblrep ----------------------------------------------------------------------------------------

def _yn(b):
    return "yes" if b else "no"


def emit_report(report, fmt="dblrep"):
    return emit_dblrep(report) if fmt == "dblrep" else emit_text(report)


def _equivalence_witnesses(report):
    eq = report.equivalence
    if eq is None:
        return []
    return [w for w in eq.witnesses if w is not None]


def emit_dblrep(report):
    b = report.budget or Budget()
    out = [f"budget exhaustive={_yn(b.exhaustive)} samples={b.samples} seed={b.seed}"]
    for name, v in report.verdicts.items():
        wid = v.witness.id if v.witness else "-"
        out.append(f"condition={name} verdict={v.status} exhaustive={_yn(v.exhaustive)} witness={wid}")
    if report.covers is not None:
        out.append("covers " + " ".join(report.covers))
        out.append("inclusions " + " ".join(report.inclusions))
    eq = report.equivalence
    if eq is not None:
        out.append(f"equivalence verdict={'pass' if eq.ok else 'fail'} exhaustive={_yn(eq.exhaustive)} "
                   f"explained-by={','.join(eq.explained_by) or '-'}")
        for name, c in eq.components.items():
            wid = c.witness.id if c.witness else "-"
            out.append(f"component={name} verdict={c.status} exhaustive={_yn(c.exhaustive)} witness={wid}")
    for w in list(report.witnesses()) + _equivalence_witnesses(report):
        out.append(f"[witness {w.id}]")
        out.append(f"condition {w.condition}")
        out.append(f"note {w.note}")
        out += [f"{kind} {text}" for kind, text in w.items]
        out.append("[end]")
    return "\n".join(out) + "\n"


def emit_text(report):
    out = []
    for name, v in report.verdicts.items():
        extra = f" ({v.note})" if v.note else ""
        scope = "exhaustive" if v.exhaustive else f"{v.checked} checked, {v.skipped} skipped"
        out.append(f"{name:30s} {v.status.upper():5s} {scope}{extra}")
        if v.witness:
            for kind, text in v.witness.items:
                out.append(f"    {kind} {text}")
    if report.covers is not None:
        out.append("covers:     " + " ".join(report.covers))
        out.append("inclusions: " + " ".join(report.inclusions))
    eq = report.equivalence
    if eq is not None:
        why = ", ".join(eq.explained_by) or "-"
        out.append(f"equivalence {'PASS' if eq.ok else 'FAIL'} (explained by: {why})")
        for name, c in eq.components.items():
            note = f" ({c.note})" if c.note else ""
            out.append(f"    {name:20s} {c.status.upper():5s}{note}".rstrip())
    return "\n".join(out) + "\n"


_RECORD = re.compile(r"^(condition|component)=(\S+) verdict=(pass|fail|skip) exhaustive=(yes|no) witness=(\S+)$")
_BUDGET = re.compile(r"^budget exhaustive=(yes|no) samples=(\d+) seed=(-?\d+)$")
_EQLINE = re.compile(r"^equivalence verdict=(pass|fail) exhaustive=(yes|no) explained-by=(\S+)$")


@dataclass
class ParsedEquivalence:
    ok: bool
    exhaustive: bool
    explained_by: list
    components: dict
    witnesses: list


def parse_report(spec):
    """Inverse of emit_dblrep."""
    from .equivalence import ComponentResult
    text, source = _read(spec)
    report = AuditReport(budget=Budget())
    witnesses, pending, comps = {}, [], {}
    eq_line = None
    block = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\n")
        if not line.strip() or (block is None and line.startswith("#")):
            continue
        if block is not None:
            if line == "[end]":
                witnesses[block["id"]] = Witness(block["id"], block["condition"], tuple(block["items"]), block["note"])
                block = None
                continue
            kind, _, rest = line.partition(" ")
            if kind == "condition":
                block["condition"] = rest
            elif kind == "note":
                block["note"] = rest
            else:
                block["items"].append((kind, rest))
            continue
        m = re.match(r"^\[witness (\S+)\]$", line)
        if m:
            block = {"id": m.group(1), "condition": None, "note": "", "items": []}
            continue
        m = _BUDGET.match(line)
        if m:
            report.budget = Budget(m.group(1) == "yes", int(m.group(2)), int(m.group(3)))
            continue
        m = _RECORD.match(line)
        if m:
            pending.append(m.groups())
            continue
        m = _EQLINE.match(line)
        if m:
            eq_line = m.groups()
            continue
        if line.startswith("covers"):
            report.covers = line.split()[1:]
            continue
        if line.startswith("inclusions"):
            report.inclusions = line.split()[1:]
            continue
        raise ParseError(f"unrecognized line: {line}", source, no)
    if block is not None:
        raise ParseError("unterminated witness block", source)
    for kind, name, status, exh, wid in pending:
        w = None
        if wid != "-":
            if wid not in witnesses:
                raise ParseError(f"witness {wid} has no block", source)
            w = witnesses[wid]
        if kind == "condition":
            if name not in CONDITION_NAMES:
                raise ParseError(f"unknown condition {name}", source)
            report.verdicts[name] = Verdict(name, status, exh == "yes", witness=w, note=w.note if w else "")
        else:
            comps[name] = ComponentResult(name, status, exh == "yes", note=w.note if w else "", witness=w)
    if eq_line is not None:
        why = [] if eq_line[2] == "-" else eq_line[2].split(",")
        report.equivalence = ParsedEquivalence(eq_line[0] == "pass", eq_line[1] == "yes", why, comps,
                                               [c.witness for c in comps.values() if c.witness])
    return report
