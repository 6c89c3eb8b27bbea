"""The skeleton of finite sets: objects are sizes, arrows are function tables.

Elements are stored 0-based but printed 1-based, so the function sending
both elements of 2 to the single element of 1 prints as [1,1]:2->1.
"""
from dataclasses import dataclass
from itertools import product as cartesian
import re

import numpy as np

from .category import Category, LimitCone, Product, Pullback, Terminal, BoundaryError


@dataclass(frozen=True, order=True)
class Fn:
    src: int
    tgt: int
    table: tuple

    def __post_init__(self):
        if len(self.table) != self.src or any(not 0 <= v < self.tgt for v in self.table):
            raise ValueError(f"bad function table {self.table} for {self.src}->{self.tgt}")

    def __call__(self, i):
        return self.table[i]

    def __str__(self):
        return "[" + ",".join(str(v + 1) for v in self.table) + f"]:{self.src}->{self.tgt}"

    __repr__ = __str__

    def then(self, g):
        if self.tgt != g.src:
            raise BoundaryError(f"{g} after {self}")
        return Fn(self.src, g.tgt, tuple(g.table[v] for v in self.table))

    def injective(self):
        return len(set(self.table)) == self.src

    def surjective(self):
        return len(set(self.table)) == self.tgt


_FN = re.compile(r"^\s*\[([0-9,\s]*)\]\s*:\s*(\d+)\s*(?:->|→)\s*(\d+)\s*$")


def fn(text):
    """Parse '[1,1]:2->1' (1-based) into an Fn."""
    m = _FN.match(text)
    if not m:
        raise ValueError(f"not a function literal: {text!r}")
    body = [s for s in m.group(1).replace(" ", "").split(",") if s]
    return Fn(int(m.group(2)), int(m.group(3)), tuple(int(s) - 1 for s in body))


def identity(n):
    return Fn(n, n, tuple(range(n)))


class FinSet(Category):
    """FinSet restricted to sizes 0..max_size.

    max_size=None gives the unbounded skeleton; enumeration of objects is then
    refused, but every element-level operation still works.
    """

    def __init__(self, max_size=None):
        self.max_size = max_size

    def __repr__(self):
        return f"finset({self.max_size})" if self.max_size is not None else "finset"

    def __eq__(self, other):
        return isinstance(other, FinSet) and other.max_size == self.max_size

    def __hash__(self):
        return hash(("finset", self.max_size))

    @property
    def objects(self):
        if self.max_size is None:
            raise ValueError("the unbounded skeleton has no object list")
        return tuple(range(self.max_size + 1))

    def _fits(self, n):
        return self.max_size is None or n <= self.max_size

    def hom(self, a, b):
        return tuple(Fn(a, b, t) for t in cartesian(range(b), repeat=a))

    def src(self, f):
        return f.src

    def tgt(self, f):
        return f.tgt

    def identity(self, a):
        return identity(a)

    def compose(self, f, g):
        return f.then(g)

    def key(self, f):
        return (f.src, f.tgt, f.table)

    def describe(self, f):
        return str(f)

    def parse_arrow(self, text):
        return fn(text)

    def parse_object(self, text):
        n = int(text)
        if n < 0 or not self._fits(n):
            raise KeyError(text)
        return n

    # -- element-level fast paths ---------------------------------------------
    def is_iso(self, f):
        return f.src == f.tgt and f.injective()

    def inverse(self, f):
        if not self.is_iso(f):
            return None
        inv = [0] * f.src
        for i, v in enumerate(f.table):
            inv[v] = i
        return Fn(f.tgt, f.src, tuple(inv))

    def is_mono(self, f):
        return f.injective()

    def is_epi(self, f):
        return f.surjective()

    def product(self, a, b):
        if not self._fits(a * b):
            return None
        pairs = [(x, y) for x in range(a) for y in range(b)]
        return LimitCone(a * b, (Fn(a * b, a, tuple(p[0] for p in pairs)),
                                 Fn(a * b, b, tuple(p[1] for p in pairs))), Product(a, b))

    def pullback(self, f, g):
        if f.tgt != g.tgt:
            raise BoundaryError(f"{f} and {g} do not share a target")
        pairs = [(x, y) for x in range(f.src) for y in range(g.src) if f.table[x] == g.table[y]]
        n = len(pairs)
        if not self._fits(n):
            return None
        return LimitCone(n, (Fn(n, f.src, tuple(p[0] for p in pairs)),
                             Fn(n, g.src, tuple(p[1] for p in pairs))), Pullback(f, g))

    def terminal(self):
        if not self._fits(1):
            return None
        return LimitCone(1, (), Terminal())

    def solve_post(self, q, p, constraints, limit=None):
        index = {}
        for t in range(p):
            index.setdefault(tuple(leg.table[t] for leg, _ in constraints), []).append(t)
        options = []
        for s in range(q):
            opts = index.get(tuple(v.table[s] for _, v in constraints), [])
            if not opts:
                return []
            options.append(opts)
        out = []
        for t in cartesian(*options):
            out.append(Fn(q, p, tuple(t)))
            if limit and len(out) >= limit:
                break
        return out

    def solve_pre(self, e, value, limit=None):
        fixed = {}
        for x, y in enumerate(e.table):
            if fixed.setdefault(y, value.table[x]) != value.table[x]:
                return []
        free = [y for y in range(e.tgt) if y not in fixed]
        out = []
        for choice in cartesian(range(value.tgt), repeat=len(free)):
            t = dict(fixed)
            t.update(zip(free, choice))
            out.append(Fn(e.tgt, value.tgt, tuple(t[y] for y in range(e.tgt))))
            if limit and len(out) >= limit:
                break
        return out


def finset_category(n):
    return FinSet(n)


def finset_factorize(f):
    """Image factorization, image listed in order of first preimage."""
    order = []
    for v in f.table:
        if v not in order:
            order.append(v)
    pos = {v: i for i, v in enumerate(order)}
    e = Fn(f.src, len(order), tuple(pos[v] for v in f.table))
    m = Fn(len(order), f.tgt, tuple(order))
    return e, m


def sorted_factorize(f):
    """Image factorization with the image listed in increasing order."""
    image = sorted(set(f.table))
    pos = {v: i for i, v in enumerate(image)}
    return Fn(f.src, len(image), tuple(pos[v] for v in f.table)), Fn(len(image), f.tgt, tuple(image))


# -- relations as boolean matrices ---------------------------------------------

def bool_matrix(a, b, pairs=()):
    M = np.zeros((a, b), dtype=bool)
    for x, y in pairs:
        M[x, y] = True
    return M


def matrix_compose(R, S):
    if R.shape[1] != S.shape[0]:
        raise BoundaryError(f"cannot compose {R.shape} with {S.shape}")
    return (R.astype(np.int64) @ S.astype(np.int64)) > 0


def matrix_meet(R, S):
    if R.shape != S.shape:
        raise BoundaryError(f"cannot meet {R.shape} with {S.shape}")
    return R & S


def diagonal(n):
    return np.eye(n, dtype=bool)


def all_matrices(a, b):
    """Every relation a ⇸ b, in order of the bit pattern."""
    for bits in range(1 << (a * b)):
        M = np.zeros(a * b, dtype=bool)
        for k in range(a * b):
            M[k] = (bits >> k) & 1
        yield M.reshape(a, b)


def matrix_pairs(M):
    return [(int(x), int(y)) for x, y in zip(*np.nonzero(M))]


_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def rel_pairs(text):
    """Parse '{(1,1),(1,2)}' into 0-based pairs."""
    return [(int(a) - 1, int(b) - 1) for a, b in _PAIR.findall(text)]


def show_pairs(pairs):
    return "{" + ",".join(f"({a + 1},{b + 1})" for a, b in sorted(pairs)) + "}"
