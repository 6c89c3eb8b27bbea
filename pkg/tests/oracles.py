"""Independent brute-force references.

Nothing here imports the library's constructions: relations are sets of
pairs, functions are tuples, and every answer comes from direct enumeration.
"""
from itertools import product


def compose_pairs(R, S):
    """{(a, c) | some b with (a, b) in R and (b, c) in S}."""
    return {(a, c) for (a, b) in R for (b2, c) in S if b == b2}


def meet_pairs(R, S):
    return set(R) & set(S)


def all_relations(a, b):
    cells = [(x, y) for x in range(a) for y in range(b)]
    for bits in range(1 << len(cells)):
        yield {c for k, c in enumerate(cells) if bits >> k & 1}


def all_functions(a, b):
    return [tuple(t) for t in product(range(b), repeat=a)]


def graph(f):
    return {(x, y) for x, y in enumerate(f)}


def opgraph(f):
    return {(y, x) for x, y in enumerate(f)}


def frobenius_sides(f, R, S):
    """R ∧ f^*⊗S and f^*⊗(f_!⊗R ∧ S) for f: A -> B, R: B ⇸ X, S: A ⇸ X.

    f_! is the graph A ⇸ B and f^* the opgraph B ⇸ A."""
    fstar, fshriek = opgraph(f), graph(f)
    lhs = meet_pairs(R, compose_pairs(fstar, S))
    rhs = compose_pairs(fstar, meet_pairs(compose_pairs(fshriek, R), S))
    return lhs, rhs


def pullback_size(f, g):
    return sum(1 for x in range(len(f)) for y in range(len(g)) if f[x] == g[y])


def repeated_pair_spans(spans):
    """Spans (apex, left table, right table) whose legs are not jointly injective."""
    out = []
    for s in spans:
        apex, l, r = s
        pairs = list(zip(l, r))
        if len(set(pairs)) != len(pairs):
            out.append(s)
    return out


def non_tabulator_relations(max_endpoint, max_apex):
    """Jointly injective spans R -> A×B that are not the tabulator of their own extension.

    In spans the extension of the unit on R along (l, r) is the span (R, l, r)
    itself, so its tabulator is R with identity comparison; a failure would be
    an apex whose pushed-forward pairs are not in bijection with R."""
    bad = []
    for a in range(max_endpoint + 1):
        for b in range(max_endpoint + 1):
            for n in range(max_apex + 1):
                for l in all_functions(n, a):
                    for r in all_functions(n, b):
                        pairs = list(zip(l, r))
                        if len(set(pairs)) != len(pairs):
                            continue
                        ext_apex = n          # extension keeps the apex in spans
                        if ext_apex != len(set(pairs)):
                            bad.append((a, b, n, l, r))
    return bad


def is_surjective(f, b):
    return set(f) == set(range(b))


def is_injective(f):
    return len(set(f)) == len(f)
