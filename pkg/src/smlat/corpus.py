"""Test corpus generation and deliberately naive brute-force oracles.

The oracles re-derive meet/join tables, covers, and maximal chain lengths
by full scans over the order relation, sharing nothing with the lattice
module beyond the Poset type; independence is the point.  Corpus
generation is a pure function of its spec, so corpora are bit-reproducible
across runs.
"""

import random
from dataclasses import dataclass, field
from types import MappingProxyType

from .errors import CapExceededError, PreconditionError
from .lattice import (is_distributive, is_geometric, is_join_distributive, is_modular,
                      is_semimodular, join_irreducibles, lattice_from_covers)
from .lowering import doubled_elements, lower_direct

ORACLE_CAP = 512


# Named small lattices


def chain_lattice(length):
    """The chain with the given length (length + 1 elements)."""
    return lattice_from_covers(length + 1, [(i, i + 1) for i in range(length)])


def boolean_lattice(k):
    """The powerset lattice of a k-set; elements are the subsets as masks."""
    n = 1 << k
    pairs = []
    for x in range(n):
        for b in range(k):
            if not x >> b & 1:
                pairs.append((x, x | 1 << b))
    return lattice_from_covers(n, pairs)


def diamond(k):
    """M_k: bottom, k incomparable atoms, top."""
    if k < 2:
        raise PreconditionError("a diamond needs at least two atoms")
    pairs = [(0, i) for i in range(1, k + 1)] + [(i, k + 1) for i in range(1, k + 1)]
    return lattice_from_covers(k + 2, pairs)


def stemmed_diamond(k):
    """M_k sitting on a single extra atom, so its atoms stop being atoms."""
    pairs = [(0, 1)]
    pairs += [(1, i) for i in range(2, k + 2)]
    pairs += [(i, k + 2) for i in range(2, k + 2)]
    return lattice_from_covers(k + 3, pairs)


def studded_diamond():
    """A stemmed M_3 with one extra atom glued under a coatom.

    Modular but not distributive; lowering the join-irreducible 3 onto the
    bottom creates a pentagon, so this is the canonical fixture showing
    that lowering does not preserve modularity."""
    return lattice_from_covers(
        7, [(0, 1), (0, 2), (1, 3), (1, 4), (1, 5), (2, 5), (3, 6), (4, 6), (5, 6)])


def grid_lattice(rows, cols):
    """Product of two chains with rows * cols elements."""
    def idx(i, j):
        return i * cols + j
    pairs = []
    for i in range(rows):
        for j in range(cols):
            if i + 1 < rows:
                pairs.append((idx(i, j), idx(i + 1, j)))
            if j + 1 < cols:
                pairs.append((idx(i, j), idx(i, j + 1)))
    return lattice_from_covers(rows * cols, pairs)


def pentagon():
    """N5, the non-semimodular negative fixture."""
    return lattice_from_covers(5, [(0, 1), (1, 2), (0, 3), (2, 4), (3, 4)])


def slim_hexagon():
    """Six-element join-distributive non-modular lattice: two atoms, one of
    them under an extra cover, joined through a common upper bound."""
    # 0 < a,b; a < c,d; b < d; c,d < 1
    return lattice_from_covers(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 4), (3, 5), (4, 5)])


def slim_heptagon():
    """Seven-element join-distributive non-modular lattice; lowering its
    top-most join-irreducible creates a diamond."""
    # 0 < t,m; t < u,v; m < v,e; u,v,e < s
    return lattice_from_covers(
        7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 4), (2, 5), (3, 6), (4, 6), (5, 6)])


@dataclass(frozen=True)
class CorpusSpec:
    """Which families go into the corpus; generation is pure in this spec."""

    seed: int = 0
    chains_up_to: int = 5
    booleans_up_to: int = 4
    diamonds_up_to: int = 4
    grids_up_to: tuple = (4, 4)
    stemmed_diamonds: bool = True
    slim_fixtures: bool = True
    include_n5: bool = True
    lowering_depth: int = 2
    max_size: int = 64


@dataclass(frozen=True)
class CorpusMember:
    name: str
    lattice: object
    profile: MappingProxyType = field(compare=False)


def _profile(lat):
    return MappingProxyType({
        "semimodular": is_semimodular(lat),
        "distributive": is_distributive(lat),
        "modular": is_modular(lat),
        "join_distributive": is_join_distributive(lat),
        "geometric": is_geometric(lat),
    })


def generate_corpus(spec=CorpusSpec()):
    """Deterministic corpus for the given spec, each member profiled."""
    members = []

    def add(name, lat):
        if lat.n <= spec.max_size:
            members.append(CorpusMember(name, lat, _profile(lat)))

    for length in range(1, spec.chains_up_to + 1):
        add(f"chain-{length}", chain_lattice(length))
    for k in range(1, spec.booleans_up_to + 1):
        add(f"boolean-{k}", boolean_lattice(k))
    for k in range(3, spec.diamonds_up_to + 1):
        add(f"diamond-{k}", diamond(k))
    if spec.stemmed_diamonds:
        for k in range(3, max(spec.diamonds_up_to, 3) + 1):
            add(f"stemmed-diamond-{k}", stemmed_diamond(k))
        add("studded-diamond", studded_diamond())
    max_rows, max_cols = spec.grids_up_to
    for rows in range(2, max_rows + 1):
        for cols in range(rows, max_cols + 1):
            add(f"grid-{rows}x{cols}", grid_lattice(rows, cols))
    if spec.slim_fixtures:
        add("slim-hexagon", slim_hexagon())
        add("slim-heptagon", slim_heptagon())
    if spec.include_n5:
        add("pentagon", pentagon())
    if spec.lowering_depth > 0:
        rng = random.Random(spec.seed)
        for base_name in ("chain-4", "grid-2x3"):
            base = next((m.lattice for m in members if m.name == base_name), None)
            if base is None:
                continue
            current = base
            for depth in range(1, spec.lowering_depth + 1):
                pairs = list(valid_lowering_pairs(current))
                if not pairs:
                    break
                e, h = rng.choice(pairs)
                current = lower_direct(current, e, h).lattice
                add(f"lowered-{base_name}-d{depth}-s{spec.seed}", current)
    return tuple(members)


def valid_lowering_pairs(lat):
    """All (element, onto) pairs the lowering construction accepts, in
    canonical (element, onto) order.  Empty for non-semimodular input."""
    if not is_semimodular(lat):
        return
    jir = join_irreducibles(lat)
    for p, c in zip(jir.elements, jir.lcov):
        if c == lat.bottom:
            continue
        for h in range(lat.n):
            if lat.order.lt(h, c):
                yield (p, h)


# Brute-force oracles


def _check_cap(lat, cap):
    if lat.n > cap:
        raise CapExceededError(f"oracle cap is {cap}, lattice has {lat.n} elements")


def oracle_meet_join(lat, cap=ORACLE_CAP):
    """Meet and join tables recomputed by full scans over the order."""
    _check_cap(lat, cap)
    n = lat.n
    leq = lat.order.leq
    meet = []
    join = []
    for x in range(n):
        mrow = []
        jrow = []
        for y in range(n):
            lowers = [z for z in range(n) if leq(z, x) and leq(z, y)]
            glb = [z for z in lowers if all(leq(w, z) for w in lowers)]
            uppers = [z for z in range(n) if leq(x, z) and leq(y, z)]
            lub = [z for z in uppers if all(leq(z, w) for w in uppers)]
            assert len(glb) == 1 and len(lub) == 1, "oracle found a non-lattice pair"
            mrow.append(glb[0])
            jrow.append(lub[0])
        meet.append(tuple(mrow))
        join.append(tuple(jrow))
    return tuple(meet), tuple(join)


def oracle_covers(lat, cap=ORACLE_CAP):
    """Covering pairs recomputed by a double loop with a betweenness scan."""
    _check_cap(lat, cap)
    n = lat.n
    leq = lat.order.leq
    pairs = []
    for x in range(n):
        for y in range(n):
            if x == y or not leq(x, y):
                continue
            if not any(z != x and z != y and leq(x, z) and leq(z, y) for z in range(n)):
                pairs.append((x, y))
    return tuple(sorted(pairs))


def oracle_maximal_chains(lat, a, b, cap=ORACLE_CAP):
    """Lengths of all maximal chains from a to b, by depth-first search
    over oracle covers restricted to the interval."""
    _check_cap(lat, cap)
    leq = lat.order.leq
    if not leq(a, b):
        raise PreconditionError(f"[{a}, {b}] is not an interval")
    covers = oracle_covers(lat, cap)
    succ = {}
    for x, y in covers:
        if leq(a, x) and leq(y, b):
            succ.setdefault(x, []).append(y)
    lengths = set()

    def dfs(x, d):
        if x == b:
            lengths.add(d)
            return
        for y in succ.get(x, []):
            dfs(y, d + 1)

    dfs(a, 0)
    return tuple(sorted(lengths))


@dataclass(frozen=True)
class CounterexampleWitness:
    member: CorpusMember
    lowered: int
    onto: int
    result: object  # the LoweringResult whose extension breaks the predicate


def search_counterexample(corpus, predicate):
    """First corpus instance, in canonical order, whose lattice satisfies
    the predicate while some lowering of it does not; None if the scan is
    exhaustive and empty (as it must be for distributivity)."""
    from .lowering import PRESERVATION_PREDICATES
    if predicate not in PRESERVATION_PREDICATES:
        raise PreconditionError(f"unknown predicate {predicate!r}")
    fn = PRESERVATION_PREDICATES[predicate]
    for member in corpus:
        if not member.profile["semimodular"] or not fn(member.lattice):
            continue
        for e, h in valid_lowering_pairs(member.lattice):
            result = lower_direct(member.lattice, e, h)
            if not fn(result.lattice):
                return CounterexampleWitness(member, e, h, result)
    return None
