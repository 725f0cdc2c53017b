"""Iterated lowering pipelines.

``extend_to_geometric`` lowers non-atom join-irreducibles one at a time
until every join-irreducible is an atom; ``extend_parallel_chains`` lowers
until the chains of a given partition of the join-irreducibles become
pairwise parallel; ``rectangular_extension`` combines the width-optimal
chain partition with the parallel-chain pipeline.  All pipelines preserve
length and the number of join-irreducibles, step by step.

``exhaustive_extension_search`` is the independent decision procedure: it
enumerates every geometry on a prescribed ground poset and looks for a
length-preserving embedding of the input, so nonexistence claims are
established by exhaustion rather than by construction.
"""

import time
from dataclasses import dataclass

from .bitset import mask_from
from .errors import (BoundExceededError, NotAPartitionError, NotDistributiveError,
                     PreconditionError, SizeLimitError, VerificationError)
from .geometry import _family_length, enumerate_geometries, lat_of_geometry
from .lattice import (chains_lattice_disjoint, is_distributive, is_geometric,
                      is_semimodular, join_irreducibles,
                      verify_length_preserving_embedding)
from .lowering import doubled_elements, lower
from .poset import are_parallel, width_chain_partition

DEFAULT_SIZE_LIMIT = 50_000

# How a pipeline verifies its steps: the "test" profile always builds both
# routes and cross-checks them; the "fast" profile runs the direct route and
# samples the geometry route on every fourth step.
PROFILES = ("test", "fast")
_SAMPLE_EVERY = 4


@dataclass(frozen=True)
class StepStats:
    lowered: int
    onto: int
    doubled: int
    size_after: int
    seconds: float
    cross_checked: bool


class ExtensionTrace:
    """An ordered run of lowering steps with the composed embedding."""

    __slots__ = ("initial", "final", "steps", "embed_total", "stats", "final_chains")

    def __init__(self, initial, final, steps, embed_total, stats, final_chains=None):
        self.initial = initial
        self.final = final
        self.steps = tuple(steps)
        self.embed_total = tuple(embed_total)
        self.stats = tuple(stats)
        self.final_chains = final_chains

    def __repr__(self):
        return (f"ExtensionTrace(steps={len(self.steps)}, "
                f"n={self.initial.n}->{self.final.n})")


def _route_for(profile, index):
    if profile not in PROFILES:
        raise PreconditionError(f"unknown profile {profile!r}")
    if profile == "test" or index % _SAMPLE_EVERY == 0:
        return "both"
    return "direct"


def _compose(outer, inner):
    return tuple(outer[v] for v in inner)


def _finish_trace(initial, current, steps, stats, embed_total, final_chains=None):
    trace = ExtensionTrace(initial, current, steps, embed_total, stats, final_chains)
    verify_trace_invariants(trace)
    return trace


def verify_trace_invariants(trace):
    """Chaining, embedding, and the length / join-irreducible invariants."""
    prev = trace.initial
    for step in trace.steps:
        if step.source != prev:
            raise VerificationError("trace steps do not chain")
        prev = step.lattice
    if prev != trace.final:
        raise VerificationError("trace final lattice mismatch")
    if not verify_length_preserving_embedding(trace.initial, trace.final, trace.embed_total):
        raise VerificationError("composed embedding is not length-preserving")
    if len(join_irreducibles(trace.initial)) != len(join_irreducibles(trace.final)):
        raise VerificationError("join-irreducible count changed along the trace")


def extend_to_geometric(lat, limit=DEFAULT_SIZE_LIMIT, profile="test"):
    """Lower until every join-irreducible is an atom.

    Step rule: pick the non-atom join-irreducible of minimal rank (ties by
    index) and lower it onto the minimal-index lower cover of its own lower
    cover.  The total rank of the join-irreducibles strictly decreases, so
    the loop terminates.
    """
    if not is_semimodular(lat):
        raise PreconditionError("lattice is not semimodular")
    current = lat
    steps = []
    stats = []
    embed_total = tuple(range(lat.n))
    measure = _jir_rank_sum(current)
    while True:
        jir = join_irreducibles(current)
        ranks = current.ranks()
        non_atoms = [p for p, c in zip(jir.elements, jir.lcov) if c != current.bottom]
        if not non_atoms:
            break
        e = min(non_atoms, key=lambda p: (ranks[p], p))
        lcov = jir.lcov[jir.elements.index(e)]
        h = (current.order.lower_covers(lcov) & -current.order.lower_covers(lcov)).bit_length() - 1
        doubled = doubled_elements(current, e, h)
        if current.n + len(doubled) > limit:
            raise SizeLimitError(
                f"extension would exceed {limit} elements",
                partial=ExtensionTrace(lat, current, steps, embed_total, stats))
        t0 = time.perf_counter()
        route = _route_for(profile, len(steps))
        step = lower(current, e, h, route=route)
        stats.append(StepStats(e, h, len(step.doubled), step.lattice.n,
                               time.perf_counter() - t0, route == "both"))
        steps.append(step)
        embed_total = _compose(step.embed, embed_total)
        current = step.lattice
        new_measure = _jir_rank_sum(current)
        if new_measure >= measure:
            raise VerificationError("termination measure did not decrease")
        measure = new_measure
    if not is_geometric(current):
        raise VerificationError("pipeline did not reach a geometric lattice")
    if current.atoms().bit_count() != len(join_irreducibles(lat)):
        raise VerificationError("atom count of the result is off")
    return _finish_trace(lat, current, steps, stats, embed_total)


def _jir_rank_sum(lat):
    ranks = lat.ranks()
    return sum(ranks[p] for p in join_irreducibles(lat).elements)


def _validate_chain_partition(lat, chains):
    jir_mask = mask_from(join_irreducibles(lat).elements)
    seen = 0
    out = []
    for chain in chains:
        mask = mask_from(chain)
        if mask.bit_count() != len(chain):
            raise NotAPartitionError("a chain repeats an element")
        if mask & ~jir_mask:
            raise NotAPartitionError("a chain contains a join-reducible element")
        if mask & seen:
            raise NotAPartitionError("chains are not pairwise disjoint")
        if not lat.order.is_chain(chain):
            raise NotAPartitionError(f"{sorted(chain)} is not a chain")
        seen |= mask
        out.append(lat.order.chain_sorted(chain))
    if seen != jir_mask:
        raise NotAPartitionError("chains do not cover the join-irreducibles")
    return out


def extend_parallel_chains(lat, chains, limit=DEFAULT_SIZE_LIMIT, profile="test"):
    """Lower until the given chains of join-irreducibles are pairwise parallel.

    Step rule: scanning chain pairs (i, j) in index order, take the least
    element of chain i lying above some element of chain j, and lower it
    onto its predecessor within chain i (bottom when it is the chain's
    least element).  Chain sizes are preserved; the lowered element's slot
    is taken by its replacement.
    """
    if not is_semimodular(lat):
        raise PreconditionError("lattice is not semimodular")
    chains = _validate_chain_partition(lat, chains)
    current = lat
    steps = []
    stats = []
    embed_total = tuple(range(lat.n))
    relation_size = _jir_comparabilities(current)
    while True:
        pick = _violating_pick(current, chains)
        if pick is None:
            break
        i, e = pick
        jir = join_irreducibles(current)
        lcov = jir.lcov[jir.elements.index(e)]
        idx = chains[i].index(e)
        h = chains[i][idx - 1] if idx > 0 else current.bottom
        if not current.order.lt(h, lcov):
            raise VerificationError("chain predecessor is not below the lower cover")
        doubled = doubled_elements(current, e, h)
        if current.n + len(doubled) > limit:
            raise SizeLimitError(
                f"extension would exceed {limit} elements",
                partial=ExtensionTrace(lat, current, steps, embed_total, stats,
                                       tuple(tuple(c) for c in chains)))
        t0 = time.perf_counter()
        route = _route_for(profile, len(steps))
        step = lower(current, e, h, route=route)
        stats.append(StepStats(e, h, len(step.doubled), step.lattice.n,
                               time.perf_counter() - t0, route == "both"))
        steps.append(step)
        embed_total = _compose(step.embed, embed_total)
        chains = [[step.embed[x] for x in c] for c in chains]
        chains[i][idx] = step.new_jir
        current = step.lattice
        for c in chains:
            if not current.order.is_chain(c):
                raise VerificationError("a chain stopped being a chain")
        new_relation_size = _jir_comparabilities(current)
        if new_relation_size >= relation_size:
            raise VerificationError("comparability count did not decrease")
        relation_size = new_relation_size
    final_chains = tuple(tuple(c) for c in chains)
    for a in range(len(final_chains)):
        for b in range(a + 1, len(final_chains)):
            if not are_parallel(current.order, final_chains[a], final_chains[b]):
                raise VerificationError("final chains are not pairwise parallel")
            if not chains_lattice_disjoint(current, final_chains[a], final_chains[b]):
                raise VerificationError("final chains are not lattice-disjoint")
    return _finish_trace(lat, current, steps, stats, embed_total, final_chains)


def _violating_pick(lat, chains):
    for i in range(len(chains)):
        for j in range(len(chains)):
            if i == j:
                continue
            for x in chains[i]:
                if any(lat.order.lt(b, x) for b in chains[j]):
                    return (i, x)
    return None


def _jir_comparabilities(lat):
    jir = join_irreducibles(lat)
    count = 0
    for a in jir.elements:
        for b in jir.elements:
            if a != b and lat.leq(a, b):
                count += 1
    return count


def disjointify_chains(chains):
    """Peel overlapping chains into set-theoretically disjoint ones by
    removing from each chain everything already claimed by an earlier one;
    empty leftovers are dropped."""
    seen = set()
    out = []
    for chain in chains:
        peeled = tuple(x for x in chain if x not in seen)
        seen.update(peeled)
        if peeled:
            out.append(peeled)
    return tuple(out)


def rectangular_extension(lat, chains=None, limit=DEFAULT_SIZE_LIMIT, profile="test"):
    """Length-preserving extension whose join-irreducibles split into
    pairwise lattice-disjoint chains.

    Without user chains, the width-optimal partition is used, so the result
    is rectangular of dimension equal to the width of the input's
    join-irreducible poset.  User-supplied chains may overlap; they are
    peeled disjoint first.
    """
    if not is_semimodular(lat):
        raise PreconditionError("lattice is not semimodular")
    jir = join_irreducibles(lat)
    if chains is None:
        partition = width_chain_partition(jir.order)
        chains = [tuple(jir.elements[p] for p in c) for c in partition.chains]
    else:
        jir_set = set(jir.elements)
        covered = set()
        for chain in chains:
            if not set(chain) <= jir_set:
                raise NotAPartitionError("a chain contains a join-reducible element")
            if not lat.order.is_chain(chain):
                raise NotAPartitionError(f"{sorted(chain)} is not a chain")
            covered.update(chain)
        if covered != jir_set:
            raise NotAPartitionError("chains do not cover the join-irreducibles")
        chains = disjointify_chains(lat.order.chain_sorted(c) for c in chains)
    trace = extend_parallel_chains(lat, chains, limit=limit, profile=profile)
    k = len(trace.final_chains)
    final_jir = join_irreducibles(trace.final)
    if width_chain_partition(final_jir.order).width != k:
        raise VerificationError("result width differs from its chain count")
    return trace


def distributive_length_check(lat):
    """For a distributive lattice, confirm its length equals the number of
    its join-irreducibles, along the geometric pipeline: every intermediate
    stays distributive and the end is Boolean."""
    if not is_distributive(lat):
        raise NotDistributiveError("lattice is not distributive")
    trace = extend_to_geometric(lat)
    for step in trace.steps:
        if not is_distributive(step.lattice):
            raise VerificationError("distributivity lost along the pipeline")
    njir = len(join_irreducibles(lat))
    if trace.final.length() != trace.final.atoms().bit_count():
        raise VerificationError("geometric distributive result is not Boolean")
    return lat.length() == njir


def exhaustive_extension_search(lat, target_jir, size_bound=None, max_ground=6):
    """Search for a length-preserving extension whose join-irreducible poset
    is the given target, by enumerating every geometry on that ground poset.

    Returns the first witness lattice in canonical enumeration order, or
    None when exhaustion proves there is none.
    """
    if target_jir.n > max_ground:
        raise BoundExceededError(
            f"target poset has {target_jir.n} elements (limit {max_ground})")
    if size_bound is None:
        size_bound = 1 << target_jir.n
    want_length = lat.length()
    for geom in enumerate_geometries(target_jir, max_flats=size_bound):
        if _family_length(geom.flats) != want_length:
            continue
        candidate = lat_of_geometry(geom, validate=False)
        if find_length_embedding(lat, candidate) is not None:
            return candidate
    return None


def find_length_embedding(lat, ext):
    """A length-preserving {0,1}-embedding of lat into ext, or None.

    A join-preserving map is fixed by its values on the join-irreducibles,
    so backtracking runs over rank-compatible, order-compatible images of
    those and the induced map is then checked in full.
    """
    if lat.length() != ext.length():
        return None
    jir = join_irreducibles(lat)
    ranks_l = lat.ranks()
    ranks_k = ext.ranks()
    order_positions = sorted(range(len(jir.elements)),
                             key=lambda i: (ranks_l[jir.elements[i]], jir.elements[i]))
    candidates = [[v for v in range(ext.n) if ranks_k[v] == ranks_l[p]]
                  for p in jir.elements]
    g = {}
    used = set()

    def induced():
        f = []
        for x in range(lat.n):
            f.append(ext.join_all(g[p] for p in jir.elements if lat.leq(p, x)))
        return tuple(f)

    def backtrack(i):
        if i == len(order_positions):
            f = induced()
            if verify_length_preserving_embedding(lat, ext, f):
                return f
            return None
        pos = order_positions[i]
        p = jir.elements[pos]
        for v in candidates[pos]:
            if v in used:
                continue
            ok = True
            for q, w in g.items():
                if lat.leq(p, q) != ext.leq(v, w) or lat.leq(q, p) != ext.leq(w, v):
                    ok = False
                    break
            if ok:
                g[p] = v
                used.add(v)
                found = backtrack(i + 1)
                if found is not None:
                    return found
                used.remove(v)
                del g[p]
        return None

    return backtrack(0)
