"""Finite posets on index sets 0..n-1, with bitmask order rows.

Elements are dense integer indices; any external names live in I/O
metadata only.  A subset of the ground set is an int bitmask, which keeps
the set algebra (intersections, down-set tests, incomparability scans)
at word speed even when flat families grow large.
"""

from dataclasses import dataclass

from .bitset import bit_indices, bit_list
from .errors import CycleError, NotAChainError


class Poset:
    """Immutable finite poset.

    Attributes:
        n: element count; elements are 0..n-1.
        below: below[u] is the bitmask of {x : x <= u}.
        above: above[u] is the bitmask of {x : u <= x}.
        covers: sorted tuple of (lower, upper) covering pairs; ``below``
            equals the reflexive-transitive closure of ``covers``.
    """

    __slots__ = ("n", "below", "above", "covers", "_ucov", "_lcov")

    def __init__(self, n, below, above, covers, ucov, lcov):
        self.n = n
        self.below = below
        self.above = above
        self.covers = covers
        self._ucov = ucov
        self._lcov = lcov

    @classmethod
    def from_covers(cls, n, pairs):
        """Build the poset whose order is the closure of the given covers.

        Raises CycleError if the closure would violate antisymmetry and
        IndexError for out-of-range element indices.  The stored cover
        list is recomputed canonically from the closure, so redundant
        input pairs are dropped.
        """
        succ = [[] for _ in range(n)]
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise IndexError(f"cover pair ({x}, {y}) out of range for n={n}")
            if x == y:
                raise CycleError(f"cover pair ({x}, {y}) relates an element to itself")
            succ[x].append(y)
        order = _topo_order(n, succ)
        if order is None:
            raise CycleError("cover relation closes into a cycle")
        above = [1 << u for u in range(n)]
        for u in reversed(order):
            for v in succ[u]:
                above[u] |= above[v]
        below = _transpose(n, above)
        return cls._from_rows(n, below, above)

    @classmethod
    def from_leq(cls, n, below):
        """Build a poset from explicit down-set rows, validating the order."""
        above = _transpose(n, below)
        for u in range(n):
            if not below[u] >> u & 1:
                raise CycleError(f"order not reflexive at {u}")
            if below[u] & above[u] != 1 << u:
                raise CycleError(f"order not antisymmetric at {u}")
            for v in bit_indices(below[u]):
                if below[v] & ~below[u]:
                    raise CycleError(f"order not transitive at ({v}, {u})")
        return cls._from_rows(n, tuple(below), tuple(above))

    @classmethod
    def _from_rows(cls, n, below, above):
        below = tuple(below)
        above = tuple(above)
        ucov = []
        lcov = []
        covers = []
        for x in range(n):
            strictly_above = above[x] & ~(1 << x)
            mask = 0
            for y in bit_indices(strictly_above):
                between = above[x] & below[y] & ~(1 << x) & ~(1 << y)
                if not between:
                    mask |= 1 << y
                    covers.append((x, y))
            ucov.append(mask)
        for y in range(n):
            mask = 0
            for x in range(n):
                if ucov[x] >> y & 1:
                    mask |= 1 << x
            lcov.append(mask)
        return cls(n, below, above, tuple(sorted(covers)), tuple(ucov), tuple(lcov))

    # Order queries

    def leq(self, x, y):
        return bool(self.below[y] >> x & 1)

    def lt(self, x, y):
        return x != y and self.leq(x, y)

    def comparable(self, x, y):
        return self.leq(x, y) or self.leq(y, x)

    def covers_pair(self, x, y):
        """True iff y covers x."""
        return bool(self._ucov[x] >> y & 1)

    def upper_covers(self, x):
        return self._ucov[x]

    def lower_covers(self, x):
        return self._lcov[x]

    def down_set(self, u):
        """Bitmask of {x : x <= u}."""
        self._check_index(u)
        return self.below[u]

    def strict_down_set(self, u):
        """Bitmask of {x : x < u}."""
        self._check_index(u)
        return self.below[u] & ~(1 << u)

    def up_set(self, u):
        """Bitmask of {x : x >= u}."""
        self._check_index(u)
        return self.above[u]

    def strict_up_set(self, u):
        """Bitmask of {x : x > u}."""
        self._check_index(u)
        return self.above[u] & ~(1 << u)

    def is_down_set(self, mask):
        """True iff every element of ``mask`` brings its whole down-set along."""
        for u in bit_indices(mask):
            if self.below[u] & ~mask:
                return False
        return True

    def _check_index(self, u):
        if not 0 <= u < self.n:
            raise IndexError(f"element {u} out of range for n={self.n}")

    # Structure

    def length(self):
        """Longest chain cardinality minus one."""
        return max(self.heights(), default=0)

    def heights(self):
        """heights()[u] = length of the longest chain ending at u."""
        h = [0] * self.n
        for u in self.linear_extension():
            for v in bit_indices(self._ucov[u]):
                if h[u] + 1 > h[v]:
                    h[v] = h[u] + 1
        return tuple(h)

    def linear_extension(self):
        """A fixed topological order of the elements (ascending by down-set size)."""
        return tuple(sorted(range(self.n), key=lambda u: (self.below[u].bit_count(), u)))

    def is_chain(self, elements):
        elems = list(elements)
        for i, x in enumerate(elems):
            for y in elems[i + 1:]:
                if not self.comparable(x, y):
                    return False
        return True

    def chain_sorted(self, elements):
        """The elements of a chain in ascending order; NotAChainError otherwise."""
        if not self.is_chain(elements):
            raise NotAChainError(f"{sorted(elements)} is not a chain")
        return tuple(sorted(elements, key=lambda u: (self.below[u].bit_count(), u)))

    def restrict(self, elements):
        """Induced subposet on the given ascending element list."""
        elems = tuple(elements)
        pos = {p: i for i, p in enumerate(elems)}
        below = []
        for p in elems:
            m = 0
            for q in elems:
                if self.leq(q, p):
                    m |= 1 << pos[q]
            below.append(m)
        return Poset.from_leq(len(elems), below)

    def down_set_masks(self):
        """All down-sets as bitmasks, ascending by (size, value)."""
        out = []
        for mask in range(1 << self.n):
            if self.is_down_set(mask):
                out.append(mask)
        out.sort(key=lambda m: (m.bit_count(), m))
        return out

    # Identity

    def __eq__(self, other):
        return isinstance(other, Poset) and self.n == other.n and self.below == other.below

    def __hash__(self):
        return hash((self.n, self.below))

    def __repr__(self):
        return f"Poset(n={self.n}, covers={list(self.covers)})"


def _topo_order(n, succ):
    indeg = [0] * n
    for u in range(n):
        for v in succ[u]:
            indeg[v] += 1
    stack = [u for u in range(n) if indeg[u] == 0]
    order = []
    while stack:
        u = stack.pop()
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return order if len(order) == n else None


def _transpose(n, rows):
    out = [0] * n
    for u in range(n):
        row = rows[u]
        for v in bit_indices(row):
            out[v] |= 1 << u
    return tuple(out)


def poset_from_covers(n, pairs):
    """Convenience wrapper for Poset.from_covers."""
    return Poset.from_covers(n, pairs)


@dataclass(frozen=True)
class ChainPartition:
    """A partition of a poset's ground set into disjoint chains."""

    chains: tuple

    @property
    def width(self):
        return len(self.chains)


def is_chain_partition(poset, chains):
    """True iff the chain lists are disjoint chains covering the ground set."""
    seen = 0
    for chain in chains:
        mask = 0
        for u in chain:
            if not 0 <= u < poset.n:
                return False
            mask |= 1 << u
        if mask.bit_count() != len(chain) or mask & seen:
            return False
        if not poset.is_chain(chain):
            return False
        seen |= mask
    return seen == (1 << poset.n) - 1


def width_chain_partition(poset):
    """Partition into the minimum number of chains (the Dilworth number).

    Reduction to maximum bipartite matching on the strict-order graph:
    each matched pair (x, y) with x < y links consecutive chain members,
    so the cover needs n - |matching| chains.  A maximum antichain of the
    same size is recovered from the matching and checked, so the returned
    width is certified from both sides.
    """
    n = poset.n
    adj = [bit_list(poset.above[u] & ~(1 << u)) for u in range(n)]
    match_left = [-1] * n   # chain successor chosen for u
    match_right = [-1] * n  # chain predecessor chosen for u

    def augment(u, seen):
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_right[v] < 0 or augment(match_right[v], seen):
                    match_left[u] = v
                    match_right[v] = u
                    return True
        return False

    matched = 0
    for u in range(n):
        if augment(u, [False] * n):
            matched += 1

    chains = []
    for head in range(n):
        if match_right[head] < 0:
            chain = [head]
            while match_left[chain[-1]] >= 0:
                chain.append(match_left[chain[-1]])
            chains.append(tuple(chain))
    partition = ChainPartition(tuple(chains))

    antichain = _koenig_antichain(n, adj, match_left, match_right)
    assert len(antichain) == len(chains), "matching bound disagrees with antichain bound"
    for i, x in enumerate(antichain):
        for y in antichain[i + 1:]:
            assert not poset.comparable(x, y), "recovered antichain is not an antichain"
    assert is_chain_partition(poset, partition.chains)
    return partition


def _koenig_antichain(n, adj, match_left, match_right):
    """Maximum antichain from a maximum matching via the vertex-cover dual."""
    visited_left = [False] * n
    visited_right = [False] * n
    stack = [u for u in range(n) if match_left[u] < 0]
    for u in stack:
        visited_left[u] = True
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not visited_right[v]:
                visited_right[v] = True
                w = match_right[v]
                if w >= 0 and not visited_left[w]:
                    visited_left[w] = True
                    stack.append(w)
    # Cover = unreached lefts + reached rights; uncovered elements are mutually
    # incomparable since any strict relation x < y is an edge of the graph.
    return [u for u in range(n) if visited_left[u] and not visited_right[u]]


def are_parallel(poset, chain1, chain2):
    """True iff every pair across the two chains is incomparable."""
    c1 = list(chain1)
    c2 = list(chain2)
    for c in (c1, c2):
        if not poset.is_chain(c):
            raise NotAChainError(f"{sorted(c)} is not a chain")
    for x in c1:
        for y in c2:
            if poset.comparable(x, y):
                return False
    return True
