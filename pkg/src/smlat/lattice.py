"""Finite lattices: meet/join tables, join-irreducibles, and the predicates
used throughout (semimodular, graded/JHCC, geometric, distributive, modular,
join-distributive), plus embedding verification and isomorphism search.

Semimodularity is deliberately a checked predicate rather than a type
invariant: non-semimodular lattices such as the pentagon are needed as
negative fixtures.
"""

from dataclasses import dataclass

from .bitset import bit_indices, bit_list, mask_from
from .errors import NotAChainError, NotALatticeError, PreconditionError
from .poset import Poset

# Full n*n meet/join tables are kept below this element count; above it the
# tables are computed per query from the order rows (principal-ideal lookup).
TABLE_LIMIT = 4096


class FiniteLattice:
    """Immutable finite lattice over a Poset.

    Element indices are the poset's.  ``meet`` and ``join`` are total and
    verified to be greatest lower / least upper bounds at construction.
    """

    __slots__ = ("order", "bottom", "top", "_meet", "_join",
                 "_below_index", "_above_index", "_ranks")

    def __init__(self, order, bottom, top, meet, join, below_index, above_index):
        self.order = order
        self.bottom = bottom
        self.top = top
        self._meet = meet
        self._join = join
        self._below_index = below_index
        self._above_index = above_index
        self._ranks = None

    @property
    def n(self):
        return self.order.n

    def leq(self, x, y):
        return self.order.leq(x, y)

    def meet(self, x, y):
        if self._meet is not None:
            return self._meet[x][y]
        return self._below_index[self.order.below[x] & self.order.below[y]]

    def join(self, x, y):
        if self._join is not None:
            return self._join[x][y]
        return self._above_index[self.order.above[x] & self.order.above[y]]

    def meet_all(self, elements):
        out = self.top
        for x in elements:
            out = self.meet(out, x)
        return out

    def join_all(self, elements):
        out = self.bottom
        for x in elements:
            out = self.join(out, x)
        return out

    def meet_table(self):
        if self._meet is not None:
            return self._meet
        return tuple(tuple(self.meet(x, y) for y in range(self.n)) for x in range(self.n))

    def join_table(self):
        if self._join is not None:
            return self._join
        return tuple(tuple(self.join(x, y) for y in range(self.n)) for x in range(self.n))

    def covers(self):
        return self.order.covers

    def upper_covers(self, x):
        return self.order.upper_covers(x)

    def lower_covers(self, x):
        return self.order.lower_covers(x)

    def ranks(self):
        """ranks()[x] = longest chain length from bottom to x."""
        if self._ranks is None:
            self._ranks = self.order.heights()
        return self._ranks

    def length(self):
        return self.ranks()[self.top] if self.n else 0

    def atoms(self):
        """Bitmask of elements covering bottom."""
        return self.order.upper_covers(self.bottom)

    def join_irreducibles(self):
        return join_irreducibles(self)

    def __eq__(self, other):
        return isinstance(other, FiniteLattice) and self.order == other.order

    def __hash__(self):
        return hash(self.order)

    def __repr__(self):
        return f"FiniteLattice(n={self.n}, length={self.length()})"


def lattice_from_poset(poset, table_limit=TABLE_LIMIT):
    """Check the poset is a lattice and equip it with meet/join.

    Greatest lower bounds are located by the principal-ideal trick: the
    common lower bounds of x and y form below[x] & below[y], and that mask
    is itself a principal ideal exactly when the pair has a meet.  Raises
    NotALatticeError naming the first offending pair.
    """
    n = poset.n
    if n == 0:
        raise NotALatticeError(None, None, "empty ground set has no bounds")
    below_index = {poset.below[x]: x for x in range(n)}
    above_index = {poset.above[x]: x for x in range(n)}
    full = (1 << n) - 1
    if full not in above_index:
        raise NotALatticeError(None, None, "no bottom element")
    if full not in below_index:
        raise NotALatticeError(None, None, "no top element")
    bottom = above_index[full]
    top = below_index[full]

    meet = join = None
    if n <= table_limit:
        meet = []
        join = []
        for x in range(n):
            mrow = []
            jrow = []
            bx = poset.below[x]
            ax = poset.above[x]
            for y in range(n):
                m = below_index.get(bx & poset.below[y])
                if m is None:
                    raise NotALatticeError(x, y, "pair has no greatest lower bound")
                j = above_index.get(ax & poset.above[y])
                if j is None:
                    raise NotALatticeError(x, y, "pair has no least upper bound")
                mrow.append(m)
                jrow.append(j)
            meet.append(tuple(mrow))
            join.append(tuple(jrow))
        meet = tuple(meet)
        join = tuple(join)
    else:
        for x in range(n):
            for y in range(x + 1, n):
                if poset.below[x] & poset.below[y] not in below_index:
                    raise NotALatticeError(x, y, "pair has no greatest lower bound")
                if poset.above[x] & poset.above[y] not in above_index:
                    raise NotALatticeError(x, y, "pair has no least upper bound")
    return FiniteLattice(poset, bottom, top, meet, join, below_index, above_index)


def lattice_from_covers(n, pairs, table_limit=TABLE_LIMIT):
    return lattice_from_poset(Poset.from_covers(n, pairs), table_limit=table_limit)


@dataclass(frozen=True)
class JirPoset:
    """The poset of join-irreducible elements of a host lattice.

    ``elements`` are host lattice indices in ascending order; ``order`` is
    the induced poset on positions 0..m-1; ``lcov`` gives each element's
    unique lower cover in the host lattice.
    """

    elements: tuple
    order: "Poset"
    lcov: tuple

    def position(self, lattice_index):
        return self.elements.index(lattice_index)

    def __len__(self):
        return len(self.elements)


def join_irreducibles(lat):
    """All nonzero elements with exactly one lower cover, as a JirPoset.

    Also checks the reconstruction identity: every element is the join of
    the join-irreducibles below it.
    """
    elems = []
    lcov = []
    for x in range(lat.n):
        if x == lat.bottom:
            continue
        low = lat.order.lower_covers(x)
        if low.bit_count() == 1:
            elems.append(x)
            lcov.append(low.bit_length() - 1)
    jir_mask = mask_from(elems)
    for z in range(lat.n):
        below_jirs = bit_list(lat.order.below[z] & jir_mask)
        assert lat.join_all(below_jirs) == z, "join-irreducible reconstruction failed"
    order = lat.order.restrict(elems)
    return JirPoset(tuple(elems), order, tuple(lcov))


def is_semimodular(lat):
    """True iff x ^ y -< x implies y -< x v y for all pairs."""
    for x in range(lat.n):
        for y in range(lat.n):
            m = lat.meet(x, y)
            if m != x and lat.order.covers_pair(m, x):
                j = lat.join(x, y)
                if j != y and not lat.order.covers_pair(y, j):
                    return False
    return True


def is_graded(lat):
    """True iff every cover raises the longest-chain rank by exactly one."""
    ranks = lat.ranks()
    return all(ranks[y] == ranks[x] + 1 for x, y in lat.covers())


def check_jhcc(lat, exhaustive_limit=24):
    """True iff all maximal chains of every interval have equal length.

    Small lattices get the literal check by chain enumeration; larger ones
    use the equivalent rank-gradedness criterion.
    """
    if lat.n > exhaustive_limit:
        return is_graded(lat)
    for a in range(lat.n):
        for b in range(lat.n):
            if a != b and lat.leq(a, b):
                lengths = maximal_chain_lengths(lat, a, b)
                if len(lengths) > 1:
                    return False
    return True


def maximal_chain_lengths(lat, a, b):
    """Set of lengths of maximal chains of the interval [a, b]."""
    if not lat.leq(a, b):
        raise PreconditionError(f"[{a}, {b}] is not an interval")
    interval = lat.order.above[a] & lat.order.below[b]
    lengths = set()
    stack = [(a, 0)]
    while stack:
        x, d = stack.pop()
        if x == b:
            lengths.add(d)
            continue
        for y in bit_indices(lat.order.upper_covers(x) & interval):
            stack.append((y, d + 1))
    return lengths


def is_geometric(lat):
    """Semimodular with every join-irreducible an atom."""
    if not is_semimodular(lat):
        return False
    jirs = mask_from(join_irreducibles(lat).elements)
    return jirs == lat.atoms()


def is_distributive(lat):
    return _distributive_violation(lat) is None


def _distributive_violation(lat):
    for x in range(lat.n):
        for y in range(lat.n):
            for z in range(y, lat.n):
                if lat.meet(x, lat.join(y, z)) != lat.join(lat.meet(x, y), lat.meet(x, z)):
                    return (x, y, z)
    return None


def is_modular(lat):
    for x in range(lat.n):
        for z in bit_indices(lat.order.above[x]):
            for y in range(lat.n):
                if lat.join(x, lat.meet(y, z)) != lat.meet(lat.join(x, y), z):
                    return False
    return True


def find_m3_sublattice(lat, cover_preserving=False):
    """A 5-tuple (t, u, v, w, s) forming a diamond sublattice, or None."""
    for u in range(lat.n):
        for v in range(u + 1, lat.n):
            if lat.order.comparable(u, v):
                continue
            t = lat.meet(u, v)
            s = lat.join(u, v)
            if cover_preserving:
                if not (lat.order.covers_pair(t, u) and lat.order.covers_pair(u, s)):
                    continue
            for w in bit_indices(lat.order.above[t] & lat.order.below[s]):
                if w == u or w == v or lat.order.comparable(w, u) or lat.order.comparable(w, v):
                    continue
                if (lat.meet(w, u) == t and lat.meet(w, v) == t
                        and lat.join(w, u) == s and lat.join(w, v) == s):
                    if cover_preserving and not (lat.order.covers_pair(t, w)
                                                 and lat.order.covers_pair(w, s)):
                        continue
                    return (t, u, v, w, s)
    return None


def find_n5_sublattice(lat):
    """A 5-tuple (t, x, z, y, s) forming a pentagon sublattice, or None."""
    for x in range(lat.n):
        for z in bit_indices(lat.order.strict_up_set(x)):
            for y in range(lat.n):
                if lat.order.comparable(y, x) or lat.order.comparable(y, z):
                    continue
                t = lat.meet(y, x)
                s = lat.join(y, x)
                if lat.meet(y, z) == t and lat.join(y, z) == s:
                    return (t, x, z, y, s)
    return None


def is_join_distributive(lat):
    """Semimodular and diamond-free (no M3 sublattice)."""
    return is_semimodular(lat) and find_m3_sublattice(lat) is None


def verify_length_preserving_embedding(lat, ext, f):
    """True iff f embeds lat into ext cover-preservingly, 0 to 0, 1 to 1,
    preserving meet and join, with both lattices of equal length."""
    if len(f) != lat.n or len(set(f)) != lat.n:
        return False
    if any(not 0 <= v < ext.n for v in f):
        return False
    if f[lat.bottom] != ext.bottom or f[lat.top] != ext.top:
        return False
    if lat.length() != ext.length():
        return False
    for x in range(lat.n):
        for y in range(x, lat.n):
            if f[lat.meet(x, y)] != ext.meet(f[x], f[y]):
                return False
            if f[lat.join(x, y)] != ext.join(f[x], f[y]):
                return False
    for x, y in lat.covers():
        if not ext.order.covers_pair(f[x], f[y]):
            return False
    return True


def chains_lattice_disjoint(lat, chain1, chain2):
    """True iff every cross pair of the two join-irreducible chains meets to bottom."""
    jir_mask = mask_from(join_irreducibles(lat).elements)
    for chain in (chain1, chain2):
        if not lat.order.is_chain(chain):
            raise NotAChainError(f"{sorted(chain)} is not a chain")
        for x in chain:
            if not jir_mask >> x & 1:
                raise PreconditionError(f"element {x} is not join-irreducible")
    return all(lat.meet(x, y) == lat.bottom for x in chain1 for y in chain2)


def find_isomorphism(lat1, lat2):
    """A lattice isomorphism lat1 -> lat2 as an index tuple, or None.

    Backtracking over order-compatible images, pruned by an iterated
    structural signature (rank, cover degrees, irreducibility profile).
    """
    if lat1.n != lat2.n or lat1.length() != lat2.length():
        return None
    sig1 = _signatures(lat1)
    sig2 = _signatures(lat2)
    if sorted(sig1) != sorted(sig2):
        return None
    candidates = [[y for y in range(lat2.n) if sig2[y] == sig1[x]] for x in range(lat1.n)]
    order_of_assignment = sorted(range(lat1.n), key=lambda x: (len(candidates[x]), x))
    f = [-1] * lat1.n
    used = [False] * lat2.n
    assigned = []

    def backtrack(i):
        if i == len(order_of_assignment):
            return True
        x = order_of_assignment[i]
        for y in candidates[x]:
            if used[y]:
                continue
            ok = True
            for z in assigned:
                if lat1.leq(x, z) != lat2.leq(y, f[z]) or lat1.leq(z, x) != lat2.leq(f[z], y):
                    ok = False
                    break
            if ok:
                f[x] = y
                used[y] = True
                assigned.append(x)
                if backtrack(i + 1):
                    return True
                assigned.pop()
                used[y] = False
                f[x] = -1
        return False

    if not backtrack(0):
        return None
    for x in range(lat1.n):
        for y in range(lat1.n):
            if f[lat1.meet(x, y)] != lat2.meet(f[x], f[y]):
                return None
            if f[lat1.join(x, y)] != lat2.join(f[x], f[y]):
                return None
    return tuple(f)


def _signatures(lat):
    ranks = lat.ranks()
    depth = lat.length()
    jirs = mask_from(join_irreducibles(lat).elements)
    atoms = lat.atoms()
    sig = [
        (ranks[x], lat.order.upper_covers(x).bit_count(),
         lat.order.lower_covers(x).bit_count(),
         bool(jirs >> x & 1), bool(atoms >> x & 1), depth - ranks[x])
        for x in range(lat.n)
    ]
    for _ in range(2):
        sig = [
            (sig[x],
             tuple(sorted(sig[y] for y in bit_indices(lat.order.upper_covers(x)))),
             tuple(sorted(sig[y] for y in bit_indices(lat.order.lower_covers(x)))))
            for x in range(lat.n)
        ]
    return sig
