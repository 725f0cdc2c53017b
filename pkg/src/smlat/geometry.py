"""Geometries: a ground poset together with a family of flats.

A geometry here is a pair (ground poset, flat family) satisfying five
axioms: the family has finite length under inclusion, contains the ground
set and is intersection-closed, every flat is a down-set, the empty set
and every principal down-set (closed or strict) is a flat, and whenever
an element's strict down-set lies inside a flat that excludes it, some
flat covering that flat contains the element.

These structures correspond canonically to semimodular lattices of finite
length: ``geom_of_lattice`` and ``lat_of_geometry`` are mutually inverse
up to isomorphism, and the round-trip operations verify the canonical
maps explicitly.
"""

from dataclasses import dataclass, field

from .bitset import bit_indices
from .errors import AxiomError, BoundExceededError, NotSemimodularError, VerificationError
from .lattice import is_semimodular, join_irreducibles, lattice_from_poset
from .poset import Poset


class Geometry:
    """Immutable ground poset plus flat family (bitmasks over the ground set).

    Flats are stored deduplicated and sorted by (size, value); that order
    also fixes the element indexing of the associated lattice.
    """

    __slots__ = ("ground", "flats", "_flat_set", "_index")

    def __init__(self, ground, flats):
        self.ground = ground
        full = (1 << ground.n) - 1
        normalized = sorted(set(flats), key=lambda m: (m.bit_count(), m))
        for m in normalized:
            if m & ~full:
                raise ValueError(f"flat {bin(m)} is not a subset of the ground set")
        self.flats = tuple(normalized)
        self._flat_set = frozenset(normalized)
        self._index = {m: i for i, m in enumerate(self.flats)}

    @property
    def ground_mask(self):
        return (1 << self.ground.n) - 1

    def is_flat(self, mask):
        return mask in self._flat_set

    def flat_index(self, mask):
        return self._index[mask]

    def __eq__(self, other):
        return (isinstance(other, Geometry) and self.ground == other.ground
                and self.flats == other.flats)

    def __hash__(self):
        return hash((self.ground, self.flats))

    def __repr__(self):
        return f"Geometry(ground_n={self.ground.n}, flats={len(self.flats)})"


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom verdicts with a concrete witness for each failure."""

    finite_length: bool
    intersection_closed: bool
    down_sets: bool
    principal: bool
    covering: bool
    chain_length: int
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self):
        return (self.finite_length and self.intersection_closed and self.down_sets
                and self.principal and self.covering)

    def failures(self):
        return [name for name in ("finite_length", "intersection_closed", "down_sets",
                                  "principal", "covering") if not getattr(self, name)]


def closure(geom, mask):
    """Smallest flat containing ``mask``: the intersection of all flats above it."""
    out = geom.ground_mask
    for flat in geom.flats:
        if flat & mask == mask:
            out &= flat
    return out


def check_axioms(geom):
    """Evaluate all five geometry axioms, with witnesses on failure."""
    ground = geom.ground
    flats = geom.flats
    witnesses = {}

    chain_length = _family_length(flats)
    finite_length = True  # finite families always have finite chain length

    intersection_closed = geom.is_flat(geom.ground_mask)
    if not intersection_closed:
        witnesses["intersection_closed"] = ("ground set missing",)
    else:
        for i, x in enumerate(flats):
            for y in flats[i + 1:]:
                if not geom.is_flat(x & y):
                    intersection_closed = False
                    witnesses["intersection_closed"] = (x, y)
                    break
            if not intersection_closed:
                break

    down_sets = True
    for x in flats:
        if not ground.is_down_set(x):
            down_sets = False
            witnesses["down_sets"] = (x,)
            break

    principal = geom.is_flat(0)
    if not principal:
        witnesses["principal"] = ("empty set missing",)
    else:
        for u in range(ground.n):
            if not geom.is_flat(ground.down_set(u)) or not geom.is_flat(ground.strict_down_set(u)):
                principal = False
                witnesses["principal"] = (u,)
                break

    covering = True
    for q in range(ground.n):
        sdown = ground.strict_down_set(q)
        qbit = 1 << q
        for x in flats:
            if x & qbit or sdown & ~x:
                continue
            cl = closure(geom, x | qbit)
            if not geom.is_flat(cl) or not _covers_in_family(geom, x, cl):
                covering = False
                witnesses["covering"] = (q, x)
                break
        if not covering:
            break

    return AxiomReport(finite_length, intersection_closed, down_sets, principal,
                       covering, chain_length, witnesses)


def _family_length(flats):
    best = {}
    length = 0
    for x in flats:  # ascending by size, so proper subsets come first
        d = 0
        for y, dy in best.items():
            if y != x and y & x == y and dy + 1 > d:
                d = dy + 1
        best[x] = d
        length = max(length, d)
    return length


def _covers_in_family(geom, x, z):
    if x == z or x & ~z:
        return False
    for mid in geom.flats:
        if mid != x and mid != z and mid & ~z == 0 and x & ~mid == 0:
            return False
    return True


def geometry_covers(geom, x, z):
    """True iff z arises from x by closing with one element whose strict
    down-set already lies in x."""
    return cover_witness(geom, x, z) is not None


def cover_witness(geom, x, z):
    """An element u with u not in x, strict down-set of u inside x, and
    closure(x + u) == z; None when no such witness exists."""
    for u in range(geom.ground.n):
        ubit = 1 << u
        if x & ubit:
            continue
        if geom.ground.strict_down_set(u) & ~x:
            continue
        if closure(geom, x | ubit) == z:
            return u
    return None


def _flat_of(lat, jir, x):
    mask = 0
    for i, p in enumerate(jir.elements):
        if lat.order.below[x] >> p & 1:
            mask |= 1 << i
    return mask


def geom_of_lattice(lat, validate=True):
    """The geometry of a semimodular lattice: ground poset of
    join-irreducibles, flats the traces of the principal ideals."""
    if not is_semimodular(lat):
        raise NotSemimodularError("geometry is only defined for semimodular lattices")
    jir = join_irreducibles(lat)
    flats = [_flat_of(lat, jir, x) for x in range(lat.n)]
    if len(set(flats)) != lat.n:
        raise VerificationError("principal-ideal traces are not pairwise distinct")
    geom = Geometry(jir.order, flats)
    if validate:
        report = check_axioms(geom)
        if not report.ok:
            raise VerificationError(f"geometry of a semimodular lattice failed axioms: "
                                    f"{report.failures()}")
    return geom


def lat_of_geometry(geom, validate=True, assert_tables=True):
    """The lattice of flats ordered by inclusion.

    Meet is intersection and join is the closure of the union; both are
    asserted against the greatest-lower/least-upper tables.  The result is
    semimodular of finite length (asserted).
    """
    if validate:
        report = check_axioms(geom)
        if not report.ok:
            raise AxiomError(report)
    flats = geom.flats
    m = len(flats)
    below = []
    for i in range(m):
        row = 0
        for j in range(m):
            if flats[j] & ~flats[i] == 0:
                row |= 1 << j
        below.append(row)
    lat = lattice_from_poset(Poset.from_leq(m, below))
    if assert_tables:
        for i in range(m):
            for j in range(i, m):
                if flats[lat.meet(i, j)] != flats[i] & flats[j]:
                    raise VerificationError(f"meet of flats {i}, {j} is not their intersection")
        if m <= 128:
            for i in range(m):
                for j in range(i, m):
                    if flats[lat.join(i, j)] != closure(geom, flats[i] | flats[j]):
                        raise VerificationError(
                            f"join of flats {i}, {j} is not the closure of their union")
        if not is_semimodular(lat):
            raise VerificationError("lattice of flats is not semimodular")
    return lat


def jir_of_geometry(geom):
    """The join-irreducible flats: exactly the principal down-sets of the
    ground poset, asserted against the lattice's join-irreducibles."""
    principal = sorted((geom.ground.down_set(u) for u in range(geom.ground.n)),
                       key=lambda m: (m.bit_count(), m))
    lat = lat_of_geometry(geom)
    from_lattice = sorted((geom.flats[i] for i in join_irreducibles(lat).elements),
                          key=lambda m: (m.bit_count(), m))
    if principal != from_lattice:
        raise VerificationError("join-irreducible flats differ from principal down-sets")
    return tuple(principal)


def roundtrip_lattice(lat):
    """The canonical isomorphism from a semimodular lattice onto the
    lattice of its geometry's flats, fully verified."""
    geom = geom_of_lattice(lat)
    flat_lat = lat_of_geometry(geom, validate=False)
    jir = join_irreducibles(lat)
    f = tuple(geom.flat_index(_flat_of(lat, jir, x)) for x in range(lat.n))
    if len(set(f)) != lat.n or flat_lat.n != lat.n:
        raise VerificationError("canonical lattice map is not a bijection")
    for x in range(lat.n):
        for y in range(lat.n):
            if lat.leq(x, y) != flat_lat.leq(f[x], f[y]):
                raise VerificationError(f"canonical lattice map breaks order at ({x}, {y})")
    for x in range(lat.n):
        for y in range(x, lat.n):
            if f[lat.meet(x, y)] != flat_lat.meet(f[x], f[y]):
                raise VerificationError(f"canonical lattice map breaks meet at ({x}, {y})")
            if f[lat.join(x, y)] != flat_lat.join(f[x], f[y]):
                raise VerificationError(f"canonical lattice map breaks join at ({x}, {y})")
    return f


def roundtrip_geometry(geom):
    """The canonical isomorphism from a geometry onto the geometry of its
    flat lattice: the ground map sends u to its principal down-set."""
    lat = lat_of_geometry(geom)
    geom2 = geom_of_lattice(lat)
    n = geom.ground.n
    # geom2's ground elements are positions over Jir(lat); flat i of lat is
    # geom.flats[i], and the join-irreducible flats are the principal
    # down-sets, so u maps to the position holding flat down_set(u).
    jir2 = join_irreducibles(lat)
    gamma = []
    for u in range(n):
        target = geom.flat_index(geom.ground.down_set(u))
        try:
            gamma.append(jir2.elements.index(target))
        except ValueError:
            raise VerificationError(f"principal down-set of {u} is not join-irreducible")
    if len(set(gamma)) != n or geom2.ground.n != n:
        raise VerificationError("canonical ground map is not a bijection")
    for u in range(n):
        for v in range(n):
            if geom.ground.leq(u, v) != geom2.ground.leq(gamma[u], gamma[v]):
                raise VerificationError(f"canonical ground map breaks order at ({u}, {v})")
    image = set()
    for flat in geom.flats:
        mapped = 0
        for u in bit_indices(flat):
            mapped |= 1 << gamma[u]
        image.add(mapped)
    if image != set(geom2.flats):
        raise VerificationError("canonical ground map does not carry flats onto flats")
    return tuple(gamma)


def enumerate_geometries(ground, max_flats=None, max_ground=12):
    """All geometries on the given ground poset, in a fixed canonical order.

    Walks intersection-closed families of down-sets that contain the
    mandatory flats, then filters by the covering axiom.  Candidate flats
    are processed ascending by (size, value), so each intersection test
    only involves already-decided sets.
    """
    if ground.n > max_ground:
        raise BoundExceededError(f"ground poset has {ground.n} elements (limit {max_ground})")
    downs = ground.down_set_masks()
    base = {0, (1 << ground.n) - 1}
    for u in range(ground.n):
        base.add(ground.down_set(u))
        base.add(ground.strict_down_set(u))
    base = _intersection_closure(base)
    optional = [d for d in downs if d not in base]
    optional.sort(key=lambda m: (m.bit_count(), m))

    results = []

    def dfs(i, chosen, chosen_set):
        if i == len(optional):
            family = sorted(base | chosen_set, key=lambda m: (m.bit_count(), m))
            if max_flats is not None and len(family) > max_flats:
                return
            if _covering_holds(ground, family):
                results.append(Geometry(ground, family))
            return
        cand = optional[i]
        dfs(i + 1, chosen, chosen_set)  # exclude first: smaller families come first
        ok = True
        for other in chosen:
            inter = cand & other
            if inter != cand and inter != other and inter not in chosen_set and inter not in base:
                ok = False
                break
        if ok:
            for other in base:
                inter = cand & other
                if inter != cand and inter != other and inter not in chosen_set and inter not in base:
                    ok = False
                    break
        if ok:
            chosen.append(cand)
            chosen_set.add(cand)
            dfs(i + 1, chosen, chosen_set)
            chosen.pop()
            chosen_set.remove(cand)

    dfs(0, [], set())
    return results


def _intersection_closure(masks):
    out = set(masks)
    frontier = list(out)
    while frontier:
        x = frontier.pop()
        for y in list(out):
            inter = x & y
            if inter not in out:
                out.add(inter)
                frontier.append(inter)
    return out


def _covering_holds(ground, family):
    """Fast covering-axiom check for an intersection-closed family."""
    fam_set = set(family)
    full = (1 << ground.n) - 1
    for q in range(ground.n):
        sdown = ground.strict_down_set(q)
        qbit = 1 << q
        for x in family:
            if x & qbit or sdown & ~x:
                continue
            target = x | qbit
            cl = full
            for flat in family:
                if flat & target == target:
                    cl &= flat
            if cl not in fam_set:
                return False
            for mid in family:
                if mid != x and mid != cl and mid & ~cl == 0 and x & ~mid == 0:
                    return False
    return True


def enumerate_ground_posets(n):
    """All labeled posets on 0..n-1 (the search substrate for small cases)."""
    if n == 0:
        yield Poset.from_leq(0, [])
        return
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    npairs = len(pairs)
    for choice in range(1 << npairs):
        below = [1 << u for u in range(n)]
        ok = True
        for k in range(npairs):
            if choice >> k & 1:
                i, j = pairs[k]
                below[j] |= 1 << i
        for u in range(n):
            for v in bit_indices(below[u]):
                if v != u and (below[u] >> v & 1) and (below[v] >> u & 1):
                    ok = False
                    break
                if below[v] & ~below[u]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield Poset.from_leq(n, below)
