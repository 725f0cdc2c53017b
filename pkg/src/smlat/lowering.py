"""Lowering a join-irreducible element.

Given a semimodular lattice, a join-irreducible ``element`` that is not an
atom, and a prescribed ``onto`` strictly below the element's unique lower
cover, the construction produces a length-preserving semimodular extension
in which the element's role is taken over by a new join-irreducible whose
unique lower cover is ``onto``; every other join-irreducible is untouched.

Two independent routes build the extension:

* ``lower_direct`` doubles the elements above ``onto`` none of whose
  covers-or-equals successors lie under the lowered element, and wires the
  order by four explicit cases.
* ``lower_via_geometry`` performs the same construction on the flat family
  of the lattice's geometry, adjoining one new flat per doubled element
  and rewiring the ground poset, then reads the lattice back off.

The two routes cross-check each other; the closed-form meet, join, and
cover formulas are verified against the extension's own tables.
"""

import types
from dataclasses import dataclass

from .bitset import bit_indices, bit_list, mask_from
from .errors import NotALatticeError, PreconditionError, VerificationError
from .geometry import Geometry, check_axioms, geom_of_lattice, lat_of_geometry
from .lattice import (FiniteLattice, is_distributive, is_join_distributive, is_modular,
                      is_semimodular, join_irreducibles, lattice_from_poset,
                      verify_length_preserving_embedding)
from .poset import Poset


class LoweringResult:
    """One lowering step: the extension and its bookkeeping.

    Attributes:
        source: the lattice that was extended.
        lattice: the extension.
        embed: index map source -> extension (a verified length-preserving
            embedding sending bottom to bottom and top to top).
        lowered: the join-irreducible of ``source`` that was lowered.
        onto: the prescribed lower cover of the replacement.
        new_jir: extension index of the replacement join-irreducible.
        doubled: ascending source indices that received lifted copies.
        lifted: ascending extension indices of the copies.
        lift: mapping doubled source index -> lifted extension index.
    """

    __slots__ = ("source", "lattice", "embed", "lowered", "onto", "new_jir",
                 "doubled", "lifted", "lift", "source_of", "alit")

    def __init__(self, source, lattice, embed, lowered, onto, new_jir, doubled, lift):
        self.source = source
        self.lattice = lattice
        self.embed = tuple(embed)
        self.lowered = lowered
        self.onto = onto
        self.new_jir = new_jir
        self.doubled = tuple(doubled)
        self.lift = types.MappingProxyType(dict(lift))
        self.lifted = tuple(sorted(self.lift.values()))
        self.source_of = types.MappingProxyType({k: x for x, k in enumerate(self.embed)})
        self.alit = types.MappingProxyType({self.lift[d]: d for d in self.doubled})

    def __repr__(self):
        return (f"LoweringResult(lowered={self.lowered}, onto={self.onto}, "
                f"n={self.source.n}->{self.lattice.n})")


def _check_lowering_args(lat, element, onto, require_semimodular=False):
    for name, value in (("element", element), ("onto", onto)):
        if not 0 <= value < lat.n:
            raise IndexError(f"{name}={value} out of range for n={lat.n}")
    jir = join_irreducibles(lat)
    if element not in jir.elements:
        raise PreconditionError(f"element {element} is not join-irreducible")
    lcov = jir.lcov[jir.elements.index(element)]
    if lcov == lat.bottom:
        raise PreconditionError(f"element {element} is an atom and cannot be lowered")
    if not lat.order.lt(onto, lcov):
        raise PreconditionError(
            f"onto={onto} is not strictly below the lower cover {lcov} of element {element}")
    if require_semimodular and not is_semimodular(lat):
        raise PreconditionError("lattice is not semimodular")
    return lcov


def doubled_elements(lat, element, onto):
    """Source elements above ``onto`` whose covers-or-equals successors all
    avoid the lowered element; these are the ones that get lifted copies."""
    _check_lowering_args(lat, element, onto)
    out = []
    for x in bit_list(lat.order.above[onto]):
        if lat.leq(element, x):
            continue
        if any(lat.leq(element, y) for y in bit_indices(lat.order.upper_covers(x))):
            continue
        out.append(x)
    return tuple(out)


def lower_direct(lat, element, onto, verify=True):
    """Build the lowering extension by the direct order construction."""
    _check_lowering_args(lat, element, onto, require_semimodular=True)
    doubled = doubled_elements(lat, element, onto)
    n = lat.n
    lift = {d: n + i for i, d in enumerate(doubled)}
    total = n + len(doubled)

    # join of each doubled element with the lowered one, used by the
    # "copy below original" rule
    join_e = {d: lat.join(d, element) for d in doubled}

    below = [0] * total
    for y in range(n):
        row = lat.order.below[y]
        for d in doubled:
            if lat.leq(join_e[d], y):
                row |= 1 << lift[d]
        below[y] = row
    for d in doubled:
        row = 1 << lift[d]
        for x in bit_indices(lat.order.below[d]):
            row |= 1 << x
        for d2 in doubled:
            if d2 != d and lat.leq(d2, d):
                row |= 1 << lift[d2]
        below[lift[d]] = row

    try:
        ext = lattice_from_poset(Poset.from_leq(total, below))
    except NotALatticeError as exc:
        raise VerificationError(f"direct lowering did not produce a lattice: {exc}") from exc
    result = LoweringResult(lat, ext, range(n), element, onto, lift[onto], doubled, lift)
    if verify:
        verify_lowering(result)
    return result


def lower_via_geometry(lat, element, onto, verify=True):
    """Build the lowering extension through the flat family of the geometry."""
    _check_lowering_args(lat, element, onto, require_semimodular=True)
    geom = geom_of_lattice(lat)
    jir = join_irreducibles(lat)
    pos_e = jir.elements.index(element)
    ebit = 1 << pos_e

    flat_of = {}
    element_of = {}
    for x in range(lat.n):
        mask = 0
        for i, p in enumerate(jir.elements):
            if lat.order.below[x] >> p & 1:
                mask |= 1 << i
        flat_of[x] = mask
        element_of[mask] = x
    base_flat = flat_of[onto]

    doubled_flats = _doubled_flats(geom, base_flat, ebit)
    new_flats = [x | ebit for x in doubled_flats]
    if any(geom.is_flat(x) for x in new_flats):
        raise VerificationError("a new flat already belongs to the family")

    ground = geom.ground
    below_r = list(ground.below)
    below_r[pos_e] = base_flat | ebit
    try:
        reordered = Poset.from_leq(ground.n, below_r)
    except Exception as exc:
        raise VerificationError(f"rewired ground relation is not a poset: {exc}") from exc

    extended = Geometry(reordered, list(geom.flats) + new_flats)
    report = check_axioms(extended)
    if not report.ok:
        raise VerificationError(f"extended flat family fails axioms: {report.failures()}")
    ext = lat_of_geometry(extended, validate=False)

    embed = tuple(extended.flat_index(flat_of[x]) for x in range(lat.n))
    doubled = tuple(sorted(element_of[x] for x in doubled_flats))
    lift = {element_of[x]: extended.flat_index(x | ebit) for x in doubled_flats}
    result = LoweringResult(lat, ext, embed, element, onto,
                            extended.flat_index(base_flat | ebit), doubled, lift)
    if verify:
        verify_lowering(result)
    return result


def _doubled_flats(geom, base_flat, ebit):
    """Flats containing the base whose covers-or-equals successors in the
    family all avoid the lowered element.  Works purely on the family."""
    out = []
    for x in geom.flats:
        if base_flat & ~x or x & ebit:
            continue
        ok = True
        for y in geom.flats:
            if y == x or x & ~y or not y & ebit:
                continue
            # y is a successor containing the element; reject if it covers x
            if not any(m != x and m != y and x & ~m == 0 and m & ~y == 0
                       for m in geom.flats):
                ok = False
                break
        if ok:
            out.append(x)
    return out


def lower(lat, element, onto, route="direct", verify=True):
    """Lower with a chosen route: "direct", "geometry", or "both".

    With "both", the two constructions are built independently and the
    canonical element correspondence between them is checked to be an
    order isomorphism; the direct result is returned.
    """
    if route == "direct":
        return lower_direct(lat, element, onto, verify=verify)
    if route == "geometry":
        return lower_via_geometry(lat, element, onto, verify=verify)
    if route != "both":
        raise PreconditionError(f"unknown route {route!r}")
    direct = lower_direct(lat, element, onto, verify=verify)
    geo = lower_via_geometry(lat, element, onto, verify=verify)
    cross_check_routes(direct, geo)
    return direct


def cross_check_routes(direct, geo):
    """Verify the canonical index correspondence between the two routes is
    an order isomorphism (raises VerificationError otherwise)."""
    if direct.lattice.n != geo.lattice.n:
        raise VerificationError("route results differ in size")
    f = [-1] * direct.lattice.n
    for x in range(direct.source.n):
        f[direct.embed[x]] = geo.embed[x]
    for d in direct.doubled:
        f[direct.lift[d]] = geo.lift[d]
    if sorted(f) != list(range(direct.lattice.n)):
        raise VerificationError("route correspondence is not a bijection")
    a, b = direct.lattice, geo.lattice
    for x in range(a.n):
        for y in range(a.n):
            if a.leq(x, y) != b.leq(f[x], f[y]):
                raise VerificationError(f"route correspondence breaks order at ({x}, {y})")
    return tuple(f)


def verify_lowering(result):
    """Check every invariant a lowering must satisfy; VerificationError on
    any failure (such a failure is always an implementation bug)."""
    lat, ext, emb = result.source, result.lattice, result.embed

    if ext.n != lat.n + len(result.doubled):
        raise VerificationError("extension size is not source size plus doubled count")
    if not verify_length_preserving_embedding(lat, ext, emb):
        raise VerificationError("embedding is not a length-preserving {0,1}-embedding")
    if not is_semimodular(ext):
        raise VerificationError("extension is not semimodular")

    jir_src = join_irreducibles(lat)
    jir_ext = join_irreducibles(ext)
    if len(jir_src) != len(jir_ext):
        raise VerificationError("join-irreducible count changed")
    image = {emb[p] for p in jir_src.elements}
    actual = set(jir_ext.elements)
    if image - actual != {emb[result.lowered]}:
        raise VerificationError("lowered element is not the only join-irreducible lost")
    if actual - image != {result.new_jir}:
        raise VerificationError("replacement is not the only join-irreducible gained")

    low = ext.order.lower_covers(result.new_jir)
    if low != 1 << emb[result.onto]:
        raise VerificationError("replacement's unique lower cover is not the target")
    if result.new_jir != result.lift[result.onto]:
        raise VerificationError("replacement is not the lifted copy of the target")

    if result.onto not in result.doubled:
        raise VerificationError("target element was not doubled")
    members = [emb[d] for d in result.doubled] + list(result.lifted)
    if any(not ext.leq(emb[result.onto], m) for m in members):
        raise VerificationError("target is not the least doubled-or-lifted element")

    if not _is_convex(lat, result.doubled):
        raise VerificationError("doubled set is not convex in the source")
    if not _is_convex(ext, result.lifted):
        raise VerificationError("lifted set is not convex in the extension")
    if not _is_convex(ext, [emb[d] for d in result.doubled] + list(result.lifted)):
        raise VerificationError("doubled-plus-lifted set is not convex in the extension")


def _is_convex(lat, elements):
    mask = mask_from(elements)
    for a in elements:
        for b in elements:
            if lat.leq(a, b):
                between = lat.order.above[a] & lat.order.below[b]
                if between & ~mask:
                    return False
    return True


def meet_formula(result, x, y):
    """Closed-form meet in the extension; agrees with the table everywhere."""
    lat = result.source
    emb, inv, alit, lift = result.embed, result.source_of, result.alit, result.lift
    e = result.lowered
    if x in inv and y in inv:
        return emb[lat.meet(inv[x], inv[y])]
    if x in alit and y in alit:
        return lift[lat.meet(alit[x], alit[y])]
    if x in alit:  # y is an original element
        if lat.leq(e, inv[y]):
            return lift[lat.meet(alit[x], inv[y])]
        return emb[lat.meet(alit[x], inv[y])]
    # x original, y a copy
    if lat.leq(e, inv[x]):
        return lift[lat.meet(inv[x], alit[y])]
    return emb[lat.meet(inv[x], alit[y])]


def join_formula(result, x, y):
    """Closed-form join in the extension; agrees with the table everywhere."""
    lat = result.source
    emb, inv, alit, lift = result.embed, result.source_of, result.alit, result.lift
    e = result.lowered
    doubled = set(result.doubled)
    if x in inv and y in inv:
        return emb[lat.join(inv[x], inv[y])]
    if x in alit and y in alit:
        w = lat.join(alit[x], alit[y])
    elif x in alit:
        w = lat.join(alit[x], inv[y])
    else:
        w = lat.join(inv[x], alit[y])
    if w in doubled:
        return lift[w]
    return emb[lat.join(w, e)]


def covers_formula(result, x, y):
    """Closed-form covering relation in the extension."""
    lat = result.source
    inv, alit = result.source_of, result.alit
    e = result.lowered
    ranks = lat.ranks()
    if x in inv and y in inv:
        return lat.order.covers_pair(inv[x], inv[y])
    if x in alit and y in alit:
        return lat.order.covers_pair(alit[x], alit[y])
    if x in inv and y in alit:
        return inv[x] == alit[y]
    # x a copy, y an original: y must be the join with the lowered element,
    # reached across an interval of length exactly two
    w = lat.join(alit[x], e)
    return inv[y] == w and ranks[w] - ranks[alit[x]] == 2


PRESERVATION_PREDICATES = {
    "distributive": is_distributive,
    "modular": is_modular,
    "join_distributive": is_join_distributive,
    "semimodular": is_semimodular,
}


@dataclass(frozen=True)
class PreservationRecord:
    predicate: str
    before: bool
    after: bool
    lowered: int
    onto: int


def check_preservation(lat, element, onto, predicate):
    """Evaluate a predicate on the source and on its lowering extension."""
    if predicate not in PRESERVATION_PREDICATES:
        raise PreconditionError(f"unknown predicate {predicate!r}")
    fn = PRESERVATION_PREDICATES[predicate]
    result = lower_direct(lat, element, onto)
    return PreservationRecord(predicate, fn(lat), fn(result.lattice), element, onto)
