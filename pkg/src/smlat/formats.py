"""Line-oriented file formats and the DOT emitter.

Lattice files are a header line ``n=<count>`` (optionally followed by
``names=a,b,c``) and one cover pair per line, lower index first.  Blank
lines and ``#`` comments are ignored.  Element 0 need not be the bottom;
the parser locates bottom and top itself.  Emission is canonical, so
parse-then-emit is the identity on canonical files.

Trace files record an extension run: the initial lattice, one block per
lowering step with its verification record, and the final lattice.
Replaying the recorded steps on the recorded initial lattice reproduces
the final lattice exactly.
"""

from dataclasses import dataclass

from .bitset import bit_list
from .errors import ParseError, VerificationError
from .lattice import lattice_from_poset
from .poset import Poset

TRACE_HEADER = "smlat-trace 1"
_CHECK_KEYS = ("embedding", "semimodular", "length", "jir", "lcov")


@dataclass(frozen=True)
class LatticeDocument:
    lattice: object
    names: tuple = None


def _parse_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_poset(text):
    """Parse the cover-list format into a Poset."""
    n = None
    pairs = []
    names = None
    for lineno, line in _parse_lines(text):
        if line.startswith("n="):
            if n is not None:
                raise ParseError(lineno, "duplicate n= header")
            try:
                n = int(line[2:])
            except ValueError:
                raise ParseError(lineno, f"bad element count {line[2:]!r}")
            if n < 0:
                raise ParseError(lineno, "element count must be nonnegative")
            continue
        if line.startswith("names="):
            names = tuple(s.strip() for s in line[len("names="):].split(","))
            continue
        if n is None:
            raise ParseError(lineno, "cover pair before the n= header")
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(lineno, f"expected two indices, got {line!r}")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer cover pair {line!r}")
        if not (0 <= x < n and 0 <= y < n):
            raise ParseError(lineno, f"cover pair ({x}, {y}) out of range")
        pairs.append((x, y))
    if n is None:
        raise ParseError(1, "missing n= header")
    if names is not None and len(names) != n:
        raise ParseError(1, f"names count {len(names)} does not match n={n}")
    return Poset.from_covers(n, pairs), names


def parse_document(text):
    """Parse a lattice file; raises NotALatticeError for mere posets."""
    poset, names = parse_poset(text)
    return LatticeDocument(lattice_from_poset(poset), names)


def parse_lattice(text):
    return parse_document(text).lattice


def emit_lattice(lat, names=None):
    """Canonical text form: header, optional names, sorted cover pairs."""
    lines = [f"n={lat.n}"]
    if names is not None:
        lines.append("names=" + ",".join(names))
    lines.extend(f"{x} {y}" for x, y in lat.covers())
    return "\n".join(lines) + "\n"


def emit_poset(poset, names=None):
    lines = [f"n={poset.n}"]
    if names is not None:
        lines.append("names=" + ",".join(names))
    lines.extend(f"{x} {y}" for x, y in poset.covers)
    return "\n".join(lines) + "\n"


# Traces


def emit_trace(trace):
    """Serialize an ExtensionTrace as line-delimited records."""
    lines = [TRACE_HEADER, "[initial]"]
    lines.append(emit_lattice(trace.initial).rstrip("\n"))
    for step, stat in zip(trace.steps, trace.stats):
        lines.append("[step]")
        lines.append(f"lowered={step.lowered}")
        lines.append(f"onto={step.onto}")
        lines.append(f"doubled={len(step.doubled)}")
        lines.append(f"size={step.lattice.n}")
        checks = ",".join(f"{key}:1" for key in _CHECK_KEYS)
        routes = "1" if stat.cross_checked else "-"
        lines.append(f"checks={checks},routes:{routes}")
    lines.append("[final]")
    lines.append(emit_lattice(trace.final).rstrip("\n"))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StepRecord:
    lowered: int
    onto: int
    doubled: int
    size: int


@dataclass(frozen=True)
class TraceDocument:
    initial: object
    steps: tuple
    final: object
    final_text: str


def parse_trace(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != TRACE_HEADER:
        raise ParseError(1, f"missing {TRACE_HEADER!r} header")
    sections = []
    current = None
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("[initial]", "[step]", "[final]"):
            current = (line, lineno, [])
            sections.append(current)
            continue
        if current is None:
            raise ParseError(lineno, "content before the first section")
        current[2].append((lineno, line))
    if not sections or sections[0][0] != "[initial]" or sections[-1][0] != "[final]":
        raise ParseError(1, "trace must start with [initial] and end with [final]")

    def section_text(entries):
        return "\n".join(line for _, line in entries) + "\n"

    initial = parse_lattice(section_text(sections[0][2]))
    final_text = section_text(sections[-1][2])
    final = parse_lattice(final_text)
    steps = []
    for kind, lineno, entries in sections[1:-1]:
        if kind != "[step]":
            raise ParseError(lineno, "unexpected section ordering")
        fields = {}
        for entry_lineno, line in entries:
            if "=" not in line:
                raise ParseError(entry_lineno, f"expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            fields[key] = value
        try:
            steps.append(StepRecord(int(fields["lowered"]), int(fields["onto"]),
                                    int(fields["doubled"]), int(fields["size"])))
        except (KeyError, ValueError) as exc:
            raise ParseError(lineno, f"bad step record: {exc}")
    return TraceDocument(initial, tuple(steps), final, final_text)


def verify_trace(text):
    """Replay a trace and re-verify every invariant.

    Each recorded step is re-run with full verification; the recorded
    doubled counts and sizes must match, and the replayed final lattice
    must reproduce the recorded one byte for byte.
    """
    from .lowering import lower_direct
    doc = parse_trace(text)
    current = doc.initial
    for record in doc.steps:
        step = lower_direct(current, record.lowered, record.onto, verify=True)
        if len(step.doubled) != record.doubled:
            raise VerificationError(
                f"recorded doubled count {record.doubled} differs from replay")
        if step.lattice.n != record.size:
            raise VerificationError(f"recorded size {record.size} differs from replay")
        current = step.lattice
    if emit_lattice(current) != doc.final_text:
        raise VerificationError("replayed final lattice differs from the recorded one")
    return True


# DOT emission

_HIGHLIGHT_STYLES = {
    "doubled": "style=filled, fillcolor=lightblue",
    "lifted": "style=filled, fillcolor=orange",
    "jir": "shape=doublecircle",
    "new": "style=filled, fillcolor=palegreen",
}
_FALLBACK_STYLES = ("style=filled, fillcolor=gray80",
                    "style=filled, fillcolor=khaki",
                    "style=filled, fillcolor=plum")


def emit_dot(lat, highlight=None, names=None):
    """Deterministic DOT digraph of the cover relation, bottom to top,
    grouped into ranks by height.  ``highlight`` maps a label to element
    sets drawn with a distinct style."""
    ranks = lat.ranks()
    styles = {}
    if highlight:
        fallback = 0
        for group in sorted(highlight):
            style = _HIGHLIGHT_STYLES.get(group)
            if style is None:
                style = _FALLBACK_STYLES[fallback % len(_FALLBACK_STYLES)]
                fallback += 1
            for v in sorted(highlight[group]):
                styles.setdefault(v, style)
    lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=circle, fontsize=10];"]
    for v in range(lat.n):
        label = names[v] if names else str(v)
        extra = f", {styles[v]}" if v in styles else ""
        lines.append(f'  {v} [label="{label}"{extra}];')
    for level in range(lat.length() + 1):
        members = [str(v) for v in range(lat.n) if ranks[v] == level]
        if members:
            lines.append("  { rank=same; " + "; ".join(members) + "; }")
    for x, y in lat.covers():
        lines.append(f"  {x} -> {y};")
    lines.append("}")
    return "\n".join(lines) + "\n"
