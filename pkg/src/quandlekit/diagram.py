"""Combinatorial classical knot and link diagrams.

A PD crossing ``X[a,b,c,d]`` lists edge labels counterclockwise starting from
the incoming under-edge ``a``; ``c`` is the outgoing under-edge and ``b, d``
are the over-edges. Picture ``a`` south, ``b`` east, ``c`` north and ``d`` west:
the crossing is positive exactly when the over-strand runs from ``d`` to ``b``.

Corner ``i`` of a crossing is the sector between slot ``i`` and slot ``i+1``.
Faces are the orbits of: corner (k, i) -> leave through slot i+1 -> arrive at
slot j of crossing k' -> corner (k', j).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence


class DiagramError(ValueError):
    pass


class PDParseError(DiagramError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(v) for v in x) for x in self.crossings))

    def __len__(self):
        return len(self.crossings)

    def __str__(self):
        return ";".join("X[" + ",".join(map(str, x)) + "]" for x in self.crossings)


_CROSSING = re.compile(r"X\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def parse_pd(text: str) -> PDCode:
    """Parse ``X[1,4,2,5];X[3,6,4,1];...``. A ``PD[...]`` wrapper and commas are accepted."""
    body, offset = text, 0
    m = re.match(r"\s*PD\s*\[", text)
    if m:
        end = text.rstrip()
        if not end.endswith("]"):
            raise PDParseError("unterminated PD[", len(text))
        offset = m.end()
        body = end[m.end():-1]
    crossings = []
    pos = 0
    while pos < len(body):
        if body[pos] in " \t\r\n;,":
            pos += 1
            continue
        m = _CROSSING.match(body, pos)
        if not m:
            raise PDParseError(f"expected X[a,b,c,d], found {body[pos:pos + 12]!r}", offset + pos)
        crossings.append(tuple(int(g) for g in m.groups()))
        pos = m.end()
    pd = PDCode(tuple(crossings))
    validate_pd(pd)
    return pd


def _positions(pd: PDCode) -> dict[int, list[tuple[int, int]]]:
    pos: dict[int, list[tuple[int, int]]] = {}
    for k, x in enumerate(pd.crossings):
        for s, e in enumerate(x):
            pos.setdefault(e, []).append((k, s))
    return pos


def _other_end(pos, e, place):
    p, q = pos[e]
    return q if p == place else p


def _strands(pd: PDCode, pos) -> list[list[int]]:
    """Components as sorted edge lists, ignoring orientation."""
    seen: set[int] = set()
    comps = []
    for e in sorted(pos):
        if e in seen:
            continue
        comp, stack = [], [e]
        seen.add(e)
        while stack:
            f = stack.pop()
            comp.append(f)
            for k, s in pos[f]:
                g = pd.crossings[k][(s + 2) % 4]
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
        comps.append(sorted(comp))
    return comps


def _trace(pd: PDCode):
    """Orient every edge. Returns ``(head, tail, components)``.

    ``head[e]``/``tail[e]`` are the (crossing, slot) where edge ``e`` ends/starts;
    each component is its edge list in traversal order from its smallest label.
    A component with an undercrossing is oriented by it; one that only passes
    over is oriented by label succession.
    """
    pos = _positions(pd)
    head: dict[int, tuple[int, int]] = {}
    tail: dict[int, tuple[int, int]] = {}
    components = []
    for comp in _strands(pd, pos):
        start = None
        for e in comp:
            for k, s in pos[e]:
                if s == 0 and start is None:
                    start = (e, _other_end(pos, e, (k, s)))
        if start is None:
            lo, hi = comp[0], comp[-1]
            k, s = pos[lo][0]
            nxt = pd.crossings[k][(s + 2) % 4]
            succ = lo + 1 if lo < hi else lo
            start = (lo, _other_end(pos, lo, (k, s))) if nxt == succ else (lo, (k, s))
        e, t = start
        order = []
        while e not in tail:
            tail[e] = t
            head[e] = _other_end(pos, e, t)
            order.append(e)
            k, s = head[e]
            t = (k, (s + 2) % 4)
            e = pd.crossings[k][t[1]]
        i = order.index(min(order))
        components.append(order[i:] + order[:i])
    return head, tail, components


def validate_pd(pd: PDCode) -> None:
    n = len(pd)
    if n == 0:
        return
    pos = _positions(pd)
    expected = set(range(1, 2 * n + 1))
    bad = sorted(e for e in pos if len(pos[e]) != 2)
    if bad or set(pos) != expected:
        missing = sorted(expected - set(pos))
        raise DiagramError(
            f"each label 1..{2 * n} must appear exactly twice; "
            f"wrong multiplicity: {bad}, missing: {missing}"
        )
    entering: set[int] = set()
    leaving: set[int] = set()
    for k, (a, b, c, d) in enumerate(pd.crossings):
        if a in entering:
            raise DiagramError(f"crossing {k} X{[a, b, c, d]}: edge {a} enters two undercrossings")
        if c in leaving:
            raise DiagramError(f"crossing {k} X{[a, b, c, d]}: edge {c} leaves two undercrossings")
        entering.add(a)
        leaving.add(c)
    head, tail, components = _trace(pd)
    for k, (a, b, c, d) in enumerate(pd.crossings):
        if head[a] != (k, 0) or tail[c] != (k, 2):
            raise DiagramError(f"crossing {k} X{[a, b, c, d]}: inconsistent strand orientation")
    for comp in components:
        lo, hi = min(comp), max(comp)
        if sorted(comp) != list(range(lo, hi + 1)):
            raise DiagramError(f"component labels {sorted(comp)} are not a consecutive range")
        for f, g in zip(comp, comp[1:] + comp[:1]):
            want = f + 1 if f < hi else lo
            if g != want:
                k = head[f][0]
                raise DiagramError(
                    f"crossing {k} X{list(pd.crossings[k])}: edge after {f} should be {want}, found {g}"
                )


# -- the diagram ---------------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    sign: int
    over: int
    under_in: int
    under_out: int
    regions: tuple[int, int, int, int]  # faces at corners 0..3
    source_region: int
    source_arc: int  # the under-arc the over-arc's normal points away from

    @property
    def target_arc(self) -> int:
        return self.under_out if self.source_arc == self.under_in else self.under_in


@dataclass(frozen=True)
class Edge:
    label: int
    arc: int
    left: int
    right: int


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...]
    n_arcs: int
    n_regions: int
    edges: tuple[Edge, ...]
    unbounded: int
    components: int
    pd: PDCode = field(compare=False)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(c.sign for c in self.crossings)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def euler_characteristic(self) -> int:
        return len(self.crossings) - len(self.edges) + self.n_regions

    def with_unbounded(self, face: int) -> "Diagram":
        if not 0 <= face < self.n_regions:
            raise DiagramError(f"no face {face}")
        return Diagram(self.crossings, self.n_arcs, self.n_regions, self.edges, face,
                       self.components, self.pd)

    def unbounded_side(self) -> tuple[int, str] | None:
        for e in self.edges:
            if e.left == self.unbounded:
                return (e.label, "left")
            if e.right == self.unbounded:
                return (e.label, "right")
        return None

    def mirror(self) -> "Diagram":
        # labels and orientation survive mirroring, so the unbounded face does too
        return build_diagram(mirror_pd(self.pd), unbounded_edge=self.unbounded_side())


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent, a, b):
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        parent[max(ra, rb)] = min(ra, rb)


def unknot() -> Diagram:
    """The crossingless circle: one arc, two faces (face 0 unbounded)."""
    return Diagram((), 1, 2, (Edge(0, 0, 1, 0),), 0, 1, PDCode(()))


def build_diagram(pd: PDCode, unbounded_edge: tuple[int, str] | None = None) -> Diagram:
    """Arcs, faces, signs and source corners of a PD code.

    ``unbounded_edge = (label, "left"|"right")`` names the face on that side of
    the oriented edge as unbounded; otherwise face 0 is used.
    """
    if len(pd) == 0:
        return unknot()
    validate_pd(pd)
    X = pd.crossings
    n = len(X)
    pos = _positions(pd)
    head, tail, components = _trace(pd)

    parent = {k: k for k in range(n)}
    for places in pos.values():
        _union(parent, places[0][0], places[1][0])
    if len({_find(parent, k) for k in range(n)}) != 1:
        raise DiagramError("split diagrams are not supported")

    arc_parent = {e: e for e in pos}
    for a, b, c, d in X:
        _union(arc_parent, b, d)
    roots = sorted({_find(arc_parent, e) for e in pos})
    arc_of = {e: roots.index(_find(arc_parent, e)) for e in pos}

    face_of: dict[tuple[int, int], int] = {}
    n_faces = 0
    for k in range(n):
        for i in range(4):
            corner = (k, i)
            if corner in face_of:
                continue
            while corner not in face_of:
                face_of[corner] = n_faces
                kk, ii = corner
                s = (ii + 1) % 4
                corner = _other_end(pos, X[kk][s], (kk, s))
            n_faces += 1

    crossings = []
    for k, (a, b, c, d) in enumerate(X):
        sign = 1 if head[d] == (k, 3) else -1
        regions = tuple(face_of[(k, i)] for i in range(4))
        if sign > 0:
            source_region, source_arc = regions[0], arc_of[a]
        else:
            source_region, source_arc = regions[1], arc_of[c]
        crossings.append(Crossing(sign, arc_of[b], arc_of[a], arc_of[c], regions,
                                  source_region, source_arc))

    edges = []
    for e in sorted(pos):
        k, s = tail[e]
        edges.append(Edge(e, arc_of[e], face_of[(k, s)], face_of[(k, (s - 1) % 4)]))

    unbounded = 0
    if unbounded_edge is not None:
        label, side = unbounded_edge
        edge = next(ed for ed in edges if ed.label == label)
        unbounded = edge.left if side == "left" else edge.right

    D = Diagram(tuple(crossings), len(roots), n_faces, tuple(edges), unbounded,
                len(components), pd)
    if D.euler_characteristic() != 2:
        raise DiagramError(
            f"not a planar diagram: {n} crossings, {len(edges)} edges, {n_faces} faces"
        )
    return D


# -- PD transformations ----------------------------------------------------------------

def mirror_pd(pd: PDCode) -> PDCode:
    """Swap over and under at every crossing; every sign flips."""
    if len(pd) == 0:
        return pd
    head, _, _ = _trace(pd)
    out = []
    for k, (a, b, c, d) in enumerate(pd.crossings):
        # the old incoming over-edge becomes the incoming under-edge
        out.append((d, a, b, c) if head[d] == (k, 3) else (b, c, d, a))
    return PDCode(tuple(out))


def _reversal_map(pd: PDCode, which: Sequence[int]) -> dict[int, int]:
    _, _, components = _trace(pd)
    flip: dict[int, int] = {}
    for i in which:
        comp = components[i]
        lo, hi = min(comp), max(comp)
        flip.update({e: lo + hi - e for e in comp})
    return flip


def reverse_components(pd: PDCode, which: Sequence[int]) -> PDCode:
    """Reverse the listed components (indices in traced order) and relabel them."""
    flip = _reversal_map(pd, which)
    out = []
    for a, b, c, d in pd.crossings:
        x = (c, d, a, b) if a in flip else (a, b, c, d)
        out.append(tuple(flip.get(e, e) for e in x))
    return PDCode(tuple(out))


def reverse_diagram(D: Diagram, which: Sequence[int]) -> Diagram:
    """Reverse components of a diagram, keeping the same unbounded face."""
    flip = _reversal_map(D.pd, which)
    hint = D.unbounded_side()
    if hint is not None:
        label, side = hint
        if label in flip:
            hint = (flip[label], "right" if side == "left" else "left")
    return build_diagram(reverse_components(D.pd, which), unbounded_edge=hint)


# -- generated diagrams ------------------------------------------------------------------

@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(v) for v in self.letters))
        if self.strands < 1:
            raise DiagramError("need at least one strand")
        for v in self.letters:
            if v == 0 or abs(v) >= self.strands:
                raise DiagramError(f"letter {v} invalid on {self.strands} strands")

    @classmethod
    def parse(cls, text: str, strands: int | None = None) -> "BraidWord":
        """``"1 1 -2"`` or ``"1,1,-2"``; the strand count defaults to the largest index + 1."""
        try:
            letters = tuple(int(t) for t in text.replace(",", " ").split())
        except ValueError as exc:
            raise DiagramError(f"bad braid word {text!r}") from exc
        if strands is None:
            strands = max((abs(v) for v in letters), default=0) + 1
        return cls(strands, letters)

    def __str__(self):
        return " ".join(map(str, self.letters))


# Crossing ports counterclockwise: bottom-right, top-right, top-left, bottom-left.
BR, TR, TL, BL = range(4)


class _Layout:
    """Crossings stacked on vertical positions, joined by plain wires."""

    def __init__(self, strands: int, letters: Sequence[int]):
        self.ports: list[list[int]] = []
        self.positive: list[bool] = []  # the BL-TR diagonal passes over
        self.wire: dict[int, int] = {}
        self.owner: dict[int, tuple[int, int]] = {}
        self.bottom: list[int | None] = [None] * (strands + 1)
        self.top: list[int | None] = [None] * (strands + 1)
        for v in letters:
            k = len(self.ports)
            ps = [4 * k + s for s in range(4)]
            self.ports.append(ps)
            self.positive.append(v > 0)
            for s, p in enumerate(ps):
                self.owner[p] = (k, s)
            i = abs(v)
            for position, port in ((i, ps[BL]), (i + 1, ps[BR])):
                if self.top[position] is None:
                    self.bottom[position] = port
                else:
                    self.connect(self.top[position], port)
            self.top[i], self.top[i + 1] = ps[TL], ps[TR]

    def connect(self, p, q):
        self.wire[p] = q
        self.wire[q] = p

    def across(self, p):
        k, s = self.owner[p]
        return self.ports[k][(s + 2) % 4]

    def pd(self, seeds: Sequence[int]) -> tuple[PDCode, dict[int, int], set[int]]:
        """Orient each component by leaving through its first seed port, then label
        edges consecutively along components. Returns (pd, label, outgoing ports)."""
        label: dict[int, int] = {}
        outgoing: set[int] = set()
        n = 1
        for seed in list(seeds) + sorted(self.owner):
            if seed in label:
                continue
            p = seed
            while p not in label:
                outgoing.add(p)
                label[p] = label[self.wire[p]] = n
                n += 1
                p = self.across(self.wire[p])
        crossings = []
        for k, ps in enumerate(self.ports):
            under = (BR, TL) if self.positive[k] else (BL, TR)
            start = under[1] if ps[under[0]] in outgoing else under[0]
            crossings.append(tuple(label[ps[(start + i) % 4]] for i in range(4)))
        return PDCode(tuple(crossings)), label, outgoing


def braid_closure(w: BraidWord) -> Diagram:
    """Closure of a braid with strands running upward; each ``sigma_i`` is positive."""
    if not w.letters:
        if w.strands == 1:
            return unknot()
        raise DiagramError("closure of the empty braid on several strands is split")
    if {abs(v) for v in w.letters} != set(range(1, w.strands)):
        raise DiagramError("braid closure is split: some generator never occurs")
    L = _Layout(w.strands, w.letters)
    for p in range(1, w.strands + 1):
        L.connect(L.top[p], L.bottom[p])
    pd, label, _ = L.pd([p for ps in L.ports for p in (ps[TL], ps[TR])])
    # the face left of an upward strand at position 1 is unbounded
    return build_diagram(pd, unbounded_edge=(label[L.top[1]], "left"))


def plat_closure(letters: Sequence[int], strands: int = 4) -> Diagram:
    """Plat closure: caps join positions (1,2), (3,4), ... above and below the braid.

    The component through position 1 runs up out of the bottom cup.
    """
    if strands % 2 or strands < 2:
        raise DiagramError("plat closure needs an even number of strands")
    if any(v == 0 or abs(v) >= strands for v in letters):
        raise DiagramError(f"letters must lie in 1..{strands - 1}")
    L = _Layout(strands, letters)
    if L.bottom[1] is None:
        raise DiagramError("position 1 needs a crossing")
    # caps, cups and crossing-free positions are plain wires between end nodes
    link: dict = {}
    for p in range(1, strands + 1, 2):
        for side in ("T", "B"):
            link.setdefault((side, p), []).append((side, p + 1))
            link.setdefault((side, p + 1), []).append((side, p))
    for p in range(1, strands + 1):
        if L.bottom[p] is None:
            link[("T", p)].append(("B", p))
            link[("B", p)].append(("T", p))

    def port(node):
        side, p = node
        return (L.top if side == "T" else L.bottom)[p]

    for node in link:
        if port(node) is None or port(node) in L.wire:
            continue
        prev, cur = node, link[node][0]
        while port(cur) is None:
            prev, cur = cur, next(v for v in link[cur] if v != prev)
        L.connect(port(node), port(cur))
    if len(L.wire) != 4 * len(L.ports):
        raise DiagramError("plat closure is split")
    pd, label, _ = L.pd([L.across(L.bottom[1])])
    # travelling right to left along the bottom cup, the outside is on the left
    return build_diagram(pd, unbounded_edge=(label[L.bottom[1]], "left"))


# -- families ----------------------------------------------------------------------------

def torus2(n: int) -> Diagram:
    """Closure of sigma_1^n: the (2, n) torus knot or link, all crossings positive."""
    if n < 1:
        raise DiagramError("torus2 needs n >= 1")
    return braid_closure(BraidWord(2, (1,) * n))


def torus3(n: int) -> Diagram:
    """Closure of (sigma_1 sigma_2)^n: the (3, n) torus knot or link."""
    if n < 1:
        raise DiagramError("torus3 needs n >= 1")
    return braid_closure(BraidWord(3, (1, 2) * n))


TPRIME_LETTER = -1


def tprime(n: int) -> Diagram:
    """(2, n) torus link, n even, with its two components antiparallel.

    Closure of sigma_1^(TPRIME_LETTER * n) with the second component reversed.
    """
    if n < 2 or n % 2:
        raise DiagramError("tprime needs an even n >= 2")
    return reverse_diagram(braid_closure(BraidWord(2, (TPRIME_LETTER,) * n)), [1])


TWIST_LETTER = -2
DOUBLED_CLASP = (1, -2)


def doubled(n: int) -> Diagram:
    """Twist knot: n half twists of two antiparallel strands closed by a clasp.

    The 4-plat of sigma_2^(TWIST_LETTER * n) followed by DOUBLED_CLASP; the n
    twist crossings carry the sign of n and doubled(1) is the positive trefoil.
    """
    twist = (TWIST_LETTER if n >= 0 else -TWIST_LETTER,) * abs(n)
    return plat_closure(twist + DOUBLED_CLASP, 4)


FAMILIES = {"torus2": torus2, "torus3": torus3, "tprime": tprime, "doubled": doubled}


def family(name: str, n: int | None = None) -> Diagram:
    """``family("torus2:9")`` or ``family("torus2", 9)``."""
    if n is None:
        name, _, arg = name.partition(":")
        try:
            n = int(arg)
        except ValueError as exc:
            raise DiagramError(f"family needs NAME:N, got {name}:{arg}") from exc
    if name not in FAMILIES:
        raise DiagramError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    return FAMILIES[name](n)
