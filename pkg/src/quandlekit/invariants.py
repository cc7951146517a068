"""Colorings, shadow colorings and the cocycle state-sum invariants."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .algebra import FiniteAbelianGroup, GroupRingElement, Quandle, cyclic_group
from .chains import Chain, Cochain, ChainComplexError, is_quandle_cocycle, pairing
from .diagram import Diagram


class InvariantError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    diagram: Diagram
    arcs: tuple[int, ...]


@dataclass(frozen=True)
class ShadowColoring:
    coloring: Coloring
    regions: tuple[int, ...]

    @property
    def arcs(self) -> tuple[int, ...]:
        return self.coloring.arcs


def is_coloring(D: Diagram, X: Quandle, arcs) -> bool:
    return all(arcs[c.target_arc] == X.op(arcs[c.source_arc], arcs[c.over]) for c in D.crossings)


def colorings(D: Diagram, X: Quandle) -> list[Coloring]:
    """All arc colorings, in lexicographic order of the arc color vector.

    Backtracking with propagation: once the source under-arc and over-arc of a
    crossing are known the target is forced (and vice versa through the inverse).
    """
    n = D.n_arcs
    rules = [(c.source_arc, c.over, c.target_arc) for c in D.crossings]
    out = []

    def propagate(col):
        changed = True
        while changed:
            changed = False
            for s, o, t in rules:
                if col[o] is None:
                    continue
                if col[s] is not None:
                    v = X.op(col[s], col[o])
                    if col[t] is None:
                        col[t] = v
                        changed = True
                    elif col[t] != v:
                        return False
                elif col[t] is not None:
                    col[s] = X.inv(col[t], col[o])
                    changed = True
        return True

    def search(col):
        try:
            k = col.index(None)
        except ValueError:
            out.append(tuple(col))
            return
        for v in range(len(X)):
            trial = list(col)
            trial[k] = v
            if propagate(trial):
                search(trial)

    search([None] * n)
    return [Coloring(D, arcs) for arcs in sorted(set(out))]


def _region_colors(D: Diagram, X: Quandle, arcs, root: int, root_color: int):
    """Spread region colors from ``root`` across edges; None if inconsistent."""
    adj: list[list[tuple[int, int, bool]]] = [[] for _ in range(D.n_regions)]
    for e in D.edges:
        adj[e.right].append((e.left, arcs[e.arc], True))
        adj[e.left].append((e.right, arcs[e.arc], False))
    col: list[int | None] = [None] * D.n_regions
    col[root] = root_color
    queue = deque([root])
    while queue:
        r = queue.popleft()
        for other, x, forward in adj[r]:
            v = X.op(col[r], x) if forward else X.inv(col[r], x)
            if col[other] is None:
                col[other] = v
                queue.append(other)
    # crossing the arc from its right to its left face applies (* x)
    for e in D.edges:
        if col[e.left] != X.op(col[e.right], arcs[e.arc]):
            return None
    return tuple(col)


def shadow_colorings(D: Diagram, X: Quandle, root: int | None = None) -> list[ShadowColoring]:
    """Colorings extended to regions, one per color of the root region (default: unbounded)."""
    root = D.unbounded if root is None else root
    out = []
    for c in colorings(D, X):
        for w in range(len(X)):
            regions = _region_colors(D, X, c.arcs, root, w)
            if regions is not None:
                out.append(ShadowColoring(c, regions))
    out.sort(key=lambda s: (s.arcs, s.regions))
    return out


def represented_2cycle(D: Diagram, c: Coloring, X: Quandle) -> Chain:
    vals: dict = {}
    for cr in D.crossings:
        t = (c.arcs[cr.source_arc], c.arcs[cr.over])
        vals[t] = vals.get(t, 0) + cr.sign
    return Chain(X, 2, 0, vals).reduce_quandle()


def represented_3cycle(D: Diagram, sc: ShadowColoring, X: Quandle) -> Chain:
    vals: dict = {}
    for cr in D.crossings:
        t = (sc.regions[cr.source_region], sc.arcs[cr.source_arc], sc.arcs[cr.over])
        vals[t] = vals.get(t, 0) + cr.sign
    return Chain(X, 3, 0, vals).reduce_quandle()


def _coefficient_group(c: Cochain, A: FiniteAbelianGroup | None) -> FiniteAbelianGroup:
    if A is None:
        return cyclic_group(c.modulus)
    if A.orders != (c.modulus,):
        raise InvariantError(f"coefficient group {A} does not match cochain modulus {c.modulus}")
    return A


def _check(c: Cochain, X: Quandle, degree: int):
    if c.degree != degree:
        raise InvariantError(f"need a {degree}-cocycle, got degree {c.degree}")
    if c.quandle != X:
        raise InvariantError("cocycle is defined over a different quandle")
    if not is_quandle_cocycle(c):
        raise InvariantError(f"not a quandle {degree}-cocycle")


def cocycle_invariant(D: Diagram, X: Quandle, phi: Cochain,
                      A: FiniteAbelianGroup | None = None) -> GroupRingElement:
    """Sum over colorings of t^<C, phi>, where C is the represented 2-cycle."""
    _check(phi, X, 2)
    A = _coefficient_group(phi, A)
    return GroupRingElement.from_values(
        A, (pairing(represented_2cycle(D, c, X), phi) for c in colorings(D, X))
    )


def shadow_invariant(D: Diagram, X: Quandle, theta: Cochain,
                     A: FiniteAbelianGroup | None = None, root: int | None = None) -> GroupRingElement:
    """Sum over shadow colorings of t^<C, theta>, where C is the represented 3-cycle."""
    _check(theta, X, 3)
    A = _coefficient_group(theta, A)
    return GroupRingElement.from_values(
        A, (pairing(represented_3cycle(D, s, X), theta) for s in shadow_colorings(D, X, root))
    )


def crossing_weights(D: Diagram, c: Coloring | ShadowColoring, cocycle: Cochain) -> int:
    """Per-crossing Boltzmann product, accumulated directly (no chain objects).

    Exponent of the state's group element: each crossing contributes
    ``cocycle(colors) ** sign``.
    """
    m = cocycle.modulus
    total = 0
    for cr in D.crossings:
        if cocycle.degree == 2:
            key = (c.arcs[cr.source_arc], c.arcs[cr.over])
        elif cocycle.degree == 3 and isinstance(c, ShadowColoring):
            key = (c.regions[cr.source_region], c.arcs[cr.source_arc], c.arcs[cr.over])
        else:
            raise ChainComplexError("weights need a 2-cocycle or a shadow coloring with a 3-cocycle")
        total = (total + cr.sign * cocycle(key)) % m
    return total
