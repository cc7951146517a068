"""Abelian extensions of quandles and the obstruction to lifting them.

Groups are written additively. A cochain with values in a product of cyclic
groups ``Z_m1 x ... x Z_mr`` is passed as a list of r ``Cochain`` objects, one
per factor; for a cyclic group a single ``Cochain`` is accepted as well.
Elements of the extension ``A x X`` are indexed ``A.index(a) * |X| + x``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

from .algebra import FiniteAbelianGroup, Quandle, QuandleError, QuandleHom, check_quandle
from .chains import Cochain, delta, is_coboundary, is_quandle_cocycle

GroupCochain = Union[Cochain, Sequence[Cochain]]


class ExtensionError(ValueError):
    pass


def _parts(c: GroupCochain) -> list[Cochain]:
    return [c] if isinstance(c, Cochain) else list(c)


def _wrap(parts: list[Cochain]) -> GroupCochain:
    return parts[0] if len(parts) == 1 else parts


def _check_values(parts: list[Cochain], A: FiniteAbelianGroup, X: Quandle, degree: int):
    if tuple(c.modulus for c in parts) != A.orders:
        raise ExtensionError(f"cochain moduli {[c.modulus for c in parts]} do not match {A}")
    for c in parts:
        if c.quandle != X or c.degree != degree:
            raise ExtensionError(f"expected a {degree}-cochain over the given quandle")


def evaluate(c: GroupCochain, t: Sequence[int]) -> tuple[int, ...]:
    return tuple(part(tuple(t)) for part in _parts(c))


def group_cochain(X: Quandle, degree: int, A: FiniteAbelianGroup, values) -> GroupCochain:
    """Build a cochain from ``{tuple: group element}``."""
    parts = []
    for f, m in enumerate(A.orders):
        parts.append(Cochain(X, degree, m, {t: A.normalize(g)[f] for t, g in values.items()}))
    return _wrap(parts)


# -- short exact sequences and sections ---------------------------------------------

@dataclass(frozen=True)
class ShortExactSequence:
    """``0 -> N -i-> G -p-> A -> 0``; ``i`` and ``p`` are tables indexed by element index."""

    N: FiniteAbelianGroup
    G: FiniteAbelianGroup
    A: FiniteAbelianGroup
    i: tuple[tuple[int, ...], ...]
    p: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        N, G, A = self.N, self.G, self.A
        object.__setattr__(self, "i", tuple(G.normalize(g) for g in self.i))
        object.__setattr__(self, "p", tuple(A.normalize(a) for a in self.p))
        if len(self.i) != N.order or len(self.p) != G.order:
            raise ExtensionError("map tables have the wrong length")
        for x, y in itertools.product(N.elements(), repeat=2):
            if self.inc(N.add(x, y)) != G.add(self.inc(x), self.inc(y)):
                raise ExtensionError(f"i is not a homomorphism at {x}, {y}")
        for x, y in itertools.product(G.elements(), repeat=2):
            if self.proj(G.add(x, y)) != A.add(self.proj(x), self.proj(y)):
                raise ExtensionError(f"p is not a homomorphism at {x}, {y}")
        image = set(self.i)
        if len(image) != N.order:
            raise ExtensionError("i is not injective")
        if len(set(self.p)) != A.order:
            raise ExtensionError("p is not surjective")
        kernel = {g for g in G.elements() if self.proj(g) == A.zero}
        if image != kernel:
            raise ExtensionError("image(i) differs from kernel(p)")
        object.__setattr__(self, "_preimage", {g: n for n, g in zip(N.elements(), self.i)})

    def inc(self, x) -> tuple[int, ...]:
        return self.i[self.N.index(x)]

    def proj(self, g) -> tuple[int, ...]:
        return self.p[self.G.index(g)]

    def inc_inverse(self, g) -> tuple[int, ...]:
        g = self.G.normalize(g)
        try:
            return self._preimage[g]
        except KeyError:
            raise ExtensionError(f"{g} is not in the image of i") from None

    def is_split_by(self, s: "Section") -> bool:
        A = self.A
        return all(s(A.add(a, b)) == self.G.add(s(a), s(b)) for a in A.elements() for b in A.elements())


def cyclic_ses(n: int, g: int, a: int) -> ShortExactSequence:
    """``0 -> Z_n -> Z_g -> Z_a -> 0`` with ``i(x) = a x`` and ``p(y) = y mod a``."""
    if n * a != g:
        raise ExtensionError(f"need |G| = |N| |A|, got {g} != {n} * {a}")
    N, G, A = (FiniteAbelianGroup((k,)) for k in (n, g, a))
    return ShortExactSequence(N, G, A, tuple((a * x,) for x in range(n)), tuple((y % a,) for y in range(g)))


def parse_ses(text: str) -> ShortExactSequence:
    """``"2,4,2"``: the cyclic sequence ``Z_2 -> Z_4 -> Z_2``."""
    try:
        n, g, a = (int(t) for t in text.split(","))
    except ValueError:
        raise ExtensionError(f"expected N,G,A cyclic orders, got {text!r}") from None
    return cyclic_ses(n, g, a)


@dataclass(frozen=True)
class Section:
    ses: ShortExactSequence
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ses = self.ses
        object.__setattr__(self, "table", tuple(ses.G.normalize(g) for g in self.table))
        if len(self.table) != ses.A.order:
            raise ExtensionError("section table has the wrong length")
        for a, g in zip(ses.A.elements(), self.table):
            if ses.proj(g) != a:
                raise ExtensionError(f"p(s({a})) = {ses.proj(g)} != {a}")
        if self.table[0] != ses.G.zero:
            raise ExtensionError("a section must send 0 to 0")

    def __call__(self, a) -> tuple[int, ...]:
        return self.table[self.ses.A.index(self.ses.A.normalize(a))]


def parse_section(text: str, ses: ShortExactSequence) -> Section:
    """``"0:0,1:1"`` for cyclic groups."""
    table = {}
    for item in text.split(","):
        a, _, g = item.partition(":")
        table[int(a)] = int(g)
    if sorted(table) != list(range(ses.A.order)):
        raise ExtensionError("section must list every element of A")
    return Section(ses, tuple((table[a],) for a in range(ses.A.order)))


# -- extensions ---------------------------------------------------------------------

def _product_table(X: Quandle, A: FiniteAbelianGroup, weight) -> list[list[int]]:
    n = len(X)
    elements = A.elements()
    table = []
    for a1 in elements:
        for x1 in range(n):
            row = []
            for a2 in elements:
                for x2 in range(n):
                    a = A.add(a1, weight(x1, x2))
                    row.append(A.index(a) * n + X.op(x1, x2))
            table.append(row)
    return table


def extend(X: Quandle, A: FiniteAbelianGroup, phi: GroupCochain, check: bool = True) -> Quandle:
    """``E(X, A, phi)``: ``(a1, x1) * (a2, x2) = (a1 + phi(x1, x2), x1 * x2)``.

    With ``check=False`` a non-cocycle is accepted and the table is returned as is.
    """
    parts = _parts(phi)
    _check_values(parts, A, X, 2)
    if check and not all(is_quandle_cocycle(c) for c in parts):
        raise ExtensionError("phi is not a quandle 2-cocycle")
    table = _product_table(X, A, lambda x1, x2: evaluate(parts, (x1, x2)))
    return Quandle(tuple(tuple(r) for r in table), f"E({X.label or 'X'},{A})")


def projection(E: Quandle, X: Quandle) -> QuandleHom:
    """``A x X -> X``, forgetting the group coordinate."""
    n = len(X)
    return QuandleHom(E, X, tuple(k % n for k in range(len(E))))


def extensions_equivalent(phi1: GroupCochain, phi2: GroupCochain) -> GroupCochain | None:
    """``eta`` with ``phi1 - phi2 = delta(eta)``, or None when the classes differ.

    The witness is checked by building ``f(a, x) = (a + eta(x), x)`` from
    ``E(phi1)`` to ``E(phi2)`` and verifying it is an isomorphism over X.
    """
    p1, p2 = _parts(phi1), _parts(phi2)
    if len(p1) != len(p2):
        raise ExtensionError("cocycles take values in different groups")
    etas = []
    for a, b in zip(p1, p2):
        eta = is_coboundary(a - b)
        if eta is None:
            return None
        etas.append(eta)
    X = p1[0].quandle
    A = FiniteAbelianGroup(tuple(c.modulus for c in p1))
    E1, E2 = extend(X, A, p1), extend(X, A, p2)
    n = len(X)
    f = []
    for k in range(len(E1)):
        a, x = A.element(k // n), k % n
        f.append(A.index(A.add(a, evaluate(etas, (x,)))) * n + x)
    hom = QuandleHom(E1, E2, tuple(f))
    if not (hom.is_homomorphism() and hom.is_bijective()):
        raise ExtensionError("internal error: coboundary witness does not give an isomorphism")
    return _wrap(etas)


def equivalence_map(phi1: GroupCochain, phi2: GroupCochain) -> QuandleHom | None:
    eta = extensions_equivalent(phi1, phi2)
    if eta is None:
        return None
    p1 = _parts(phi1)
    X = p1[0].quandle
    A = FiniteAbelianGroup(tuple(c.modulus for c in p1))
    n = len(X)
    f = tuple(A.index(A.add(A.element(k // n), evaluate(eta, (k % n,)))) * n + k % n
              for k in range(n * A.order))
    return QuandleHom(extend(X, A, phi1), extend(X, A, _parts(phi2)), f)


# -- obstruction theory --------------------------------------------------------------

def _lifted(phi: GroupCochain, s: Section):
    parts = _parts(phi)
    return lambda x1, x2: s(evaluate(parts, (x1, x2)))


def obstruction_cocycle(X: Quandle, phi: GroupCochain, ses: ShortExactSequence,
                        s: Section) -> GroupCochain:
    """The 3-cocycle ``theta`` with values in N measuring how ``s o phi`` fails to be a cocycle.

    theta(x1,x2,x3) = i^-1[ sphi(x1,x2) + sphi(x1*x2,x3) - sphi(x1,x3) - sphi(x1*x3,x2*x3) ]
    """
    parts = _parts(phi)
    _check_values(parts, ses.A, X, 2)
    if not all(is_quandle_cocycle(c) for c in parts):
        raise ExtensionError("phi is not a quandle 2-cocycle")
    G = ses.G
    sphi = _lifted(parts, s)
    values = {}
    for x1, x2, x3 in itertools.product(range(len(X)), repeat=3):
        g = G.add(sphi(x1, x2), sphi(X.op(x1, x2), x3))
        g = G.sub(g, G.add(sphi(x1, x3), sphi(X.op(x1, x3), X.op(x2, x3))))
        values[(x1, x2, x3)] = ses.inc_inverse(g)
    theta = group_cochain(X, 3, ses.N, values)
    if not all(c.vanishes_on_degenerate() and delta(c).is_zero() for c in _parts(theta)):
        raise ExtensionError("internal error: obstruction is not a quandle 3-cocycle")
    return theta


def obstruction_witness(theta: GroupCochain) -> GroupCochain | None:
    """``xi`` with ``delta(xi) = theta`` when the obstruction class vanishes."""
    out = []
    for c in _parts(theta):
        xi = is_coboundary(c)
        if xi is None:
            return None
        out.append(xi)
    return _wrap(out)


def section_difference(s: Section, s2: Section) -> list[tuple[int, ...]]:
    """``sigma(a) = i^-1(s2(a) - s(a))``, one N-value per element of A."""
    ses = s.ses
    return [ses.inc_inverse(ses.G.sub(s2(a), s(a))) for a in ses.A.elements()]


def sections_cohomologous(X: Quandle, phi: GroupCochain, ses: ShortExactSequence,
                          s: Section, s2: Section) -> GroupCochain:
    """A 2-cochain ``w`` with ``theta(s2) - theta(s) = delta(w)``.

    ``w = -(sigma o phi)``; the identity is verified on every triple.
    """
    parts = _parts(phi)
    sigma = section_difference(s, s2)
    A, N = ses.A, ses.N
    values = {}
    for t in itertools.product(range(len(X)), repeat=2):
        values[t] = N.neg(sigma[A.index(evaluate(parts, t))])
    w = _parts(group_cochain(X, 2, N, values))
    theta = _parts(obstruction_cocycle(X, phi, ses, s))
    theta2 = _parts(obstruction_cocycle(X, phi, ses, s2))
    for a, b, c in zip(theta2, theta, w):
        if not (a - b - delta(c)).is_zero():
            raise ExtensionError("internal error: section change identity failed")
    return _wrap(w)


def sigma_phi(X: Quandle, phi: GroupCochain, s: Section, s2: Section) -> GroupCochain:
    """``sigma o phi`` itself (the negative of the witness above)."""
    sigma = section_difference(s, s2)
    A, N = s.ses.A, s.ses.N
    values = {t: sigma[A.index(evaluate(phi, t))] for t in itertools.product(range(len(X)), repeat=2)}
    return group_cochain(X, 2, N, values)


def lift_quandle(X: Quandle, phi: GroupCochain, ses: ShortExactSequence, s: Section,
                 xi: GroupCochain) -> Quandle:
    """Quandle on ``G x X`` with ``(g1,x1) * (g2,x2) = (g1 + s(phi(x1,x2)) + i(xi(x1,x2)), x1*x2)``.

    Requires ``delta(xi) = theta`` for the obstruction ``theta`` of ``(phi, s)``.
    """
    theta = _parts(obstruction_cocycle(X, phi, ses, s))
    xis = _parts(xi)
    _check_values(xis, ses.N, X, 2)
    if not all(c.vanishes_on_degenerate() for c in xis):
        raise ExtensionError("xi must vanish on degenerate pairs")
    if not all((delta(a) - b).is_zero() for a, b in zip(xis, theta)):
        raise ExtensionError("delta(xi) differs from the obstruction cocycle")
    G = ses.G
    sphi = _lifted(phi, s)
    table = _product_table(X, G, lambda x1, x2: G.add(sphi(x1, x2), ses.inc(evaluate(xis, (x1, x2)))))
    report = check_quandle(table)
    if not report.valid:
        raise QuandleError("internal error: lift is not a quandle\n" + str(report))
    return Quandle(tuple(tuple(r) for r in table), f"lift({X.label or 'X'},{G})")


def lift_projection(lift: Quandle, E: Quandle, X: Quandle, ses: ShortExactSequence) -> QuandleHom:
    """``p x id``: ``G x X -> A x X``."""
    n = len(X)
    G, A = ses.G, ses.A
    f = tuple(A.index(ses.proj(G.element(k // n))) * n + k % n for k in range(len(lift)))
    return QuandleHom(lift, E, f)
