"""Finite quandles, finite abelian groups, homomorphisms and group-ring values.

Quandle elements are the integers ``0..n-1`` and the operation is stored as a
table with ``table[i][j] == i * j``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class QuandleError(ValueError):
    """Raised for malformed tables or parameters that do not give a quandle."""


@dataclass(frozen=True)
class Quandle:
    table: tuple[tuple[int, ...], ...]
    label: str = field(default="", compare=False)
    _inverse: tuple[tuple[int, ...], ...] = field(
        default=(), init=False, repr=False, compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(int(v) for v in row) for row in self.table))
        n = len(self.table)
        if any(len(row) != n for row in self.table):
            raise QuandleError("quandle table must be square")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise QuandleError("quandle table entries out of range")
        inv = [[-1] * n for _ in range(n)]
        for j in range(n):
            for i in range(n):
                inv[self.table[i][j]][j] = i
        object.__setattr__(self, "_inverse", tuple(tuple(r) for r in inv))

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self):
        return len(self.table)

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, c: int, b: int) -> int:
        """The unique ``a`` with ``a * b == c`` (axiom II)."""
        return self._inverse[c][b]

    def is_trivial(self) -> bool:
        return all(self.table[i][j] == i for i in range(len(self)) for j in range(len(self)))

    def to_text(self) -> str:
        lines = [f"quandle {self.order}"]
        lines += [" ".join(str(v) for v in row) for row in self.table]
        return "\n".join(lines) + "\n"


@dataclass
class AxiomReport:
    valid: bool
    axioms: dict[str, bool]
    witnesses: dict[str, tuple[int, ...]]

    def __str__(self):
        lines = []
        for name in ("I", "II", "III"):
            if self.axioms[name]:
                lines.append(f"axiom {name}: ok")
            else:
                lines.append(f"axiom {name}: FAILED at {self.witnesses[name]}")
        return "\n".join(lines)


def check_quandle(table: Sequence[Sequence[int]]) -> AxiomReport:
    """Check axioms I-III on a raw table.

    Each failing axiom reports its lexicographically first witness: ``(i,)`` for
    axiom I, ``(j, value)`` for axiom II (a column ``j`` where ``value`` is hit
    twice or never), and ``(i, j, k)`` for axiom III.
    """
    n = len(table)
    if any(len(row) != n for row in table):
        raise QuandleError("table is not square")
    if any(not (0 <= v < n) for row in table for v in row):
        raise QuandleError("table entries must lie in 0..n-1")
    axioms = {"I": True, "II": True, "III": True}
    witnesses: dict[str, tuple[int, ...]] = {}
    for i in range(n):
        if table[i][i] != i:
            axioms["I"] = False
            witnesses["I"] = (i,)
            break
    for j in range(n):
        column = Counter(table[i][j] for i in range(n))
        bad = [v for v in range(n) if column[v] != 1]
        if bad:
            axioms["II"] = False
            witnesses["II"] = (j, bad[0])
            break
    for i, j, k in itertools.product(range(n), repeat=3):
        if table[table[i][j]][k] != table[table[i][k]][table[j][k]]:
            axioms["III"] = False
            witnesses["III"] = (i, j, k)
            break
    return AxiomReport(all(axioms.values()), axioms, witnesses)


def _validated(table, label="", unchecked=False) -> Quandle:
    if not unchecked:
        report = check_quandle(table)
        if not report.valid:
            raise QuandleError("not a quandle:\n" + str(report))
    return Quandle(tuple(tuple(r) for r in table), label)


# -- families -----------------------------------------------------------------

def trivial_quandle(n: int) -> Quandle:
    if n < 1:
        raise QuandleError("trivial quandle needs n >= 1")
    return Quandle(tuple(tuple(i for _ in range(n)) for i in range(n)), f"T{n}")


def dihedral_quandle(n: int) -> Quandle:
    if n < 1:
        raise QuandleError("dihedral quandle needs n >= 1")
    return Quandle(tuple(tuple((2 * j - i) % n for j in range(n)) for i in range(n)), f"R{n}")


def _polymulmod(a, b, h, m):
    """Product of coefficient vectors (constant term first) modulo h(T) and m."""
    d = len(h) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % m
    lead_inv = pow(h[-1], -1, m)
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k] * lead_inv % m
        if c:
            for i in range(d + 1):
                prod[k - d + i] = (prod[k - d + i] - c * h[i]) % m
    prod = prod[:d] + [0] * (d - len(prod))
    return tuple(prod[:d])


def alexander_quandle(m: int, h: Sequence[int]) -> Quandle:
    """Mod-``m`` Alexander quandle ``Z_m[T, T^-1]/(h)``.

    ``h`` lists coefficients from the constant term up. Elements are coefficient
    vectors of length ``deg h`` indexed in lexicographic order (constant term is
    the most significant coordinate), i.e. ``itertools.product`` order.
    """
    h = [c % m for c in h]
    while len(h) > 1 and h[-1] == 0:
        h.pop()
    d = len(h) - 1
    if m < 2 or d < 1:
        raise QuandleError("alexander quandle needs m >= 2 and deg h >= 1")
    from math import gcd

    if gcd(h[0], m) != 1 or gcd(h[-1], m) != 1:
        raise QuandleError("extreme coefficients of h must be units mod m")
    elems = list(itertools.product(range(m), repeat=d))
    index = {e: k for k, e in enumerate(elems)}
    T = tuple([0, 1] + [0] * (d - 2)) if d > 1 else _polymulmod((0, 1), (1,), h, m)
    one_minus_T = tuple((int(i == 0) - T[i]) % m for i in range(d))
    table = []
    for a in elems:
        Ta = _polymulmod(a, T, h, m)
        row = []
        for b in elems:
            c = _polymulmod(b, one_minus_T, h, m)
            row.append(index[tuple((x + y) % m for x, y in zip(Ta, c))])
        table.append(row)
    terms = " + ".join(f"{c}T^{i}" for i, c in enumerate(h) if c)
    return _validated(table, f"Z{m}[T]/({terms})")


def conjugation_quandle(group_table: Sequence[Sequence[int]], n: int = 1) -> Quandle:
    """``a * b = b^-n a b^n`` on a group given by its multiplication table."""
    size = len(group_table)
    if any(len(r) != size for r in group_table):
        raise QuandleError("group table must be square")
    ids = [e for e in range(size) if all(group_table[e][x] == x == group_table[x][e] for x in range(size))]
    if len(ids) != 1:
        raise QuandleError("group table has no two-sided identity")
    e = ids[0]
    for x, y, z in itertools.product(range(size), repeat=3):
        if group_table[group_table[x][y]][z] != group_table[x][group_table[y][z]]:
            raise QuandleError(f"group table not associative at {(x, y, z)}")
    inverse = []
    for x in range(size):
        cands = [y for y in range(size) if group_table[x][y] == e]
        if len(cands) != 1:
            raise QuandleError(f"element {x} has no unique inverse")
        inverse.append(cands[0])

    def power(x, k):
        base, r = (x, k) if k >= 0 else (inverse[x], -k)
        out = e
        for _ in range(r):
            out = group_table[out][base]
        return out

    table = [[group_table[group_table[power(b, -n)][a]][power(b, n)] for b in range(size)] for a in range(size)]
    return _validated(table, f"Conj{n}")


def quaternion_group() -> tuple[list[list[int]], list[str]]:
    """Multiplication table of Q8 with elements 1,-1,i,-i,j,-j,k,-k."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    units = {"1": {"1": (1, "1"), "i": (1, "i"), "j": (1, "j"), "k": (1, "k")},
             "i": {"1": (1, "i"), "i": (-1, "1"), "j": (1, "k"), "k": (-1, "j")},
             "j": {"1": (1, "j"), "i": (-1, "k"), "j": (-1, "1"), "k": (1, "i")},
             "k": {"1": (1, "k"), "i": (1, "j"), "j": (-1, "i"), "k": (-1, "1")}}

    def split(name):
        return (-1, name[1:]) if name.startswith("-") else (1, name)

    def join(sign, unit):
        if unit == "1":
            return "1" if sign > 0 else "-1"
        return unit if sign > 0 else "-" + unit

    table = []
    for a in names:
        sa, ua = split(a)
        row = []
        for b in names:
            sb, ub = split(b)
            s, u = units[ua][ub]
            row.append(names.index(join(sa * sb * s, u)))
        table.append(row)
    return table, names


def subquandle(X: Quandle, elements: Sequence[int], label: str = "") -> Quandle:
    elements = list(elements)
    pos = {e: k for k, e in enumerate(elements)}
    try:
        table = [[pos[X.op(a, b)] for b in elements] for a in elements]
    except KeyError:
        raise QuandleError("subset is not closed under the quandle operation") from None
    return _validated(table, label)


def make_quandle(kind: str, *args, label: str = "", unchecked: bool = False, **kwargs) -> Quandle:
    """Dispatch on ``kind``: trivial n | dihedral n | alexander m h | conj table [n] | raw table."""
    if kind == "trivial":
        return trivial_quandle(*args)
    if kind == "dihedral":
        return dihedral_quandle(*args)
    if kind == "alexander":
        return alexander_quandle(*args)
    if kind == "conj":
        return conjugation_quandle(*args, **kwargs)
    if kind == "raw":
        return _validated(args[0], label, unchecked)
    raise QuandleError(f"unknown quandle kind {kind!r}")


def parse_quandle(text: str, unchecked: bool = False) -> Quandle:
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split()[0] != "quandle":
        raise QuandleError("expected header 'quandle n'")
    try:
        n = int(lines[0].split()[1])
        rows = [[int(v) for v in ln.split()] for ln in lines[1:]]
    except (IndexError, ValueError) as exc:
        raise QuandleError(f"malformed quandle file: {exc}") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise QuandleError(f"expected {n} rows of {n} entries")
    return make_quandle("raw", rows, unchecked=unchecked)


# -- homomorphisms ------------------------------------------------------------

@dataclass(frozen=True)
class QuandleHom:
    dom: Quandle
    cod: Quandle
    map: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    def is_homomorphism(self) -> bool:
        f, X, Y = self.map, self.dom, self.cod
        return all(f[X.op(a, b)] == Y.op(f[a], f[b]) for a in range(len(X)) for b in range(len(X)))

    def is_bijective(self) -> bool:
        return len(set(self.map)) == len(self.map) == len(self.cod)

    def compose(self, other: "QuandleHom") -> "QuandleHom":
        """``other`` after ``self``."""
        return QuandleHom(self.dom, other.cod, tuple(other.map[x] for x in self.map))


def _search_homs(X: Quandle, Y: Quandle, injective: bool, first_only: bool):
    n = len(X)
    f = [-1] * n
    results = []
    order = list(range(n))

    def propagate(assigned):
        # close the partial map under the operation; returns False on conflict
        stack = list(assigned)
        while stack:
            a = stack.pop()
            for b in range(n):
                if f[b] < 0:
                    continue
                for (p, q) in ((a, b), (b, a)):
                    r = X.op(p, q)
                    val = Y.op(f[p], f[q])
                    if f[r] < 0:
                        if injective and val in f:
                            return False
                        f[r] = val
                        stack.append(r)
                        assigned.append(r)
                    elif f[r] != val:
                        return False
        return True

    def backtrack():
        try:
            a = next(i for i in order if f[i] < 0)
        except StopIteration:
            results.append(tuple(f))
            return first_only
        for v in range(len(Y)):
            if injective and v in f:
                continue
            if injective and not _profiles_match(X, Y, a, v):
                continue
            saved = list(f)
            f[a] = v
            if propagate([a]) and backtrack():
                return True
            f[:] = saved
        return False

    backtrack()
    return sorted(results)


def _row_profile(X: Quandle, a: int):
    fixed = sum(1 for b in range(len(X)) if X.op(a, b) == a)
    col_fixed = sum(1 for b in range(len(X)) if X.op(b, a) == b)
    return fixed, col_fixed


def _profiles_match(X, Y, a, v):
    return _row_profile(X, a) == _row_profile(Y, v)


def quandle_homs(dom: Quandle, cod: Quandle) -> list[QuandleHom]:
    """All homomorphisms ``dom -> cod`` in lexicographic order of their maps."""
    return [QuandleHom(dom, cod, m) for m in _search_homs(dom, cod, False, False)]


def are_isomorphic(X: Quandle, Y: Quandle) -> QuandleHom | None:
    if len(X) != len(Y):
        return None
    if sorted(_row_profile(X, a) for a in range(len(X))) != sorted(_row_profile(Y, a) for a in range(len(Y))):
        return None
    found = _search_homs(X, Y, True, True)
    return QuandleHom(X, Y, found[0]) if found else None


# -- finite abelian groups and group rings ----------------------------------------

@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups ``Z_m1 x ... x Z_mr``; elements are r-tuples."""

    orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(m) for m in self.orders))
        if any(m < 2 for m in self.orders):
            raise ValueError("cyclic orders must be >= 2")

    @classmethod
    def parse(cls, text: str) -> "FiniteAbelianGroup":
        text = text.strip()
        if text in ("", "0", "1"):
            return cls(())
        return cls(tuple(int(t) for t in text.replace("x", ",").split(",")))

    @property
    def order(self) -> int:
        out = 1
        for m in self.orders:
            out *= m
        return out

    @property
    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.orders)

    def is_cyclic(self) -> bool:
        return len(self.orders) <= 1

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(m) for m in self.orders)))

    def index(self, g: Sequence[int]) -> int:
        k = 0
        for x, m in zip(g, self.orders):
            k = k * m + x % m
        return k

    def element(self, k: int) -> tuple[int, ...]:
        out = []
        for m in reversed(self.orders):
            out.append(k % m)
            k //= m
        return tuple(reversed(out))

    def normalize(self, g) -> tuple[int, ...]:
        if isinstance(g, int):
            g = (g,)
        if len(g) != len(self.orders):
            raise ValueError(f"element {g} has wrong length for {self}")
        return tuple(x % m for x, m in zip(g, self.orders))

    def add(self, g, h) -> tuple[int, ...]:
        return tuple((x + y) % m for x, y, m in zip(g, h, self.orders))

    def neg(self, g) -> tuple[int, ...]:
        return tuple((-x) % m for x, m in zip(g, self.orders))

    def sub(self, g, h) -> tuple[int, ...]:
        return tuple((x - y) % m for x, y, m in zip(g, h, self.orders))

    def __str__(self):
        return " x ".join(f"Z{m}" for m in self.orders) or "0"


def cyclic_group(m: int) -> FiniteAbelianGroup:
    return FiniteAbelianGroup((m,))


@dataclass(frozen=True)
class GroupRingElement:
    """Element of Z[A] with nonnegative coefficients, keyed by group elements."""

    group: FiniteAbelianGroup
    coefficients: Mapping[tuple[int, ...], int]

    def __post_init__(self):
        coeffs = {}
        for g, c in self.coefficients.items():
            g = self.group.normalize(g)
            coeffs[g] = coeffs.get(g, 0) + int(c)
        object.__setattr__(self, "coefficients", {g: c for g, c in sorted(coeffs.items()) if c})

    @classmethod
    def from_values(cls, group: FiniteAbelianGroup, values: Iterable) -> "GroupRingElement":
        return cls(group, Counter(group.normalize(v) for v in values))

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return self.group == other.group and dict(self.coefficients) == dict(other.coefficients)
        return NotImplemented

    def __hash__(self):
        return hash((self.group, tuple(self.coefficients.items())))

    def augmentation(self) -> int:
        """Sum of coefficients."""
        return sum(self.coefficients.values())

    def negate_exponents(self) -> "GroupRingElement":
        return GroupRingElement(self.group, {self.group.neg(g): c for g, c in self.coefficients.items()})

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        return list(self.coefficients.items())

    def __str__(self):
        return groupring_format(self, self.group)


def groupring_format(v: GroupRingElement, A: FiniteAbelianGroup | None = None) -> str:
    A = A or v.group
    if not v.coefficients:
        return "0"
    parts = []
    for g, c in sorted(v.coefficients.items()):
        if not any(g):
            parts.append(str(c))
            continue
        if len(g) == 1:
            mono = "t" if g[0] == 1 else f"t^{g[0]}"
        else:
            mono = "*".join(
                (f"t{i + 1}" if e == 1 else f"t{i + 1}^{e}") for i, e in enumerate(g) if e
            )
        parts.append(mono if c == 1 else f"{c}{mono}")
    return " + ".join(parts)


def parse_groupring(text: str, A: FiniteAbelianGroup) -> GroupRingElement:
    """Inverse of :func:`groupring_format` for cyclic ``A``."""
    if not A.is_cyclic():
        raise ValueError("parsing is only supported for cyclic groups")
    coeffs: Counter = Counter()
    text = text.strip()
    if text == "0":
        return GroupRingElement(A, {})
    for term in text.split("+"):
        term = term.strip()
        if "t" not in term:
            coeffs[(0,)] += int(term)
            continue
        c, _, e = term.partition("t")
        coeffs[(int(e[1:]) if e else 1,)] += int(c) if c else 1
    return GroupRingElement(A, coeffs)
