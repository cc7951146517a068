"""Rack/degenerate/quandle chain complexes of a finite quandle.

The boundary of an n-tuple is

    d(x1..xn) = sum_{i=2..n} (-1)^i [ (x1..^xi..xn) - (x1*xi, .., x(i-1)*xi, x(i+1)..xn) ]

and the quandle complex C^Q is realised as the summand spanned by tuples with no
two adjacent entries equal (the degenerate tuples span a subcomplex).
Coboundaries are transposes: ``(delta c)(x) = c(d x)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import Quandle, dihedral_quandle
from .linalg import (
    invariant_factors,
    is_prime,
    nullspace_mod_p,
    rank_mod_p,
    smith_normal_form,
    solve_mod,
    solve_mod_p,
)

THEORIES = ("R", "D", "Q")
MAX_DEGREE = 5
MEMORY_CAP_BYTES = 2 * 1024 ** 3


class ChainComplexError(ValueError):
    pass


class UnsupportedCoefficients(ChainComplexError):
    pass


def is_degenerate(t: Sequence[int]) -> bool:
    return any(t[i] == t[i + 1] for i in range(len(t) - 1))


@dataclass(frozen=True)
class TupleBasis:
    quandle: Quandle
    degree: int
    theory: str
    tuples: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.theory not in THEORIES:
            raise ChainComplexError(f"unknown theory {self.theory!r}")
        if self.degree < 0:
            tuples = ()
        else:
            every = itertools.product(range(len(self.quandle)), repeat=self.degree)
            if self.theory == "R":
                tuples = tuple(every)
            elif self.theory == "D":
                tuples = tuple(t for t in every if is_degenerate(t))
            else:
                tuples = tuple(t for t in every if not is_degenerate(t))
        object.__setattr__(self, "tuples", tuples)
        object.__setattr__(self, "index", {t: k for k, t in enumerate(tuples)})

    def __len__(self):
        return len(self.tuples)


def _guard(X: Quandle, n: int):
    if n > MAX_DEGREE:
        raise ChainComplexError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
    size = len(X) ** max(n, 0) * len(X) ** max(n - 1, 0) * 8
    if size > MEMORY_CAP_BYTES:
        raise ChainComplexError(f"boundary matrix in degree {n} would need about {size} bytes")


def boundary_of_tuple(X: Quandle, t: Sequence[int]) -> dict[tuple[int, ...], int]:
    """The rack boundary of one tuple as a sparse integer combination."""
    n = len(t)
    out: dict[tuple[int, ...], int] = {}
    if n <= 1:
        return out
    for i in range(1, n):  # 0-based position of x_i, i.e. i+1 = 2..n
        sign = 1 if (i + 1) % 2 == 0 else -1
        face = tuple(t[:i]) + tuple(t[i + 1:])
        moved = tuple(X.op(x, t[i]) for x in t[:i]) + tuple(t[i + 1:])
        out[face] = out.get(face, 0) + sign
        out[moved] = out.get(moved, 0) - sign
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=64)
def _basis(X: Quandle, theory: str, n: int) -> TupleBasis:
    return TupleBasis(X, n, theory)


def basis(X: Quandle, theory: str, n: int) -> TupleBasis:
    return _basis(X, theory, n)


@lru_cache(maxsize=64)
def _boundary_matrix(X: Quandle, theory: str, n: int) -> np.ndarray:
    src, dst = _basis(X, theory, n), _basis(X, theory, n - 1)
    M = np.zeros((len(dst), len(src)), dtype=np.int64)
    if n <= 1:
        return M
    for j, t in enumerate(src.tuples):
        for face, coeff in boundary_of_tuple(X, t).items():
            row = dst.index.get(face)
            if row is not None:  # faces outside the basis are projected away (theory Q)
                M[row, j] += coeff
    M.setflags(write=False)
    return M


def boundary_matrix(X: Quandle, theory: str, n: int) -> np.ndarray:
    """Matrix of d_n: C_n -> C_(n-1) in the lexicographic tuple bases."""
    if theory not in THEORIES:
        raise ChainComplexError(f"unknown theory {theory!r}")
    _guard(X, n)
    return _boundary_matrix(X, theory, n)


# -- (co)homology ---------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroupStructure:
    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if any(d < 2 for d in self.torsion) or any(
            b % a for a, b in zip(self.torsion, self.torsion[1:])
        ):
            raise ValueError(f"invalid invariant factors {self.torsion}")

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        for d, group in itertools.groupby(self.torsion):
            k = len(list(group))
            parts.append(f"Z_{d}" if k == 1 else f"Z_{d}^{k}")
        return " + ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> "AbelianGroupStructure":
        text = text.strip()
        if text == "0":
            return cls()
        rank, orders = 0, []
        for part in text.split("+"):
            part = part.strip()
            base, _, power = part.partition("^")
            k = int(power) if power else 1
            if base == "Z":
                rank += k
            else:
                orders += [int(base[2:])] * k
        return cls(rank, tuple(invariant_factors(orders)))


def _homology_at(out_map: np.ndarray, in_map: np.ndarray, dim: int, m: int) -> AbelianGroupStructure:
    """Homology of ``in_map -> C -> out_map`` with C free of rank ``dim``.

    For Z_m coefficients the kernel of ``out_map`` mod m is read off the Smith
    form U out V = D: in the coordinates y = V^-1 x it is generated by
    (m / gcd(d_i, m)) e_i for the pivots and e_i for the free columns.
    The image of ``in_map`` lands in the free coordinates only (out @ in == 0
    over Z), so the quotient is presented by those coordinates plus m*I.
    """
    if m == 0:
        rank_out = smith_normal_form(out_map, transforms=False).rank if out_map.size else 0
        if in_map.size:
            fac = smith_normal_form(in_map, transforms=False).invariant_factors
        else:
            fac = []
        free = dim - rank_out - len(fac)
        return AbelianGroupStructure(free, tuple(invariant_factors([d for d in fac if d > 1])))

    if out_map.size:
        snf = smith_normal_form(out_map)
        diag = snf.invariant_factors
        V_inv = snf.V_inv
    else:
        diag, V_inv = [], None
    k = len(diag)
    orders = [gcd(d, m) for d in diag]
    free_dim = dim - k
    if free_dim and in_map.size:
        coords = (V_inv @ in_map.astype(object))[k:, :] if V_inv is not None else in_map.astype(object)
        coords = coords % m
        relations = np.hstack([coords, m * np.eye(free_dim, dtype=np.int64).astype(object)])
        quotient = smith_normal_form(relations, transforms=False).diagonal
    else:
        quotient = [m] * free_dim
    orders += [gcd(d, m) if d else m for d in quotient]
    return AbelianGroupStructure(0, tuple(invariant_factors([d for d in orders if d > 1])))


def _coeff_modulus(coeff) -> int:
    if coeff in (None, 0, "Z"):
        return 0
    if isinstance(coeff, str):
        coeff = int(coeff.lstrip("Z_"))
    if coeff < 2:
        raise ChainComplexError("coefficient modulus must be >= 2 (or 0 for Z)")
    return int(coeff)


def homology(X: Quandle, theory: str, n: int, coeff=0) -> AbelianGroupStructure:
    """H_n of C^theory(X; G) for G = Z (coeff 0) or Z_m (coeff m)."""
    if n < 0:
        raise ChainComplexError("degree must be >= 0")
    m = _coeff_modulus(coeff)
    out_map = boundary_matrix(X, theory, n)
    in_map = boundary_matrix(X, theory, n + 1)
    return _homology_at(out_map, in_map, len(basis(X, theory, n)), m)


def cohomology(X: Quandle, theory: str, n: int, coeff=0) -> AbelianGroupStructure:
    """H^n of Hom(C^theory(X), G) with delta the transpose of the boundary."""
    if n < 0:
        raise ChainComplexError("degree must be >= 0")
    m = _coeff_modulus(coeff)
    out_map = boundary_matrix(X, theory, n + 1).T
    in_map = boundary_matrix(X, theory, n).T
    return _homology_at(out_map, in_map, len(basis(X, theory, n)), m)


# -- chains and cochains -------------------------------------------------------

@dataclass(frozen=True)
class _Sparse:
    quandle: Quandle
    degree: int
    modulus: int = 0
    values: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for t, v in self.values.items():
            t = tuple(int(x) for x in t)
            if len(t) != self.degree:
                raise ChainComplexError(f"tuple {t} does not have degree {self.degree}")
            v = int(v) % self.modulus if self.modulus else int(v)
            if v:
                clean[t] = clean.get(t, 0) + v
                if self.modulus:
                    clean[t] %= self.modulus
        object.__setattr__(self, "values", {t: v for t, v in sorted(clean.items()) if v})

    def __call__(self, *t) -> int:
        if len(t) == 1 and isinstance(t[0], tuple):
            t = t[0]
        return self.values.get(tuple(t), 0)

    def _same(self, other):
        if (self.quandle, self.degree, self.modulus) != (other.quandle, other.degree, other.modulus):
            raise ChainComplexError("incompatible (co)chains")

    def __add__(self, other):
        self._same(other)
        vals = dict(self.values)
        for t, v in other.values.items():
            vals[t] = vals.get(t, 0) + v
        return type(self)(self.quandle, self.degree, self.modulus, vals)

    def __neg__(self):
        return type(self)(self.quandle, self.degree, self.modulus, {t: -v for t, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return type(self)(self.quandle, self.degree, self.modulus, {t: k * v for t, v in self.values.items()})

    def is_zero(self) -> bool:
        return not self.values

    def vanishes_on_degenerate(self) -> bool:
        return not any(is_degenerate(t) for t in self.values)

    def to_vector(self, theory: str = "Q") -> np.ndarray:
        B = basis(self.quandle, theory, self.degree)
        v = np.zeros(len(B), dtype=np.int64)
        for t, c in self.values.items():
            if t in B.index:
                v[B.index[t]] = c
            elif theory == "R" or not is_degenerate(t):
                raise ChainComplexError(f"tuple {t} outside the {theory} basis")
        return v

    @classmethod
    def from_vector(cls, X: Quandle, degree: int, modulus: int, vec, theory: str = "Q"):
        B = basis(X, theory, degree)
        return cls(X, degree, modulus, {t: int(c) for t, c in zip(B.tuples, vec) if c})

    @classmethod
    def zero(cls, X: Quandle, degree: int, modulus: int = 0):
        return cls(X, degree, modulus, {})

    def to_text(self) -> str:
        kind = "cochain" if isinstance(self, Cochain) else "chain"
        lines = [f"{kind} deg={self.degree} mod={self.modulus} quandle={len(self.quandle)}"]
        lines += [" ".join(map(str, t)) + f" : {v}" for t, v in self.values.items()]
        return "\n".join(lines) + "\n"


class Chain(_Sparse):
    """Finite formal sum of tuples; ``modulus`` 0 means integer coefficients."""

    def reduce_quandle(self) -> "Chain":
        """Image in C^Q: degenerate tuples dropped."""
        return Chain(self.quandle, self.degree, self.modulus,
                     {t: v for t, v in self.values.items() if not is_degenerate(t)})

    def boundary(self, theory: str = "Q") -> "Chain":
        vals: dict = {}
        for t, c in self.values.items():
            for face, k in boundary_of_tuple(self.quandle, t).items():
                vals[face] = vals.get(face, 0) + c * k
        out = Chain(self.quandle, self.degree - 1, self.modulus, vals)
        return out.reduce_quandle() if theory == "Q" else out


class Cochain(_Sparse):
    """Function on n-tuples with values in Z_m, stored sparsely (zeros omitted)."""

    def __post_init__(self):
        if self.modulus < 2:
            raise ChainComplexError("cochains take values in Z_m with m >= 2")
        super().__post_init__()


def parse_sparse(text: str, X: Quandle):
    """Read the ``.coc`` format (``cochain``/``chain`` header, ``x1 .. xn : v`` lines)."""
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ChainComplexError("empty cochain file")
    head = lines[0].split()
    kind = head[0]
    if kind not in ("chain", "cochain"):
        raise ChainComplexError("expected 'cochain' or 'chain' header")
    fields = dict(tok.split("=", 1) for tok in head[1:])
    degree, modulus = int(fields["deg"]), int(fields.get("mod", 0))
    if "quandle" in fields and int(fields["quandle"]) != len(X):
        raise ChainComplexError(f"file is for a quandle of order {fields['quandle']}, got {len(X)}")
    values = {}
    for ln in lines[1:]:
        lhs, _, rhs = ln.partition(":")
        t = tuple(int(x) for x in lhs.split())
        if len(t) != degree or any(not 0 <= x < len(X) for x in t):
            raise ChainComplexError(f"bad tuple line {ln!r}")
        values[t] = int(rhs)
    cls = Cochain if kind == "cochain" else Chain
    return cls(X, degree, modulus, values)


def delta(c: Cochain) -> Cochain:
    """Coboundary, evaluated tuple by tuple as ``c(d x)`` over all (n+1)-tuples."""
    X, n = c.quandle, c.degree
    vals = {}
    for t in itertools.product(range(len(X)), repeat=n + 1):
        s = sum(k * c.values.get(face, 0) for face, k in boundary_of_tuple(X, t).items())
        if s % c.modulus:
            vals[t] = s
    return Cochain(X, n + 1, c.modulus, vals)


def pairing(z: Chain, c: Cochain) -> int:
    """Kronecker product ``sum z[t] c(t)`` in Z_m."""
    if z.degree != c.degree:
        raise ChainComplexError(f"degree mismatch: chain {z.degree}, cochain {c.degree}")
    if z.modulus and c.modulus % z.modulus and z.modulus % c.modulus:
        raise ChainComplexError("incompatible coefficient moduli")
    return sum(v * c.values.get(t, 0) for t, v in z.values.items()) % c.modulus


def _require_prime(m: int):
    if not is_prime(m):
        raise UnsupportedCoefficients(
            f"Z_{m} is not a field; use homology/cohomology for its group structure"
        )


def coboundary_matrix(X: Quandle, n: int) -> np.ndarray:
    """delta: C^n_Q -> C^(n+1)_Q as a matrix (transpose of d_(n+1))."""
    return boundary_matrix(X, "Q", n + 1).T


def cocycle_space(X: Quandle, n: int, m: int) -> list[Cochain]:
    """Basis of Z^n_Q(X; F_m) in reduced echelon form (m prime)."""
    _require_prime(m)
    vecs = nullspace_mod_p(coboundary_matrix(X, n), m)
    return [Cochain.from_vector(X, n, m, v) for v in vecs]


def coboundary_dimension(X: Quandle, n: int, m: int) -> int:
    """dim B^n_Q(X; F_m)."""
    _require_prime(m)
    if n == 0:
        return 0
    return rank_mod_p(coboundary_matrix(X, n - 1), m)


def is_coboundary(c: Cochain) -> Cochain | None:
    """A quandle (n-1)-cochain ``eta`` with ``delta(eta) == c``, or None."""
    X, n, m = c.quandle, c.degree, c.modulus
    if not c.vanishes_on_degenerate():
        return None
    if n == 0:
        return None if not c.is_zero() else c
    A = coboundary_matrix(X, n - 1)
    b = c.to_vector("Q")
    x = solve_mod_p(A, b, m) if is_prime(m) else solve_mod(A, b, m)
    if x is None:
        return None
    return Cochain.from_vector(X, n - 1, m, x)


def is_quandle_cocycle(c: Cochain) -> bool:
    return c.vanishes_on_degenerate() and delta(c).is_zero()


XI_SUPPORT = ((0, 1, 2), (0, 2, 1), (1, 0, 1), (2, 0, 1), (2, 0, 2), (1, 0, 2))


def xi_cocycle() -> Cochain:
    """The 3-cocycle of R3 with value 1 on six triples, generating H^3_Q(R3; Z3)."""
    return Cochain(dihedral_quandle(3), 3, 3, {t: 1 for t in XI_SUPPORT})


def chain_from_terms(X: Quandle, terms: Iterable[tuple[int, Sequence[int]]], modulus: int = 0) -> Chain:
    terms = list(terms)
    degree = len(terms[0][1]) if terms else 0
    vals: dict = {}
    for coeff, t in terms:
        vals[tuple(t)] = vals.get(tuple(t), 0) + coeff
    return Chain(X, degree, modulus, vals)
