"""Exact integer and modular linear algebra.

Matrices are numpy arrays; anything that may grow is converted to ``dtype=object``
so the arithmetic stays in Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np


def as_object(M) -> np.ndarray:
    A = np.array(M, dtype=object)
    if A.ndim != 2:
        A = A.reshape((A.shape[0] if A.ndim else 0, -1))
    return A


def identity(n: int) -> np.ndarray:
    I = np.zeros((n, n), dtype=object)
    for i in range(n):
        I[i, i] = 1
    return I


@dataclass
class SNFDecomposition:
    """``U @ M @ V == D`` with ``D`` diagonal, ``d1 | d2 | ...`` and U, V unimodular."""

    U: np.ndarray | None
    D: np.ndarray
    V: np.ndarray | None
    V_inv: np.ndarray | None = None

    @property
    def diagonal(self) -> list[int]:
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]


def smith_normal_form(M, transforms: bool = True) -> SNFDecomposition:
    """Smith normal form by pivoting on the smallest nonzero entry.

    With ``transforms=False`` only ``D`` is computed, which is considerably
    cheaper on tall boundary matrices.
    """
    A = as_object(M).copy()
    r, c = A.shape
    U = identity(r) if transforms else None
    V = identity(c) if transforms else None
    Vi = identity(c) if transforms else None

    def swap_rows(i, j):
        if i != j:
            A[[i, j]] = A[[j, i]]
            if transforms:
                U[[i, j]] = U[[j, i]]

    def swap_cols(i, j):
        if i != j:
            A[:, [i, j]] = A[:, [j, i]]
            if transforms:
                V[:, [i, j]] = V[:, [j, i]]
                Vi[[i, j]] = Vi[[j, i]]

    t = 0
    while t < min(r, c):
        sub = A[t:, t:]
        nz = np.argwhere(sub != 0)
        if len(nz) == 0:
            break
        mags = [abs(sub[i, j]) for i, j in nz]
        i0, j0 = nz[int(np.argmin(mags))]
        swap_rows(t, t + i0)
        swap_cols(t, t + j0)
        while True:
            p = A[t, t]
            col = A[t + 1:, t]
            if col.size and any(col != 0):
                q = col // p
                A[t + 1:, :] -= q[:, None] * A[t, None, :]
                if transforms:
                    U[t + 1:, :] -= q[:, None] * U[t, None, :]
            row = A[t, t + 1:]
            if row.size and any(row != 0):
                q = row // p
                A[:, t + 1:] -= A[:, t, None] * q[None, :]
                if transforms:
                    V[:, t + 1:] -= V[:, t, None] * q[None, :]
                    Vi[t, :] += q @ Vi[t + 1:, :]
            # leftover remainders in the pivot row/column: move the smallest up
            rest = [(abs(A[i, t]), i, t) for i in range(t + 1, r) if A[i, t] != 0]
            rest += [(abs(A[t, j]), t, j) for j in range(t + 1, c) if A[t, j] != 0]
            if rest:
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            p = A[t, t]
            block = A[t + 1:, t + 1:]
            bad = np.argwhere(block % p != 0) if block.size else []
            if len(bad):
                i = t + 1 + bad[0][0]
                A[t, :] += A[i, :]
                if transforms:
                    U[t, :] += U[i, :]
                continue
            break
        if A[t, t] < 0:
            A[t, :] = -A[t, :]
            if transforms:
                U[t, :] = -U[t, :]
        t += 1
    return SNFDecomposition(U, A, V, Vi)


def det(M) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    A = [list(row) for row in as_object(M)]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def solve_mod(A, b, m: int) -> np.ndarray | None:
    """A solution of ``A x == b (mod m)`` or ``None``; complete for any m >= 2."""
    A = as_object(A)
    b = np.array(b, dtype=object).reshape(-1)
    rows, cols = A.shape
    if cols == 0:
        return np.zeros(0, dtype=object) if all(v % m == 0 for v in b) else None
    snf = smith_normal_form(A)
    Ub = snf.U @ b
    y = np.zeros(cols, dtype=object)
    diag = snf.diagonal
    for i in range(rows):
        d = diag[i] if i < len(diag) else 0
        target = Ub[i] % m
        g = gcd(d, m)
        if target % g:
            return None
        if d % m == 0:
            continue
        mm = m // g
        y[i] = (target // g) * pow((d // g) % mm, -1, mm) % mm if mm > 1 else 0
    return (snf.V @ y) % m


# -- prime-field elimination ----------------------------------------------------

def rref_mod_p(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p and the pivot columns."""
    A = np.array(M, dtype=np.int64) % p
    r, c = A.shape
    pivots = []
    row = 0
    for col in range(c):
        if row >= r:
            break
        nz = np.nonzero(A[row:, col])[0]
        if len(nz) == 0:
            continue
        k = row + nz[0]
        if k != row:
            A[[row, k]] = A[[k, row]]
        A[row] = A[row] * pow(int(A[row, col]), -1, p) % p
        others = np.nonzero(A[:, col])[0]
        for i in others:
            if i != row:
                A[i] = (A[i] - A[i, col] * A[row]) % p
        pivots.append(col)
        row += 1
    return A, pivots


def rank_mod_p(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref_mod_p(M, p)[1])


def nullspace_mod_p(M, p: int) -> list[np.ndarray]:
    """Basis of ``{x : M x = 0}`` over F_p, one vector per free column."""
    M = np.asarray(M)
    c = M.shape[1]
    if M.shape[0] == 0:
        R, pivots = np.zeros((0, c), dtype=np.int64), []
    else:
        R, pivots = rref_mod_p(M, p)
    free = [j for j in range(c) if j not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(c, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-R[i, f]) % p
        basis.append(v)
    return basis


def solve_mod_p(A, b, p: int) -> np.ndarray | None:
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    if A.shape[1] == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(b % p) else None
    R, pivots = rref_mod_p(np.hstack([A, b]), p)
    if pivots and pivots[-1] == A.shape[1]:
        return None
    x = np.zeros(A.shape[1], dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, -1]
    return x


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _prime_powers(n: int) -> list[tuple[int, int]]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            e = 0
            while n % k == 0:
                n //= k
                e += 1
            out.append((k, k ** e))
        k += 1
    if n > 1:
        out.append((n, n))
    return out


def invariant_factors(orders) -> list[int]:
    """Canonical ``d1 | d2 | ...`` form of a direct sum of cyclic groups (1s dropped)."""
    by_prime: dict[int, list[int]] = {}
    for m in orders:
        if m == 0:
            raise ValueError("use free rank for infinite cyclic summands")
        for p, q in _prime_powers(abs(m)):
            by_prime.setdefault(p, []).append(q)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for qs in by_prime.values():
        qs.sort(reverse=True)
        for i, q in enumerate(qs):
            factors[length - 1 - i] *= q
    return [f for f in factors if f > 1]
