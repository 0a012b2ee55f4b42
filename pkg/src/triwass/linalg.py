"""Exact linear algebra over a prime field GF(q).

Matrices are plain ``numpy`` int64 arrays whose entries are residues in
``[0, q)``.  The active prime is a process-wide setting (default 32003,
overridable with ``TRIWASS_FIELD_PRIME`` or :func:`prime_field`).  Products of
two residues must fit in int64, so q is capped below 2**31.
"""
from __future__ import annotations

import contextlib
import os
from fractions import Fraction
from typing import Iterator

import numpy as np

DEFAULT_PRIME = 32003
_MAX_PRIME = 2**31


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def _check_prime(q: int) -> int:
    q = int(q)
    if not is_prime(q) or q >= _MAX_PRIME:
        raise ValueError(f"field modulus must be a prime below 2**31, got {q}")
    return q


_prime: int | None = None  # read from the environment on first use


def get_prime() -> int:
    global _prime
    if _prime is None:
        raw = os.environ.get("TRIWASS_FIELD_PRIME", str(DEFAULT_PRIME))
        try:
            q = int(raw)
        except ValueError:
            raise ValueError(f"TRIWASS_FIELD_PRIME must be an integer, got {raw!r}") from None
        _prime = _check_prime(q)
    return _prime


def set_prime(q: int) -> None:
    global _prime
    _prime = _check_prime(q)


@contextlib.contextmanager
def prime_field(q: int) -> Iterator[int]:
    """Temporarily switch the active field to GF(q)."""
    global _prime
    old = _prime
    _prime = _check_prime(q)
    try:
        yield _prime
    finally:
        _prime = old


def as_matrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce ``data`` to a reduced int64 matrix.

    A flat sequence is reshaped row-major when ``rows``/``cols`` are given.
    """
    arr = np.asarray(data, dtype=object)
    if rows is not None and cols is not None:
        if arr.size != rows * cols:
            raise ValueError(f"expected {rows}x{cols}={rows * cols} entries, got {arr.size}")
        arr = arr.reshape(rows, cols)
    if arr.ndim != 2:
        raise ValueError(f"matrix must be 2-dimensional, got shape {arr.shape}")
    return np.array(arr % get_prime(), dtype=np.int64).reshape(arr.shape)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    # fall back to rank-one accumulation when a dot product could overflow int64
    q = get_prime()
    if a.shape[1] * (q - 1) ** 2 < 2**63:
        return (a @ b) % q
    out = zeros(a.shape[0], b.shape[1])
    for k in range(a.shape[1]):
        out = (out + np.outer(a[:, k], b[k, :]) % q) % q
    return out


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a + b) % get_prime()


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a - b) % get_prime()


def neg(a: np.ndarray) -> np.ndarray:
    return (-a) % get_prime()


def scale(a: np.ndarray, c: int) -> np.ndarray:
    return (a * (int(c) % get_prime())) % get_prime()


def inv_scalar(x: int) -> int:
    x = int(x) % get_prime()
    if x == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(x, -1, get_prime())


def block(rows: list[list[np.ndarray]]) -> np.ndarray:
    """``np.block`` that tolerates empty blocks."""
    heights = [max((b.shape[0] for b in row), default=0) for row in rows]
    widths = [max((row[j].shape[1] for row in rows), default=0) for j in range(len(rows[0]))]
    out = zeros(sum(heights), sum(widths))
    r = 0
    for i, row in enumerate(rows):
        c = 0
        for j, b in enumerate(row):
            if b.size:
                out[r : r + b.shape[0], c : c + b.shape[1]] = b
            c += widths[j]
        r += heights[i]
    return out


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with first-nonzero pivoting.

    Returns the reduced matrix and the list of pivot columns.
    """
    q = get_prime()
    a = np.array(m, dtype=np.int64) % q
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, q)) % q
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r]) % q) % q
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: np.ndarray) -> np.ndarray:
    """Columns form a basis of ``{v : m v = 0}``."""
    rows, cols = m.shape
    if rows == 0:
        return identity(cols)
    r, pivots = rref(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    q = get_prime()
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, p in enumerate(pivots):
            basis[p, k] = (-r[i, f]) % q
    return basis


def cokernel_projection(m: np.ndarray) -> tuple[np.ndarray, int]:
    """Surjection ``p: k^rows -> k^d`` with ``p @ m == 0``, d = rows - rank(m)."""
    p = kernel_basis(m.T).T.copy()
    return p, p.shape[0]


def solve(m: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Some ``x`` with ``m @ x == b``, or ``None`` when b is outside the column space."""
    if m.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: {m.shape} vs {b.shape}")
    rows, cols = m.shape
    if rows == 0:
        return zeros(cols, b.shape[1])
    aug = np.concatenate([m, b], axis=1) if b.shape[1] else np.array(m)
    r, pivots = rref(aug)
    if any(p >= cols for p in pivots):
        return None
    x = zeros(cols, b.shape[1])
    for i, p in enumerate(pivots):
        x[p] = r[i, cols:]
    return x


def image_basis(m: np.ndarray) -> np.ndarray:
    """Linearly independent columns of ``m`` spanning its column space."""
    if m.size == 0:
        return zeros(m.shape[0], 0)
    _, pivots = rref(m)
    return m[:, pivots].copy()


def right_inverse(p: np.ndarray) -> np.ndarray:
    """A section ``s`` with ``p @ s == id`` for a surjective ``p``."""
    s = solve(p, identity(p.shape[0]))
    if s is None:
        raise ValueError("matrix is not surjective")
    return s


def inverse(m: np.ndarray) -> np.ndarray:
    if m.shape[0] != m.shape[1]:
        raise ValueError("only square matrices are invertible")
    s = solve(m, identity(m.shape[0]))
    if s is None or rank(m) != m.shape[0]:
        raise ValueError("matrix is singular")
    return s


def to_fraction(x) -> Fraction:
    """Parse ``"p/q"`` strings, ints and Fractions into an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def sylvester_system(
    shapes: list[tuple[int, int]],
    equations: list[list[tuple[int, np.ndarray, np.ndarray]]],
) -> np.ndarray:
    """Coefficient matrix of a system of linear matrix equations.

    Unknowns are matrices ``X_k`` of the given shapes, vectorized row-major and
    concatenated.  Each equation is a list of terms ``(k, A, B)`` meaning
    ``sum A @ X_k @ B == 0``.
    """
    offsets = np.cumsum([0] + [r * c for r, c in shapes])
    blocks = []
    for terms in equations:
        k0, a0, b0 = terms[0]
        out_rows = a0.shape[0] * b0.shape[1]
        if out_rows == 0:
            continue
        row = zeros(out_rows, int(offsets[-1]))
        for k, a, b in terms:
            if shapes[k][0] * shapes[k][1] == 0:
                continue
            row[:, offsets[k] : offsets[k + 1]] += np.kron(a, b.T)
        blocks.append(row % get_prime())
    if not blocks:
        return zeros(0, int(offsets[-1]))
    return np.concatenate(blocks, axis=0)


def unpack(vec: np.ndarray, shapes: list[tuple[int, int]]) -> list[np.ndarray]:
    """Split a solution vector of :func:`sylvester_system` back into matrices."""
    out, pos = [], 0
    for r, c in shapes:
        out.append(np.array(vec[pos : pos + r * c], dtype=np.int64).reshape(r, c))
        pos += r * c
    return out
