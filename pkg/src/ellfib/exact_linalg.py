"""Exact integer linear algebra over Z and Q/Z.

Everything is built on Smith normal form.  A decomposition A = U * D * V
with U, V unimodular and D diagonal with d1 | d2 | ... controls both the
kernel and the cokernel of the map (Q/Z)^cols -> (Q/Z)^rows induced by A:
every nonzero integer acts surjectively on Q/Z, so in Smith coordinates
the image of the map is exactly "first rank(A) coordinates arbitrary" and
the kernel is a sum of cyclic groups Z/d_i plus a divisible part.

All arithmetic is arbitrary-precision integers and fractions.Fraction;
no floating point is used anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .errors import CommutationFailure, DimensionMismatch

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "DivisibleGroup",
    "CokernelChart",
    "smith_normal_form",
    "qz_kernel",
    "cokernel_chart",
    "induced_kernel",
    "induced_kernel_with_witnesses",
]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major.  Zero rows or columns
    are legal; a 0 x n matrix is the unique map from Z^n to the zero
    module and its Smith form is empty."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch(f"negative shape {self.rows} x {self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows} x {self.cols} matrix needs "
                f"{self.rows * self.cols} entries, got {len(self.entries)}"
            )
        for e in self.entries:
            if not isinstance(e, int):
                raise TypeError(f"matrix entries must be int, got {e!r}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionMismatch("ragged rows")
        else:
            width = 0 if cols is None else cols
        flat = tuple(int(e) for r in rows for e in r)
        return cls(len(rows), width, flat)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        n = len(diag)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        ent = [0] * (rows * cols)
        for i, d in enumerate(diag):
            ent[i * cols + i] = int(d)
        return cls(rows, cols, tuple(ent))

    @classmethod
    def column(cls, values: Sequence[int]) -> "IntMatrix":
        return cls(len(values), 1, tuple(int(v) for v in values))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def submatrix(self, row_start: int, col_start: int) -> "IntMatrix":
        """Lower-right block starting at (row_start, col_start)."""
        if not (0 <= row_start <= self.rows and 0 <= col_start <= self.cols):
            raise DimensionMismatch("submatrix start out of range")
        ent = tuple(
            self.at(i, j)
            for i in range(row_start, self.rows)
            for j in range(col_start, self.cols)
        )
        return IntMatrix(self.rows - row_start, self.cols - col_start, ent)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = [0] * (self.rows * other.cols)
        for i in range(self.rows):
            base = i * self.cols
            for k in range(self.cols):
                a = self.entries[base + k]
                if a:
                    obase = k * other.cols
                    rbase = i * other.cols
                    for j in range(other.cols):
                        out[rbase + j] += a * other.entries[obase + j]
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply_to_rational(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Matrix times a column vector of Fractions, exactly."""
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length does not match column count")
        return tuple(
            sum((Fraction(self.at(i, j)) * vec[j] for j in range(self.cols)), Fraction(0))
            for i in range(self.rows)
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def __str__(self) -> str:
        if self.rows == 0 or self.cols == 0:
            return f"<empty {self.rows}x{self.cols}>"
        return "\n".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))


@dataclass(frozen=True)
class SmithDecomposition:
    """A = U * D * V with U, V unimodular and D = diag(d1, ..., dr, 0, ...)
    satisfying d1 | d2 | ... | dr, all positive."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rank: int

    def diagonal(self) -> tuple[int, ...]:
        n = min(self.D.rows, self.D.cols)
        return tuple(self.D.at(i, i) for i in range(n))

    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal() if d > 1)


class _SmithData(NamedTuple):
    u: IntMatrix
    d: IntMatrix
    v: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix
    rank: int


def _identity_lists(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _smith_core(a: IntMatrix) -> _SmithData:
    """Diagonalize by elementary row/column operations, always pivoting on
    an entry of minimal absolute value.  Mirrors every operation into U,
    V and their inverses so that A = U * D * V holds throughout."""
    nr, nc = a.rows, a.cols
    d = a.to_rows()
    u = _identity_lists(nr)
    u_inv = _identity_lists(nr)
    v = _identity_lists(nc)
    v_inv = _identity_lists(nc)

    def row_add(i: int, j: int, q: int) -> None:
        # d[i] += q * d[j]; compensate U on the right by the inverse op.
        di, dj = d[i], d[j]
        for m in range(nc):
            di[m] += q * dj[m]
        for m in range(nr):
            u[m][j] -= q * u[m][i]
        uii, uji = u_inv[i], u_inv[j]
        for m in range(nr):
            uii[m] += q * uji[m]

    def row_swap(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        for m in range(nr):
            u[m][i], u[m][j] = u[m][j], u[m][i]
        u_inv[i], u_inv[j] = u_inv[j], u_inv[i]

    def row_negate(i: int) -> None:
        d[i] = [-e for e in d[i]]
        for m in range(nr):
            u[m][i] = -u[m][i]
        u_inv[i] = [-e for e in u_inv[i]]

    def col_add(j: int, i: int, q: int) -> None:
        # column j += q * column i
        for m in range(nr):
            d[m][j] += q * d[m][i]
        vi, vj = v[i], v[j]
        for m in range(nc):
            vi[m] -= q * vj[m]
        for m in range(nc):
            v_inv[m][j] += q * v_inv[m][i]

    def col_swap(i: int, j: int) -> None:
        for m in range(nr):
            d[m][i], d[m][j] = d[m][j], d[m][i]
        v[i], v[j] = v[j], v[i]
        for m in range(nc):
            v_inv[m][i], v_inv[m][j] = v_inv[m][j], v_inv[m][i]

    t = 0
    limit = min(nr, nc)
    while t < limit:
        # minimal nonzero entry of the active submatrix becomes the pivot
        pi = pj = -1
        best = 0
        for i in range(t, nr):
            for j in range(t, nc):
                e = d[i][j]
                if e != 0 and (best == 0 or abs(e) < best):
                    best = abs(e)
                    pi, pj = i, j
        if best == 0:
            break
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        pivot = d[t][t]
        for i in range(t + 1, nr):
            if d[i][t]:
                row_add(i, t, -(d[i][t] // pivot))
        for j in range(t + 1, nc):
            if d[t][j]:
                col_add(j, t, -(d[t][j] // pivot))
        if any(d[i][t] for i in range(t + 1, nr)) or any(
            d[t][j] for j in range(t + 1, nc)
        ):
            # leftovers are strictly smaller than the pivot; go again
            continue
        pivot = d[t][t]
        offender = -1
        for i in range(t + 1, nr):
            if any(e % pivot for e in d[i][t + 1 :]):
                offender = i
                break
        if offender >= 0:
            # pull the non-divisible row up; the next pass shrinks the pivot
            row_add(t, offender, 1)
            continue
        if pivot < 0:
            row_negate(t)
        t += 1

    return _SmithData(
        IntMatrix.from_rows(u, cols=nr),
        IntMatrix.from_rows(d, cols=nc),
        IntMatrix.from_rows(v, cols=nc),
        IntMatrix.from_rows(u_inv, cols=nr),
        IntMatrix.from_rows(v_inv, cols=nc),
        t,
    )


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form A = U * D * V over Z.

    Works for any shape including empty matrices.  Intended for the small
    systems in this library (tens of rows); entries may be arbitrarily
    large since all arithmetic is exact.
    """
    core = _smith_core(a)
    return SmithDecomposition(core.u, core.d, core.v, core.rank)


def _normalize_chain(orders: Iterable[int]) -> tuple[int, ...]:
    """Canonical invariant factors of a direct sum of cyclic groups Z/o."""
    factors = [int(o) for o in orders if int(o) > 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                a, b = factors[i], factors[j]
                if b % a != 0:
                    g = gcd(a, b)
                    factors[i], factors[j] = g, a * b // g
                    changed = True
        factors = [f for f in factors if f > 1]
    return tuple(sorted(factors))


@dataclass(frozen=True)
class DivisibleGroup:
    """An abelian group of the shape (Q/Z)^r + Z/d1 + ... + Z/dk in
    canonical form: every d_i >= 2 and d1 | d2 | ... | dk."""

    divisible_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.divisible_rank < 0:
            raise ValueError("negative divisible rank")
        prev = 1
        for d in self.invariant_factors:
            if not isinstance(d, int) or d < 2:
                raise ValueError(f"invariant factor {d!r} must be an int >= 2")
            if d % prev != 0:
                raise ValueError(
                    f"invariant factors {self.invariant_factors} do not form "
                    "a divisibility chain"
                )
            prev = d

    @classmethod
    def trivial(cls) -> "DivisibleGroup":
        return cls(0, ())

    @classmethod
    def cyclic(cls, n: int) -> "DivisibleGroup":
        n = abs(int(n))
        return cls(0, (n,) if n > 1 else ())

    @classmethod
    def from_torsion_orders(cls, orders: Iterable[int], divisible_rank: int = 0) -> "DivisibleGroup":
        return cls(divisible_rank, _normalize_chain(orders))

    @property
    def is_trivial(self) -> bool:
        return self.divisible_rank == 0 and not self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return self.divisible_rank == 0

    def order(self) -> int:
        """Order of the finite part (the whole group when finite)."""
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def exponent(self) -> int:
        """Exponent of the finite part (1 when there is none)."""
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def render(self) -> str:
        parts = []
        if self.divisible_rank:
            parts.append(f"(Q/Z)^{self.divisible_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.render()


def qz_kernel(b: IntMatrix) -> DivisibleGroup:
    """Kernel of the map (Q/Z)^cols -> (Q/Z)^rows defined by B.

    In Smith coordinates B acts diagonally; multiplication by d on Q/Z has
    kernel Z/d and by 0 has kernel all of Q/Z, so the answer is
    (Q/Z)^(cols - rank) + sum of Z/d_i over invariant factors d_i > 1.
    """
    dec = smith_normal_form(b)
    return DivisibleGroup(b.cols - dec.rank, dec.invariant_factors())


@dataclass(frozen=True)
class CokernelChart:
    """Coordinates for coker((Q/Z)^k --R--> (Q/Z)^ambient).

    Since nonzero integers act surjectively on Q/Z, the image of R in
    Smith coordinates is "first rank coordinates arbitrary, rest zero".
    The quotient is therefore a copy of (Q/Z)^(ambient - rank) read off
    from the last coordinates of basis_transform = U^-1 applied to a
    representative vector.
    """

    source: IntMatrix
    basis_transform: IntMatrix
    rank: int
    ambient_dim: int

    @property
    def quotient_rank(self) -> int:
        return self.ambient_dim - self.rank

    def quotient_coordinates(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Class of a rational vector in the quotient, as the last
        ambient - rank Smith coordinates reduced mod 1."""
        if len(vec) != self.ambient_dim:
            raise DimensionMismatch("representative has wrong length")
        image = self.basis_transform.apply_to_rational([Fraction(x) for x in vec])
        return tuple(x % 1 for x in image[self.rank :])

    def same_class(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
        return self.quotient_coordinates(x) == self.quotient_coordinates(y)


def cokernel_chart(r: IntMatrix) -> CokernelChart:
    core = _smith_core(r)
    return CokernelChart(
        source=r, basis_transform=core.u_inv, rank=core.rank, ambient_dim=r.rows
    )


def _induced_block(
    r: IntMatrix, n: IntMatrix, m0: IntMatrix, sigma: IntMatrix
) -> tuple[IntMatrix, _SmithData, int]:
    """Matrix of the map induced by N between the cokernels of R and M0,
    in Smith quotient coordinates.  Returns (block, smith data of R,
    rank of M0)."""
    if n.cols != r.rows:
        raise DimensionMismatch(
            f"N has {n.cols} columns but R has {r.rows} rows"
        )
    if m0.rows != n.rows:
        raise DimensionMismatch(
            f"M0 has {m0.rows} rows but N has {n.rows} rows"
        )
    if sigma.rows != m0.cols or sigma.cols != r.cols:
        raise DimensionMismatch(
            f"Sigma must be {m0.cols} x {r.cols}, got {sigma.rows} x {sigma.cols}"
        )
    if (n @ r) != (m0 @ sigma):
        raise CommutationFailure("N * R != M0 * Sigma: the square does not commute")
    top = _smith_core(r)
    bottom = _smith_core(m0)
    w = bottom.u_inv @ n @ top.u
    block = w.submatrix(bottom.rank, top.rank)
    return block, top, bottom.rank


def induced_kernel(
    r: IntMatrix, n: IntMatrix, m0: IntMatrix, sigma: IntMatrix
) -> DivisibleGroup:
    """Kernel of the map coker(R (x) Q/Z) -> coker(M0 (x) Q/Z) induced by N.

    The square
        (Q/Z)^k  --R-->  (Q/Z)^C
          |Sigma            |N
        (Q/Z)^l  --M0--> (Q/Z)^c
    must commute (N R = M0 Sigma); this guarantees N descends to the
    cokernels.  In Smith coordinates of R and M0 the descended map is the
    lower-right block of U_M0^-1 * N * U_R, and its kernel is computed by
    qz_kernel.
    """
    block, _, _ = _induced_block(r, n, m0, sigma)
    return qz_kernel(block)


def induced_kernel_with_witnesses(
    r: IntMatrix, n: IntMatrix, m0: IntMatrix, sigma: IntMatrix
) -> tuple[DivisibleGroup, list[tuple[Fraction, ...]]]:
    """Same as induced_kernel, plus one representative in (Q/Z)^C for each
    finite invariant factor of the kernel.

    The i-th witness generates the Z/d_i summand; entries are reduced mod
    1, so denominators divide d_i (hence the exponent of the group).
    """
    block, top, _ = _induced_block(r, n, m0, sigma)
    core = _smith_core(block)
    group = DivisibleGroup(block.cols - core.rank, tuple(
        d for d in (core.d.at(i, i) for i in range(min(core.d.rows, core.d.cols)))
        if d > 1
    ))
    witnesses: list[tuple[Fraction, ...]] = []
    for i in range(core.rank):
        d_i = core.d.at(i, i)
        if d_i <= 1:
            continue
        # quotient-coordinate generator: column i of V^-1 divided by d_i
        y = [Fraction(core.v_inv.at(m, i), d_i) for m in range(block.cols)]
        # embed into Smith coordinates of R (zeros on the image part),
        # then return to the standard basis of the ambient (Q/Z)^C
        padded = [Fraction(0)] * top.rank + y
        ambient = top.u.apply_to_rational(padded)
        witnesses.append(tuple(x % 1 for x in ambient))
    return group, witnesses
