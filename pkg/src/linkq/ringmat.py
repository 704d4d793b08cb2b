"""Dense matrices over an exact commutative coefficient ring (GF(p) scalars or
polynomials), with exact determinants, Pfaffians, the classical adjoint and
the Pfaffian adjoint, and the submatrix calculus the block identities need.

Entries are :class:`~linkq.primefield.Fp` or :class:`~linkq.poly.Poly`
(anything with ring operators, equality and truthiness works).  Row/column
deletion uses 1-based indices to match the usual minor notation.

Determinants: fraction-free Bareiss over field entries (any size), memoized
cofactor expansion over column subsets for polynomial entries (size <= 12).
Pfaffians: cofactor-style expansion along the sparsest column, with a minor
cache keyed by the bitmask of surviving indices; one cache is shared across
the entries of a single adjoint or Pf_l sweep.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .primefield import Fp, PrimeField
from .poly import Poly

_COFACTOR_DET_LIMIT = 12
_PFAFFIAN_CACHE_LIMIT = 24


class RingMatrix:
    """Rectangular matrix with dense row-major entries plus the ring's
    zero and one elements (needed by the expansion recursions)."""

    __slots__ = ("rows", "cols", "entries", "zero_elem", "one_elem")

    def __init__(self, rows: int, cols: int, entries: Sequence, zero_elem, one_elem):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        entries = list(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self.zero_elem = zero_elem
        self.one_elem = one_elem

    # -- constructors -------------------------------------------------------

    @classmethod
    def over_field(cls, field: PrimeField, grid: Sequence[Sequence]) -> "RingMatrix":
        rows = len(grid)
        cols = len(grid[0]) if rows else 0
        ents = []
        for row in grid:
            if len(row) != cols:
                raise ValueError("ragged rows")
            ents.extend(e if isinstance(e, Fp) else field(int(e)) for e in row)
        return cls(rows, cols, ents, field(0), field(1))

    @classmethod
    def over_polys(cls, field: PrimeField, grid: Sequence[Sequence], nvars: int = 3) -> "RingMatrix":
        rows = len(grid)
        cols = len(grid[0]) if rows else 0
        ents = []
        for row in grid:
            if len(row) != cols:
                raise ValueError("ragged rows")
            for e in row:
                if isinstance(e, Poly):
                    ents.append(e)
                else:
                    ents.append(Poly.constant(field, int(e), nvars))
        return cls(rows, cols, ents, Poly.zero(field, nvars), Poly.one(field, nvars))

    @classmethod
    def zeros(cls, rows: int, cols: int, like: "RingMatrix") -> "RingMatrix":
        return cls(rows, cols, [like.zero_elem] * (rows * cols), like.zero_elem, like.one_elem)

    @classmethod
    def identity(cls, n: int, like: "RingMatrix") -> "RingMatrix":
        m = cls.zeros(n, n, like)
        for i in range(n):
            m.entries[i * n + i] = like.one_elem
        return m

    def _same_ring(self, rows: int, cols: int, entries) -> "RingMatrix":
        return RingMatrix(rows, cols, entries, self.zero_elem, self.one_elem)

    # -- access ---------------------------------------------------------------

    def __getitem__(self, idx: tuple[int, int]):
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def grid(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(a == b for a, b in zip(self.entries, other.entries))
        )

    def __repr__(self) -> str:
        return f"RingMatrix({self.rows}x{self.cols})"

    # -- arithmetic -------------------------------------------------------------

    def transpose(self) -> "RingMatrix":
        ents = [self[j, i] for i in range(self.cols) for j in range(self.rows)]
        return self._same_ring(self.cols, self.rows, ents)

    def __neg__(self) -> "RingMatrix":
        return self._same_ring(self.rows, self.cols, [-e for e in self.entries])

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return self._same_ring(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        return self + (-other)

    def __mul__(self, other: "RingMatrix") -> "RingMatrix":
        if not isinstance(other, RingMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} times {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            arow = self.row(i)
            for j in range(other.cols):
                acc = self.zero_elem
                for k in range(self.cols):
                    a = arow[k]
                    if a:
                        b = other[k, j]
                        if b:
                            acc = acc + a * b
                out.append(acc)
        return self._same_ring(self.rows, other.cols, out)

    def scale(self, c) -> "RingMatrix":
        return self._same_ring(self.rows, self.cols, [e * c if e else e for e in self.entries])

    # -- structure ----------------------------------------------------------------

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_skew_symmetric(self) -> bool:
        """Square, zero diagonal (checked explicitly), and A^T = -A."""
        if not self.is_square():
            return False
        for i in range(self.rows):
            if self[i, i]:
                return False
            for j in range(i + 1, self.cols):
                if self[i, j] != -self[j, i]:
                    return False
        return True

    def submatrix(self, drop_rows: Iterable[int] = (), drop_cols: Iterable[int] = ()) -> "RingMatrix":
        """Delete the given 1-based rows and columns, preserving order.

        Indices must be in range, distinct, and strictly increasing.
        """
        dr = _check_index_set(drop_rows, self.rows, "row")
        dc = _check_index_set(drop_cols, self.cols, "column")
        keep_r = [i for i in range(self.rows) if (i + 1) not in dr]
        keep_c = [j for j in range(self.cols) if (j + 1) not in dc]
        ents = [self[i, j] for i in keep_r for j in keep_c]
        return self._same_ring(len(keep_r), len(keep_c), ents)


def _check_index_set(indices: Iterable[int], bound: int, what: str) -> set[int]:
    seq = list(indices)
    if any(not isinstance(i, int) for i in seq):
        raise ValueError(f"{what} indices must be integers")
    if seq != sorted(set(seq)):
        raise ValueError(f"{what} indices must be strictly increasing and distinct: {seq}")
    for i in seq:
        if i < 1 or i > bound:
            raise ValueError(f"{what} index {i} out of range 1..{bound}")
    return set(seq)


def block_matrix(blocks: Sequence[Sequence[RingMatrix]]) -> RingMatrix:
    """Assemble a matrix from a 2-D grid of conformable blocks."""
    first = blocks[0][0]
    row_heights = [row[0].rows for row in blocks]
    col_widths = [b.cols for b in blocks[0]]
    for row in blocks:
        for b, w in zip(row, col_widths):
            if b.cols != w or b.rows != row[0].rows:
                raise ValueError("non-conformable blocks")
    grid = []
    for brow, h in zip(blocks, row_heights):
        for i in range(h):
            line: list = []
            for b in brow:
                line.extend(b.row(i))
            grid.append(line)
    total_r = sum(row_heights)
    total_c = sum(col_widths)
    ents = [e for line in grid for e in line]
    return RingMatrix(total_r, total_c, ents, first.zero_elem, first.one_elem)


# -- determinants ------------------------------------------------------------------


def det(a: RingMatrix):
    """Exact determinant; 0x0 gives the ring's one.

    Field entries use fraction-free Bareiss (any size); polynomial entries use
    memoized cofactor expansion over column subsets (size <= 12).
    """
    if not a.is_square():
        raise ValueError(f"determinant of non-square {a.rows}x{a.cols} matrix")
    n = a.rows
    if n == 0:
        return a.one_elem
    if all(isinstance(e, Fp) for e in a.entries):
        return _det_bareiss(a)
    if n > _COFACTOR_DET_LIMIT:
        raise ValueError(f"cofactor determinant limited to size {_COFACTOR_DET_LIMIT}, got {n}")
    return _det_cofactor(a)


def _det_bareiss(a: RingMatrix):
    n = a.rows
    m = [list(a.row(i)) for i in range(n)]
    sign = 1
    prev = a.one_elem
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return a.zero_elem
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = a.zero_elem
        prev = m[k][k]
    value = m[n - 1][n - 1]
    return value if sign == 1 else -value


def _det_cofactor(a: RingMatrix):
    n = a.rows
    memo: dict[int, object] = {}
    full = (1 << n) - 1

    def rec(colmask: int):
        if colmask == 0:
            return a.one_elem
        got = memo.get(colmask)
        if got is not None:
            return got
        r = n - colmask.bit_count()
        acc = a.zero_elem
        sign = 1
        mask = colmask
        while mask:
            low = mask & -mask
            j = low.bit_length() - 1
            e = a[r, j]
            if e:
                sub = rec(colmask & ~low)
                term = e * sub
                acc = acc + term if sign == 1 else acc - term
            sign = -sign
            mask ^= low
        memo[colmask] = acc
        return acc

    return rec(full)


def is_constant_matrix(a: RingMatrix) -> bool:
    return all(isinstance(e, Fp) for e in a.entries)


# -- Pfaffians -----------------------------------------------------------------------


class PfaffianCache:
    """Minor cache for Pfaffians of one skew-symmetric matrix.

    Keys are bitmasks of surviving 0-based indices; expansion always picks the
    active column with the fewest active nonzero entries (ties to the lowest
    index), which keeps the bordered tridiagonal matrices of this toolkit
    narrow.  Bounded to matrices of size <= 24.
    """

    def __init__(self, a: RingMatrix):
        if not a.is_skew_symmetric():
            raise ValueError("Pfaffian requires a skew-symmetric matrix (zero diagonal)")
        if a.rows > _PFAFFIAN_CACHE_LIMIT:
            raise ValueError(f"Pfaffian expansion limited to size {_PFAFFIAN_CACHE_LIMIT}, got {a.rows}")
        self.a = a
        n = a.rows
        self.n = n
        self.nzmask = []
        for j in range(n):
            mask = 0
            for i in range(n):
                if a[i, j]:
                    mask |= 1 << i
            self.nzmask.append(mask)
        self.memo: dict[int, object] = {}

    def pf(self, active: int):
        a = self.a
        if active == 0:
            return a.one_elem
        if active.bit_count() % 2 == 1:
            return a.zero_elem
        got = self.memo.get(active)
        if got is not None:
            return got

        # sparsest active column
        best_j = -1
        best_count = None
        mask = active
        while mask:
            low = mask & -mask
            j = low.bit_length() - 1
            count = (self.nzmask[j] & active).bit_count()
            if best_count is None or count < best_count:
                best_j, best_count = j, count
                if count <= 1:
                    break
            mask ^= low
        if best_count == 0:
            self.memo[active] = a.zero_elem
            return a.zero_elem

        j = best_j
        pos_j = (active & ((1 << j) - 1)).bit_count() + 1
        acc = a.zero_elem
        rows = self.nzmask[j] & active
        while rows:
            low = rows & -rows
            i = low.bit_length() - 1
            rows ^= low
            if i == j:
                continue
            pos_i = (active & ((1 << i) - 1)).bit_count() + 1
            heaviside = 1 if pos_j >= pos_i else 0
            sign = -1 if (pos_i + pos_j + heaviside) % 2 else 1
            sub = self.pf(active & ~low & ~(1 << j))
            if sub:
                term = a[i, j] * sub
                acc = acc + term if sign == 1 else acc - term
        self.memo[active] = acc
        return acc


def pfaffian(a: RingMatrix):
    """Pfaffian of a skew-symmetric matrix: 1 for 0x0, 0 for odd size."""
    if a.rows == 0:
        if not a.is_square():
            raise ValueError("Pfaffian requires a square matrix")
        return a.one_elem
    cache = PfaffianCache(a)
    return cache.pf((1 << a.rows) - 1)


def pfaffian_ell(a: RingMatrix, ell: int):
    """Signed Pfaffian (-1)^(l+1) Pf(A with row and column l removed),
    for odd-size skew-symmetric A and 1 <= l <= size."""
    if a.rows % 2 == 0:
        raise ValueError("Pf_l is defined for odd-size skew-symmetric matrices")
    if not 1 <= ell <= a.rows:
        raise ValueError(f"index {ell} out of range 1..{a.rows}")
    cache = PfaffianCache(a)
    value = cache.pf(((1 << a.rows) - 1) & ~(1 << (ell - 1)))
    return value if ell % 2 == 1 else -value


def maximal_order_pfaffians(a: RingMatrix) -> list:
    """All Pf_l for l = 1..size of an odd-size skew-symmetric matrix,
    sharing one minor cache across the sweep."""
    if a.rows % 2 == 0:
        raise ValueError("maximal-order Pfaffians need an odd-size matrix")
    cache = PfaffianCache(a)
    full = (1 << a.rows) - 1
    out = []
    for ell in range(1, a.rows + 1):
        value = cache.pf(full & ~(1 << (ell - 1)))
        out.append(value if ell % 2 == 1 else -value)
    return out


# -- adjoints ---------------------------------------------------------------------------


def classical_adjoint(a: RingMatrix) -> RingMatrix:
    """Adjugate: entry (i,j) is (-1)^(i+j) det of A with row j, column i removed,
    so that A * adj(A) = adj(A) * A = det(A) * I."""
    if not a.is_square():
        raise ValueError("classical adjoint of a non-square matrix")
    n = a.rows
    ents = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            minor = det(a.submatrix(drop_rows=(j,), drop_cols=(i,)))
            ents.append(minor if (i + j) % 2 == 0 else -minor)
    return RingMatrix(n, n, ents, a.zero_elem, a.one_elem)


def pfaffian_adjoint(a: RingMatrix) -> RingMatrix:
    """Skew analog of the adjugate: entry (i,j) is
    (-1)^(i+j+H(i-j)) Pf(A with rows/columns {i,j} removed), so that
    A * A_adj = A_adj * A = Pf(A) * I.  Requires even size."""
    if a.rows % 2 == 1:
        raise ValueError("Pfaffian adjoint requires an even-size matrix")
    cache = PfaffianCache(a)
    n = a.rows
    full = (1 << n) - 1
    ents = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                ents.append(a.zero_elem)
                continue
            value = cache.pf(full & ~(1 << (i - 1)) & ~(1 << (j - 1)))
            heaviside = 1 if i >= j else 0
            ents.append(value if (i + j + heaviside) % 2 == 0 else -value)
    return RingMatrix(n, n, ents, a.zero_elem, a.one_elem)


def last_three_pfaffian_identity(varphi: RingMatrix, psi: RingMatrix, Phi: RingMatrix) -> bool:
    """For the bordered skew matrix [[varphi, psi], [-psi^T, Phi]] with
    varphi m x m skew (m even), psi m x 3, Phi 3 x 3 skew: checks
    Pf_{m+l} of the bordered matrix equals
    Pf_l(psi^T varphi_adj psi + Pf(varphi) Phi) for l = 1, 2, 3."""
    m = varphi.rows
    if m % 2 or not varphi.is_skew_symmetric():
        raise ValueError("varphi must be skew-symmetric of even size")
    if psi.rows != m or psi.cols != 3:
        raise ValueError(f"psi must be {m}x3")
    if Phi.rows != 3 or Phi.cols != 3 or not Phi.is_skew_symmetric():
        raise ValueError("Phi must be 3x3 skew-symmetric")
    bordered = block_matrix([[varphi, psi], [-psi.transpose(), Phi]])
    if not bordered.is_skew_symmetric():
        raise ValueError("assembled bordered matrix is not skew-symmetric")
    cache = PfaffianCache(bordered)
    full = (1 << (m + 3)) - 1

    inner = psi.transpose() * pfaffian_adjoint(varphi) * psi + Phi.scale(pfaffian(varphi))
    for ell in range(1, 4):
        lhs = cache.pf(full & ~(1 << (m + ell - 1)))
        if (m + ell) % 2 == 0:
            lhs = -lhs
        rhs = pfaffian_ell(inner, ell)
        if lhs != rhs:
            return False
    return True
