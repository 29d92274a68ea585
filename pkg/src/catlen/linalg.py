"""Exact linear algebra over the rationals or a prime field.

Matrices are immutable once built; every operation returns a fresh value, so
they can be shared freely across threads.  The default field is arbitrary
precision rationals; a prime field GF(p) (p an odd prime, default 32003) is an
opt-in accelerator with identical interfaces.

Rank over the rationals runs through fraction-free (Bareiss) elimination on a
denominator-cleared integer copy, which keeps intermediate entries small.
Kernel bases come out of a reduced row echelon form and are normalized so the
free coordinates carry an identity block (reduced column echelon form), which
makes serialized output reproducible.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InternalInconsistencyError, ValidationError


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Rationals:
    """The field of arbitrary-precision rationals."""

    name = "QQ"

    def of(self, x):
        return Fraction(x)

    zero = Fraction(0)
    one = Fraction(1)

    def inv(self, x):
        return 1 / Fraction(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    """GF(p) for an odd prime p.  Elements are ints in [0, p)."""

    def __init__(self, p):
        if not _is_prime(p) or p <= 2:
            raise ValidationError(f"prime-field modulus must be an odd prime, got {p}")
        self.p = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1

    def of(self, x):
        if isinstance(x, Fraction):
            num = x.numerator % self.p
            den = x.denominator % self.p
            if den == 0:
                raise ValidationError(f"denominator of {x} vanishes mod {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return x % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in prime field")
        return pow(x, -1, self.p)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = Rationals()
DEFAULT_PRIME = 32003


class ExactMatrix:
    """Dense matrix over an exact field, immutable after construction."""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, entries, field=QQ, rows=None, cols=None):
        if rows is None:
            rows = len(entries)
            cols = len(entries[0]) if rows else 0
        ent = []
        for r in range(rows):
            row = entries[r] if r < len(entries) else ()
            if rows and len(row) != cols:
                raise ValidationError("ragged matrix rows")
            ent.append(tuple(field.of(x) for x in row))
        self.rows = rows
        self.cols = cols
        self.entries = tuple(ent)
        self.field = field

    @classmethod
    def zero(cls, rows, cols, field=QQ):
        z = field.zero
        return cls([[z] * cols for _ in range(rows)], field, rows, cols)

    @classmethod
    def identity(cls, n, field=QQ):
        z, o = field.zero, field.one
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], field, n, n)

    @classmethod
    def from_columns(cls, columns, rows, field=QQ):
        cols = len(columns)
        return cls([[columns[j][i] for j in range(cols)] for i in range(rows)], field, rows, cols)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field})"

    def is_zero(self):
        z = self.field.zero
        return all(x == z for row in self.entries for x in row)

    def transpose(self):
        return ExactMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.field,
            self.cols,
            self.rows,
        )

    def __add__(self, other):
        assert self.rows == other.rows and self.cols == other.cols
        f = self.field
        return ExactMatrix(
            [
                [f.of(self.entries[i][j] + other.entries[i][j]) for j in range(self.cols)]
                for i in range(self.rows)
            ],
            f,
            self.rows,
            self.cols,
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        f = self.field
        c = f.of(c)
        return ExactMatrix(
            [[f.of(c * x) for x in row] for row in self.entries], f, self.rows, self.cols
        )

    def __matmul__(self, other):
        assert self.cols == other.rows, "shape mismatch in matrix product"
        f = self.field
        out = []
        for i in range(self.rows):
            ri = self.entries[i]
            out.append(
                [
                    f.of(sum((ri[k] * other.entries[k][j] for k in range(self.cols)), f.zero))
                    for j in range(other.cols)
                ]
            )
        return ExactMatrix(out, f, self.rows, other.cols)

    def apply(self, vec):
        f = self.field
        assert len(vec) == self.cols
        return tuple(
            f.of(sum((self.entries[i][j] * vec[j] for j in range(self.cols)), f.zero))
            for i in range(self.rows)
        )

    def hstack(self, other):
        assert self.rows == other.rows
        return ExactMatrix(
            [list(self.entries[i]) + list(other.entries[i]) for i in range(self.rows)],
            self.field,
            self.rows,
            self.cols + other.cols,
        )

    def vstack(self, other):
        assert self.cols == other.cols
        return ExactMatrix(
            [list(r) for r in self.entries] + [list(r) for r in other.entries],
            self.field,
            self.rows + other.rows,
            self.cols,
        )

    def rank(self):
        if isinstance(self.field, Rationals):
            return _bareiss_rank(self._integerized_rows())
        return len(self.rref()[1])

    def _integerized_rows(self):
        # Clear denominators row by row; row scaling preserves rank.
        rows = []
        for row in self.entries:
            lcm = 1
            for x in row:
                d = x.denominator
                g = _gcd(lcm, d)
                lcm = lcm // g * d
            rows.append([int(x * lcm) for x in row])
        return rows

    def rref(self):
        """Reduced row echelon form; returns (matrix rows, pivot column list)."""
        f = self.field
        m = [list(row) for row in self.entries]
        pivots = []
        pr = 0
        for pc in range(self.cols):
            pivot_row = None
            for r in range(pr, self.rows):
                if m[r][pc] != f.zero:
                    pivot_row = r
                    break
            if pivot_row is None:
                continue
            m[pr], m[pivot_row] = m[pivot_row], m[pr]
            inv = f.inv(m[pr][pc])
            m[pr] = [f.of(x * inv) for x in m[pr]]
            for r in range(self.rows):
                if r != pr and m[r][pc] != f.zero:
                    c = m[r][pc]
                    m[r] = [f.of(a - c * b) for a, b in zip(m[r], m[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.rows:
                break
        return m, pivots

    def kernel_basis(self):
        """Basis of the right null space, free coordinates in identity position."""
        f = self.field
        m, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [f.zero] * self.cols
            v[fc] = f.one
            for r, pc in enumerate(pivots):
                v[pc] = f.of(-m[r][fc])
            basis.append(tuple(v))
        return basis

    def kernel_matrix(self):
        return ExactMatrix.from_columns(self.kernel_basis(), self.cols, self.field)

    def solve(self, rhs_matrix):
        """Solve self @ X = rhs for X; raises if inconsistent.

        Picks the solution with free variables set to zero (unique when self
        has full column rank, which covers every internal use).
        """
        f = self.field
        aug = self.hstack(rhs_matrix)
        m, pivots = aug.rref()
        for r in range(len(pivots), self.rows):
            if any(m[r][c] != f.zero for c in range(self.cols, aug.cols)):
                raise InternalInconsistencyError("inconsistent linear system")
        for pc in pivots:
            if pc >= self.cols:
                raise InternalInconsistencyError("inconsistent linear system")
        sol = [[f.zero] * rhs_matrix.cols for _ in range(self.cols)]
        for r, pc in enumerate(pivots):
            for j in range(rhs_matrix.cols):
                sol[pc][j] = m[r][self.cols + j]
        return ExactMatrix(sol, f, self.cols, rhs_matrix.cols)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _bareiss_rank(int_rows):
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in int_rows]
    if not m or not m[0]:
        return 0
    nr, nc = len(m), len(m[0])
    prev = 1
    pr = 0
    for pc in range(nc):
        piv = None
        for r in range(pr, nr):
            if m[r][pc] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[pr], m[piv] = m[piv], m[pr]
        for r in range(pr + 1, nr):
            for c in range(pc + 1, nc):
                m[r][c] = (m[pr][pc] * m[r][c] - m[r][pc] * m[pr][c]) // prev
            m[r][pc] = 0
        prev = m[pr][pc]
        pr += 1
        if pr == nr:
            break
    return pr


def rank(matrix):
    return matrix.rank()


def kernel_basis(matrix):
    return matrix.kernel_basis()


class CochainComplex:
    """Finite complex of finite-dimensional spaces with d_i: degree i -> i+1."""

    def __init__(self, terms, differentials, field=QQ, check=True):
        self.terms = {d: n for d, n in terms.items() if n}
        self.differentials = {}
        self.field = field
        for deg, mat in differentials.items():
            src = self.terms.get(deg, 0)
            tgt = self.terms.get(deg + 1, 0)
            if mat.rows != tgt or mat.cols != src:
                raise ValidationError(
                    f"differential at degree {deg} has shape {mat.rows}x{mat.cols}, "
                    f"expected {tgt}x{src}"
                )
            if src and tgt:
                self.differentials[deg] = mat
        if check:
            for deg, d0 in self.differentials.items():
                d1 = self.differentials.get(deg + 1)
                if d1 is not None and not (d1 @ d0).is_zero():
                    raise ValidationError(f"d∘d != 0 between degrees {deg} and {deg + 2}")

    def cohomology_dims(self):
        """dim H^i per degree; degrees with vanishing cohomology are omitted."""
        out = {}
        degs = set(self.terms)
        for i in sorted(degs):
            n = self.terms.get(i, 0)
            d_i = self.differentials.get(i)
            d_prev = self.differentials.get(i - 1)
            ker = n - (d_i.rank() if d_i is not None else 0)
            im = d_prev.rank() if d_prev is not None else 0
            h = ker - im
            if h < 0:
                raise InternalInconsistencyError("negative cohomology dimension")
            if h:
                out[i] = h
        return out

    def euler_characteristic(self):
        return sum((-1) ** i * n for i, n in self.terms.items())


def intertwiner_basis(arrows, dims_m, maps_m, dims_n, maps_n, field=QQ):
    """Basis of {f = (f_v) : f_t M_a = N_a f_s for every arrow a: s -> t}.

    Returns a list of tuples of ExactMatrix (one f_v per vertex index).  This
    is the Hom space between two representations of the same quiver, and
    equally between two modules over a quotient of its path algebra.
    """
    nverts = len(dims_m)
    offsets = []
    total = 0
    for v in range(nverts):
        offsets.append(total)
        total += dims_n[v] * dims_m[v]

    def unknown(v, i, j):
        # entry (i, j) of f_v, row-major
        return offsets[v] + i * dims_m[v] + j

    rows = []
    for a, (s, t) in enumerate(arrows):
        ma = maps_m[a]
        na = maps_n[a]
        # f_t @ M_a - N_a @ f_s = 0: one equation per (i, j), i < dims_n[t], j < dims_m[s]
        for i in range(dims_n[t]):
            for j in range(dims_m[s]):
                row = [field.zero] * total
                for k in range(dims_m[t]):
                    row[unknown(t, i, k)] += ma.entries[k][j]
                for k in range(dims_m[s]):
                    row[unknown(s, i, k)] -= na.entries[i][k]
                rows.append([field.of(x) for x in row])
    if not rows:
        sys = ExactMatrix.zero(0, total, field)
    else:
        sys = ExactMatrix(rows, field, len(rows), total)
    basis = []
    for vec in sys.kernel_basis():
        mats = []
        for v in range(nverts):
            ent = [
                [vec[unknown(v, i, j)] for j in range(dims_m[v])] for i in range(dims_n[v])
            ]
            mats.append(ExactMatrix(ent, field, dims_n[v], dims_m[v]))
        basis.append(tuple(mats))
    return basis
