"""Exact scalar arithmetic over GF(p) and height-bounded rationals, sparse
finite-support vectors, and the kernel/complement/projection calculus used by
the subspace-maximality checks.

Scalars are plain ints (residues) over GF(p) and ``fractions.Fraction`` over
the rationals; all arithmetic is exact.  Everything here is an immutable
value and every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import Budget
from .fin import FinSet

__all__ = [
    "FieldSpec",
    "Scalar",
    "Vector",
    "SubspaceBasis",
    "LinearMap",
    "gf",
    "rationals",
    "vector",
    "basis_vector",
    "support",
    "add",
    "scale",
    "combine",
    "vector_key",
    "span_of",
    "subspace_intersection",
    "enumerate_subspace",
    "kernel_of",
    "rank_of",
    "complement_of",
    "is_injective_on",
    "projection_along",
]

Scalar = Union[int, Fraction]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p) for a prime p, or the rationals with an enumeration height bound.

    ``height`` bounds numerators and denominators when exhaustive searches
    enumerate rational scalars; it plays no role in exact arithmetic.
    """

    prime: int | None = None
    height: int = 1

    def __post_init__(self):
        if self.prime is not None and not _is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.prime is None and self.height < 1:
            raise ValueError("height bound must be at least 1")

    @property
    def is_rationals(self) -> bool:
        return self.prime is None

    @property
    def name(self) -> str:
        return f"q{self.height}" if self.is_rationals else f"gf{self.prime}"

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.is_rationals else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.is_rationals else 1

    def normalize(self, a) -> Scalar:
        return Fraction(a) if self.is_rationals else int(a) % self.prime

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.is_rationals else (a + b) % self.prime

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.is_rationals else (a - b) % self.prime

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.is_rationals else (a * b) % self.prime

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.is_rationals else (-a) % self.prime

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("no inverse of zero")
        return 1 / Fraction(a) if self.is_rationals else pow(a, self.prime - 2, self.prime)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def scalar_key(self, a: Scalar):
        """Canonical order: residue value, or (denominator, numerator) for Q."""
        if self.is_rationals:
            return (a.denominator, a.numerator)
        return a

    def all_scalars(self) -> list[Scalar]:
        """All scalars eligible for exhaustive enumeration, in canonical order.

        For the rationals this is the height-bounded window: fractions a/b in
        lowest terms with |a| <= height and 1 <= b <= height.
        """
        if not self.is_rationals:
            return list(range(self.prime))
        out = []
        h = self.height
        for den in range(1, h + 1):
            for num in range(-h, h + 1):
                f = Fraction(num, den)
                if f.denominator == den:
                    out.append(f)
        return out

    def nonzero_scalars(self) -> list[Scalar]:
        return [a for a in self.all_scalars() if a != 0]

    def scalar_count(self) -> int:
        """Size of the enumeration window (p, or the height-bounded count)."""
        if not self.is_rationals:
            return self.prime
        return len(self.all_scalars())

    def format_scalar(self, a: Scalar) -> str:
        if self.is_rationals and a.denominator != 1:
            return f"{a.numerator}/{a.denominator}"
        return str(int(a) if not self.is_rationals else a.numerator)

    def parse_scalar(self, text: str) -> Scalar:
        if "/" in text:
            if not self.is_rationals:
                raise ValueError(f"fraction scalar {text!r} in a prime field")
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return self.normalize(int(text))


def gf(p: int) -> FieldSpec:
    return FieldSpec(prime=p)


def rationals(height: int = 2) -> FieldSpec:
    return FieldSpec(prime=None, height=height)


@dataclass(frozen=True)
class Vector:
    """A nonzero finite-support element of the direct sum, as sorted
    (index, nonzero coefficient) pairs.  The zero vector is unrepresentable;
    operations that can cancel return None instead."""

    field: FieldSpec
    coeffs: tuple[tuple[int, Scalar], ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("the zero vector is not a Vector")
        indices = [i for i, _ in self.coeffs]
        if any(i < 0 for i in indices):
            raise ValueError("indices must be naturals")
        if any(a >= b for a, b in zip(indices, indices[1:])):
            raise ValueError("indices must be strictly increasing")
        for _, c in self.coeffs:
            if c != self.field.normalize(c):
                raise ValueError(f"coefficient {c!r} is not in canonical form")
            if c == 0:
                raise ValueError("zero coefficients must be omitted")

    @property
    def support(self) -> FinSet:
        return FinSet(tuple(i for i, _ in self.coeffs))

    @property
    def min_index(self) -> int:
        return self.coeffs[0][0]

    @property
    def max_index(self) -> int:
        return self.coeffs[-1][0]

    def coeff(self, i: int) -> Scalar:
        for j, c in self.coeffs:
            if j == i:
                return c
            if j > i:
                break
        return self.field.zero

    def as_dict(self) -> dict[int, Scalar]:
        return dict(self.coeffs)


def vector(f: FieldSpec, entries: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]]) -> Vector:
    """Build a Vector from index/coefficient data; raises on the zero vector."""
    items = entries.items() if isinstance(entries, Mapping) else entries
    acc: dict[int, Scalar] = {}
    for i, c in items:
        acc[i] = f.add(acc.get(i, f.zero), f.normalize(c))
    pairs = tuple((i, c) for i, c in sorted(acc.items()) if c != 0)
    return Vector(f, pairs)


def basis_vector(f: FieldSpec, n: int) -> Vector:
    return Vector(f, ((n, f.one),))


def support(v: Vector) -> FinSet:
    """The set of indices carrying a nonzero coefficient."""
    return v.support


def add(u: Vector, v: Vector) -> Optional[Vector]:
    """u + v, or None if the sum cancels to zero."""
    return combine(u.field, ((u.field.one, u), (u.field.one, v)))


def scale(c: Scalar, v: Vector) -> Optional[Vector]:
    """c * v, or None when c = 0."""
    f = v.field
    c = f.normalize(c)
    if c == 0:
        return None
    return Vector(f, tuple((i, f.mul(c, a)) for i, a in v.coeffs))


def combine(f: FieldSpec, terms: Iterable[tuple[Scalar, Vector]]) -> Optional[Vector]:
    """Exact linear combination; None when everything cancels."""
    acc: dict[int, Scalar] = {}
    for c, v in terms:
        if v.field != f:
            raise ValueError(f"field mismatch: {v.field.name} vs {f.name}")
        c = f.normalize(c)
        if c == 0:
            continue
        for i, a in v.coeffs:
            acc[i] = f.add(acc.get(i, f.zero), f.mul(c, a))
    pairs = tuple((i, c) for i, c in sorted(acc.items()) if c != 0)
    return Vector(f, pairs) if pairs else None


def vector_key(v: Vector):
    """Canonical total order: lexicographic on (index, scalar key) pairs."""
    f = v.field
    return tuple((i, f.scalar_key(c)) for i, c in v.coeffs)


# ---------------------------------------------------------------------------
# Dense elimination helpers (private).  Rows are lists of scalars.
# ---------------------------------------------------------------------------


def _to_dense(v: Vector, n: int) -> list[Scalar]:
    row = [v.field.zero] * n
    for i, c in v.coeffs:
        if i >= n:
            raise ValueError(f"support index {i} outside truncation {n}")
        row[i] = c
    return row


def _from_dense(f: FieldSpec, row: Sequence[Scalar]) -> Optional[Vector]:
    pairs = tuple((i, c) for i, c in enumerate(row) if c != 0)
    return Vector(f, pairs) if pairs else None


def _rref(f: FieldSpec, rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form; returns surviving rows and their pivot columns."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = f.inv(rows[r][col])
        rows[r] = [f.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _nullspace(f: FieldSpec, rows: list[list[Scalar]], ncols: int) -> list[list[Scalar]]:
    """Basis of {x : rows @ x = 0}, free variables set one at a time."""
    echelon, pivots = _rref(f, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [f.zero] * ncols
        x[fc] = f.one
        for row, pc in zip(echelon, pivots):
            x[pc] = f.neg(row[fc])
        basis.append(x)
    return basis


@dataclass(frozen=True)
class SubspaceBasis:
    """Linearly independent vectors within a truncation, with the reduced
    echelon representative of their span stored alongside."""

    field: FieldSpec
    basis: tuple[Vector, ...]
    echelon: tuple[Vector, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        for v in self.basis:
            if v.field != self.field:
                raise ValueError("basis vector over the wrong field")
        n = self.truncation
        rows = [_to_dense(v, n) for v in self.basis]
        reduced, _ = _rref(self.field, rows)
        if len(reduced) != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")
        ech = tuple(_from_dense(self.field, r) for r in reduced)
        object.__setattr__(self, "echelon", ech)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def truncation(self) -> int:
        return 1 + max((v.max_index for v in self.basis), default=-1)

    def contains(self, v: Vector) -> bool:
        """Span membership, decided by reduction against the echelon rows."""
        if v.field != self.field:
            raise ValueError("field mismatch")
        f = self.field
        residue = v.as_dict()
        for row in self.echelon:
            lead = row.min_index
            c = residue.get(lead, f.zero)
            if c != 0:
                for i, a in row.coeffs:
                    residue[i] = f.sub(residue.get(i, f.zero), f.mul(c, a))
        return all(c == 0 for c in residue.values())

    def same_subspace(self, other: "SubspaceBasis") -> bool:
        return self.field == other.field and self.echelon == other.echelon


def span_of(f: FieldSpec, vectors: Iterable[Vector]) -> SubspaceBasis:
    """SubspaceBasis spanned by arbitrary vectors (dependents dropped)."""
    vs = list(vectors)
    n = 1 + max((v.max_index for v in vs), default=-1)
    reduced, _ = _rref(f, [_to_dense(v, n) for v in vs])
    return SubspaceBasis(f, tuple(_from_dense(f, r) for r in reduced))


def subspace_intersection(A: SubspaceBasis, B: SubspaceBasis, n: int) -> SubspaceBasis:
    """The subspace A ∩ B within truncation n, by the nullspace construction."""
    if A.field != B.field:
        raise ValueError("field mismatch")
    f = A.field
    if A.dim == 0 or B.dim == 0:
        return SubspaceBasis(f, ())
    # columns: coefficients on A's basis then B's basis; rows: ambient coords
    cols = [_to_dense(v, n) for v in A.basis] + [_to_dense(v, n) for v in B.basis]
    rows = [[cols[j][i] if j < A.dim else f.neg(cols[j][i]) for j in range(len(cols))] for i in range(n)]
    vectors = []
    for sol in _nullspace(f, rows, len(cols)):
        v = combine(f, [(sol[j], A.basis[j]) for j in range(A.dim)])
        if v is not None:
            vectors.append(v)
    return span_of(f, vectors)


def enumerate_subspace(S: SubspaceBasis, budget: int | None = None) -> Iterator[Vector]:
    """All nonzero vectors of S (height-bounded window over the rationals)."""
    f = S.field
    guard = Budget(budget)
    guard.require(f.scalar_count() ** S.dim)
    scalars = f.all_scalars()

    def rec(i: int, partial: list[tuple[Scalar, Vector]]) -> Iterator[Vector]:
        if i == S.dim:
            v = combine(f, partial)
            if v is not None:
                yield v
            return
        for c in scalars:
            yield from rec(i + 1, partial + [(c, S.basis[i])])

    yield from rec(0, [])


@dataclass(frozen=True)
class LinearMap:
    """A linear map given by images of the first ``domain_dim`` basis vectors;
    None images mean zero."""

    field: FieldSpec
    domain_dim: int
    codomain_dim: int
    images: tuple[Optional[Vector], ...]

    def __post_init__(self):
        if len(self.images) != self.domain_dim:
            raise ValueError("need one image per domain basis vector")
        for img in self.images:
            if img is not None and img.max_index >= self.codomain_dim:
                raise ValueError("image support outside the codomain truncation")

    def apply(self, v: Vector) -> Optional[Vector]:
        if v.max_index >= self.domain_dim:
            raise ValueError("vector outside the domain truncation")
        terms = [(c, self.images[i]) for i, c in v.coeffs if self.images[i] is not None]
        return combine(self.field, terms)


def kernel_of(T: LinearMap) -> SubspaceBasis:
    """Canonical (reduced echelon) basis of the kernel within the truncation."""
    f = T.field
    rows = [
        [T.images[j].coeff(i) if T.images[j] is not None else f.zero for j in range(T.domain_dim)]
        for i in range(T.codomain_dim)
    ]
    kernel_rows = _nullspace(f, rows, T.domain_dim)
    return span_of(f, [v for r in kernel_rows if (v := _from_dense(f, r)) is not None])


def rank_of(T: LinearMap) -> int:
    images = [img for img in T.images if img is not None]
    if not images:
        return 0
    return span_of(T.field, images).dim


def complement_of(V: SubspaceBasis, n: int) -> SubspaceBasis:
    """Greedy direct complement: extend V by the lowest-index standard basis
    vectors not already in the running span."""
    f = V.field
    current = list(V.basis)
    added: list[Vector] = []
    for i in range(n):
        e = basis_vector(f, i)
        if not span_of(f, current).contains(e):
            current.append(e)
            added.append(e)
    return SubspaceBasis(f, tuple(added))


def is_injective_on(T: LinearMap, X: SubspaceBasis) -> bool:
    """True iff the images of X's basis are linearly independent."""
    images = []
    for v in X.basis:
        img = T.apply(v)
        if img is None:
            return False
        images.append(img)
    return span_of(T.field, images).dim == len(images)


def projection_along(Y: SubspaceBasis, Yc: SubspaceBasis, n: int) -> LinearMap:
    """The map sending y + y' to y' for y in Y, y' in Yc; kernel is exactly Y.

    Raises ValueError naming the first standard basis vector that fails to
    decompose when Y + Yc does not span the truncation.
    """
    if Y.field != Yc.field:
        raise ValueError("field mismatch")
    f = Y.field
    cols = [_to_dense(v, n) for v in Y.basis] + [_to_dense(v, n) for v in Yc.basis]
    images: list[Optional[Vector]] = []
    for i in range(n):
        target = [f.zero] * n
        target[i] = f.one
        sol = _solve_columns(f, cols, target)
        if sol is None:
            raise ValueError(f"decomposition failure: e{i} is not in Y + Yc")
        terms = [(sol[Y.dim + j], Yc.basis[j]) for j in range(Yc.dim)]
        images.append(combine(f, terms))
    return LinearMap(f, n, n, tuple(images))


def _solve_columns(
    f: FieldSpec, cols: list[list[Scalar]], target: list[Scalar]
) -> Optional[list[Scalar]]:
    """Solve sum_j x_j * cols[j] = target; None when inconsistent."""
    n = len(target)
    m = len(cols)
    aug = [[cols[j][i] for j in range(m)] + [target[i]] for i in range(n)]
    echelon, pivots = _rref(f, aug)
    x = [f.zero] * m
    for row, pc in zip(echelon, pivots):
        if pc == m:
            return None
        x[pc] = row[m]
    return x
