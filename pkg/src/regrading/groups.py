"""Finitely generated abelian grading groups and their morphisms.

Groups are kept in invariant-factor form Z^rank x Z/m_1 x ... x Z/m_s with
m_1 | m_2 | ... | m_s.  All structural questions (kernels, fibers,
solvability) reduce to Smith normal form over the integers, computed with
exact big-integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple


IntMatrix = List[List[int]]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(m: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form of an integer matrix.

    Returns (U, D, V) with U @ m @ V == D, where U and V are unimodular and
    D is diagonal with non-negative entries d_1 | d_2 | ...

    >>> u, d, v = smith_normal_form([[2, 4], [6, 8]])
    >>> [d[0][0], d[1][1]]
    [2, 4]
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = [[int(x) for x in row] for row in m]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    def clear_cross(t):
        # euclidean clearing of row and column t; every remainder swap
        # strictly shrinks |d[t][t]|, so this terminates
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    add_row(t, i, -q)
                    if d[i][t] != 0:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, cols):
                if d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    add_col(t, j, -q)
                    if d[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True

    t = 0
    while t < min(rows, cols):
        # locate the first entry of minimal nonzero absolute value
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                a = abs(d[i][j])
                if a != 0 and (best is None or a < best):
                    best = a
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)

        while True:
            clear_cross(t)
            # enforce divisibility of the remaining block by the pivot;
            # folding an offending row into row t forces the next clearing
            # pass to swap a strictly smaller remainder into the pivot
            offender = None
            for i in range(t + 1, rows):
                if any(d[i][j] % d[t][t] != 0 for j in range(t + 1, cols)):
                    offender = i
                    break
            if offender is None:
                break
            add_row(offender, t, 1)

        if d[t][t] < 0:
            negate_row(t)
        t += 1

    return u, d, v


def _int_matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    rows, inner = len(a), (len(a[0]) if a else 0)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(rows)]


def _int_inverse(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    from .linalg import Matrix, QQ

    n = len(m)
    inv = Matrix.from_rows(QQ, m).inverse()
    if inv is None:
        raise ValueError("matrix is singular")
    out = []
    for row in inv.entries:
        int_row = []
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            int_row.append(int(x))
        out.append(int_row)
    return out


def _int_solve_matrix(m: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]]) -> Optional[IntMatrix]:
    """Integer solution X of m @ X = rhs, or None if no integral solution."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    u, d, v = smith_normal_form(m)
    ub = _int_matmul(u, rhs)
    k = len(rhs[0]) if rhs else 0
    z = [[0] * k for _ in range(cols)]
    for i in range(rows):
        di = d[i][i] if i < min(rows, cols) else 0
        for j in range(k):
            b = ub[i][j]
            if di == 0:
                if b != 0:
                    return None
            else:
                if b % di != 0:
                    return None
                if i < cols:
                    z[i][j] = b // di
    return _int_matmul(v, z)


def _int_kernel_basis(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Columns generate the integer kernel lattice of m (n x t, possibly t=0)."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    u, d, v = smith_normal_form(m)
    zero_cols = [j for j in range(cols) if j >= rows or d[j][j] == 0]
    return [[v[i][j] for j in zero_cols] for i in range(cols)]


def _lattice_column_basis(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Basis (as columns) of the lattice spanned by the columns of m."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    u, d, v = smith_normal_form(m)
    uinv = _int_inverse(u)
    basis_cols = []
    for j in range(min(rows, cols)):
        if d[j][j] != 0:
            basis_cols.append([uinv[i][j] * d[j][j] for i in range(rows)])
    return [[c[i] for c in basis_cols] for i in range(rows)]


# ---------------------------------------------------------------------------
# groups, elements, morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^rank x Z/m_1 x ... x Z/m_s with each m_i >= 2 and m_1 | m_2 | ... | m_s."""

    rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        for m in self.torsion:
            if m < 2:
                raise ValueError("torsion orders must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"torsion orders must form a divisibility chain, got {self.torsion}")

    @classmethod
    def canonical(cls, rank: int, torsion: Iterable[int]) -> "FgAbelianGroup":
        """Canonical form of Z^rank x prod Z/t_i for arbitrary orders t_i."""
        torsion = [int(t) for t in torsion]
        if any(t == 0 for t in torsion):
            rank += sum(1 for t in torsion if t == 0)
            torsion = [t for t in torsion if t != 0]
        if not torsion:
            return cls(rank, ())
        n = len(torsion)
        diag = [[torsion[i] if i == j else 0 for j in range(n)] for i in range(n)]
        _, d, _ = smith_normal_form(diag)
        factors = [d[i][i] for i in range(n)]
        return cls(rank + sum(1 for f in factors if f == 0),
                   tuple(f for f in factors if f >= 2))

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        out = 1
        for m in self.torsion:
            out *= m
        return out

    def relation_matrix(self) -> IntMatrix:
        """Columns are the defining relations m_i * e_{rank+i} of Z^ngens."""
        n, s = self.ngens, len(self.torsion)
        return [[self.torsion[j] if i == self.rank + j else 0 for j in range(s)] for i in range(n)]

    def element(self, coords: Sequence[int]) -> "GroupElement":
        coords = [int(c) for c in coords]
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        free = tuple(coords[: self.rank])
        tors = tuple(c % m for c, m in zip(coords[self.rank:], self.torsion))
        return GroupElement(self, free, tors)

    def zero(self) -> "GroupElement":
        return self.element([0] * self.ngens)

    def elements(self) -> List["GroupElement"]:
        """All elements, for finite groups only."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        out = [self.element(list(t)) for t in itertools.product(*(range(m) for m in self.torsion))]
        return sorted(out, key=lambda e: e.sort_key())

    def __repr__(self):
        parts = ["Z"] * self.rank + [f"Z/{m}" for m in self.torsion]
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    """Element with explicit coordinates; torsion entries stay reduced."""

    group: FgAbelianGroup
    free: Tuple[int, ...]
    tors: Tuple[int, ...]

    def coords(self) -> List[int]:
        return list(self.free) + list(self.tors)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if self.group != other.group:
            raise ValueError("elements of different groups")
        return self.group.element([a + b for a, b in zip(self.coords(), other.coords())])

    def __neg__(self) -> "GroupElement":
        return self.group.element([-a for a in self.coords()])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def times(self, n: int) -> "GroupElement":
        return self.group.element([n * a for a in self.coords()])

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.free) and all(a == 0 for a in self.tors)

    def sort_key(self):
        return (self.free, self.tors)

    def __repr__(self):
        return f"({', '.join(str(c) for c in self.coords())})"


@dataclass(frozen=True)
class GroupMorphism:
    """Morphism given by an integer matrix on generators (codomain coords x domain gens)."""

    domain: FgAbelianGroup
    codomain: FgAbelianGroup
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        mat = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", mat)
        if len(mat) != self.codomain.ngens or any(len(r) != self.domain.ngens for r in mat):
            raise ValueError("morphism matrix shape does not match the groups")
        # well-definedness: each torsion generator of order m must map to an
        # element killed by m in the codomain
        for j, m in enumerate(self.domain.torsion):
            col = [mat[i][self.domain.rank + j] for i in range(self.codomain.ngens)]
            scaled = self.codomain.element([m * c for c in col])
            if not scaled.is_zero:
                raise ValueError(
                    f"morphism not well defined on torsion generator {j} of order {m}"
                )

    @classmethod
    def identity(cls, group: FgAbelianGroup) -> "GroupMorphism":
        n = group.ngens
        return cls(group, group, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, domain: FgAbelianGroup, codomain: FgAbelianGroup,
                     images: Sequence[GroupElement]) -> "GroupMorphism":
        if len(images) != domain.ngens:
            raise ValueError("need one image per domain generator")
        rows = [[images[j].coords()[i] for j in range(domain.ngens)] for i in range(codomain.ngens)]
        return cls(domain, codomain, tuple(tuple(r) for r in rows))

    def apply(self, g: GroupElement) -> GroupElement:
        if g.group != self.domain:
            raise ValueError("element not in the domain")
        coords = g.coords()
        out = [sum(self.matrix[i][j] * coords[j] for j in range(self.domain.ngens))
               for i in range(self.codomain.ngens)]
        return self.codomain.element(out)

    def compose(self, inner: "GroupMorphism") -> "GroupMorphism":
        """self after inner."""
        if inner.codomain != self.domain:
            raise ValueError("morphisms not composable")
        prod = _int_matmul([list(r) for r in self.matrix], [list(r) for r in inner.matrix])
        return GroupMorphism(inner.domain, self.codomain, tuple(tuple(r) for r in prod))

    @property
    def is_identity(self) -> bool:
        if self.domain != self.codomain:
            return False
        n = self.domain.ngens
        return all(self.matrix[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))

    def solve(self, h: GroupElement) -> Optional[GroupElement]:
        """A preimage of h, or None if h is outside the image."""
        if h.group != self.codomain:
            raise ValueError("target element not in the codomain")
        if self.codomain.ngens == 0:
            return self.domain.zero()
        a = [list(r) for r in self.matrix]
        rel = self.codomain.relation_matrix()
        n = self.domain.ngens
        if n + len(self.codomain.torsion) == 0:
            return self.domain.zero() if h.is_zero else None
        full = [a[i] + rel[i] for i in range(self.codomain.ngens)]
        sol = _int_solve_matrix(full, [[c] for c in h.coords()])
        if sol is None:
            return None
        return self.domain.element([sol[i][0] for i in range(n)])

    def __repr__(self):
        return f"GroupMorphism({self.domain} -> {self.codomain}, {list(list(r) for r in self.matrix)})"


# ---------------------------------------------------------------------------
# kernels, fibers, cohomological dimension
# ---------------------------------------------------------------------------

def kernel(phi: GroupMorphism) -> Tuple[FgAbelianGroup, GroupMorphism]:
    """Kernel subgroup in canonical form together with its inclusion.

    The inclusion is injective with image exactly ker(phi); composing with
    phi gives the zero morphism.
    """
    n = phi.domain.ngens
    if n == 0:
        triv = FgAbelianGroup(0, ())
        return triv, GroupMorphism(triv, phi.domain, tuple(() for _ in range(0)))

    a = [list(r) for r in phi.matrix]
    rel_cod = phi.codomain.relation_matrix()
    ncod = phi.codomain.ngens
    # x lies in the preimage of 0 iff A x is a codomain relation combination
    block = [a[i] + rel_cod[i] for i in range(ncod)] if ncod else []
    if ncod == 0:
        preimage_gens = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    else:
        ker_cols = _int_kernel_basis(block)
        preimage_gens = [row[:] for row in ker_cols[:n]]

    h_basis = _lattice_column_basis(preimage_gens) if preimage_gens and preimage_gens[0] else [[] for _ in range(n)]
    t = len(h_basis[0]) if h_basis else 0
    if t == 0:
        triv = FgAbelianGroup(0, ())
        incl = GroupMorphism(triv, phi.domain, tuple(() for _ in range(n)))
        return triv, incl

    rel_dom = phi.domain.relation_matrix()
    k = len(phi.domain.torsion)
    if k:
        coeffs = _int_solve_matrix(h_basis, rel_dom)
        if coeffs is None:  # domain relations always sit inside the preimage lattice
            raise AssertionError("domain relations escaped the kernel lattice")
    else:
        coeffs = [[0] * 0 for _ in range(t)]

    u3, d3, _ = smith_normal_form(coeffs) if k else (
        [[1 if i == j else 0 for j in range(t)] for i in range(t)],
        [[0] * 0 for _ in range(t)],
        [],
    )
    u3inv = _int_inverse(u3)
    diag = [d3[i][i] if (k and i < min(t, k)) else 0 for i in range(t)]

    free_idx = [i for i in range(t) if diag[i] == 0]
    tors_idx = [i for i in range(t) if diag[i] >= 2]
    group = FgAbelianGroup(len(free_idx), tuple(diag[i] for i in tors_idx))

    gen_cols = []
    for i in free_idx + tors_idx:
        col = [sum(h_basis[r][c] * u3inv[c][i] for c in range(t)) for r in range(n)]
        gen_cols.append(phi.domain.element(col))
    incl = GroupMorphism.from_columns(group, phi.domain, gen_cols)
    return group, incl


def fiber_elements(phi: GroupMorphism, h: GroupElement,
                   support: Optional[Iterable[GroupElement]] = None) -> List[GroupElement]:
    """Elements of the domain mapping to h.

    With a support set: the members of that set in the fiber.  Without one,
    the kernel must be finite and the complete fiber is returned.
    """
    if h.group != phi.codomain:
        raise ValueError("fiber target not in the codomain")
    if support is not None:
        return [g for g in support if phi.apply(g) == h]
    ker_group, incl = kernel(phi)
    if not ker_group.is_finite:
        raise ValueError("infinite fiber; supply a support set")
    base = phi.solve(h)
    if base is None:
        return []
    fib = [base + incl.apply(l) for l in ker_group.elements()]
    return sorted(fib, key=lambda e: e.sort_key())


@dataclass(frozen=True)
class ExtendedNat:
    """A non-negative integer or infinity, totally ordered with infinity on top."""

    value: Optional[int] = None  # None encodes infinity

    def __post_init__(self):
        if self.value is not None and self.value < 0:
            raise ValueError("ExtendedNat must be non-negative")

    @classmethod
    def of(cls, n: int) -> "ExtendedNat":
        return cls(int(n))

    @classmethod
    def infinity(cls) -> "ExtendedNat":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __le__(self, other: "ExtendedNat") -> bool:
        if self.is_infinite:
            return other.is_infinite
        if other.is_infinite:
            return True
        return self.value <= other.value

    def __lt__(self, other: "ExtendedNat") -> bool:
        return self <= other and self != other

    def __add__(self, other) -> "ExtendedNat":
        o = other if isinstance(other, ExtendedNat) else ExtendedNat.of(other)
        if self.is_infinite or o.is_infinite:
            return ExtendedNat.infinity()
        return ExtendedNat.of(self.value + o.value)

    def __repr__(self):
        return "infinity" if self.is_infinite else str(self.value)


def cohomological_dimension(group: FgAbelianGroup, char: int = 0) -> ExtendedNat:
    """Projective dimension of the trivial module over the group algebra.

    Infinite exactly when the characteristic divides one of the torsion
    orders; otherwise the free rank (Koszul resolution length).
    """
    if char != 0 and any(m % char == 0 for m in group.torsion):
        return ExtendedNat.infinity()
    return ExtendedNat.of(group.rank)
