"""Graded modules over a graded algebra, and the maps between them.

A module stores one dimension and one family of action matrices per
supported degree; the action of basis element i of degree d maps the
component at g into the component at g + d.  Maps are block families, one
block per supported source degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import GradedAlgebra, ValidationReport
from .groups import GroupElement
from .linalg import Matrix


@dataclass(frozen=True)
class GradedVectorSpace:
    """Finitely supported degree-indexed dimensions with basis labels."""

    group: object
    components: Tuple[Tuple[GroupElement, int, Tuple[str, ...]], ...]

    def dim_at(self, g: GroupElement) -> int:
        for deg, dim, _ in self.components:
            if deg == g:
                return dim
        return 0


@dataclass(eq=True)
class GradedModule:
    algebra: GradedAlgebra
    dims: Dict[GroupElement, int]
    action: Dict[Tuple[int, GroupElement], Matrix]
    labels: Dict[GroupElement, Tuple[str, ...]] = dc_field(default_factory=dict)

    def __post_init__(self):
        self.dims = {g: d for g, d in self.dims.items() if d > 0}
        for g in self.dims:
            self.labels.setdefault(g, tuple(f"m{g}[{i}]" for i in range(self.dims[g])))
        self.labels = {g: l for g, l in self.labels.items() if g in self.dims}

    # ---- structure ----

    def support(self) -> List[GroupElement]:
        return sorted(self.dims, key=lambda g: g.sort_key())

    def dim_at(self, g: GroupElement) -> int:
        return self.dims.get(g, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def is_zero(self) -> bool:
        return not self.dims

    def act(self, i: int, g: GroupElement) -> Matrix:
        got = self.action.get((i, g))
        if got is not None:
            return got
        target = g + self.algebra.degrees[i]
        return Matrix.zeros(self.algebra.field, self.dim_at(target), self.dim_at(g))

    def act_vec(self, coeffs: Sequence, g: GroupElement) -> Optional[Matrix]:
        """Action of the algebra element sum(coeffs[i] * basis_i); the element
        must be homogeneous for the result to be a single block."""
        f = self.algebra.field
        nz = [i for i, c in enumerate(coeffs) if not f.is_zero(c)]
        if not nz:
            return None
        deg = self.algebra.degrees[nz[0]]
        if any(self.algebra.degrees[i] != deg for i in nz):
            raise ValueError("act_vec needs a homogeneous algebra element")
        out = self.act(nz[0], g).scale(coeffs[nz[0]])
        for i in nz[1:]:
            out = out + self.act(i, g).scale(coeffs[i])
        return out

    @property
    def space(self) -> GradedVectorSpace:
        comps = tuple((g, self.dims[g], self.labels[g]) for g in self.support())
        return GradedVectorSpace(self.algebra.group, comps)

    def graded_dims(self) -> Tuple[Tuple[GroupElement, int], ...]:
        return tuple((g, self.dims[g]) for g in self.support())

    def __repr__(self):
        comps = ", ".join(f"{g}:{d}" for g, d in self.graded_dims())
        return f"GradedModule({comps or '0'})"


@dataclass(eq=True)
class GradedMap:
    source: GradedModule
    target: GradedModule
    degree: GroupElement
    blocks: Dict[GroupElement, Matrix]

    def __post_init__(self):
        self.blocks = {g: b for g, b in self.blocks.items()
                       if g in self.source.dims and not b.is_zero()}

    def block_at(self, g: GroupElement) -> Matrix:
        got = self.blocks.get(g)
        if got is not None:
            return got
        return Matrix.zeros(self.source.algebra.field,
                            self.target.dim_at(g + self.degree), self.source.dim_at(g))

    @classmethod
    def identity(cls, m: GradedModule) -> "GradedMap":
        f = m.algebra.field
        return cls(m, m, m.algebra.group.zero(),
                   {g: Matrix.identity(f, d) for g, d in m.dims.items()})

    @classmethod
    def zero(cls, source: GradedModule, target: GradedModule,
             degree: Optional[GroupElement] = None) -> "GradedMap":
        return cls(source, target, degree if degree is not None else source.algebra.group.zero(), {})

    def compose(self, inner: "GradedMap") -> "GradedMap":
        """self after inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise ValueError("maps not composable")
        deg = self.degree + inner.degree
        blocks = {}
        for g in inner.source.dims:
            blocks[g] = self.block_at(g + inner.degree) @ inner.block_at(g)
        return GradedMap(inner.source, self.target, deg, blocks)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if self.degree != other.degree:
            raise ValueError("cannot add maps of different degrees")
        blocks = {g: self.block_at(g) + other.block_at(g) for g in self.source.dims}
        return GradedMap(self.source, self.target, self.degree, blocks)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        blocks = {g: self.block_at(g) - other.block_at(g) for g in self.source.dims}
        return GradedMap(self.source, self.target, self.degree, blocks)

    @property
    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def is_isomorphism(self) -> bool:
        """Degreewise bijectivity: every block square of full rank, supports matching."""
        tgt = {(g + self.degree): d for g, d in self.source.dims.items()}
        for g, d in self.source.dims.items():
            h = g + self.degree
            if self.target.dim_at(h) != d or self.block_at(g).rank() != d:
                return False
        for h, d in self.target.dims.items():
            if tgt.get(h, 0) != d:
                return False
        return True

    def __repr__(self):
        return f"GradedMap(deg={self.degree}, blocks on {len(self.blocks)} degrees)"


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def zero_module(algebra: GradedAlgebra) -> GradedModule:
    return GradedModule(algebra, {}, {})


def module_from_dims(algebra: GradedAlgebra, dims: Dict[GroupElement, int],
                     action: Dict[Tuple[int, GroupElement], Matrix],
                     labels: Optional[Dict[GroupElement, Tuple[str, ...]]] = None) -> GradedModule:
    dims = {g: d for g, d in dims.items() if d > 0}
    full_action = {}
    for g in dims:
        for i in range(algebra.dim):
            blk = action.get((i, g))
            if blk is None:
                blk = Matrix.zeros(algebra.field, dims.get(g + algebra.degrees[i], 0), dims[g])
            full_action[(i, g)] = blk
    return GradedModule(algebra, dims, full_action, dict(labels or {}))


def projective_module(algebra: GradedAlgebra, vertex: int,
                      gen_degree: Optional[GroupElement] = None) -> GradedModule:
    """The projective A e_v with its generator placed in degree gen_degree."""
    if algebra.vertices is None or vertex not in algebra.vertices:
        raise ValueError("vertex index does not name an idempotent")
    if gen_degree is None:
        gen_degree = algebra.group.zero()
    members = [b for b in range(algebra.dim) if algebra.source[b] == vertex]
    slots: Dict[GroupElement, List[int]] = {}
    for b in members:
        slots.setdefault(gen_degree + algebra.degrees[b], []).append(b)
    dims = {g: len(bs) for g, bs in slots.items()}
    labels = {g: tuple(algebra.labels[b] for b in bs) for g, bs in slots.items()}
    action = {}
    for g, bs in slots.items():
        for i in range(algebra.dim):
            tgt = slots.get(g + algebra.degrees[i], [])
            rowsix = {b: r for r, b in enumerate(tgt)}
            ent = [[algebra.field.zero] * len(bs) for _ in tgt]
            for c, b in enumerate(bs):
                prod = algebra.mul_basis(i, b)
                for k, coeff in enumerate(prod):
                    if not algebra.field.is_zero(coeff) and k in rowsix:
                        ent[rowsix[k]][c] = coeff
            action[(i, g)] = Matrix(algebra.field, len(tgt), len(bs),
                                    tuple(tuple(r) for r in ent))
    return GradedModule(algebra, dims, action, labels)


def simple_module(algebra: GradedAlgebra, vertex: int,
                  degree: Optional[GroupElement] = None) -> GradedModule:
    """One-dimensional module where only the chosen idempotent acts."""
    if algebra.vertices is None or vertex not in algebra.vertices:
        raise ValueError("vertex index does not name an idempotent")
    if degree is None:
        degree = algebra.group.zero()
    f = algebra.field
    dims = {degree: 1}
    action = {}
    zerodeg = algebra.group.zero()
    for i in range(algebra.dim):
        if i == vertex:
            action[(i, degree)] = Matrix.identity(f, 1)
        else:
            rows = 1 if algebra.degrees[i] == zerodeg else 0
            action[(i, degree)] = Matrix.zeros(f, rows, 1)
    return GradedModule(algebra, dims, action, {degree: (f"s_{algebra.labels[vertex]}",)})


# ---------------------------------------------------------------------------
# functorial operations
# ---------------------------------------------------------------------------

def shift(m: GradedModule, g: GroupElement) -> GradedModule:
    """New grading with component at g' equal to the old component at g' + g."""
    if g.group != m.algebra.group:
        raise ValueError("shift degree lies in the wrong group")
    dims = {old - g: d for old, d in m.dims.items()}
    labels = {old - g: m.labels[old] for old in m.dims}
    action = {(i, old - g): blk for (i, old), blk in m.action.items()}
    return GradedModule(m.algebra, dims, action, labels)


def shift_map(f: GradedMap, g: GroupElement) -> GradedMap:
    blocks = {old - g: blk for old, blk in f.blocks.items()}
    return GradedMap(shift(f.source, g), shift(f.target, g), f.degree, blocks)


def hom_space(m: GradedModule, n: GradedModule) -> List[GradedMap]:
    """Basis of the space of degree-zero module maps m -> n."""
    if m.algebra != n.algebra:
        raise ValueError("hom between modules over different algebras")
    f = m.algebra.field
    degs = [g for g in m.support() if n.dim_at(g) > 0]
    offsets = {}
    total = 0
    for g in degs:
        offsets[g] = total
        total += n.dim_at(g) * m.dim_at(g)
    if total == 0:
        return []

    rows = []
    for i in range(m.algebra.dim):
        d_i = m.algebra.degrees[i]
        for g in m.support():
            h = g + d_i
            if n.dim_at(h) == 0:
                continue
            A = m.act(i, g)          # M_g -> M_h
            B = n.act(i, g)          # N_g -> N_h
            rn, cm = n.dim_at(h), m.dim_at(g)
            for r in range(rn):
                for c in range(cm):
                    row = [f.zero] * total
                    if h in offsets:
                        base = offsets[h]
                        for s in range(m.dim_at(h)):
                            coeff = A.entries[s][c]
                            if not f.is_zero(coeff):
                                row[base + r * m.dim_at(h) + s] = f.add(
                                    row[base + r * m.dim_at(h) + s], coeff)
                    if g in offsets:
                        base = offsets[g]
                        for t in range(n.dim_at(g)):
                            coeff = B.entries[r][t]
                            if not f.is_zero(coeff):
                                row[base + t * m.dim_at(g) + c] = f.sub(
                                    row[base + t * m.dim_at(g) + c], coeff)
                    if any(not f.is_zero(x) for x in row):
                        rows.append(row)

    if rows:
        system = Matrix.from_rows(f, rows)
        basis = system.kernel_basis()
    else:
        basis = Matrix.identity(f, total)

    maps = []
    for j in range(basis.cols):
        vec = basis.column_vector(j)
        blocks = {}
        for g in degs:
            rn, cm = n.dim_at(g), m.dim_at(g)
            base = offsets[g]
            ent = tuple(tuple(vec[base + r * cm + c] for c in range(cm)) for r in range(rn))
            blocks[g] = Matrix(f, rn, cm, ent)
        maps.append(GradedMap(m, n, m.algebra.group.zero(), blocks))
    return maps


def dual(m: GradedModule) -> GradedModule:
    """Graded dual over the opposite algebra: component at g is (M_{-g})^*."""
    opp = m.algebra.opposite()
    dims = {-g: d for g, d in m.dims.items()}
    labels = {-g: tuple(f"{lbl}^" for lbl in m.labels[g]) for g in m.dims}
    action = {}
    for g in dims:
        for i in range(opp.dim):
            d_i = opp.degrees[i]
            action[(i, g)] = m.act(i, -g - d_i).transpose()
    return GradedModule(opp, dims, action, labels)


def dual_map(f: GradedMap) -> GradedMap:
    """Transpose of a degree-zero map, from dual(target) to dual(source)."""
    if f.degree != f.source.algebra.group.zero():
        raise ValueError("dual_map requires a degree-zero map")
    blocks = {}
    for g in f.source.dims:
        if f.target.dim_at(g) > 0:
            blocks[-g] = f.block_at(g).transpose()
    return GradedMap(dual(f.target), dual(f.source), f.source.algebra.group.zero(), blocks)


def _induced_action(parent: GradedModule, basis: Dict[GroupElement, Matrix]) -> GradedModule:
    """Module structure on degreewise subspaces closed under the action.

    basis[g] has columns giving the embedding of the new component into
    the parent component at g.
    """
    algebra = parent.algebra
    dims = {g: b.cols for g, b in basis.items() if b.cols > 0}
    action = {}
    for g in dims:
        for i in range(algebra.dim):
            h = g + algebra.degrees[i]
            image = parent.act(i, g) @ basis[g]
            tgt = basis.get(h)
            if tgt is None or tgt.cols == 0:
                if not image.is_zero():
                    raise AssertionError("subspace family is not action-closed")
                action[(i, g)] = Matrix.zeros(algebra.field, 0, dims[g])
                continue
            sol = tgt.solve_matrix(image)
            if sol is None:
                raise AssertionError("subspace family is not action-closed")
            action[(i, g)] = sol
    return GradedModule(algebra, dims, action)


def kernel_map(f: GradedMap) -> Tuple[GradedModule, GradedMap]:
    """Degreewise kernel of a degree-zero map, with its inclusion."""
    if f.degree != f.source.algebra.group.zero():
        raise ValueError("kernel requires a degree-zero map")
    basis = {g: f.block_at(g).kernel_basis() for g in f.source.dims}
    ker = _induced_action(f.source, basis)
    incl = GradedMap(ker, f.source, f.source.algebra.group.zero(),
                     {g: basis[g] for g in ker.dims})
    return ker, incl


def cokernel_map(f: GradedMap) -> Tuple[GradedModule, GradedMap]:
    """Degreewise cokernel of a degree-zero map, with its projection."""
    if f.degree != f.source.algebra.group.zero():
        raise ValueError("cokernel requires a degree-zero map")
    n = f.target
    fld = n.algebra.field
    proj_blocks: Dict[GroupElement, Matrix] = {}
    section: Dict[GroupElement, Matrix] = {}
    for g in n.dims:
        img = f.block_at(g).column_space_basis() if f.source.dim_at(g) else \
            Matrix.zeros(fld, n.dim_at(g), 0)
        d = n.dim_at(g)
        aug = Matrix.hstack(fld, [img, Matrix.identity(fld, d)], rows=d)
        _, pivots = aug.rref()
        comp = [p - img.cols for p in pivots if p >= img.cols]
        sec = Matrix(fld, d, len(comp),
                     tuple(tuple(fld.one if r == c else fld.zero for c in comp) for r in range(d)))
        full = Matrix.hstack(fld, [img, sec], rows=d)
        inv = full.inverse()
        if inv is None:
            raise AssertionError("image basis plus complement failed to span")
        pi = Matrix(fld, len(comp), d, tuple(inv.entries[img.cols + r] for r in range(len(comp))))
        proj_blocks[g] = pi
        section[g] = sec

    algebra = n.algebra
    dims = {g: proj_blocks[g].rows for g in proj_blocks if proj_blocks[g].rows > 0}
    action = {}
    for g in dims:
        for i in range(algebra.dim):
            h = g + algebra.degrees[i]
            if h in dims:
                blk = proj_blocks[h] @ n.act(i, g) @ section[g]
            else:
                blk = Matrix.zeros(fld, 0, dims[g])
            action[(i, g)] = blk
    labels = {g: tuple(n.labels[g][c] for c in _complement_indices(section[g]))
              for g in dims}
    coker = GradedModule(algebra, dims, action, labels)
    proj = GradedMap(n, coker, algebra.group.zero(),
                     {g: proj_blocks[g] for g in n.dims if proj_blocks[g].rows > 0})
    return coker, proj


def _complement_indices(section: Matrix) -> List[int]:
    idx = []
    for c in range(section.cols):
        col = section.column_vector(c)
        idx.append(next(r for r, x in enumerate(col) if not section.field.is_zero(x)))
    return idx


def direct_sum(mods: Sequence[GradedModule]) -> Tuple[GradedModule, List[GradedMap], List[GradedMap]]:
    """Direct sum with canonical injections and projections."""
    if not mods:
        raise ValueError("direct sum of an empty family needs an algebra; use zero_module")
    algebra = mods[0].algebra
    if any(m.algebra != algebra for m in mods):
        raise ValueError("direct sum of modules over different algebras")
    fld = algebra.field

    all_degs = sorted({g for m in mods for g in m.dims}, key=lambda g: g.sort_key())
    dims = {g: sum(m.dim_at(g) for m in mods) for g in all_degs}
    offsets: Dict[Tuple[int, GroupElement], int] = {}
    for g in all_degs:
        off = 0
        for j, m in enumerate(mods):
            offsets[(j, g)] = off
            off += m.dim_at(g)

    action = {}
    for g in all_degs:
        for i in range(algebra.dim):
            h = g + algebra.degrees[i]
            rows, cols = dims.get(h, 0), dims[g]
            grid = [[fld.zero] * cols for _ in range(rows)]
            for j, m in enumerate(mods):
                blk = m.act(i, g)
                r0 = offsets.get((j, h), 0)
                c0 = offsets[(j, g)]
                for r in range(blk.rows):
                    for c in range(blk.cols):
                        grid[r0 + r][c0 + c] = blk.entries[r][c]
            action[(i, g)] = Matrix(fld, rows, cols, tuple(tuple(r) for r in grid))

    labels = {g: tuple(f"{j}.{lbl}" for j, m in enumerate(mods) for lbl in m.labels.get(g, ()))
              for g in all_degs}
    total = GradedModule(algebra, dims, action, labels)

    injections, projections = [], []
    zero_deg = algebra.group.zero()
    for j, m in enumerate(mods):
        inj_blocks, proj_blocks = {}, {}
        for g in m.dims:
            rows = dims[g]
            c0 = offsets[(j, g)]
            ent = tuple(tuple(fld.one if r == c0 + c else fld.zero for c in range(m.dim_at(g)))
                        for r in range(rows))
            inj_blocks[g] = Matrix(fld, rows, m.dim_at(g), ent)
        for g in total.dims:
            if m.dim_at(g) > 0:
                c0 = offsets[(j, g)]
                ent = tuple(tuple(fld.one if c == c0 + r else fld.zero for c in range(dims[g]))
                            for r in range(m.dim_at(g)))
                proj_blocks[g] = Matrix(fld, m.dim_at(g), dims[g], ent)
        injections.append(GradedMap(m, total, zero_deg, inj_blocks))
        projections.append(GradedMap(total, m, zero_deg, proj_blocks))
    return total, injections, projections


def submodule_generated(m: GradedModule, generators: Sequence[Tuple[GroupElement, Sequence]]) -> Tuple[GradedModule, GradedMap]:
    """Smallest action-closed graded subspace containing the given vectors."""
    fld = m.algebra.field
    spans: Dict[GroupElement, List[Tuple]] = {}
    for g, vec in generators:
        if m.dim_at(g) == 0:
            continue
        spans.setdefault(g, []).append(tuple(fld.of(x) for x in vec))

    changed = True
    while changed:
        changed = False
        for g in list(spans):
            mat = Matrix.from_rows(fld, spans[g]).transpose()
            for i in range(m.algebra.dim):
                h = g + m.algebra.degrees[i]
                if m.dim_at(h) == 0:
                    continue
                image = m.act(i, g) @ mat
                cur = spans.get(h, [])
                cur_mat = Matrix.from_rows(fld, cur).transpose() if cur else \
                    Matrix.zeros(fld, m.dim_at(h), 0)
                for c in range(image.cols):
                    col = image.column_vector(c)
                    test = Matrix.hstack(fld, [cur_mat, Matrix.column(fld, col)],
                                         rows=m.dim_at(h))
                    if test.rank() > cur_mat.rank():
                        cur = cur + [col]
                        cur_mat = test
                        changed = True
                if cur:
                    spans[h] = cur

    basis = {}
    for g in m.dims:
        if g in spans:
            basis[g] = Matrix.from_rows(fld, spans[g]).transpose().column_space_basis()
        else:
            basis[g] = Matrix.zeros(fld, m.dim_at(g), 0)
    sub = _induced_action(m, basis)
    incl = GradedMap(sub, m, m.algebra.group.zero(), {g: basis[g] for g in sub.dims})
    return sub, incl


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_module(m: GradedModule) -> ValidationReport:
    """Module axioms relative to the algebra's structure constants."""
    algebra = m.algebra
    f = algebra.field
    fails: List[Tuple[str, str]] = []

    for (i, g), blk in m.action.items():
        want_rows = m.dim_at(g + algebra.degrees[i])
        if blk.rows != want_rows or blk.cols != m.dim_at(g):
            fails.append(("action-shape", f"basis {i} at degree {g}"))
    for g in m.dims:
        for i in range(algebra.dim):
            if (i, g) not in m.action:
                fails.append(("action-missing", f"basis {i} at degree {g}"))
    if fails:
        return ValidationReport("module", tuple(fails))

    for g in m.dims:
        ident = Matrix.zeros(f, m.dim_at(g), m.dim_at(g))
        for i, c in enumerate(algebra.unit):
            if not f.is_zero(c):
                ident = ident + m.act(i, g).scale(c)
        if ident != Matrix.identity(f, m.dim_at(g)):
            fails.append(("unit-action", f"unit does not act as identity at degree {g}"))

    for i in range(algebra.dim):
        for j in range(algebra.dim):
            prod = algebra.mul_basis(i, j)
            for g in m.dims:
                left = None
                for k, c in enumerate(prod):
                    if f.is_zero(c):
                        continue
                    term = m.act(k, g).scale(c)
                    left = term if left is None else left + term
                right = m.act(i, g + algebra.degrees[j]) @ m.act(j, g)
                if left is None:
                    if not right.is_zero():
                        fails.append(("structure-constants", f"pair ({i},{j}) at degree {g}"))
                elif left != right:
                    fails.append(("structure-constants", f"pair ({i},{j}) at degree {g}"))

    return ValidationReport("module", tuple(fails))


def validate_map(fmap: GradedMap) -> ValidationReport:
    """Block shapes and exact commutation with every action matrix."""
    m, n = fmap.source, fmap.target
    algebra = m.algebra
    fails: List[Tuple[str, str]] = []
    if algebra != n.algebra:
        return ValidationReport("map", (("algebras", "source and target algebras differ"),))

    for g in m.dims:
        blk = fmap.block_at(g)
        if blk.rows != n.dim_at(g + fmap.degree) or blk.cols != m.dim_at(g):
            fails.append(("block-shape", f"degree {g}"))
    if fails:
        return ValidationReport("map", tuple(fails))

    for i in range(algebra.dim):
        d_i = algebra.degrees[i]
        for g in m.dims:
            lhs = fmap.block_at(g + d_i) @ m.act(i, g)
            rhs = n.act(i, g + fmap.degree) @ fmap.block_at(g)
            if lhs != rhs:
                fails.append(("linearity", f"basis {i} at degree {g}"))
    return ValidationReport("map", tuple(fails))


def validate(obj) -> ValidationReport:
    """Dispatching validator for algebras, modules, and maps."""
    from .algebra import validate_algebra

    if isinstance(obj, GradedAlgebra):
        return validate_algebra(obj)
    if isinstance(obj, GradedModule):
        return validate_module(obj)
    if isinstance(obj, GradedMap):
        return validate_map(obj)
    raise TypeError(f"cannot validate {type(obj).__name__}")
