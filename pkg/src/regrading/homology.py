"""Minimal graded projective resolutions, graded Ext, and dimension verdicts.

Projective covers are canonical once the algebra carries radical data:
cover the top, take the kernel, repeat.  Injective dimension is computed
through the graded dual, which exchanges injective coresolutions with
projective resolutions over the opposite algebra.  No dimension is ever
reported exact without a terminating syzygy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import GradedAlgebra
from .groups import GroupElement, GroupMorphism, cohomological_dimension, kernel
from .linalg import Matrix
from .modules import (
    GradedMap,
    GradedModule,
    _induced_action,
    cokernel_map,
    dual,
    kernel_map,
    projective_module,
    shift,
    simple_module,
)
from .functors import pushforward
from .reporting import VerificationReport

DEFAULT_CAP = 8

TERMINATED = "terminated"
TRUNCATED = "truncated"


@dataclass(frozen=True)
class DimensionVerdict:
    """exact(d), at_least(cap), or infinite; never a guess."""

    kind: str
    value: Optional[int] = None

    @classmethod
    def exact(cls, d: int) -> "DimensionVerdict":
        return cls("exact", d)

    @classmethod
    def at_least(cls, c: int) -> "DimensionVerdict":
        return cls("at_least", c)

    @classmethod
    def infinite(cls) -> "DimensionVerdict":
        return cls("infinite", None)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def __repr__(self):
        if self.kind == "exact":
            return f"exact({self.value})"
        if self.kind == "at_least":
            return f"at_least({self.value})"
        return "infinite"


# ---------------------------------------------------------------------------
# tops, radicals, covers
# ---------------------------------------------------------------------------

def _radical_basis_matrices(m: GradedModule) -> Dict[GroupElement, Matrix]:
    """Degreewise basis of J*M, from the images of the radical action."""
    algebra = m.algebra
    if algebra.radical is None:
        raise ValueError("algebra lacks radical data")
    fld = algebra.field
    out = {}
    for g in m.dims:
        pieces = []
        for i in algebra.radical:
            src = g - algebra.degrees[i]
            if m.dim_at(src) > 0:
                pieces.append(m.act(i, src))
        if pieces:
            out[g] = Matrix.hstack(fld, pieces, rows=m.dim_at(g)).column_space_basis()
        else:
            out[g] = Matrix.zeros(fld, m.dim_at(g), 0)
    return out


def top_and_radical(m: GradedModule) -> Tuple[GradedModule, GradedModule, GradedMap]:
    """(top, radical submodule, projection m -> top)."""
    basis = _radical_basis_matrices(m)
    rad = _induced_action(m, basis)
    incl = GradedMap(rad, m, m.algebra.group.zero(), {g: basis[g] for g in rad.dims})
    top, proj = cokernel_map(incl)
    return top, rad, proj


def _minimal_cover_data(m: GradedModule) -> List[Tuple[int, GroupElement, Tuple]]:
    """Summands (vertex, generator degree, generator value) of the projective cover."""
    algebra = m.algebra
    _, _, proj = top_and_radical(m)
    out = []
    for g in m.support():
        pi = proj.block_at(g)
        if pi.rows == 0:
            continue
        for v in algebra.vertices:
            candidates = m.act(v, g)          # image of the idempotent on M_g
            in_top = pi @ candidates
            _, pivots = in_top.rref()
            for c in pivots:
                out.append((v, g, candidates.column_vector(c)))
    return out


def _full_cover_data(m: GradedModule) -> List[Tuple[int, GroupElement, Tuple]]:
    """One projective generator per vertex-slice basis vector: a deliberately
    non-minimal cover, used as the resolution-independence oracle."""
    algebra = m.algebra
    out = []
    for g in m.support():
        for v in algebra.vertices:
            sliced = m.act(v, g).column_space_basis()
            for c in range(sliced.cols):
                out.append((v, g, sliced.column_vector(c)))
    return out


@dataclass
class ProjectiveBundle:
    """Finite direct sum of vertex projectives with chosen generator degrees."""

    algebra: GradedAlgebra
    summands: List[Tuple[int, GroupElement]]          # (vertex, generator degree)
    module: GradedModule
    layout: Dict[GroupElement, List[Tuple[int, int]]]  # degree -> [(summand, basis elt)]
    gen_positions: List[Tuple[GroupElement, int]]      # per summand: (degree, column)


def projective_bundle(algebra: GradedAlgebra,
                      summands: Sequence[Tuple[int, GroupElement]]) -> ProjectiveBundle:
    fld = algebra.field
    layout: Dict[GroupElement, List[Tuple[int, int]]] = {}
    for u, (v, gdeg) in enumerate(summands):
        for b in range(algebra.dim):
            if algebra.source[b] == v:
                layout.setdefault(gdeg + algebra.degrees[b], []).append((u, b))
    dims = {g: len(cols) for g, cols in layout.items()}
    action = {}
    for g, cols in layout.items():
        for i in range(algebra.dim):
            h = g + algebra.degrees[i]
            tgt = layout.get(h, [])
            rowix = {ub: r for r, ub in enumerate(tgt)}
            grid = [[fld.zero] * len(cols) for _ in tgt]
            for c, (u, b) in enumerate(cols):
                prod = algebra.mul_basis(i, b)
                for k, coeff in enumerate(prod):
                    if not fld.is_zero(coeff) and (u, k) in rowix:
                        grid[rowix[(u, k)]][c] = coeff
            action[(i, g)] = Matrix(fld, len(tgt), len(cols), tuple(tuple(r) for r in grid))
    labels = {g: tuple(f"{u}:{algebra.labels[b]}" for u, b in cols)
              for g, cols in layout.items()}
    module = GradedModule(algebra, dims, action, labels)
    gen_positions = []
    for u, (v, gdeg) in enumerate(summands):
        col = layout[gdeg].index((u, v))
        gen_positions.append((gdeg, col))
    return ProjectiveBundle(algebra, list(summands), module, layout, gen_positions)


def bundle_map(bundle: ProjectiveBundle, target: GradedModule,
               gen_values: Sequence[Tuple]) -> GradedMap:
    """The module map determined by sending each generator to the given value."""
    algebra = bundle.algebra
    fld = algebra.field
    blocks = {}
    for g, cols in bundle.layout.items():
        rows = target.dim_at(g)
        grid = [[fld.zero] * len(cols) for _ in range(rows)]
        for c, (u, b) in enumerate(cols):
            gdeg = bundle.summands[u][1]
            val = target.act(b, gdeg).apply(gen_values[u]) if rows else ()
            for r in range(rows):
                grid[r][c] = val[r]
        blocks[g] = Matrix(fld, rows, len(cols), tuple(tuple(r) for r in grid))
    return GradedMap(bundle.module, target, algebra.group.zero(), blocks)


# ---------------------------------------------------------------------------
# resolutions
# ---------------------------------------------------------------------------

@dataclass
class MinimalResolution:
    """Terms, differentials, and termination status of a projective resolution.

    diffs[0] is the augmentation onto the target; diffs[i] maps term i to
    term i-1.  status is ``terminated`` when a syzygy vanished, otherwise
    ``truncated`` at the cap.
    """

    target: GradedModule
    bundles: List[ProjectiveBundle]
    diffs: List[GradedMap]
    status: str
    cap: int

    @property
    def length(self) -> int:
        return len(self.bundles) - 1

    def term_summary(self, i: int) -> List[Tuple[str, GroupElement]]:
        if i >= len(self.bundles):
            return []
        alg = self.target.algebra
        return sorted(((alg.labels[v], g) for v, g in self.bundles[i].summands),
                      key=lambda t: (t[0], t[1].sort_key()))


def _resolution(m: GradedModule, cap: int, cover_data) -> MinimalResolution:
    algebra = m.algebra
    if m.is_zero:
        return MinimalResolution(m, [], [], TERMINATED, cap)
    bundles: List[ProjectiveBundle] = []
    diffs: List[GradedMap] = []
    current = m
    to_current: Optional[GradedMap] = None  # inclusion of the syzygy into the last bundle
    for step in range(cap + 1):
        data = cover_data(current)
        bundle = projective_bundle(algebra, [(v, g) for v, g, _ in data])
        cover = bundle_map(bundle, current, [val for _, _, val in data])
        if to_current is None:
            diffs.append(cover)
        else:
            diffs.append(to_current.compose(cover))
        bundles.append(bundle)
        syzygy, incl = kernel_map(cover)
        if syzygy.is_zero:
            return MinimalResolution(m, bundles, diffs, TERMINATED, cap)
        current = syzygy
        to_current = incl
    return MinimalResolution(m, bundles, diffs, TRUNCATED, cap)


def minimal_resolution(m: GradedModule, cap: int = DEFAULT_CAP) -> MinimalResolution:
    """Iterated projective covers; stops at a zero syzygy or at the cap."""
    return _resolution(m, cap, _minimal_cover_data)


def nonminimal_free_resolution(m: GradedModule, cap: int = DEFAULT_CAP) -> MinimalResolution:
    """Resolution by redundant covers; independent route for Ext computations."""
    return _resolution(m, cap, _full_cover_data)


def is_minimal(res: MinimalResolution) -> bool:
    """All differential entries lie in the radical: the composite with the
    projection to the top of each term vanishes."""
    for i in range(1, len(res.bundles)):
        _, _, proj = top_and_radical(res.bundles[i - 1].module)
        if not proj.compose(res.diffs[i]).is_zero:
            return False
    return True


# ---------------------------------------------------------------------------
# Ext through a resolution
# ---------------------------------------------------------------------------

@dataclass
class _HomData:
    bundle: ProjectiveBundle
    bases: List[Matrix]        # per summand: basis of e_v N_{gen degree}
    offsets: List[int]
    total: int


def _hom_from_projectives(bundle: ProjectiveBundle, n: GradedModule) -> _HomData:
    bases = []
    offsets = []
    total = 0
    for v, gdeg in bundle.summands:
        e_slice = n.act(v, gdeg).column_space_basis()
        offsets.append(total)
        bases.append(e_slice)
        total += e_slice.cols
    return _HomData(bundle, bases, offsets, total)


def _delta_matrix(hom_i: _HomData, hom_next: _HomData, d: GradedMap,
                  n: GradedModule) -> Matrix:
    """Matrix of precomposition with d, in the chosen hom bases."""
    fld = n.algebra.field
    cols = []
    for u, (v_u, g_u) in enumerate(hom_i.bundle.summands):
        basis_u = hom_i.bases[u]
        for e in range(basis_u.cols):
            y = basis_u.column_vector(e)
            coords = [fld.zero] * hom_next.total
            for w, (v_w, g_w) in enumerate(hom_next.bundle.summands):
                gw, cw = hom_next.bundle.gen_positions[w]
                xi = d.block_at(gw).column_vector(cw)
                layout = hom_i.bundle.layout.get(gw, [])
                value = [fld.zero] * n.dim_at(gw)
                for pos, (u2, b2) in enumerate(layout):
                    if u2 != u or fld.is_zero(xi[pos]):
                        continue
                    contrib = n.act(b2, g_u).apply(y)
                    for r in range(len(value)):
                        value[r] = fld.add(value[r], fld.mul(xi[pos], contrib[r]))
                basis_w = hom_next.bases[w]
                if basis_w.cols:
                    sol = basis_w.solve(value)
                    if sol is None:
                        raise AssertionError("hom evaluation left the idempotent slice")
                    for r, x in enumerate(sol):
                        coords[hom_next.offsets[w] + r] = x
                elif any(not fld.is_zero(x) for x in value):
                    raise AssertionError("hom evaluation hit a zero slice")
            cols.append(coords)
    rows = hom_next.total
    ent = tuple(tuple(c[r] for c in cols) for r in range(rows))
    return Matrix(fld, rows, len(cols), ent)


@dataclass
class ExtResult:
    degree: int
    dim: int
    conditional: bool
    maps: Optional[List[GradedMap]] = None


def ext_table(m: GradedModule, n: GradedModule, max_i: int,
              cap: int = DEFAULT_CAP,
              resolution: Optional[MinimalResolution] = None) -> List[ExtResult]:
    """dim Ext^i(m, n) for 0 <= i <= max_i from one resolution of m.

    Entries are flagged conditional when the resolution was truncated
    before the terms they need;  a conditional dim is only the part of the
    answer visible below the cap.
    """
    res = resolution if resolution is not None else minimal_resolution(m, cap)
    homs = [_hom_from_projectives(b, n) for b in res.bundles]
    deltas = [_delta_matrix(homs[i], homs[i + 1], res.diffs[i + 1], n)
              for i in range(len(res.bundles) - 1)]
    terminated = res.status == TERMINATED
    out = []
    for i in range(max_i + 1):
        if i < len(homs):
            rk_prev = deltas[i - 1].rank() if 0 <= i - 1 < len(deltas) else 0
            if i < len(deltas):
                out.append(ExtResult(i, homs[i].total - deltas[i].rank() - rk_prev, False))
            elif terminated:
                out.append(ExtResult(i, homs[i].total - rk_prev, False))
            else:
                out.append(ExtResult(i, homs[i].total - rk_prev, True))
        else:
            out.append(ExtResult(i, 0, not terminated))
    return out


def graded_ext(m: GradedModule, n: GradedModule, i: int,
               cap: int = DEFAULT_CAP) -> ExtResult:
    """dim Ext^i in the graded category; carries a basis of maps for i = 0."""
    if i > cap:
        raise ValueError("ext degree exceeds the cap")
    res = minimal_resolution(m, cap)
    result = ext_table(m, n, i, cap, resolution=res)[i]
    if i == 0 and not m.is_zero:
        result.maps = _ext0_basis(res, n)
    return result


def _ext0_basis(res: MinimalResolution, n: GradedModule) -> List[GradedMap]:
    """Kernel of the first hom differential, pushed through the augmentation."""
    m = res.target
    fld = n.algebra.field
    hom0 = _hom_from_projectives(res.bundles[0], n)
    if len(res.bundles) > 1:
        delta0 = _delta_matrix(hom0, _hom_from_projectives(res.bundles[1], n),
                               res.diffs[1], n)
        coeffs = delta0.kernel_basis()
    else:
        coeffs = Matrix.identity(fld, hom0.total)

    aug = res.diffs[0]
    sections = {}
    for g in m.dims:
        sec = aug.block_at(g).solve_matrix(Matrix.identity(fld, m.dim_at(g)))
        if sec is None:
            raise AssertionError("augmentation is not surjective")
        sections[g] = sec

    maps = []
    for j in range(coeffs.cols):
        vec = coeffs.column_vector(j)
        blocks = {}
        for g in m.dims:
            if n.dim_at(g) == 0:
                continue
            cols_layout = res.bundles[0].layout.get(g, [])
            grid = [[fld.zero] * len(cols_layout) for _ in range(n.dim_at(g))]
            for cix, (u, b) in enumerate(cols_layout):
                basis_u = hom0.bases[u]
                g_u = res.bundles[0].summands[u][1]
                acc = [fld.zero] * n.dim_at(g)
                for e in range(basis_u.cols):
                    c = vec[hom0.offsets[u] + e]
                    if fld.is_zero(c):
                        continue
                    contrib = n.act(b, g_u).apply(basis_u.column_vector(e))
                    for r in range(len(acc)):
                        acc[r] = fld.add(acc[r], fld.mul(c, contrib[r]))
                for r in range(n.dim_at(g)):
                    grid[r][cix] = acc[r]
            f_on_p0 = Matrix(fld, n.dim_at(g), len(cols_layout), tuple(tuple(r) for r in grid))
            blocks[g] = f_on_p0 @ sections[g]
        maps.append(GradedMap(m, n, m.algebra.group.zero(), blocks))
    return maps


# ---------------------------------------------------------------------------
# dimensions
# ---------------------------------------------------------------------------

def projective_dimension(m: GradedModule, cap: int = DEFAULT_CAP) -> DimensionVerdict:
    """exact(d) only when the minimal resolution terminates by the cap."""
    res = minimal_resolution(m, cap)
    if res.status == TERMINATED:
        return DimensionVerdict.exact(max(res.length, 0))
    return DimensionVerdict.at_least(cap)


def graded_injective_dimension(m: GradedModule, cap: int = DEFAULT_CAP) -> DimensionVerdict:
    """Injective dimension via the graded dual: the duality exchanges
    injective coresolutions of m with projective resolutions of dual(m)
    over the opposite algebra."""
    return projective_dimension(dual(m), cap)


def graded_injectives(a: GradedAlgebra) -> List[GradedModule]:
    """Duals of the opposite-algebra vertex projectives."""
    if a.vertices is None:
        raise ValueError("algebra lacks vertex data")
    opp = a.opposite()
    return [dual(projective_module(opp, v)) for v in a.vertices]


def check_graded_injective(a: GradedAlgebra, module: GradedModule,
                           cap: int = DEFAULT_CAP) -> VerificationReport:
    """First Ext group against every shifted simple vanishes, the shifts
    ranging over the finite window outside which the hom complex is zero."""
    report = VerificationReport("graded-injective")
    supp_i = module.support()
    for v in a.vertices:
        s = simple_module(a, v)
        res = minimal_resolution(s, 2)
        gen_degs = {g for b in res.bundles[:3] for _, g in b.summands}
        window = sorted({d - t for d in gen_degs for t in supp_i},
                        key=lambda g: g.sort_key())
        for sft in window:
            val = ext_table(shift(s, sft), module, 1, 2)[1]
            name = f"ext1 vanishes: simple {a.labels[v]} shifted by {sft}"
            if val.conditional and val.dim == 0:
                report.add(name, True)
            elif val.conditional:
                report.add_inconclusive(name, f"visible dim {val.dim} at cap {cap}")
            else:
                report.add(name, val.dim == 0, f"dim {val.dim}")
    return report


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------

def verify_acyclicity(m: GradedModule, injective: GradedModule, phi: GroupMorphism,
                      cap: int = 6, resolution_cap: Optional[int] = None) -> VerificationReport:
    """Regrade both modules along phi and check that every Ext group of the
    pair vanishes in degrees 1..cap."""
    report = VerificationReport("acyclicity")
    push_m = pushforward(m, phi)
    push_i = pushforward(injective, phi)
    rcap = resolution_cap if resolution_cap is not None else max(cap + 1, DEFAULT_CAP)
    table = ext_table(push_m, push_i, cap, rcap)
    for entry in table[1:]:
        name = f"ext{entry.degree} vanishes"
        if entry.conditional:
            if entry.dim == 0:
                report.add_inconclusive(name, f"zero below the cap, resolution truncated at {rcap}")
            else:
                report.add(name, False, f"visible dim {entry.dim}")
        else:
            report.add(name, entry.dim == 0, f"dim {entry.dim}")
    return report


def verify_inequality(m: GradedModule, phi: GroupMorphism,
                      cap: int = DEFAULT_CAP) -> VerificationReport:
    """Graded injective dimension before and after regrading, against the
    cohomological dimension of the kernel."""
    report = VerificationReport("injective-dimension-inequality")
    ker_group, _ = kernel(phi)
    n = cohomological_dimension(ker_group, m.algebra.field.char)
    d_dom = graded_injective_dimension(m, cap)
    d_cod = graded_injective_dimension(pushforward(m, phi), cap)
    report.add("kernel-cd-computed", True, f"n = {n}")

    both_exact = d_dom.is_exact and d_cod.is_exact
    if both_exact:
        report.add("lower-bound", d_dom.value <= d_cod.value,
                   f"{d_dom} <= {d_cod}")
        if n.is_infinite:
            report.add("upper-bound", True, f"{d_cod} <= {d_dom} + infinity")
        else:
            report.add("upper-bound", d_cod.value <= d_dom.value + n.value,
                       f"{d_cod} <= {d_dom} + {n}")
        report.add("regrade-preserves-dimension", d_dom.value == d_cod.value,
                   f"{d_dom} vs {d_cod} (finite-dimensional structural equality)")
        return report

    if d_dom.is_exact and d_cod.kind == "at_least":
        if d_cod.value >= d_dom.value:
            report.add("lower-bound", True, f"{d_dom} <= {d_cod}")
        else:
            report.add_inconclusive("lower-bound", f"{d_dom} vs {d_cod}")
        if n.is_infinite:
            report.add("upper-bound", True, "cd of kernel is infinite")
        else:
            report.add_inconclusive("upper-bound", f"{d_cod} vs {d_dom} + {n}")
    elif d_dom.kind == "at_least" and d_cod.is_exact:
        if d_dom.value > d_cod.value:
            report.add("lower-bound", False, f"{d_dom} > {d_cod}")
        else:
            report.add_inconclusive("lower-bound", f"{d_dom} vs {d_cod}")
        if n.is_infinite or d_cod.value <= d_dom.value + n.value:
            report.add("upper-bound", True, f"{d_cod} <= {d_dom} + {n}")
        else:
            report.add_inconclusive("upper-bound", f"{d_cod} vs {d_dom} + {n}")
    else:
        report.add_inconclusive("lower-bound", f"{d_dom} vs {d_cod}")
        report.add_inconclusive("upper-bound", f"{d_cod} vs {d_dom} + {n}")
    report.add_inconclusive("regrade-preserves-dimension",
                            f"{d_dom} vs {d_cod}: a verdict is not exact")
    return report
