"""Group-graded finite-dimensional algebras.

Two sources: quiver presentations compiled through a length-lex rewriting
system (the preferred route, since the radical is then the arrow ideal),
or raw structure constants with a user-designated radical basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .groups import FgAbelianGroup, GroupElement
from .linalg import FieldSpec, Matrix


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural validation; never raised, always returned."""

    subject: str
    failures: Tuple[Tuple[str, str], ...]  # (check name, detail)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __repr__(self):
        if self.passed:
            return f"ValidationReport({self.subject}: ok)"
        lines = ", ".join(f"{k}: {d}" for k, d in self.failures)
        return f"ValidationReport({self.subject}: {lines})"


@dataclass(frozen=True)
class GradedAlgebra:
    """Finite-dimensional algebra with homogeneous basis and structure constants.

    structure[i][j] is the coefficient vector of basis_i * basis_j.  When
    ``radical`` is set it must span a homogeneous nilpotent two-sided ideal
    with semisimple quotient; ``vertices`` lists the basis indices of the
    primitive orthogonal idempotents (the trivial paths, for compiled
    quivers).
    """

    field: FieldSpec
    group: FgAbelianGroup
    labels: Tuple[str, ...]
    degrees: Tuple[GroupElement, ...]
    structure: Tuple[Tuple[Tuple, ...], ...]
    unit: Tuple
    radical: Optional[Tuple[int, ...]] = None
    vertices: Optional[Tuple[int, ...]] = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def mul_basis(self, i: int, j: int) -> Tuple:
        return self.structure[i][j]

    def mul_vec(self, u: Sequence, w: Sequence) -> Tuple:
        f = self.field
        out = [f.zero] * self.dim
        for i, ui in enumerate(u):
            if f.is_zero(ui):
                continue
            for j, wj in enumerate(w):
                if f.is_zero(wj):
                    continue
                c = f.mul(ui, wj)
                for k, s in enumerate(self.structure[i][j]):
                    if not f.is_zero(s):
                        out[k] = f.add(out[k], f.mul(c, s))
        return tuple(out)

    @cached_property
    def source(self) -> Tuple[int, ...]:
        """source[i] = vertex index v with basis_i * e_v = basis_i."""
        return self._directedness()[0]

    @cached_property
    def target(self) -> Tuple[int, ...]:
        """target[i] = vertex index v with e_v * basis_i = basis_i."""
        return self._directedness()[1]

    def _directedness(self):
        if self.vertices is None:
            raise ValueError("algebra carries no vertex idempotents")
        f = self.field
        src = []
        tgt = []
        for i in range(self.dim):
            s_hits = [v for v in self.vertices if self._is_basis_vec(self.structure[i][v], i)]
            t_hits = [v for v in self.vertices if self._is_basis_vec(self.structure[v][i], i)]
            if len(s_hits) != 1 or len(t_hits) != 1:
                raise ValueError(f"basis element {self.labels[i]} is not directed by the idempotents")
            src.append(s_hits[0])
            tgt.append(t_hits[0])
        return tuple(src), tuple(tgt)

    def _is_basis_vec(self, vec: Sequence, i: int) -> bool:
        f = self.field
        return all((x == f.one) if k == i else f.is_zero(x) for k, x in enumerate(vec))

    def opposite(self) -> "GradedAlgebra":
        """Same basis with reversed multiplication (degrees unchanged)."""
        n = self.dim
        structure = tuple(tuple(self.structure[j][i] for j in range(n)) for i in range(n))
        return GradedAlgebra(self.field, self.group, self.labels, self.degrees,
                             structure, self.unit, self.radical, self.vertices)

    def zero_degree(self) -> GroupElement:
        return self.group.zero()

    def __repr__(self):
        return f"GradedAlgebra(dim={self.dim}, group={self.group})"


# ---------------------------------------------------------------------------
# quiver presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: GroupElement


@dataclass(frozen=True)
class QuiverPresentation:
    """Vertices, degree-carrying arrows, and admissible homogeneous relations.

    Relation paths list arrow names in order of application (first arrow
    first); every relation must be a combination of parallel paths of equal
    degree with each path of length at least two.
    """

    group: FgAbelianGroup
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    relations: Tuple[Tuple[Tuple[object, Tuple[str, ...]], ...], ...] = ()

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise KeyError(f"no arrow named {name}")


def _path_source(q: QuiverPresentation, path: Tuple[int, ...]) -> str:
    return q.arrows[path[0]].source


def _path_target(q: QuiverPresentation, path: Tuple[int, ...]) -> str:
    return q.arrows[path[-1]].target


def _path_degree(q: QuiverPresentation, path: Tuple[int, ...]) -> GroupElement:
    deg = q.group.zero()
    for a in path:
        deg = deg + q.arrows[a].degree
    return deg


def _path_composable(q: QuiverPresentation, path: Tuple[int, ...]) -> bool:
    return all(q.arrows[a].target == q.arrows[b].source for a, b in zip(path, path[1:]))


def _path_key(path: Tuple[int, ...]):
    return (len(path), path)


class _Rewriter:
    """Length-lex rewriting system on paths of a quiver."""

    def __init__(self, q: QuiverPresentation, field: FieldSpec):
        self.q = q
        self.field = field
        self.rules: Dict[Tuple[int, ...], Dict[Tuple[int, ...], object]] = {}

    # polynomials are dicts path -> coeff with zero values dropped

    def _clean(self, poly):
        return {p: c for p, c in poly.items() if not self.field.is_zero(c)}

    def _sub(self, a, b):
        f = self.field
        out = dict(a)
        for p, c in b.items():
            out[p] = f.sub(out.get(p, f.zero), c)
        return self._clean(out)

    def _find_rule(self, path):
        # earliest occurrence of any rule lead as a contiguous subpath
        for start in range(len(path)):
            for lead in self.rules:
                L = len(lead)
                if path[start:start + L] == lead:
                    return start, lead
        return None

    def reduce(self, poly):
        f = self.field
        poly = self._clean(poly)
        while True:
            hit = None
            for p in sorted(poly, key=_path_key, reverse=True):
                found = self._find_rule(p)
                if found is not None:
                    hit = (p, found)
                    break
            if hit is None:
                return poly
            p, (start, lead) = hit
            c = poly.pop(p)
            prefix, suffix = p[:start], p[start + len(lead):]
            for rp, rc in self.rules[lead].items():
                new_path = prefix + rp + suffix
                poly[new_path] = f.add(poly.get(new_path, f.zero), f.mul(c, rc))
            poly = self._clean(poly)

    def poly_to_rule(self, poly):
        """Normalize a nonzero polynomial into (lead, rhs) with lead monic."""
        f = self.field
        lead = max(poly, key=_path_key)
        inv = f.inv(poly[lead])
        rhs = {p: f.neg(f.mul(inv, c)) for p, c in poly.items() if p != lead}
        return lead, rhs

    def add_rule(self, lead, rhs):
        self.rules[lead] = rhs

    def interreduce(self):
        changed = True
        while changed:
            changed = False
            for lead in sorted(self.rules, key=_path_key):
                rhs = self.rules.pop(lead)
                poly = self.reduce(self._sub({lead: self.field.one}, rhs))
                if not poly:
                    changed = True
                    continue
                new_lead, new_rhs = self.poly_to_rule(poly)
                if new_lead != lead or new_rhs != rhs:
                    changed = True
                self.rules[new_lead] = new_rhs
                if changed:
                    break

    def complete(self, max_word: int, max_rounds: int = 200):
        """Resolve all overlap ambiguities on words up to max_word arrows."""
        for _ in range(max_rounds):
            self.interreduce()
            new_rules = []
            leads = sorted(self.rules, key=_path_key)
            for l1 in leads:
                for l2 in leads:
                    for o in range(1, min(len(l1), len(l2))):
                        if l1[len(l1) - o:] != l2[:o]:
                            continue
                        word = l1 + l2[o:]
                        if len(word) > max_word:
                            continue
                        left = {l1[: len(l1) - o] + rp: rc for rp, rc in self.rules[l2].items()}
                        right = {rp + l2[o:]: rc for rp, rc in self.rules[l1].items()}
                        diff = self.reduce(self._sub(right, left))
                        if diff:
                            new_rules.append(self.poly_to_rule(diff))
            if not new_rules:
                return
            for lead, rhs in new_rules:
                if lead not in self.rules:
                    self.rules[lead] = rhs
        raise ValueError("possibly infinite-dimensional; raise cap or add relations")

    def irreducible_paths(self, cap: int) -> List[Tuple[int, ...]]:
        by_source: Dict[str, List[int]] = {}
        for i, a in enumerate(self.q.arrows):
            by_source.setdefault(a.source, []).append(i)
        current = [(i,) for i in range(len(self.q.arrows)) if not self._find_rule((i,))]
        out = list(current)
        length = 1
        while current:
            length += 1
            nxt = []
            for p in current:
                tail_vertex = self.q.arrows[p[-1]].target
                for a in by_source.get(tail_vertex, []):
                    cand = p + (a,)
                    # only suffixes can newly contain a rule lead
                    if any(cand[len(cand) - L:] in self.rules
                           for L in range(2, len(cand) + 1)):
                        continue
                    nxt.append(cand)
            if nxt and length > cap:
                raise ValueError("possibly infinite-dimensional; raise cap or add relations")
            out.extend(nxt)
            current = nxt
        return out


def compile_quiver(q: QuiverPresentation, cap: int = 8,
                   field: FieldSpec = FieldSpec(0)) -> GradedAlgebra:
    """Compile a quiver presentation into a graded algebra.

    The basis consists of the trivial paths followed by the paths
    irreducible under the completed rewriting system, ordered length-lex.
    The radical is spanned by the paths of positive length.
    """
    names = set()
    for a in q.arrows:
        if a.source not in q.vertices or a.target not in q.vertices:
            raise ValueError(f"arrow {a.name} uses an unknown vertex")
        if a.name in names:
            raise ValueError(f"duplicate arrow name {a.name}")
        names.add(a.name)
        if a.degree.group != q.group:
            raise ValueError(f"arrow {a.name} degree lies in the wrong group")

    rw = _Rewriter(q, field)
    for rel in q.relations:
        poly = {}
        sig = None
        for coeff, path_names in rel:
            path = tuple(q.arrow_index(n) for n in path_names)
            if not path or not _path_composable(q, path):
                raise ValueError(f"relation path {path_names} is not composable")
            if len(path) < 2:
                raise ValueError(f"relation path {path_names} is not admissible (length < 2)")
            this_sig = (_path_source(q, path), _path_target(q, path), _path_degree(q, path))
            if sig is None:
                sig = this_sig
            elif this_sig[:2] != sig[:2]:
                raise ValueError("relation mixes non-parallel paths")
            elif this_sig[2] != sig[2]:
                raise ValueError("non-homogeneous relation")
            poly[path] = field.add(poly.get(path, field.zero), field.of(coeff))
        poly = rw._clean(poly)
        if poly:
            lead, rhs = rw.poly_to_rule(poly)
            rw.add_rule(lead, rhs)

    rw.complete(max_word=2 * cap)
    paths = rw.irreducible_paths(cap)
    paths.sort(key=_path_key)

    trivial = [("e", v) for v in q.vertices]
    basis: List[object] = trivial + paths
    n = len(basis)
    index = {b: i for i, b in enumerate(basis)}

    def label_of(b):
        if isinstance(b, tuple) and b and b[0] == "e":
            return f"e_{b[1]}"
        return "*".join(q.arrows[a].name for a in reversed(b))

    def degree_of(b):
        if b[0] == "e":
            return q.group.zero()
        return _path_degree(q, b)

    def src_of(b):
        return b[1] if b[0] == "e" else _path_source(q, b)

    def tgt_of(b):
        return b[1] if b[0] == "e" else _path_target(q, b)

    zero_vec = tuple(field.zero for _ in range(n))

    def vec_of_poly(poly) -> Tuple:
        out = list(zero_vec)
        for p, c in poly.items():
            if p not in index:
                raise AssertionError(f"reduction produced a non-basis path {p}")
            out[index[p]] = c
        return tuple(out)

    structure = []
    for bi in basis:
        row = []
        for bj in basis:
            # product bi * bj applies bj first
            if tgt_of(bj) != src_of(bi):
                row.append(zero_vec)
                continue
            if bi[0] == "e" and bj[0] == "e":
                out = list(zero_vec)
                out[index[bj]] = field.one
                row.append(tuple(out))
            elif bi[0] == "e":
                out = list(zero_vec)
                out[index[bj]] = field.one
                row.append(tuple(out))
            elif bj[0] == "e":
                out = list(zero_vec)
                out[index[bi]] = field.one
                row.append(tuple(out))
            else:
                prod = rw.reduce({bj + bi: field.one})
                row.append(vec_of_poly(prod))
        structure.append(tuple(row))

    unit = list(zero_vec)
    for v in q.vertices:
        unit[index[("e", v)]] = field.one

    return GradedAlgebra(
        field=field,
        group=q.group,
        labels=tuple(label_of(b) for b in basis),
        degrees=tuple(degree_of(b) for b in basis),
        structure=tuple(structure),
        unit=tuple(unit),
        radical=tuple(range(len(trivial), n)),
        vertices=tuple(range(len(trivial))),
    )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_algebra(a: GradedAlgebra) -> ValidationReport:
    """Check every structural invariant; failures are reported, not raised."""
    f = a.field
    fails: List[Tuple[str, str]] = []
    n = a.dim

    if len(a.degrees) != n or len(a.unit) != n or len(a.structure) != n \
            or any(len(row) != n for row in a.structure) \
            or any(len(v) != n for row in a.structure for v in row):
        fails.append(("shape", "structure constant grid does not match the basis"))
        return ValidationReport("algebra", tuple(fails))

    for i in range(n):
        for j in range(n):
            want = a.degrees[i] + a.degrees[j]
            for k, c in enumerate(a.structure[i][j]):
                if not f.is_zero(c) and a.degrees[k] != want:
                    fails.append(("degree-compatibility",
                                  f"product ({i},{j}) hits basis {k} of wrong degree"))
                    break

    for i in range(n):
        for j in range(n):
            ij = a.structure[i][j]
            for k in range(n):
                left = a.mul_vec(ij, _basis_vec(f, n, k))
                right = a.mul_vec(_basis_vec(f, n, i), a.structure[j][k])
                if left != right:
                    fails.append(("associativity", f"triple ({i},{j},{k})"))

    for i in range(n):
        e_i = _basis_vec(f, n, i)
        if a.mul_vec(a.unit, e_i) != e_i or a.mul_vec(e_i, a.unit) != e_i:
            fails.append(("unit", f"unit fails on basis {i}"))
    zero_deg = a.group.zero()
    for k, c in enumerate(a.unit):
        if not f.is_zero(c) and a.degrees[k] != zero_deg:
            fails.append(("unit", f"unit has a component of nontrivial degree at basis {k}"))

    if a.radical is not None:
        fails.extend(_validate_radical(a))
    if a.vertices is not None:
        fails.extend(_validate_vertices(a))

    return ValidationReport("algebra", tuple(fails))


def _basis_vec(f: FieldSpec, n: int, i: int) -> Tuple:
    return tuple(f.one if k == i else f.zero for k in range(n))


def _validate_radical(a: GradedAlgebra) -> List[Tuple[str, str]]:
    f = a.field
    n = a.dim
    fails: List[Tuple[str, str]] = []
    rad = set(a.radical)

    def in_radical_span(vec) -> bool:
        return all(f.is_zero(c) for k, c in enumerate(vec) if k not in rad)

    for i in range(n):
        for j in range(n):
            if (i in rad or j in rad) and not in_radical_span(a.structure[i][j]):
                fails.append(("radical-ideal", f"product ({i},{j}) leaves the radical"))

    # nilpotency by powering the ideal's spanning set
    current = [_basis_vec(f, n, i) for i in sorted(rad)]
    for _ in range(n + 1):
        if not current:
            break
        nxt = []
        for u in current:
            for i in sorted(rad):
                v = a.mul_vec(_basis_vec(f, n, i), u)
                if any(not f.is_zero(c) for c in v):
                    nxt.append(v)
        if not nxt:
            current = []
            break
        mat = Matrix.from_rows(f, nxt)
        basis = mat.transpose().column_space_basis().transpose()
        current = [row for row in basis.entries]
    if current:
        fails.append(("radical-nilpotent", "designated radical is not nilpotent"))

    # semisimplicity of the quotient via the trace form of left multiplication
    comp = [i for i in range(n) if i not in rad]
    m = len(comp)
    if m:
        pos = {b: idx for idx, b in enumerate(comp)}
        left_ops = []
        for i in comp:
            op = [[f.zero] * m for _ in range(m)]
            for j in comp:
                for k, c in enumerate(a.structure[i][j]):
                    if k in pos and not f.is_zero(c):
                        op[pos[k]][pos[j]] = c
            left_ops.append(Matrix.from_rows(f, op))
        gram = []
        for x in left_ops:
            row = []
            for y in left_ops:
                prod = x @ y
                tr = f.zero
                for t in range(m):
                    tr = f.add(tr, prod.entries[t][t])
                row.append(tr)
            gram.append(row)
        g = Matrix.from_rows(f, gram)
        if g.rank() != m:
            if f.char == 0 or f.char > m:
                fails.append(("quotient-semisimple", "trace form of A/J is degenerate"))
            else:
                fails.append(("quotient-semisimple",
                              f"trace criterion inconclusive in characteristic {f.char} <= dim {m};"
                              " provide a quiver presentation"))
    return fails


def _validate_vertices(a: GradedAlgebra) -> List[Tuple[str, str]]:
    f = a.field
    n = a.dim
    fails: List[Tuple[str, str]] = []
    vs = list(a.vertices)
    for v in vs:
        for w in vs:
            prod = a.structure[v][w]
            want = _basis_vec(f, n, v) if v == w else tuple(f.zero for _ in range(n))
            if prod != want:
                fails.append(("vertex-idempotents", f"e_{v} * e_{w} is not {'e' if v == w else '0'}"))
    total = [f.zero] * n
    for v in vs:
        total[v] = f.add(total[v], f.one)
    if tuple(total) != tuple(a.unit):
        fails.append(("vertex-idempotents", "idempotents do not sum to the unit"))
    try:
        a.source, a.target
    except ValueError as exc:
        fails.append(("vertex-directed", str(exc)))
    return fails
