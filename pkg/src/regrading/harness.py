"""Structured input documents, randomized fixtures, and batch campaigns.

A document is a JSON object with named sections (groups, morphisms,
quivers, algebras, modules, jobs).  Everything is resolved and validated
before any computation runs; reports are deterministic for a fixed
(document, seed) pair, and their digest covers all inputs.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import GradedAlgebra, QuiverPresentation, Arrow, compile_quiver, validate_algebra
from .functors import (
    adjunction_witness,
    decomposition_iso,
    product_decomposition_check,
    pullback,
    pushforward,
    coinduction,
    rank1_regrade_resolution,
    regrade_algebra,
)
from .groups import FgAbelianGroup, GroupElement, GroupMorphism, kernel
from .homology import (
    DEFAULT_CAP,
    ext_table,
    graded_injective_dimension,
    graded_injectives,
    minimal_resolution,
    nonminimal_free_resolution,
    projective_bundle,
    simple_module,
    verify_acyclicity,
    verify_inequality,
)
from .linalg import FieldSpec
from .modules import (
    GradedModule,
    cokernel_map,
    dual,
    projective_module,
    shift,
    submodule_generated,
    validate_module,
    zero_module,
)
from .pid import verify_sharpness
from .reporting import FAIL, INCONCLUSIVE, VerificationReport


class DocumentError(ValueError):
    """Parse or validation failure, with section/name provenance."""

    def __init__(self, section: str, name: str, message: str):
        self.section = section
        self.name = name
        super().__init__(f"[{section}/{name}] {message}")


@dataclass
class ResolvedDocument:
    raw: dict
    groups: Dict[str, FgAbelianGroup] = field(default_factory=dict)
    morphisms: Dict[str, GroupMorphism] = field(default_factory=dict)
    quivers: Dict[str, QuiverPresentation] = field(default_factory=dict)
    algebras: Dict[str, GradedAlgebra] = field(default_factory=dict)
    modules: Dict[str, GradedModule] = field(default_factory=dict)
    module_algebra_names: Dict[str, str] = field(default_factory=dict)
    jobs: List[dict] = field(default_factory=list)

    def algebra_of_morphism_domain(self, module_name: str) -> GradedAlgebra:
        return self.modules[module_name].algebra


def _coeff(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


def _element(group: FgAbelianGroup, coords, section: str, name: str) -> GroupElement:
    if not isinstance(coords, list) or len(coords) != group.ngens:
        raise DocumentError(section, name,
                            f"degree needs {group.ngens} integer coordinates, got {coords!r}")
    return group.element(coords)


def parse_and_validate(doc: dict) -> ResolvedDocument:
    """Build and validate every named object; raise DocumentError on the
    first unresolved reference or invariant violation."""
    if not isinstance(doc, dict):
        raise DocumentError("document", "-", "top level must be a JSON object")
    resolved = ResolvedDocument(raw=doc)

    for name, spec in (doc.get("groups") or {}).items():
        try:
            resolved.groups[name] = FgAbelianGroup(spec.get("rank", 0),
                                                   tuple(spec.get("torsion", [])))
        except (ValueError, AttributeError) as exc:
            raise DocumentError("groups", name, str(exc)) from exc

    for name, spec in (doc.get("morphisms") or {}).items():
        dom = resolved.groups.get(spec.get("domain"))
        cod = resolved.groups.get(spec.get("codomain"))
        if dom is None or cod is None:
            raise DocumentError("morphisms", name, "unresolved domain or codomain group")
        try:
            matrix = tuple(tuple(row) for row in spec.get("matrix", []))
            if not matrix and cod.ngens:
                matrix = tuple(tuple(0 for _ in range(dom.ngens)) for _ in range(cod.ngens))
            if cod.ngens == 0:
                matrix = ()
            resolved.morphisms[name] = GroupMorphism(dom, cod, matrix)
        except ValueError as exc:
            raise DocumentError("morphisms", name, str(exc)) from exc

    for name, spec in (doc.get("quivers") or {}).items():
        group = resolved.groups.get(spec.get("group"))
        if group is None:
            raise DocumentError("quivers", name, f"unresolved group {spec.get('group')!r}")
        try:
            arrows = tuple(
                Arrow(a["name"], a["source"], a["target"],
                      _element(group, a["degree"], "quivers", name))
                for a in spec.get("arrows", []))
            relations = tuple(
                tuple((_coeff(c), tuple(p)) for c, p in rel)
                for rel in spec.get("relations", []))
            resolved.quivers[name] = QuiverPresentation(
                group, tuple(spec.get("vertices", [])), arrows, relations)
        except (KeyError, ValueError) as exc:
            raise DocumentError("quivers", name, str(exc)) from exc

    for name, spec in (doc.get("algebras") or {}).items():
        resolved.algebras[name] = _build_algebra(resolved, name, spec)
        report = validate_algebra(resolved.algebras[name])
        if not report.passed:
            raise DocumentError("algebras", name, f"validation failed: {report.failures}")

    for name, spec in (doc.get("modules") or {}).items():
        module, alg_name = _build_module(resolved, name, spec)
        report = validate_module(module)
        if not report.passed:
            raise DocumentError("modules", name, f"validation failed: {report.failures}")
        resolved.modules[name] = module
        resolved.module_algebra_names[name] = alg_name

    for i, job in enumerate(doc.get("jobs") or []):
        if "kind" not in job:
            raise DocumentError("jobs", str(i), "job without a kind")
        entry = dict(job)
        entry.setdefault("id", f"job-{i}-{job['kind']}")
        _check_job_references(resolved, entry)
        resolved.jobs.append(entry)

    return resolved


def _build_algebra(resolved: ResolvedDocument, name: str, spec: dict) -> GradedAlgebra:
    fld = FieldSpec(spec.get("char", 0))
    if "quiver" in spec:
        q = resolved.quivers.get(spec["quiver"])
        if q is None:
            raise DocumentError("algebras", name, f"unresolved quiver {spec['quiver']!r}")
        try:
            return compile_quiver(q, cap=spec.get("cap", DEFAULT_CAP), field=fld)
        except ValueError as exc:
            raise DocumentError("algebras", name, str(exc)) from exc
    if "regrade" in spec:
        base = resolved.algebras.get(spec["regrade"].get("algebra"))
        phi = resolved.morphisms.get(spec["regrade"].get("morphism"))
        if base is None or phi is None:
            raise DocumentError("algebras", name, "unresolved base algebra or morphism")
        return regrade_algebra(base, phi)
    if "raw" in spec:
        raw = spec["raw"]
        group = resolved.groups.get(raw.get("group"))
        if group is None:
            raise DocumentError("algebras", name, f"unresolved group {raw.get('group')!r}")
        try:
            labels = tuple(raw["labels"])
            degrees = tuple(_element(group, d, "algebras", name) for d in raw["degrees"])
            structure = tuple(
                tuple(tuple(fld.of(_coeff(x)) for x in vec) for vec in row)
                for row in raw["structure"])
            unit = tuple(fld.of(_coeff(x)) for x in raw["unit"])
            radical = tuple(raw["radical"]) if raw.get("radical") is not None else None
            vertices = tuple(raw["vertices"]) if raw.get("vertices") is not None else None
            return GradedAlgebra(fld, group, labels, degrees, structure, unit,
                                 radical, vertices)
        except (KeyError, ValueError) as exc:
            raise DocumentError("algebras", name, str(exc)) from exc
    raise DocumentError("algebras", name, "need one of: quiver, regrade, raw")


def _vertex_index(algebra: GradedAlgebra, label: str, section: str, name: str) -> int:
    for v in algebra.vertices or ():
        if algebra.labels[v] == f"e_{label}" or algebra.labels[v] == label:
            return v
    raise DocumentError(section, name, f"no vertex named {label!r}")


def _build_module(resolved: ResolvedDocument, name: str, spec: dict) -> Tuple[GradedModule, str]:
    kind = spec.get("construct", "raw")

    if kind in ("shift", "dual", "pushforward", "coinduction"):
        base_name = spec.get("module")
        base = resolved.modules.get(base_name)
        if base is None:
            raise DocumentError("modules", name, f"unresolved module {base_name!r}")
        if kind == "shift":
            g = _element(base.algebra.group, spec.get("degree", []), "modules", name)
            return shift(base, g), resolved.module_algebra_names[base_name]
        if kind == "dual":
            return dual(base), f"{resolved.module_algebra_names[base_name]}^op"
        phi = resolved.morphisms.get(spec.get("morphism"))
        if phi is None:
            raise DocumentError("modules", name, f"unresolved morphism {spec.get('morphism')!r}")
        fn = pushforward if kind == "pushforward" else coinduction
        return fn(base, phi), f"{resolved.module_algebra_names[base_name]}@{spec.get('morphism')}"

    alg_name = spec.get("algebra")
    algebra = resolved.algebras.get(alg_name)
    if algebra is None:
        raise DocumentError("modules", name, f"unresolved algebra {alg_name!r}")

    if kind == "zero":
        return zero_module(algebra), alg_name
    if kind in ("projective", "simple", "injective"):
        v = _vertex_index(algebra, spec.get("vertex", ""), "modules", name)
        g = _element(algebra.group, spec.get("degree", [0] * algebra.group.ngens),
                     "modules", name)
        if kind == "projective":
            return shift(projective_module(algebra, v), -g), alg_name
        if kind == "simple":
            return simple_module(algebra, v, g), alg_name
        inj = dual(projective_module(algebra.opposite(), v))
        return shift(inj, -g), alg_name
    if kind == "random":
        mod = random_module(algebra, spec.get("seed", 0),
                            spec.get("max_dim", 6), spec.get("support_radius", 2))
        return mod, alg_name
    if kind == "raw":
        try:
            dims = {}
            for comp in spec["components"]:
                g = _element(algebra.group, comp["degree"], "modules", name)
                dims[g] = comp["dim"]
            action = {}
            for act in spec.get("action", []):
                g = _element(algebra.group, act["degree"], "modules", name)
                i = act["basis"]
                from .linalg import Matrix
                action[(i, g)] = Matrix.from_rows(
                    algebra.field, [[_coeff(x) for x in row] for row in act["matrix"]])
            from .modules import module_from_dims
            return module_from_dims(algebra, dims, action), alg_name
        except (KeyError, ValueError) as exc:
            raise DocumentError("modules", name, str(exc)) from exc
    raise DocumentError("modules", name, f"unknown module construct {kind!r}")


_JOB_REFS = {
    "module": "modules",
    "comodule": "modules",
    "target": "modules",
    "morphism": "morphisms",
    "algebra": "algebras",
}


def _check_job_references(resolved: ResolvedDocument, job: dict) -> None:
    for key, section in _JOB_REFS.items():
        if key in job:
            table = getattr(resolved, section)
            if job[key] not in table:
                raise DocumentError("jobs", job["id"],
                                    f"unresolved {key} reference {job[key]!r}")


# ---------------------------------------------------------------------------
# randomized fixtures
# ---------------------------------------------------------------------------

def _random_degree(group: FgAbelianGroup, rng: random.Random, radius: int) -> GroupElement:
    coords = [rng.randint(-radius, radius) for _ in range(group.rank)]
    coords += [rng.randrange(m) for m in group.torsion]
    return group.element(coords)


def random_module(algebra: GradedAlgebra, seed: int, max_dim: int = 6,
                  support_radius: int = 2, retries: int = 64) -> GradedModule:
    """A random quotient of a random sum of shifted vertex projectives.

    Every module arises this way, every output passes validation, and the
    result is a pure function of (algebra, seed, max_dim, support_radius).
    """
    if max_dim == 0:
        return zero_module(algebra)
    rng = random.Random(f"regrading:{seed}:{max_dim}:{support_radius}")
    for _ in range(retries):
        n_gens = rng.randint(1, 2)
        summands = [(rng.choice(list(algebra.vertices)),
                     _random_degree(algebra.group, rng, support_radius))
                    for _ in range(n_gens)]
        bundle = projective_bundle(algebra, summands)
        free = bundle.module
        n_rels = rng.randint(0, 3)
        gens = []
        supp = free.support()
        for _ in range(n_rels):
            g = supp[rng.randrange(len(supp))]
            vec = [rng.randint(-2, 2) for _ in range(free.dim_at(g))]
            gens.append((g, vec))
        sub, incl = submodule_generated(free, gens)
        quotient, _ = cokernel_map(incl)
        if 1 <= quotient.total_dim <= max_dim:
            report = validate_module(quotient)
            if not report.passed:
                raise AssertionError(f"generated module failed validation: {report}")
            return quotient
    raise ValueError("no valid module found within retry budget")


def kernel_window(phi: GroupMorphism, radius: int) -> List[GroupElement]:
    """Kernel elements with free coordinates in [-radius, radius]."""
    import itertools

    ker_group, incl = kernel(phi)
    ranges = [range(-radius, radius + 1)] * ker_group.rank + \
             [range(m) for m in ker_group.torsion]
    out = [incl.apply(ker_group.element(list(c))) for c in itertools.product(*ranges)]
    return sorted(out, key=lambda g: g.sort_key())


# ---------------------------------------------------------------------------
# campaigns
# ---------------------------------------------------------------------------

@dataclass
class CampaignReport:
    seed: int
    inputs_digest: str
    job_results: List[dict]
    timings: Optional[Dict[str, float]] = None

    @property
    def failed_checks(self) -> int:
        return sum(j["failed"] for j in self.job_results)

    @property
    def inconclusive_checks(self) -> int:
        return sum(j["inconclusive"] for j in self.job_results)

    @property
    def passed(self) -> bool:
        return self.failed_checks == 0

    def to_dict(self) -> dict:
        out = {
            "schema": "regrading-report/1",
            "seed": self.seed,
            "inputs_digest": self.inputs_digest,
            "jobs": self.job_results,
            "summary": {
                "jobs": len(self.job_results),
                "checks": sum(len(j["checks"]) for j in self.job_results),
                "failed": self.failed_checks,
                "inconclusive": self.inconclusive_checks,
                "passed": self.passed,
            },
            "timings": {"recorded": self.timings is not None,
                        **({"seconds": self.timings} if self.timings is not None else {})},
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def table(self) -> str:
        lines = []
        for j in self.job_results:
            status = "FAIL" if j["failed"] else ("ok  " if not j["inconclusive"] else "ok? ")
            lines.append(f"{status} {j['id']}: {len(j['checks'])} checks,"
                         f" {j['failed']} failed, {j['inconclusive']} inconclusive")
        lines.append(f"total: {self.failed_checks} failed,"
                     f" {self.inconclusive_checks} inconclusive")
        return "\n".join(lines)


def document_digest(doc: dict, seed: int) -> str:
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(f"{canon}|seed={seed}".encode()).hexdigest()


def _job_seed(seed: int, job_id: str) -> int:
    digest = hashlib.sha256(f"{seed}:{job_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def run_campaign(resolved: ResolvedDocument, seed: int = 0,
                 include_timings: bool = False, default_cap: int = DEFAULT_CAP) -> CampaignReport:
    """Execute every declared job in order; failures make the campaign fail,
    inconclusive outcomes are counted but never fail it."""
    job_results = []
    timings: Dict[str, float] = {}
    for job in resolved.jobs:
        t0 = time.perf_counter()
        reports = _run_job(resolved, job, _job_seed(seed, job["id"]), default_cap)
        elapsed = time.perf_counter() - t0
        checks = [c.to_dict() for r in reports for c in r.checks]
        job_results.append({
            "id": job["id"],
            "kind": job["kind"],
            "checks": checks,
            "failed": sum(1 for c in checks if c["outcome"] == FAIL),
            "inconclusive": sum(1 for c in checks if c["outcome"] == INCONCLUSIVE),
        })
        timings[job["id"]] = elapsed
    return CampaignReport(
        seed=seed,
        inputs_digest=document_digest(resolved.raw, seed),
        job_results=job_results,
        timings=timings if include_timings else None,
    )


def _job_error_report(job_id: str, exc: Exception) -> VerificationReport:
    report = VerificationReport(f"job {job_id}")
    report.add("job-executes", False, f"{type(exc).__name__}: {exc}")
    return report


def _run_job(resolved: ResolvedDocument, job: dict, job_seed: int,
             default_cap: int) -> List[VerificationReport]:
    try:
        return _dispatch_job(resolved, job, job_seed, default_cap)
    except Exception as exc:  # captured per job, reported as a failure
        return [_job_error_report(job["id"], exc)]


def _random_pool(resolved, job, job_seed, algebra, count):
    return [random_module(algebra, seed=job_seed + i,
                          max_dim=job.get("max_dim", 6),
                          support_radius=job.get("support_radius", 2))
            for i in range(count)]


def _dispatch_job(resolved: ResolvedDocument, job: dict, job_seed: int,
                  default_cap: int) -> List[VerificationReport]:
    kind = job["kind"]
    cap = job.get("cap", default_cap)

    if kind == "pid-demo":
        return [verify_sharpness()]

    if kind == "inequality":
        m = resolved.modules[job["module"]]
        phi = resolved.morphisms[job["morphism"]]
        report = verify_inequality(m, phi, cap)
        _apply_expectations(report, job, m, phi, cap)
        return [report]

    if kind == "random-inequality":
        algebra = resolved.algebras[job["algebra"]]
        phi = resolved.morphisms[job["morphism"]]
        out = []
        for i, m in enumerate(_random_pool(resolved, job, job_seed, algebra,
                                           job.get("count", 10))):
            r = verify_inequality(m, phi, cap)
            r.title = f"{r.title}[{i}]"
            out.append(r)
        return out

    if kind == "adjunction":
        m = resolved.modules[job["module"]]
        n = resolved.modules[job["comodule"]]
        phi = resolved.morphisms[job["morphism"]]
        return [adjunction_witness(m, n, phi).report]

    if kind == "random-adjunction":
        algebra = resolved.algebras[job["algebra"]]
        phi = resolved.morphisms[job["morphism"]]
        regraded = regrade_algebra(algebra, phi)
        count = job.get("count", 10)
        out = []
        for i in range(count):
            m = random_module(algebra, seed=job_seed + 2 * i,
                              max_dim=job.get("max_dim", 5),
                              support_radius=job.get("support_radius", 1))
            n = random_module(regraded, seed=job_seed + 2 * i + 1,
                              max_dim=job.get("max_dim", 5),
                              support_radius=job.get("support_radius", 1))
            r = adjunction_witness(m, n, phi).report
            r.title = f"{r.title}[{i}]"
            out.append(r)
        return out

    if kind == "lemma":
        m = resolved.modules[job["module"]]
        phi = resolved.morphisms[job["morphism"]]
        window = _lemma_window(phi, job.get("window"))
        _, report = decomposition_iso(m, phi, window)
        return [report]

    if kind == "random-lemma":
        algebra = resolved.algebras[job["algebra"]]
        phi = resolved.morphisms[job["morphism"]]
        window = _lemma_window(phi, job.get("window"))
        out = []
        for i, m in enumerate(_random_pool(resolved, job, job_seed, algebra,
                                           job.get("count", 10))):
            _, r = decomposition_iso(m, phi, window)
            r.title = f"{r.title}[{i}]"
            out.append(r)
        return out

    if kind == "product-decomposition":
        m = resolved.modules[job["module"]]
        phi = resolved.morphisms[job["morphism"]]
        return [product_decomposition_check(m, phi)]

    if kind == "resolution":
        n = resolved.modules[job["module"]]
        phi = resolved.morphisms[job["morphism"]]
        domain_algebra = resolved.algebras[job["algebra"]]
        return [rank1_regrade_resolution(n, phi, domain_algebra,
                                         job.get("window", 4)).report]

    if kind == "random-resolution":
        domain_algebra = resolved.algebras[job["algebra"]]
        phi = resolved.morphisms[job["morphism"]]
        regraded = regrade_algebra(domain_algebra, phi)
        out = []
        for i, n in enumerate(_random_pool(resolved, job, job_seed, regraded,
                                           job.get("count", 5))):
            r = rank1_regrade_resolution(n, phi, domain_algebra,
                                         job.get("window", 4)).report
            r.title = f"{r.title}[{i}]"
            out.append(r)
        return out

    if kind == "acyclicity":
        algebra = resolved.algebras[job["algebra"]]
        phi = resolved.morphisms[job["morphism"]]
        out = []
        injectives = graded_injectives(algebra)
        for v in algebra.vertices:
            s = simple_module(algebra, v)
            for w, inj in zip(algebra.vertices, injectives):
                r = verify_acyclicity(s, inj, phi, cap)
                r.title = (f"acyclicity simple={algebra.labels[v]}"
                           f" injective={algebra.labels[w]}")
                out.append(r)
        return out

    if kind == "resolution-independence":
        if "module" in job:
            pairs = [(resolved.modules[job["module"]], resolved.modules[job["target"]])]
        else:
            algebra = resolved.algebras[job["algebra"]]
            count = job.get("count", 5)
            pairs = [(random_module(algebra, seed=job_seed + 2 * i,
                                    max_dim=job.get("max_dim", 5),
                                    support_radius=job.get("support_radius", 1)),
                      random_module(algebra, seed=job_seed + 2 * i + 1,
                                    max_dim=job.get("max_dim", 5),
                                    support_radius=job.get("support_radius", 1)))
                     for i in range(count)]
        max_i = job.get("max_degree", 4)
        out = []
        for i, (m, n) in enumerate(pairs):
            report = VerificationReport(f"resolution-independence[{i}]")
            res_min = minimal_resolution(m, max_i + 1)
            res_free = nonminimal_free_resolution(m, max_i + 1)
            t_min = ext_table(m, n, max_i, resolution=res_min)
            t_free = ext_table(m, n, max_i, resolution=res_free)
            for a, b in zip(t_min, t_free):
                name = f"ext{a.degree} agrees"
                if a.conditional or b.conditional:
                    report.add_inconclusive(name, "a resolution was truncated")
                else:
                    report.add(name, a.dim == b.dim, f"{a.dim} vs {b.dim}")
            out.append(report)
        return out

    if kind == "injdim":
        m = resolved.modules[job["module"]]
        verdict = graded_injective_dimension(m, cap)
        report = VerificationReport(f"injdim {job['module']}")
        report.add("computed", True, repr(verdict))
        if "expect" in job:
            report.add("expected-dimension",
                       verdict.is_exact and verdict.value == job["expect"],
                       f"got {verdict}, expected exact({job['expect']})")
        return [report]

    if kind == "ext":
        m = resolved.modules[job["module"]]
        n = resolved.modules[job["target"]]
        i = job.get("degree", 1)
        entry = ext_table(m, n, i, cap)[i]
        report = VerificationReport(f"ext^{i}")
        report.add("computed", True,
                   f"dim {entry.dim}{' (conditional)' if entry.conditional else ''}")
        if "expect" in job:
            if entry.conditional:
                report.add_inconclusive("expected-dimension", "truncated resolution")
            else:
                report.add("expected-dimension", entry.dim == job["expect"],
                           f"got {entry.dim}, expected {job['expect']}")
        return [report]

    raise DocumentError("jobs", job["id"], f"unknown job kind {kind!r}")


def _apply_expectations(report: VerificationReport, job: dict, m, phi, cap) -> None:
    if "expect_graded" in job:
        verdict = graded_injective_dimension(m, cap)
        report.add("expected-graded-dimension",
                   verdict.is_exact and verdict.value == job["expect_graded"],
                   f"got {verdict}, expected exact({job['expect_graded']})")
    if "expect_regraded" in job:
        verdict = graded_injective_dimension(pushforward(m, phi), cap)
        report.add("expected-regraded-dimension",
                   verdict.is_exact and verdict.value == job["expect_regraded"],
                   f"got {verdict}, expected exact({job['expect_regraded']})")


def _lemma_window(phi: GroupMorphism, radius: Optional[int]):
    ker_group, _ = kernel(phi)
    if ker_group.is_finite:
        return None
    if radius is None:
        radius = 4
    return kernel_window(phi, radius)
