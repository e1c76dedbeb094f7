import pytest

from regrading import (
    Arrow,
    FgAbelianGroup,
    GradedAlgebra,
    QuiverPresentation,
    compile_quiver,
    validate_algebra,
)
from regrading.linalg import FieldSpec


def test_compile_single_vertex_no_arrows(triv):
    q = QuiverPresentation(triv, ("v",), (), ())
    a = compile_quiver(q)
    assert a.labels == ("e_v",)
    assert a.dim == 1
    assert validate_algebra(a).passed


def test_compile_dual_numbers(dual_numbers, Z):
    a = dual_numbers
    assert a.labels == ("e_v", "x")
    assert a.degrees[1] == Z.element([1])
    assert a.radical == (1,)
    # x * x reduces to zero
    assert all(a.field.is_zero(c) for c in a.mul_basis(1, 1))
    assert validate_algebra(a).passed


def test_compile_kronecker(kronecker):
    a = kronecker
    assert a.labels == ("e_1", "e_2", "a", "b")
    assert a.dim == 4
    assert validate_algebra(a).passed
    # path enumeration: no composable length-two paths
    assert a.radical == (2, 3)


def test_compile_commutative_square(csquare):
    a = csquare
    # four vertices, four arrows, one length-two path after the relation
    assert a.dim == 9
    assert validate_algebra(a).passed
    # the two routes around the square multiply to the same basis element
    ia, ib = a.labels.index("a"), a.labels.index("b")
    ic, id_ = a.labels.index("c"), a.labels.index("d")
    ba = a.mul_basis(ib, ia)
    dc = a.mul_basis(id_, ic)
    assert ba == dc
    assert any(not a.field.is_zero(x) for x in ba)


def test_compile_rejects_inhomogeneous_relation(Z):
    q = QuiverPresentation(
        Z, ("v",),
        (Arrow("x", "v", "v", Z.element([1])), Arrow("y", "v", "v", Z.element([2]))),
        (((1, ("x", "x")), (1, ("y", "y"))),),
    )
    with pytest.raises(ValueError, match="non-homogeneous"):
        compile_quiver(q)


def test_compile_rejects_short_relation(Z):
    q = QuiverPresentation(
        Z, ("v",),
        (Arrow("x", "v", "v", Z.element([1])),),
        (((1, ("x",)),),),
    )
    with pytest.raises(ValueError, match="admissible"):
        compile_quiver(q)


def test_compile_infinite_dimensional_errors(Z):
    q = QuiverPresentation(Z, ("v",), (Arrow("x", "v", "v", Z.element([1])),), ())
    with pytest.raises(ValueError, match="possibly infinite-dimensional"):
        compile_quiver(q, cap=6)


def test_cap_boundary_is_not_an_error(Z):
    # longest path exactly at the cap: dimension certificate still works
    q = QuiverPresentation(
        Z, ("v",),
        (Arrow("x", "v", "v", Z.element([1])),),
        (((1, ("x", "x", "x")),),),
    )
    a = compile_quiver(q, cap=2)
    assert a.dim == 3


def test_completion_resolves_overlaps(Z):
    # x^2 = 0 overlapping itself at x^3 resolves; a genuinely new rule
    # appears for noncommutative relations
    q = QuiverPresentation(
        Z, ("v",),
        (Arrow("x", "v", "v", Z.element([1])), Arrow("y", "v", "v", Z.element([1]))),
        (
            ((1, ("x", "x")),),
            ((1, ("y", "y")),),
            ((1, ("x", "y")), (1, ("y", "x"))),
        ),
    )
    a = compile_quiver(q, cap=4)
    # exterior-algebra-like: e, x, y, xy
    assert a.dim == 4
    assert validate_algebra(a).passed


def test_validate_detects_degree_violation(dual_numbers):
    a = dual_numbers
    bad_structure = list(list(row) for row in a.structure)
    # plant x * x = e: lands in degree 0 instead of 2
    bad_structure[1][1] = (a.field.one, a.field.zero)
    bad = GradedAlgebra(a.field, a.group, a.labels, a.degrees,
                        tuple(tuple(r) for r in bad_structure), a.unit,
                        a.radical, a.vertices)
    report = validate_algebra(bad)
    assert not report.passed
    assert any(kind == "degree-compatibility" and "(1,1)" in detail
               for kind, detail in report.failures)


def test_validate_detects_broken_radical(dual_numbers):
    a = dual_numbers
    # claim the whole algebra is radical: the unit is not nilpotent
    bad = GradedAlgebra(a.field, a.group, a.labels, a.degrees, a.structure,
                        a.unit, radical=(0, 1), vertices=a.vertices)
    report = validate_algebra(bad)
    assert any(kind == "radical-nilpotent" for kind, _ in report.failures)


def test_validate_detects_nonsemisimple_quotient(Z):
    # radical designated as empty on the dual numbers: quotient is not semisimple
    fld = FieldSpec(0)
    z = Z.zero()
    one = Z.element([1])
    structure = (
        ((fld.one, fld.zero), (fld.zero, fld.one)),
        ((fld.zero, fld.one), (fld.zero, fld.zero)),
    )
    bad = GradedAlgebra(fld, Z, ("e", "x"), (z, one), structure,
                        (fld.one, fld.zero), radical=(), vertices=None)
    report = validate_algebra(bad)
    assert any(kind == "quotient-semisimple" for kind, _ in report.failures)


def test_validate_small_characteristic_is_inconclusive_not_silent():
    fld = FieldSpec(2)
    triv = FgAbelianGroup(0, ())
    z = triv.zero()
    # F_2[Z/2] with the radical wrongly declared empty: the trace criterion
    # cannot certify anything in characteristic <= dim
    structure = (
        ((fld.one, fld.zero), (fld.zero, fld.one)),
        ((fld.zero, fld.one), (fld.one, fld.zero)),
    )
    alg = GradedAlgebra(fld, triv, ("e", "u"), (z, z), structure,
                        (fld.one, fld.zero), radical=(), vertices=None)
    report = validate_algebra(alg)
    assert any("inconclusive" in detail for _, detail in report.failures)


def test_opposite_squares_to_identity(kronecker):
    a = kronecker
    opp = a.opposite()
    assert validate_algebra(opp).passed
    assert opp.opposite() == a
    # arrows reverse: in the opposite algebra, arrow a starts at vertex 2
    assert opp.source[2] == a.target[2]


def test_source_and_target_tables(csquare):
    a = csquare
    ia = a.labels.index("a")
    assert a.labels[a.source[ia]] == "e_1"
    assert a.labels[a.target[ia]] == "e_2"
    iba = a.labels.index("b*a")
    assert a.labels[a.source[iba]] == "e_1"
    assert a.labels[a.target[iba]] == "e_4"


def test_compiled_algebra_over_prime_field(Z):
    q = QuiverPresentation(
        Z, ("v",),
        (Arrow("x", "v", "v", Z.element([1])),),
        (((1, ("x", "x")),),),
    )
    a = compile_quiver(q, cap=8, field=FieldSpec(5))
    assert validate_algebra(a).passed
    assert a.field.char == 5
