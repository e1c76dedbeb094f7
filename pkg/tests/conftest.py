import pytest

from regrading import (
    Arrow,
    FgAbelianGroup,
    GroupMorphism,
    QuiverPresentation,
    compile_quiver,
)


@pytest.fixture(scope="session")
def Z():
    return FgAbelianGroup(1, ())


@pytest.fixture(scope="session")
def Z2():
    return FgAbelianGroup(2, ())


@pytest.fixture(scope="session")
def triv():
    return FgAbelianGroup(0, ())


@pytest.fixture(scope="session")
def C4():
    return FgAbelianGroup(0, (4,))


@pytest.fixture(scope="session")
def C2():
    return FgAbelianGroup(0, (2,))


@pytest.fixture(scope="session")
def id_Z(Z):
    return GroupMorphism.identity(Z)


@pytest.fixture(scope="session")
def id_Z2(Z2):
    return GroupMorphism.identity(Z2)


@pytest.fixture(scope="session")
def collapse(Z, triv):
    return GroupMorphism(Z, triv, ())


@pytest.fixture(scope="session")
def sum_map(Z2, Z):
    return GroupMorphism(Z2, Z, ((1, 1),))


@pytest.fixture(scope="session")
def red42(C4, C2):
    return GroupMorphism(C4, C2, ((1,),))


@pytest.fixture(scope="session")
def dual_numbers(Z):
    """k[x]/(x^2) with deg x = 1, as a one-loop quiver algebra."""
    q = QuiverPresentation(
        Z, ("v",),
        (Arrow("x", "v", "v", Z.element([1])),),
        (((1, ("x", "x")),),),
    )
    return compile_quiver(q, cap=8)


@pytest.fixture(scope="session")
def kronecker(Z2):
    q = QuiverPresentation(
        Z2, ("1", "2"),
        (Arrow("a", "1", "2", Z2.element([1, 0])),
         Arrow("b", "1", "2", Z2.element([0, 1]))),
        (),
    )
    return compile_quiver(q, cap=8)


@pytest.fixture(scope="session")
def csquare(Z2):
    """Commutative square: two length-two paths identified."""
    q = QuiverPresentation(
        Z2, ("1", "2", "3", "4"),
        (Arrow("a", "1", "2", Z2.element([1, 0])),
         Arrow("b", "2", "4", Z2.element([0, 1])),
         Arrow("c", "1", "3", Z2.element([0, 1])),
         Arrow("d", "3", "4", Z2.element([1, 0]))),
        (((1, ("a", "b")), (-1, ("c", "d"))),),
    )
    return compile_quiver(q, cap=8)


@pytest.fixture(scope="session")
def dual_numbers_c4(C4):
    """k[x]/(x^2) graded by Z/4 with deg x = 1."""
    q = QuiverPresentation(
        C4, ("v",),
        (Arrow("x", "v", "v", C4.element([1])),),
        (((1, ("x", "x")),),),
    )
    return compile_quiver(q, cap=8)
