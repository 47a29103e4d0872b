"""Small algebras used by the scripts, the tests and the bundled JSON documents."""

from __future__ import annotations

from .algebra import Algebra, QuiverPresentation, build_algebra


def field_presentation(p: int = 5) -> QuiverPresentation:
    return QuiverPresentation(("1",), (), (), p)


def linear_a_presentation(n: int, p: int = 5) -> QuiverPresentation:
    """Linear orientation 1 -> 2 -> ... -> n, no relations."""
    verts = tuple(str(i) for i in range(1, n + 1))
    arrows = tuple((f"a{i}", str(i), str(i + 1)) for i in range(1, n))
    return QuiverPresentation(verts, arrows, (), p)


def d4_presentation(p: int = 5) -> QuiverPresentation:
    """Subspace orientation: three arrows into the central vertex 4."""
    return QuiverPresentation(
        ("1", "2", "3", "4"),
        (("a", "1", "4"), ("b", "2", "4"), ("c", "3", "4")),
        (),
        p,
    )


def dual_numbers_presentation(p: int = 3) -> QuiverPresentation:
    """k[x]/(x^2): one loop with its square set to zero."""
    return QuiverPresentation(("1",), (("x", "1", "1"),), (((1, ("x", "x")),),), p)


def kronecker_presentation(p: int = 5) -> QuiverPresentation:
    """Two parallel arrows 1 -> 2; tame, so knitting never closes."""
    return QuiverPresentation(("1", "2"), (("a", "1", "2"), ("b", "1", "2")), (), p)


def field(p: int = 5) -> Algebra:
    return build_algebra(field_presentation(p))


def linear_a(n: int, p: int = 5) -> Algebra:
    return build_algebra(linear_a_presentation(n, p))


def d4(p: int = 5) -> Algebra:
    return build_algebra(d4_presentation(p))


def dual_numbers(p: int = 3) -> Algebra:
    return build_algebra(dual_numbers_presentation(p))


def kronecker(p: int = 5) -> Algebra:
    return build_algebra(kronecker_presentation(p))
