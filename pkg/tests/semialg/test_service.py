import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from symred.errors import ArityMismatchError
from symred.polycore import poly_parse
from symred.semialg import (
    CasimirIndexError,
    MaximalRankUnavailableError,
    MissingMomentumError,
    NotInSetError,
    PointClass,
    SemiAlgebraicSet,
    classify_point,
    estimate_maximal_rank,
    membership,
    orbit_space,
    project_onto_relations,
    reduced_space,
    relation_rank,
    to_fraction,
)

SCALED = ("v1", "v2", "v3", "v4")
ELLIPTOPE = "v4^2 - 1 - 2*v1*v2*v3 + v1^2 + v2^2 + v3^2"


def elliptope_set(**kwargs) -> SemiAlgebraicSet:
    return SemiAlgebraicSet(SCALED, (poly_parse(ELLIPTOPE, SCALED),), **kwargs)


def test_to_fraction() -> None:
    assert to_fraction(0.1) == Fraction(1, 10)
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(-2) == Fraction(-2)


def test_membership_reports_residuals(cotangent) -> None:
    space = orbit_space(cotangent)
    report = membership(space, [1.0, 1.0, 0.0, 1.0])
    assert report.in_set
    assert report.relation_residuals == (0.0,)
    assert report.inequality_values == (1.0, 1.0, 1.0)

    outside = membership(space, [1.0, 1.0, 0.0, 2.0])
    assert not outside.in_set
    assert outside.relation_residuals == (1.0,)
    assert not membership(space, [-1.0, -1.0, 0.0, 1.0]).in_set


def test_membership_validates_input(cotangent) -> None:
    space = orbit_space(cotangent)
    with pytest.raises(ArityMismatchError):
        membership(space, [1.0, 2.0])
    with pytest.raises(ValueError, match="tol"):
        membership(space, [1.0, 1.0, 0.0, 1.0], tol=0.0)


def test_relation_rank_ignores_relation_scaling() -> None:
    point = [0.0, 0.0, 0.0, 1.0]
    plain = elliptope_set()
    scaled = SemiAlgebraicSet(SCALED, (poly_parse(ELLIPTOPE, SCALED).scale(10**6),))
    tiny = SemiAlgebraicSet(SCALED, (poly_parse(ELLIPTOPE, SCALED).scale(Fraction(1, 10**6)),))
    assert relation_rank(plain, point) == 1
    assert relation_rank(scaled, point) == 1
    assert relation_rank(tiny, point) == 1
    assert relation_rank(SemiAlgebraicSet(SCALED), point) == 0


def test_classify_diagonal_origin(diagonal_r9) -> None:
    result = classify_point(orbit_space(diagonal_r9), np.zeros(7))
    assert result.verdict is PointClass.SINGULAR
    assert result.rank == 0
    assert result.maximal_rank == 1


def test_classify_elliptope_points(scaled) -> None:
    space = orbit_space(scaled)
    corner = classify_point(space, [1.0, 1.0, 1.0, 0.0])
    assert corner.verdict is PointClass.SINGULAR
    assert corner.rank == 0
    pole = classify_point(space, [0.0, 0.0, 0.0, 1.0])
    assert pole.verdict is PointClass.NONSINGULAR
    assert pole.rank == 1


def test_classify_rejects_points_outside(scaled) -> None:
    with pytest.raises(NotInSetError) as excinfo:
        classify_point(orbit_space(scaled), [0.0, 0.0, 0.0, 2.0])
    assert excinfo.value.point == (0.0, 0.0, 0.0, 2.0)
    assert not excinfo.value.report.in_set


def test_project_onto_relations_lands_on_set() -> None:
    space = elliptope_set()
    point = project_onto_relations(space, np.array([0.3, -0.2, 0.1, 1.4]))
    assert membership(space, point).in_set


def test_estimate_maximal_rank() -> None:
    assert estimate_maximal_rank(elliptope_set(), n_samples=20, seed=1) == 1
    assert estimate_maximal_rank(SemiAlgebraicSet(SCALED)) == 0


def test_estimate_maximal_rank_without_real_points() -> None:
    empty = SemiAlgebraicSet(("u",), (poly_parse("u^2 + 1", ["u"]),))
    with pytest.raises(MaximalRankUnavailableError, match="no sample"):
        estimate_maximal_rank(empty, n_samples=5)


def test_classify_estimates_missing_maximal_rank() -> None:
    result = classify_point(elliptope_set(), [0.0, 0.0, 0.0, 1.0])
    assert result.maximal_rank == 1
    assert result.verdict is PointClass.NONSINGULAR


def test_cotangent_reduced_space(cotangent) -> None:
    space = reduced_space(cotangent, ["0", "0", "1"])
    assert space.mu == (Fraction(0), Fraction(0), Fraction(1))
    document = space.to_dict()
    assert document["relations"] == ["-a*b + c^2 + d", "d - 1"]
    assert document["constraints"] == [{"name": "Jnorm2", "poly": "d", "level": "1"}]
    assert membership(space.as_set(), [1.0, 1.0, 0.0, 1.0]).in_set
    assert not membership(space.as_set(), [1.0, 1.0, 0.0, 0.0]).in_set


def test_reduced_space_with_casimir_levels(scaled) -> None:
    space = reduced_space(scaled, [0], casimir_levels={0: 0})
    assert [c.name for c in space.constraints] == ["l", "C1"]
    assert dict(space.casimir_levels) == {0: Fraction(0)}
    with pytest.raises(CasimirIndexError, match="no Casimir 6"):
        reduced_space(scaled, [0], casimir_levels={5: 1})
    with pytest.raises(IndexError):
        reduced_space(scaled, [0], casimir_levels={-1: 1})


def test_reduced_space_checks_momentum_arity(cotangent) -> None:
    with pytest.raises(ArityMismatchError):
        reduced_space(cotangent, [1, 2])


def test_reduced_space_needs_momentum_functions(cotangent) -> None:
    bare = dataclasses.replace(cotangent, momentum=())
    with pytest.raises(MissingMomentumError, match="so3_cotangent_r6"):
        reduced_space(bare, [0, 0, 1])
