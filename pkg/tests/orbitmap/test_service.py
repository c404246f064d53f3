from fractions import Fraction

import numpy as np
import pytest

from symred.catalog import catalog_model
from symred.errors import ArityMismatchError
from symred.model import Frame, HamiltonianSpec
from symred.orbitmap import (
    NotExpressible,
    RewriteBoundExceededError,
    casimir_check,
    express_in_invariants,
    induced_bracket,
    induced_structure,
    induced_structure_document,
    lift_hamiltonian,
    orbit_eval,
    orbit_eval_exact,
    orbit_jacobian,
    pullback,
    reduce_hamiltonian,
)
from symred.polycore import (
    MatrixStructure,
    Polynomial,
    bracket,
    poly_parse,
    structure_jacobi_defects,
)

R6 = ["x1", "x2", "x3", "y1", "y2", "y3"]
LAGRANGE = ["a", "b", "c", "d"]


def test_orbit_eval_examples(cotangent) -> None:
    values = orbit_eval(cotangent, [1.0, 0.0, 0.0, 0.0, 1.0, 0.0])
    assert values == pytest.approx([1.0, 1.0, 0.0, 1.0])
    exact = orbit_eval_exact(cotangent, [1, 2, 0, Fraction(1, 2), 0, 1])
    assert exact == (Fraction(5), Fraction(5, 4), Fraction(1, 2), Fraction(6))


def test_orbit_eval_arity(cotangent) -> None:
    with pytest.raises(ArityMismatchError):
        orbit_eval(cotangent, [1.0, 2.0])


def test_orbit_jacobian_rows_are_gradients(rotation) -> None:
    jacobian = orbit_jacobian(rotation, [1.0, -2.0, 0.5])
    assert jacobian.shape == (1, 3)
    assert jacobian[0] == pytest.approx([2.0, -4.0, 1.0])


def test_cotangent_induced_structure(cotangent) -> None:
    structure = induced_structure(cotangent)
    a, b, c, d = (Polynomial.variable(4, i) for i in range(4))
    assert structure.entry(0, 1) == c.scale(4)
    assert structure.entry(0, 2) == a.scale(2)
    assert structure.entry(1, 2) == b.scale(-2)
    assert structure.entry(1, 0) == c.scale(-4)
    assert all(structure.entry(3, j).is_zero for j in range(4))
    assert not structure.is_zero


def test_diagonal_induced_structure_vanishes(diagonal_r6, rotation) -> None:
    assert induced_structure(diagonal_r6).is_zero
    assert induced_structure(rotation).is_zero


@pytest.mark.parametrize("radii", [(1, 1, 1), (1, 2, 3), (Fraction(1, 2), 3, Fraction(5, 7))])
def test_scaled_structure_obeys_jacobi(radii: tuple) -> None:
    """Entry (3,4) carries -v1 in its first term; the +v1 reading fails Jacobi (see below)."""
    cx, cy, cz = (Fraction(r) for r in radii)
    model = catalog_model("so3_diag_r9_scaled", {"cx": cx, "cy": cy, "cz": cz})
    assert not structure_jacobi_defects(model.structure)
    v1, v2, v3, _ = (Polynomial.variable(4, i) for i in range(4))
    expected = (v2 * v3 - v1).scale(1 / cy) - (v1 * v3 - v2).scale(1 / cz)
    assert model.structure.entry(2, 3) == expected
    momentum = v1.scale(1 / cz) + v2.scale(1 / cy) + v3.scale(1 / cx)
    assert casimir_check(model, momentum).passed


RADII = [(1, 1, 1), (1, 2, 3), (Fraction(1, 2), 3, Fraction(5, 7))]


@pytest.mark.parametrize("radii", RADII)
def test_scaled_structure_entries(radii: tuple) -> None:
    cx, cy, cz = (Fraction(r) for r in radii)
    structure = catalog_model("so3_diag_r9_scaled", {"cx": cx, "cy": cy, "cz": cz}).structure
    v1, v2, v3, v4 = (Polynomial.variable(4, i) for i in range(4))
    expected = {
        (0, 1): v4.scale(1 / cx),
        (0, 2): v4.scale(-1 / cy),
        (1, 2): v4.scale(1 / cz),
        (0, 3): (v1 * v3 - v2).scale(1 / cx) - (v1 * v2 - v3).scale(1 / cy),
        (1, 3): (v1 - v2 * v3).scale(1 / cx) + (v1 * v2 - v3).scale(1 / cz),
    }
    for (i, j), entry in expected.items():
        assert structure.entry(i, j) == entry
        assert structure.entry(j, i) == -entry
    assert all(structure.entry(i, i).is_zero for i in range(4))


def test_plus_v1_reading_of_entry_34_breaks_jacobi() -> None:
    cx, cy, cz = Fraction(1), Fraction(2), Fraction(3)
    structure = catalog_model("so3_diag_r9_scaled", {"cx": cx, "cy": cy, "cz": cz}).structure
    v1, v2, v3, _ = (Polynomial.variable(4, i) for i in range(4))
    printed = (v2 * v3 + v1).scale(1 / cy) - (v1 * v3 - v2).scale(1 / cz)
    rows = [list(row) for row in structure.entries]
    rows[2][3], rows[3][2] = printed, -printed
    altered = MatrixStructure(tuple(tuple(row) for row in rows))
    assert structure_jacobi_defects(altered)


def test_induced_bracket_matches_phase_bracket(cotangent) -> None:
    structure = induced_structure(cotangent)
    f = poly_parse("a^2 + c", LAGRANGE)
    g = poly_parse("b*c", LAGRANGE)
    value = induced_bracket(structure, f, g)
    assert pullback(cotangent, value) == bracket(
        pullback(cotangent, f), pullback(cotangent, g), cotangent.structure
    )


def test_express_in_invariants_round_trip(cotangent) -> None:
    target = poly_parse("(x1 + y1)^2 + (x2 + y2)^2 + (x3 + y3)^2", R6)
    result = express_in_invariants(cotangent, target, 2)
    assert isinstance(result, Polynomial)
    assert result == poly_parse("a + b + 2*c", LAGRANGE)
    assert pullback(cotangent, result) == target


def test_express_in_invariants_rejects_non_invariant(cotangent) -> None:
    result = express_in_invariants(cotangent, poly_parse("x1", R6), 3)
    assert isinstance(result, NotExpressible)
    assert result.degree_bound == 3


def test_express_quartic_invariant_picks_one_representative(cotangent) -> None:
    target = poly_parse("(x2*y3 - x3*y2)^2 + (x3*y1 - x1*y3)^2 + (x1*y2 - x2*y1)^2", R6)
    result = express_in_invariants(cotangent, target, 2)
    assert isinstance(result, Polynomial)
    assert pullback(cotangent, result) == target


def test_casimir_check_reports_failures(cotangent) -> None:
    assert casimir_check(cotangent, poly_parse("d", LAGRANGE)).passed
    check = casimir_check(cotangent, poly_parse("a", LAGRANGE))
    assert not check.passed
    assert check.failing_pair is not None
    assert check.failing_pair[0] == "b"


def test_hamiltonian_frames(cotangent) -> None:
    full = HamiltonianSpec(poly_parse("x1^2 + x2^2 + x3^2 + y1^2 + y2^2 + y3^2", R6))
    reduced = reduce_hamiltonian(cotangent, full)
    assert reduced.frame is Frame.INVARIANT
    assert reduced.expression == poly_parse("a + b", LAGRANGE)
    lifted = lift_hamiltonian(cotangent, reduced)
    assert lifted.frame is Frame.FULL
    assert lifted.expression == full.expression
    assert lift_hamiltonian(cotangent, full) is full


def test_reduce_non_invariant_hamiltonian(cotangent) -> None:
    spec = HamiltonianSpec(poly_parse("x1^2", R6))
    with pytest.raises(RewriteBoundExceededError):
        reduce_hamiltonian(cotangent, spec)


def test_induced_structure_document(cotangent) -> None:
    document = induced_structure_document(induced_structure(cotangent), cotangent)
    assert document["model"] == "so3_cotangent_r6"
    assert document["invariants"] == LAGRANGE
    assert document["entries"][0][1] == "4*c"
    assert document["entries"][3] == ["0", "0", "0", "0"]


def test_numeric_pullback_agrees_with_orbit_eval(diagonal_r9) -> None:
    rng = np.random.default_rng(5)
    relation = diagonal_r9.relations[0]
    for x in rng.standard_normal((20, 9)):
        image = orbit_eval(diagonal_r9, x)
        assert relation.evaluate(image) == pytest.approx(0.0, abs=1e-9)
