import numpy as np
import pytest

from symred.catalog import catalog_model, oscillator_hamiltonian
from symred.model import Frame, HamiltonianSpec
from symred.polycore import Polynomial, poly_parse
from symred.releq import (
    NonConvergenceError,
    NotAnEquilibriumError,
    ResultFlag,
    Stability,
    classify_equilibria,
    find_reduced_stationary,
    find_relative_equilibria,
    formal_stability,
    leaf_extremum_check,
    reduced_field,
    reduced_hamiltonian_for,
)
from symred.semialg import membership, reduced_space
from symred.strata import StructurePreconditionError

R6 = ["x1", "x2", "x3", "y1", "y2", "y3"]
LAGRANGE = ["a", "b", "c", "d"]
ENERGY = "x1^2 + x2^2 + x3^2 + y1^2 + y2^2 + y3^2"
POINT = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0]


def full(text: str) -> HamiltonianSpec:
    return HamiltonianSpec(poly_parse(text, R6))


def reduced(text: str) -> Polynomial:
    return poly_parse(text, LAGRANGE)


def test_reduced_field_components(cotangent) -> None:
    field = reduced_field(cotangent, reduced("a + b"))
    assert field.to_dict()["components"] == ["4*c", "-4*c", "-2*a + 2*b", "0"]
    assert field([1.0, 1.0, 0.0, 1.0]) == pytest.approx([0.0, 0.0, 0.0, 0.0])
    assert not field.is_zero
    assert reduced_field(cotangent, reduced("d")).is_zero


def test_reduced_hamiltonian_for_both_frames(cotangent) -> None:
    assert reduced_hamiltonian_for(cotangent, full(ENERGY)) == reduced("a + b")
    spec = HamiltonianSpec(reduced("a + b"), Frame.INVARIANT)
    assert reduced_hamiltonian_for(cotangent, spec) == reduced("a + b")


def test_reduced_stationary_point(cotangent) -> None:
    space = reduced_space(cotangent, [0, 0, 1])
    search = find_reduced_stationary(cotangent, reduced("a + b"), space, seeds=24, seed=2)
    results = search.require_results()
    assert len(results) == 1
    assert results[0].image == pytest.approx((1.0, 1.0, 0.0, 1.0), abs=1e-7)
    assert results[0].flags == ()


def test_zero_field_is_flagged(cotangent) -> None:
    space = reduced_space(cotangent, [0, 0, 1])
    search = find_reduced_stationary(cotangent, reduced("d"), space, seeds=8, seed=3)
    assert search.results
    for result in search.results:
        assert result.flags == (ResultFlag.EVERYWHERE_STATIONARY,)
        assert result.image[3] == pytest.approx(1.0)


def test_relative_equilibria_of_isotropic_energy(cotangent) -> None:
    search = find_relative_equilibria(cotangent, full(ENERGY), ["0", "0", "1"], seeds=24)
    results = search.require_results()
    assert len(results) == 1
    assert results[0].image == pytest.approx((1.0, 1.0, 0.0, 1.0), abs=1e-6)
    assert results[0].multipliers == pytest.approx((0.0, 0.0, 2.0), abs=1e-6)

    classified = classify_equilibria(cotangent, full(ENERGY), search)
    assert classified.results[0].stability is Stability.FORMALLY_STABLE
    assert classified.results[0].subspace_dim == 2


def test_search_is_reproducible(cotangent) -> None:
    first = find_relative_equilibria(cotangent, full(ENERGY), [0, 0, 1], seeds=8, seed=5)
    second = find_relative_equilibria(cotangent, full(ENERGY), [0, 0, 1], seeds=8, seed=5)
    assert first.to_dict() == second.to_dict()


def test_momentum_hamiltonian_multipliers(cotangent) -> None:
    search = find_relative_equilibria(cotangent, full("x1*y2 - x2*y1"), [0, 0, 1], seeds=8)
    assert search.results
    for result in search.results:
        assert result.multipliers == pytest.approx((0.0, 0.0, 1.0), abs=1e-6)


def test_unreachable_momentum_does_not_converge(resonance) -> None:
    spec = HamiltonianSpec(poly_parse("x1^2 + x2^2 + y1^2 + y2^2", ["x1", "x2", "y1", "y2"]))
    search = find_relative_equilibria(resonance, spec, [-1], seeds=6, max_iter=30)
    assert search.results == ()
    assert search.converged == 0
    assert search.note is not None and search.note.startswith("NonConvergence")
    with pytest.raises(NonConvergenceError):
        search.require_results()


def test_formal_stability_stable(cotangent) -> None:
    verdict = formal_stability(cotangent, full(ENERGY), POINT, [0.0, 0.0, 2.0])
    assert verdict.stability is Stability.FORMALLY_STABLE
    assert verdict.kernel_dim == 3
    assert verdict.neutral_dim == 1
    assert verdict.subspace_dim == 2
    assert verdict.projected_spectrum == pytest.approx((4.0, 4.0))


def test_formal_stability_indefinite(cotangent) -> None:
    spec = full(f"{ENERGY} - 2*(x1*y1 + x2*y2 + x3*y3)^2")
    verdict = formal_stability(cotangent, spec, POINT, [0.0, 0.0, 2.0])
    assert verdict.stability is Stability.INDEFINITE
    assert verdict.projected_spectrum == pytest.approx((-4.0, 4.0))


def test_formal_stability_degenerate_at_origin(cotangent) -> None:
    verdict = formal_stability(cotangent, full(ENERGY), np.zeros(6), [0.0, 0.0, 0.0])
    assert verdict.stability is Stability.DEGENERATE
    assert verdict.projected_spectrum == ()
    assert verdict.diagnostics is not None and "rank 0" in verdict.diagnostics


def test_formal_stability_rejects_non_equilibria(cotangent) -> None:
    with pytest.raises(NotAnEquilibriumError):
        formal_stability(cotangent, full(ENERGY), POINT, [0.0, 0.0, 0.0])


def test_full_space_needs_canonical_structure(rotation) -> None:
    spec = HamiltonianSpec(poly_parse("x1^2", ["x1", "x2", "x3"]))
    with pytest.raises(StructurePreconditionError):
        find_relative_equilibria(rotation, spec, [0, 0, 1], seeds=1)


def test_leaf_extremum_check(cotangent) -> None:
    space = reduced_space(cotangent, [0, 0, 1])
    point = [1.0, 1.0, 0.0, 1.0]
    minimum = leaf_extremum_check(cotangent, reduced("a + b"), space, point, n_samples=500)
    assert minimum.samples_used > 0
    assert minimum.is_local_min
    assert not minimum.is_local_max
    assert minimum.is_extremum

    saddle = leaf_extremum_check(
        cotangent, reduced("a + b - 2*c^2"), space, point, n_samples=500
    )
    assert not saddle.is_local_min
    assert not saddle.is_local_max
    assert saddle.min_delta < 0 < saddle.max_delta


@pytest.mark.parametrize("hamiltonian", [ENERGY, f"{ENERGY} - 2*(x1*y1 + x2*y2 + x3*y3)^2"])
def test_full_space_equilibria_reduce_to_stationary_points(cotangent, hamiltonian: str) -> None:
    spec = full(hamiltonian)
    search = find_relative_equilibria(cotangent, spec, [0, 0, 1], seeds=24, seed=6)
    field = reduced_field(cotangent, reduced_hamiltonian_for(cotangent, spec))
    space = reduced_space(cotangent, [0, 0, 1])
    for result in search.require_results():
        assert np.max(np.abs(field(result.image))) <= 1e-9
        assert membership(space.as_set(), result.image, 1e-8).in_set


@pytest.mark.parametrize(("text", "shift"), [("3", 3.0), ("-3/2", -1.5)])
def test_momentum_shift_moves_only_the_multiplier(cotangent, text: str, shift: float) -> None:
    base = find_relative_equilibria(cotangent, full(ENERGY), [0, 0, 1], seeds=24).require_results()
    spec = full(f"{ENERGY} + ({text})*(x1*y2 - x2*y1)")
    shifted = find_relative_equilibria(cotangent, spec, [0, 0, 1], seeds=24).require_results()
    assert len(shifted) == len(base) == 1
    assert shifted[0].image == pytest.approx(base[0].image, abs=1e-6)
    assert shifted[0].multipliers == pytest.approx(
        (base[0].multipliers[0], base[0].multipliers[1], base[0].multipliers[2] + shift), abs=1e-6
    )

    plain = formal_stability(cotangent, full(ENERGY), POINT, [0.0, 0.0, 2.0])
    moved = formal_stability(cotangent, spec, POINT, [0.0, 0.0, 2.0 + shift])
    assert moved.stability is plain.stability
    assert moved.projected_spectrum == pytest.approx(plain.projected_spectrum)


@pytest.mark.parametrize(
    ("hamiltonian", "stability"),
    [
        (ENERGY, Stability.FORMALLY_STABLE),
        (f"{ENERGY} - 2*(x1*y1 + x2*y2 + x3*y3)^2", Stability.INDEFINITE),
    ],
)
def test_leaf_extremum_agrees_with_formal_stability(
    cotangent, hamiltonian: str, stability: Stability
) -> None:
    spec = full(hamiltonian)
    verdict = formal_stability(cotangent, spec, POINT, [0.0, 0.0, 2.0])
    assert verdict.stability is stability
    space = reduced_space(cotangent, [0, 0, 1])
    hred = reduced_hamiltonian_for(cotangent, spec)
    leaf = leaf_extremum_check(cotangent, hred, space, [1.0, 1.0, 0.0, 1.0], n_samples=800)
    assert leaf.samples_used > 0
    assert leaf.is_extremum == (stability is Stability.FORMALLY_STABLE)


def test_oscillator_stationary_points_at_unit_beta() -> None:
    """At beta = 1 the reduced energy is 3/4*K^2 + 3/2*N plus a constant on the level
    (1, 0, 0); its maximum is the whole curve N = (1 - K^2)/2, S = 0 and its minimum the
    point (N, K, S) = (-1/2, 0, 0)."""
    model = catalog_model("oscillator_r8")
    space = reduced_space(model, [1, 0, 0])
    hred = oscillator_hamiltonian(1).expression
    search = find_reduced_stationary(model, hred, space, seeds=32, seed=4)
    results = search.require_results()
    field = reduced_field(model, hred)
    for result in results:
        h2, xi, l1, n, k, s = result.image
        assert (h2, xi, l1) == pytest.approx((1.0, 0.0, 0.0), abs=1e-8)
        assert np.max(np.abs(field(result.image))) <= 1e-9
        assert abs(k) <= 1.0 + 1e-8
        assert s == pytest.approx(0.0, abs=1e-6)
        on_ridge = n == pytest.approx((1.0 - k * k) / 2.0, abs=1e-6)
        at_minimum = (n, k) == pytest.approx((-0.5, 0.0), abs=1e-6)
        assert on_ridge or at_minimum, result.image
