"""Constructors for the built-in symmetry models."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from fractions import Fraction
from math import gcd

from symred.catalog.models import CatalogParameterError
from symred.model.models import Frame, HamiltonianSpec, NamedPolynomial, SymmetryModel
from symred.polycore import CanonicalStructure, MatrixStructure, Polynomial, poly_parse

R3 = ("x1", "x2", "x3")
R6 = ("x1", "x2", "x3", "y1", "y2", "y3")
R9 = ("x1", "x2", "x3", "y1", "y2", "y3", "z1", "z2", "z3")
R8 = ("q1", "q2", "q3", "q4", "Q1", "Q2", "Q3", "Q4")
LAGRANGE = ("a", "b", "c", "d")


def _named(names: Sequence[str], pairs: Sequence[tuple[str, str]]) -> tuple[NamedPolynomial, ...]:
    return tuple(NamedPolynomial(name, poly_parse(text, names)) for name, text in pairs)


def _polys(names: Sequence[str], texts: Sequence[str]) -> tuple[Polynomial, ...]:
    return tuple(poly_parse(text, names) for text in texts)


def _rotation_blocks(names: Sequence[str], blocks: int) -> MatrixStructure:
    """Block-diagonal structure A_x (+) A_y (+) ... with A_x w = x cross w."""
    size = len(names)
    zero = Polynomial.zero(size)
    entries = [[zero] * size for _ in range(size)]
    for block in range(blocks):
        o = 3 * block
        a, b, c = (Polynomial.variable(size, o + i) for i in range(3))
        entries[o][o + 1], entries[o][o + 2] = -c, b
        entries[o + 1][o], entries[o + 1][o + 2] = c, -a
        entries[o + 2][o], entries[o + 2][o + 1] = -b, a
    return MatrixStructure(tuple(tuple(row) for row in entries))


def _cross(u: Sequence[str], w: Sequence[str]) -> tuple[str, str, str]:
    return (
        f"{u[1]}*{w[2]} - {u[2]}*{w[1]}",
        f"{u[2]}*{w[0]} - {u[0]}*{w[2]}",
        f"{u[0]}*{w[1]} - {u[1]}*{w[0]}",
    )


def _dot(u: Sequence[str], w: Sequence[str]) -> str:
    return " + ".join(f"{a}*{b}" for a, b in zip(u, w, strict=True))


def _momentum_norm(generators: Sequence[str]) -> tuple[NamedPolynomial, ...]:
    text = " + ".join(f"{name}^2" for name in generators)
    return (NamedPolynomial("Jnorm2", poly_parse(text, generators)),)


def so3_r3(params: Mapping[str, Fraction]) -> SymmetryModel:
    return SymmetryModel(
        name="so3_r3",
        variables=R3,
        structure=_rotation_blocks(R3, 1),
        generators=_named(R3, [("J1", "x1"), ("J2", "x2"), ("J3", "x3")]),
        invariants=_named(R3, [("rho", "x1^2 + x2^2 + x3^2")]),
        inequalities=_polys(["rho"], ["rho"]),
        casimirs=_polys(["rho"], ["rho"]),
        degree_bound=2,
        momentum=_momentum_norm(("J1", "J2", "J3")),
        maximal_rank=0,
        notes="Rotations of R^3 as the coadjoint action; the orbit space is the half-line.",
    )


def _lagrange_invariants(x: Sequence[str], y: Sequence[str]) -> list[tuple[str, str]]:
    cross = _cross(x, y)
    return [
        ("a", _dot(x, x)),
        ("b", _dot(y, y)),
        ("c", _dot(x, y)),
        ("d", " + ".join(f"({term})^2" for term in cross)),
    ]


def so3_cotangent_r6(params: Mapping[str, Fraction]) -> SymmetryModel:
    x, y = R6[:3], R6[3:]
    cross = _cross(x, y)
    return SymmetryModel(
        name="so3_cotangent_r6",
        variables=R6,
        structure=CanonicalStructure(3),
        generators=_named(R6, [("J1", cross[0]), ("J2", cross[1]), ("J3", cross[2])]),
        invariants=_named(R6, _lagrange_invariants(x, y)),
        relations=_polys(LAGRANGE, ["d - a*b + c^2"]),
        inequalities=_polys(LAGRANGE, ["a", "b", "d"]),
        casimirs=_polys(LAGRANGE, ["d", "d - a*b + c^2"]),
        degree_bound=2,
        momentum=_momentum_norm(("J1", "J2", "J3")),
        maximal_rank=1,
        notes="Lifted rotation action on T*R^3; d stores |x cross y|^2 to keep the map polynomial.",
    )


def so3_diag_r6(params: Mapping[str, Fraction]) -> SymmetryModel:
    x, y = R6[:3], R6[3:]
    generators = [(f"J{i + 1}", f"{x[i]} + {y[i]}") for i in range(3)]
    return SymmetryModel(
        name="so3_diag_r6",
        variables=R6,
        structure=_rotation_blocks(R6, 2),
        generators=_named(R6, generators),
        invariants=_named(R6, _lagrange_invariants(x, y)),
        relations=_polys(LAGRANGE, ["d - a*b + c^2"]),
        inequalities=_polys(LAGRANGE, ["a", "b", "d"]),
        casimirs=_polys(LAGRANGE, ["a", "b"]),
        degree_bound=2,
        momentum=_momentum_norm(("J1", "J2", "J3")),
        maximal_rank=1,
        notes="Diagonal rotations of two angular momenta; |J|^2 = a + b + 2*c.",
    )


R9_NAMES = ("xx", "yy", "zz", "xy", "xz", "yz", "t")


def so3_diag_r9(params: Mapping[str, Fraction]) -> SymmetryModel:
    x, y, z = R9[:3], R9[3:6], R9[6:]
    y_cross_x = _cross(y, x)
    triple = " + ".join(f"{z[i]}*({y_cross_x[i]})" for i in range(3))
    generators = [(f"J{i + 1}", f"{x[i]} + {y[i]} + {z[i]}") for i in range(3)]
    invariants = [
        ("xx", _dot(x, x)),
        ("yy", _dot(y, y)),
        ("zz", _dot(z, z)),
        ("xy", _dot(x, y)),
        ("xz", _dot(x, z)),
        ("yz", _dot(y, z)),
        ("t", triple),
    ]
    gram = "t^2 - xx*yy*zz - 2*xy*yz*xz + xz^2*yy + yz^2*xx + xy^2*zz"
    return SymmetryModel(
        name="so3_diag_r9",
        variables=R9,
        structure=_rotation_blocks(R9, 3),
        generators=_named(R9, generators),
        invariants=_named(R9, invariants),
        relations=_polys(R9_NAMES, [gram]),
        inequalities=_polys(
            R9_NAMES,
            ["xx", "yy", "zz", "xx*yy - xy^2", "xx*zz - xz^2", "yy*zz - yz^2"],
        ),
        casimirs=_polys(R9_NAMES, ["xx", "yy", "zz"]),
        degree_bound=2,
        momentum=_momentum_norm(("J1", "J2", "J3")),
        maximal_rank=1,
        notes="Three angular momenta under diagonal rotations; t = <y cross x, z>.",
    )


SCALED_NAMES = ("v1", "v2", "v3", "v4")


def scaled_structure(cx: Fraction, cy: Fraction, cz: Fraction) -> MatrixStructure:
    """Induced structure on (v1, v2, v3, v4) for unit vectors on spheres of radii c."""
    v1, v2, v3, v4 = (Polynomial.variable(4, i) for i in range(4))
    sx, sy, sz = 1 / cx, 1 / cy, 1 / cz
    w12 = v4.scale(sx)
    w13 = v4.scale(-sy)
    w14 = (v1 * v3 - v2).scale(sx) - (v1 * v2 - v3).scale(sy)
    w23 = v4.scale(sz)
    w24 = (v1 - v2 * v3).scale(sx) + (v1 * v2 - v3).scale(sz)
    # -v1 here: a +v1 in this term breaks the Jacobi identity of the matrix.
    w34 = (v2 * v3 - v1).scale(sy) - (v1 * v3 - v2).scale(sz)
    zero = Polynomial.zero(4)
    return MatrixStructure(
        (
            (zero, w12, w13, w14),
            (-w12, zero, w23, w24),
            (-w13, -w23, zero, w34),
            (-w14, -w24, -w34, zero),
        )
    )


def so3_diag_r9_scaled(params: Mapping[str, Fraction]) -> SymmetryModel:
    cx, cy, cz = params["cx"], params["cy"], params["cz"]
    for name, value in (("cx", cx), ("cy", cy), ("cz", cz)):
        if value <= 0:
            raise CatalogParameterError("so3_diag_r9_scaled", f"{name} must be positive")
    v = [Polynomial.variable(4, i) for i in range(4)]
    momentum = v[0].scale(1 / cz) + v[1].scale(1 / cy) + v[2].scale(1 / cx)
    elliptope = poly_parse("v4^2 - 1 - 2*v1*v2*v3 + v1^2 + v2^2 + v3^2", SCALED_NAMES)
    return SymmetryModel(
        name="so3_diag_r9_scaled",
        variables=SCALED_NAMES,
        structure=scaled_structure(cx, cy, cz),
        generators=(NamedPolynomial("l", momentum),),
        invariants=_named(SCALED_NAMES, [(name, name) for name in SCALED_NAMES]),
        inequalities=_polys(SCALED_NAMES, ["1 - v1^2", "1 - v2^2", "1 - v3^2"]),
        casimirs=(elliptope, momentum),
        degree_bound=2,
        momentum=(NamedPolynomial("l", poly_parse("l", ["l"])),),
        leaf_relations=(elliptope,),
        maximal_rank=1,
        parameters={"cx": str(cx), "cy": str(cy), "cz": str(cz)},
        notes=(
            "Inner products of three unit vectors (v1, v2, v3) = (<x,y>, <x,z>, <y,z>) and "
            "v4 = <y cross x, z>. Entry (3,4) of the structure reads "
            "(v2*v3 - v1)/cy - (v1*v3 - v2)/cz so that the Jacobi identity holds; the "
            "momentum Casimir is l = v1/cz + v2/cy + v3/cx."
        ),
    )


def _complex_power(re: Polynomial, im: Polynomial, power: int) -> tuple[Polynomial, Polynomial]:
    out_re, out_im = Polynomial.constant(re.arity, 1), Polynomial.zero(re.arity)
    for _ in range(power):
        out_re, out_im = out_re * re - out_im * im, out_re * im + out_im * re
    return out_re, out_im


def kl_resonance(params: Mapping[str, Fraction]) -> SymmetryModel:
    k, ell = int(params["k"]), int(params["l"])
    key = "kl_resonance"
    if k < 1:
        raise CatalogParameterError(key, f"k must be >= 1, got {k}")
    if ell == 0:
        raise CatalogParameterError(key, "l must be non-zero")
    if abs(k) == abs(ell):
        raise CatalogParameterError(key, f"|k| = |l| = {k} is excluded")
    g = gcd(k, abs(ell))
    if g != 1:
        raise CatalogParameterError(
            key,
            f"k and l must be coprime, got gcd {g}: the listed invariants would miss "
            f"(x1 + i*y1)^{abs(ell) // g} * (x2 -+ i*y2)^{k // g} and not form a Hilbert basis",
        )

    names = ("x1", "x2", "y1", "y2")
    x1, x2, y1, y2 = (Polynomial.variable(4, i) for i in range(4))
    m = abs(ell)
    i1 = (x1 * x1 + y1 * y1).scale(Fraction(k, 2)) + (x2 * x2 + y2 * y2).scale(Fraction(ell, 2))
    i2 = (x1 * x1 + y1 * y1).scale(Fraction(k, 2)) - (x2 * x2 + y2 * y2).scale(Fraction(ell, 2))
    z_re, z_im = _complex_power(x1, y1, m)
    w_re, w_im = _complex_power(x2, -y2 if ell > 0 else y2, k)
    r1 = z_re * w_re - z_im * w_im
    r2 = z_re * w_im + z_im * w_re

    inv = [Polynomial.variable(4, i) for i in range(4)]
    s1, s2 = inv[0] + inv[1], inv[0] - inv[1]
    relation = inv[2] * inv[2] + inv[3] * inv[3] - (s1**m * s2**k).scale(
        Fraction(1, k**m * ell**k)
    )
    sign = 1 if ell > 0 else -1
    return SymmetryModel(
        name=key,
        variables=names,
        structure=CanonicalStructure(2),
        generators=(NamedPolynomial("I1", i1),),
        invariants=(
            NamedPolynomial("I1", i1),
            NamedPolynomial("I2", i2),
            NamedPolynomial("R1", r1),
            NamedPolynomial("R2", r2),
        ),
        relations=(relation,),
        inequalities=(s1, s2.scale(sign)),
        casimirs=(inv[0], relation),
        degree_bound=max(3, k + m - 1),
        momentum=(NamedPolynomial("I1", Polynomial.variable(1, 0)),),
        maximal_rank=1,
        parameters={"k": str(k), "l": str(ell)},
        notes=(
            "R1 + i*R2 = (x1 + i*y1)^|l| * (x2 -+ i*y2)^k with the minus sign for l > 0; "
            "the relation constant is 1/(k^|l| * l^k)."
        ),
    )


OSCILLATOR_NAMES = ("H2", "Xi", "L1", "N", "K", "S")

_OSCILLATOR_PIECES = {
    "H2": "1/2*(Q1^2 + Q2^2 + Q3^2 + Q4^2) + 1/2*(q1^2 + q2^2 + q3^2 + q4^2)",
    "Xi": "q1*Q2 - Q1*q2 + q3*Q4 - Q3*q4",
    "L1": "q3*Q4 - Q3*q4 - q1*Q2 + Q1*q2",
    "K": "1/2*(-(q1^2 + Q1^2) - (q2^2 + Q2^2) + (q3^2 + Q3^2) + (q4^2 + Q4^2))",
    "K2": "(Q2*Q3 + q2*q3) - (Q1*Q4 + q1*q4)",
    "K3": "-(Q1*Q3 + q1*q3) - (Q2*Q4 + q2*q4)",
    "L2": "(q1*Q3 - Q1*q3) + (q2*Q4 - Q2*q4)",
    "L3": "(q2*Q3 - Q2*q3) - (q1*Q4 - Q1*q4)",
}


def _oscillator_pieces() -> dict[str, Polynomial]:
    return {name: poly_parse(text, R8) for name, text in _OSCILLATOR_PIECES.items()}


def oscillator_hamiltonian(beta: Fraction | int = 1) -> HamiltonianSpec:
    """Perturbed oscillator family H(K, N, Xi, L1, H2; beta) in invariant coordinates."""
    b2 = Fraction(beta) ** 2
    h2, xi, l1, n, k, _ = (Polynomial.variable(6, i) for i in range(6))
    expression = (
        h2
        + (k * k * h2).scale(Fraction(3, 4) * (3 * b2 - 2))
        + (k * xi * l1).scale(1 - b2)
        + (n * h2).scale(Fraction(1, 2) * (4 - b2))
        + (h2**3).scale(Fraction(3, 2) + b2 / 4)
        - (h2 * (l1 * l1 + xi * xi)).scale((b2 / 2 + 1) / 2)
    )
    return HamiltonianSpec(expression, Frame.INVARIANT)


def oscillator_r8(params: Mapping[str, Fraction]) -> SymmetryModel:
    p = _oscillator_pieces()
    n = (p["K2"] * p["K2"] + p["K3"] * p["K3"] - p["L2"] * p["L2"] - p["L3"] * p["L3"]).scale(
        Fraction(1, 2)
    )
    s = p["K2"] * p["L3"] - p["K3"] * p["L2"]
    invariants = (
        NamedPolynomial("H2", p["H2"]),
        NamedPolynomial("Xi", p["Xi"]),
        NamedPolynomial("L1", p["L1"]),
        NamedPolynomial("N", n),
        NamedPolynomial("K", p["K"]),
        NamedPolynomial("S", s),
    )
    quartic = "(H2^2 + Xi^2 - L1^2 - K^2)^2 - 4*(H2*Xi - L1*K)^2 - 4*N^2 - 4*S^2"
    generators = ("H2", "Xi", "L1")
    beta = params["beta"]
    return SymmetryModel(
        name="oscillator_r8",
        variables=R8,
        structure=CanonicalStructure(4),
        generators=tuple(NamedPolynomial(name, p[name]) for name in generators),
        invariants=invariants,
        relations=_polys(OSCILLATOR_NAMES, [quartic]),
        inequalities=_polys(OSCILLATOR_NAMES, ["H2", "H2 - K", "H2 + K"]),
        casimirs=_polys(OSCILLATOR_NAMES, ["H2", "Xi", "L1"]),
        degree_bound=3,
        momentum=tuple(NamedPolynomial(name, poly_parse(name, generators)) for name in generators),
        maximal_rank=1,
        hamiltonian=oscillator_hamiltonian(beta),
        parameters={"beta": str(beta)},
        notes=(
            "Torus action generated by H2, Xi and L1 on R^8 with coordinates (q, Q). "
            "K3 = -(Q1*Q3 + q1*q3) - (Q2*Q4 + q2*q4): the second product uses q2*q4, which "
            "makes N and S invariant and the quartic relation exact."
        ),
    )


KEPLER_NAMES = ("H2", "Xi", "s1", "s2", "s3", "r1", "r2", "r3")


def kepler_ks_r8(params: Mapping[str, Fraction]) -> SymmetryModel:
    p = _oscillator_pieces()
    ls = (p["L1"], p["L2"], p["L3"])
    ks = (p["K"], p["K2"], p["K3"])
    sigma = [NamedPolynomial(f"s{i + 1}", ls[i] + ks[i]) for i in range(3)]
    rho = [NamedPolynomial(f"r{i + 1}", ls[i] - ks[i]) for i in range(3)]
    return SymmetryModel(
        name="kepler_ks_r8",
        variables=R8,
        structure=CanonicalStructure(4),
        generators=(NamedPolynomial("H2", p["H2"]), NamedPolynomial("Xi", p["Xi"])),
        invariants=(
            NamedPolynomial("H2", p["H2"]),
            NamedPolynomial("Xi", p["Xi"]),
            *sigma,
            *rho,
        ),
        relations=_polys(
            KEPLER_NAMES,
            ["s1^2 + s2^2 + s3^2 - (H2 + Xi)^2", "r1^2 + r2^2 + r3^2 - (H2 - Xi)^2"],
        ),
        inequalities=_polys(KEPLER_NAMES, ["H2", "H2 + Xi", "H2 - Xi"]),
        casimirs=_polys(KEPLER_NAMES, ["H2", "Xi"]),
        degree_bound=2,
        momentum=(
            NamedPolynomial("H2", poly_parse("H2", ["H2", "Xi"])),
            NamedPolynomial("Xi", poly_parse("Xi", ["H2", "Xi"])),
        ),
        maximal_rank=2,
        notes=(
            "Regularised Kepler problem: sigma = L + K and rho = L - K with the oscillator "
            "integrals L and K; each triple spans a rotation algebra."
        ),
    )
