"""Vahlen-matrix Moebius transformations and the R_k intertwining check.

A Moebius map is encoded by a Clifford 2x2 tuple (a, b, c, d) acting as
x -> (a x + b)(c x + d)^{-1}.  The engine works with the four elementary
Iwasawa factors (translation, dilation, reflection, inversion); generic
composites keep their matrix and can be applied pointwise, but symbolic
conformal-weight transport is defined factor by factor.

Normalizations used for the elementary factors (all rational):

    translation by b:   (1, b, 0, 1)
    dilation by s^2:    (s, 0, 0, 1/s)
    reflection along a: (a, 0, 0, a), i.e. x -> -a x a, a an exactly-unit
                        rational vector
    inversion:          (0, 1, 1, 0), i.e. x -> x^{-1} = -x/|x|^2

With these, the conformal weights J_1 = reverse(c y + d)/|c y + d|^m and
J_{-1} = (c y + d)/|c y + d|^(m+2) satisfy the intertwining identity for
the Rarita-Schwinger operator with constant +1 (the (a, 0, 0, -a)
reflection variant flips the sign and is deliberately not used).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Multivector
from .operators import apply_Rk, apply_Rk_radial, validate_monogenic
from .poly import (
    MVPolynomial,
    RadialForm,
    inversion_image,
    inversion_substitute,
    rename_group,
    substitute,
    substitute_linear,
    vector_poly,
)


class PoleError(ZeroDivisionError):
    """The Moebius map is singular at the requested point."""


ELEMENTARY_KINDS = ("translation", "dilation", "reflection", "inversion")


@dataclass(frozen=True)
class MoebiusMap:
    """Vahlen 4-tuple with a classification tag.

    param carries the defining datum of an elementary factor: the
    translation vector, the dilation square root s, or the reflection axis.
    """

    a: Multivector
    b: Multivector
    c: Multivector
    d: Multivector
    kind: str = "composite"
    param: object = None

    @property
    def m(self) -> int:
        return self.a.m

    # ------------------------------------------------------------- factories

    @classmethod
    def identity(cls, m: int) -> "MoebiusMap":
        one = Multivector.scalar(m, 1)
        zero = Multivector.zero(m)
        return cls(one, zero, zero, one, "translation", Multivector.zero(m))

    @classmethod
    def translation(cls, b: Multivector) -> "MoebiusMap":
        if not b.is_vector():
            raise ValueError("translation requires a vector")
        m = b.m
        one = Multivector.scalar(m, 1)
        zero = Multivector.zero(m)
        return cls(one, b, zero, one, "translation", b)

    @classmethod
    def dilation(cls, m: int, s) -> "MoebiusMap":
        """Dilation x -> s^2 x; s must be a nonzero rational."""
        s = Fraction(s)
        if not s:
            raise ValueError("dilation scale must be nonzero")
        zero = Multivector.zero(m)
        return cls(
            Multivector.scalar(m, s), zero, zero, Multivector.scalar(m, 1 / s),
            "dilation", s,
        )

    @classmethod
    def reflection(cls, a: Multivector) -> "MoebiusMap":
        if not a.is_vector() or a.norm_sq() != 1:
            raise ValueError("reflection requires an exactly-unit rational vector")
        m = a.m
        zero = Multivector.zero(m)
        return cls(a, zero, zero, a, "reflection", a)

    @classmethod
    def inversion(cls, m: int) -> "MoebiusMap":
        one = Multivector.scalar(m, 1)
        zero = Multivector.zero(m)
        return cls(zero, one, one, zero, "inversion", None)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """Matrix product; (self . other)(x) = self(other(x))."""
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        kind = "composite"
        param = None
        if self.kind == other.kind == "translation":
            kind, param = "translation", self.param + other.param
        elif self.kind == other.kind == "dilation":
            kind, param = "dilation", self.param * other.param
        return MoebiusMap(a, b, c, d, kind, param)


def validate_vahlen(map: MoebiusMap):
    """Check the Vahlen conditions exactly; returns (ok, diagnostics).

    Conditions: entries are products of vectors (or zero); a rev(b) and
    c rev(d) are vectors or zero while rev(b) c and rev(d) a may also carry
    a scalar part (the identity and inversion demand it); the pseudo-
    determinant a rev(d) - b rev(c) is exactly +1 or -1.
    """
    diagnostics = []
    for name, entry in (("a", map.a), ("b", map.b), ("c", map.c), ("d", map.d)):
        if not entry.is_zero() and not entry.is_vector_product():
            diagnostics.append(f"entry {name} is not a product of vectors")
    for name, prod in (
        ("a*rev(b)", map.a * map.b.reverse()),
        ("c*rev(d)", map.c * map.d.reverse()),
    ):
        if not prod.is_vector():
            diagnostics.append(f"{name} is not a vector (condition 2)")
    for name, prod in (
        ("rev(b)*c", map.b.reverse() * map.c),
        ("rev(d)*a", map.d.reverse() * map.a),
    ):
        if not prod.grades() <= {0, 1}:
            diagnostics.append(f"{name} has grade above 1 (condition 2)")
    det = map.a * map.d.reverse() - map.b * map.c.reverse()
    if not (det.is_scalar() and det.scalar_part() in (1, -1)):
        diagnostics.append(
            f"pseudo-determinant a*rev(d) - b*rev(c) = {det.to_text()} is not +-1"
        )
    return not diagnostics, diagnostics


def apply_map(map: MoebiusMap, x: Multivector) -> Multivector:
    """Evaluate (a x + b)(c x + d)^{-1} at a rational vector point."""
    if not x.is_vector():
        raise ValueError("apply_map requires a vector point")
    denom = map.c * x + map.d
    s = denom.gamma_norm_sq()
    if s is None:
        raise ValueError("c x + d is not in the Clifford group at this point")
    if not s:
        raise PoleError(f"map is singular at x = {x.to_text()}")
    out = (map.a * x + map.b) * (denom.conjugate() / s)
    if not out.is_vector():
        raise ValueError("Moebius image is not a vector; invalid Vahlen tuple")
    return out


# ------------------------------------------------------------ conformal weights


def j1_weight(map: MoebiusMap, group: str = "y") -> RadialForm:
    """J_1 = reverse(c y + d)/|c y + d|^m as a symbolic radial form."""
    m = map.m
    if map.kind == "translation":
        return RadialForm.from_poly(
            MVPolynomial.constant(Multivector.scalar(m, 1)), group)
    if map.kind == "dilation":
        s = map.param
        return RadialForm.from_poly(
            MVPolynomial.constant(Multivector.scalar(m, s ** (m - 1))), group)
    if map.kind == "reflection":
        return RadialForm.from_poly(MVPolynomial.constant(map.param), group)
    if map.kind == "inversion":
        return RadialForm(vector_poly(m, group), m, group)
    raise ValueError("symbolic weight needs an elementary Iwasawa factor")


def jm1_weight(map: MoebiusMap, group: str = "y") -> RadialForm:
    """J_{-1} = (c y + d)/|c y + d|^(m+2) as a symbolic radial form."""
    m = map.m
    if map.kind == "translation":
        return RadialForm.from_poly(
            MVPolynomial.constant(Multivector.scalar(m, 1)), group)
    if map.kind == "dilation":
        s = map.param
        return RadialForm.from_poly(
            MVPolynomial.constant(Multivector.scalar(m, s ** (m + 1))), group)
    if map.kind == "reflection":
        return RadialForm.from_poly(MVPolynomial.constant(map.param), group)
    if map.kind == "inversion":
        return RadialForm(vector_poly(m, group), m + 2, group)
    raise ValueError("symbolic weight needs an elementary Iwasawa factor")


def _conjugation_matrix(a: Multivector, negate: bool):
    """Matrix of v -> a v a (or its negative) on basis vectors."""
    m = a.m
    cols = []
    for j in range(1, m + 1):
        img = a * Multivector.basis_vector(m, j) * a
        if negate:
            img = -img
        cols.append(img.vector_coords())
    # cols[j][i] is the i-th coordinate of the image of e_j; we need rows
    return [[cols[j][i] for j in range(m)] for i in range(m)]


def _map_substitute(map: MoebiusMap, p: MVPolynomial,
                    from_groups=("x", "u"), to_groups=("y", "w")) -> RadialForm:
    """Compose p with the variable change of the map, without any J weight."""
    gx, gu = from_groups
    gy, gw = to_groups
    m = map.m
    if map.kind == "translation":
        b = map.param.vector_coords() if map.param else [Fraction(0)] * m
        targets = [
            MVPolynomial.variable(m, gy, i + 1)
            + MVPolynomial.constant(Multivector.scalar(m, b[i]))
            for i in range(m)
        ]
        out = substitute(p, gx, targets)
        return RadialForm.from_poly(rename_group(out, gu, gw), gy)
    if map.kind == "dilation":
        lam = map.param * map.param
        out = substitute_linear(
            p, gx, [[lam if i == j else 0 for j in range(m)] for i in range(m)], gy)
        return RadialForm.from_poly(rename_group(out, gu, gw), gy)
    if map.kind == "reflection":
        a = map.param
        out = substitute_linear(p, gx, _conjugation_matrix(a, negate=True), gy)
        out = substitute_linear(out, gu, _conjugation_matrix(a, negate=False), gw)
        return RadialForm.from_poly(out, gy)
    if map.kind == "inversion":
        return inversion_substitute(p, from_groups, to_groups)
    raise ValueError("substitution needs an elementary Iwasawa factor")


def transform_function(map: MoebiusMap, f: MVPolynomial, k: int,
                       from_groups=("x", "u"), to_groups=("y", "w")) -> RadialForm:
    """Conformal-weight action J_1(map, y) f(map(y), transported u).

    f must be M_k-valued in the u group; for inversion this is exactly the
    Kelvin-type inversion image.
    """
    m = map.m
    validate_monogenic(f, m, k, from_groups[1], "left")
    if map.kind == "inversion":
        return inversion_image(f, k, from_groups, to_groups)
    base = _map_substitute(map, f, from_groups, to_groups)
    if map.kind == "translation":
        return base
    if map.kind == "dilation":
        return base * (map.param ** (m - 1))
    if map.kind == "reflection":
        return base.mul_mv_left(map.param)
    raise ValueError("transform_function needs an elementary Iwasawa factor")


def _jm1_inverse_apply(map: MoebiusMap, r: RadialForm) -> RadialForm:
    """Left-multiply by J_{-1}^{-1}, in closed form per elementary factor."""
    m = map.m
    if map.kind == "translation":
        return r
    if map.kind == "dilation":
        return r * (Fraction(1) / map.param ** (m + 1))
    if map.kind == "reflection":
        return r.mul_mv_left(-map.param)
    if map.kind == "inversion":
        # (y |y|^(-m-2))^{-1} = -y |y|^m
        return r.mul_poly_left(-vector_poly(m, r.rgroup)).weight_shift(-m)
    raise ValueError("intertwining needs an elementary Iwasawa factor")


def intertwine_residual(map: MoebiusMap, f: MVPolynomial, m: int, k: int,
                        from_groups=("x", "u"), to_groups=("y", "w")) -> RadialForm:
    """J_{-1}^{-1} R_k [J_1 f(map(y), .)] minus the transported R_k f.

    Exact difference as a radial form; the intertwining theorem says it is
    identically zero away from the singular locus.
    """
    if map.kind not in ELEMENTARY_KINDS:
        raise ValueError("intertwine_residual needs an elementary Iwasawa factor")
    transformed = transform_function(map, f, k, from_groups, to_groups)
    lhs = _jm1_inverse_apply(
        map, apply_Rk_radial(transformed, m, k, to_groups[0], to_groups[1]))
    rhs = _map_substitute(map, apply_Rk(f, m, k, *from_groups), from_groups, to_groups)
    return lhs - rhs
