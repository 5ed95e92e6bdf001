"""Rarita-Schwinger type operators R_k, T_k, T_k*, Q_k and right versions.

All operators are projection-composed Dirac derivatives on functions
f(x, u) that are monogenic polynomials in u for each fixed x:

    R_k   = P_k D_x        on M_k-valued input,
    T_k*  = (I - P_k) D_x  on M_k-valued input,
    T_k   = P_k D_x        on u M_{k-1}-valued input,
    Q_k   = (I - P_k) D_x  on u M_{k-1}-valued input.

Right versions act with the right Dirac derivative followed by the mirrored
projection; they consume right-monogenic values (bar(M)_k, or bar(M)_{k-1} u
for the twistor-type domains).  Inputs are validated exactly rather than
assumed; a failed hypothesis raises HypothesisError naming the check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import (
    MVPolynomial,
    RadialForm,
    dirac_left,
    dirac_left_radial,
    dirac_right,
    vector_poly,
)
from . import spaces
from .integrate import pairing_u


class HypothesisError(ValueError):
    """An operator input failed one of its validated hypotheses."""


@dataclass(frozen=True)
class OperatorKind:
    """Addressable operator tag: one of Rk/Tk/TkStar/Qk, left or right."""

    tag: str
    side: str
    m: int
    k: int

    def __post_init__(self):
        if self.tag not in ("Rk", "Tk", "TkStar", "Qk"):
            raise ValueError(f"unknown operator tag {self.tag!r}")
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be left or right, got {self.side!r}")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.tag in ("Tk", "Qk") and self.k < 1:
            raise ValueError(f"{self.tag} requires k >= 1 (it consumes u M_(k-1))")


# ------------------------------------------------------------------ validation


def validate_monogenic(f: MVPolynomial, m: int, k: int, group: str = "u",
                       side: str = "left") -> None:
    """Check f is (side-)monogenic and homogeneous of degree k in the group."""
    deg = f.homogeneous_degree(group)
    if deg is None or (f.terms and deg != k):
        raise HypothesisError(
            f"homogeneity check failed: not of degree {k} in group {group!r}")
    op = dirac_left if side == "left" else dirac_right
    if not op(group, f).is_zero():
        raise HypothesisError(
            f"monogenicity check failed: {side} Dirac in {group!r} is nonzero")


def extract_u_factor(g: MVPolynomial, m: int, k: int, group: str = "u",
                     side: str = "left") -> MVPolynomial:
    """For g = u q (left) or q u (right) with q monogenic of degree k-1,
    recover q; raises HypothesisError when g does not have that shape."""
    if k < 1:
        raise HypothesisError("u M_(k-1) form requires k >= 1")
    if g.is_zero():
        return MVPolynomial.zero(g.m)
    c = Fraction(-1, spaces.projection_divisor(m, k))
    u = vector_poly(g.m, group)
    if side == "left":
        q = dirac_left(group, g) * c
        recon = u * q
    else:
        q = dirac_right(group, g) * c
        recon = q * u
    if recon != g:
        raise HypothesisError(
            f"structure check failed: input is not of the form "
            f"{'u*(monogenic)' if side == 'left' else '(monogenic)*u'}")
    validate_monogenic(q, m, k - 1, group, side)
    return q


# ------------------------------------------------------------ left operators


def apply_Rk(f: MVPolynomial, m: int, k: int, xgroup: str = "x",
             ugroup: str = "u") -> MVPolynomial:
    """R_k f = P_k D_x f for f in M_k pointwise; R_0 is the plain Dirac."""
    validate_monogenic(f, m, k, ugroup, "left")
    h = dirac_left(xgroup, f)
    if k == 0:
        return h
    return spaces.project_Pk(h, k, ugroup)


def apply_TkStar(f: MVPolynomial, m: int, k: int, xgroup: str = "x",
                 ugroup: str = "u") -> MVPolynomial:
    """T_k* f = (I - P_k) D_x f; lands in u M_(k-1), zero for k = 0."""
    validate_monogenic(f, m, k, ugroup, "left")
    h = dirac_left(xgroup, f)
    if k == 0:
        return MVPolynomial.zero(f.m)
    return h - spaces.project_Pk(h, k, ugroup)


def apply_Tk(g: MVPolynomial, m: int, k: int, xgroup: str = "x",
             ugroup: str = "u") -> MVPolynomial:
    """T_k g = P_k D_x g for g = u q, q in M_(k-1) pointwise."""
    extract_u_factor(g, m, k, ugroup, "left")
    h = dirac_left(xgroup, g)
    return spaces.project_Pk(h, k, ugroup)


def apply_Qk(g: MVPolynomial, m: int, k: int, xgroup: str = "x",
             ugroup: str = "u") -> MVPolynomial:
    """Q_k g = (I - P_k) D_x g for g = u q, q in M_(k-1) pointwise."""
    extract_u_factor(g, m, k, ugroup, "left")
    h = dirac_left(xgroup, g)
    return h - spaces.project_Pk(h, k, ugroup)


# ------------------------------------------------------------ right operators


def apply_Rk_right(f: MVPolynomial, m: int, k: int, xgroup: str = "x",
                   ugroup: str = "u") -> MVPolynomial:
    """f R_(k,r) = (f D_x) P_(k,r) for f valued in bar(M)_k."""
    validate_monogenic(f, m, k, ugroup, "right")
    h = dirac_right(xgroup, f)
    if k == 0:
        return h
    return spaces.project_Pk_right(h, k, ugroup)


def apply_TkStar_right(f: MVPolynomial, m: int, k: int, xgroup: str = "x",
                       ugroup: str = "u") -> MVPolynomial:
    """f T*_(k,r) = (f D_x)(I - P_(k,r)) for f valued in bar(M)_k."""
    validate_monogenic(f, m, k, ugroup, "right")
    h = dirac_right(xgroup, f)
    if k == 0:
        return MVPolynomial.zero(f.m)
    return h - spaces.project_Pk_right(h, k, ugroup)


def apply_Tk_right(g: MVPolynomial, m: int, k: int, xgroup: str = "x",
                   ugroup: str = "u") -> MVPolynomial:
    """g T_(k,r) = (g D_x) P_(k,r) for g valued in bar(M)_(k-1) u."""
    extract_u_factor(g, m, k, ugroup, "right")
    h = dirac_right(xgroup, g)
    return spaces.project_Pk_right(h, k, ugroup)


def apply_Qk_right(g: MVPolynomial, m: int, k: int, xgroup: str = "x",
                   ugroup: str = "u") -> MVPolynomial:
    """g Q_(k,r) = (g D_x)(I - P_(k,r)) for g valued in bar(M)_(k-1) u."""
    extract_u_factor(g, m, k, ugroup, "right")
    h = dirac_right(xgroup, g)
    return h - spaces.project_Pk_right(h, k, ugroup)


_LEFT_OPS = {"Rk": apply_Rk, "Tk": apply_Tk, "TkStar": apply_TkStar, "Qk": apply_Qk}
_RIGHT_OPS = {
    "Rk": apply_Rk_right,
    "Tk": apply_Tk_right,
    "TkStar": apply_TkStar_right,
    "Qk": apply_Qk_right,
}


def apply_operator(kind: OperatorKind, f: MVPolynomial, xgroup: str = "x",
                   ugroup: str = "u") -> MVPolynomial:
    ops = _LEFT_OPS if kind.side == "left" else _RIGHT_OPS
    return ops[kind.tag](f, kind.m, kind.k, xgroup, ugroup)


def apply_right(tag: str, f: MVPolynomial, m: int, k: int, xgroup: str = "x",
                ugroup: str = "u") -> MVPolynomial:
    """Right operator addressed by tag: rk, tk, tkstar or qk."""
    names = {"rk": "Rk", "tk": "Tk", "tkstar": "TkStar", "qk": "Qk"}
    canon = names.get(tag.lower(), tag)
    return apply_operator(OperatorKind(canon, "right", m, k), f, xgroup, ugroup)


# ----------------------------------------------------------- radial-form forms


def apply_Rk_radial(r: RadialForm, m: int, k: int, xgroup: str = "y",
                    ugroup: str = "w") -> RadialForm:
    """R_k on numerator * |y|^(-t): radial Dirac in y, then P_k in w."""
    validate_monogenic(r.num, m, k, ugroup, "left")
    d = dirac_left_radial(xgroup, r)
    if k == 0:
        return d
    return RadialForm(spaces.project_Pk(d.num, k, ugroup), d.t, d.rgroup)


# ------------------------------------------------------------ Stein-Weiss check


def stein_weiss_residual(f: MVPolynomial, m: int, k: int, xgroup: str = "x",
                         ugroup: str = "u") -> list[MVPolynomial]:
    """Fischer pairings (q, D_x f)_u - (q, R_k f)_u over the M_k basis.

    Uses the conjugated Fischer inner product; the gradient projected onto
    the M_k component equals R_k, so every residual must vanish.
    """
    validate_monogenic(f, m, k, ugroup, "left")
    df = dirac_left(xgroup, f)
    rf = apply_Rk(f, m, k, xgroup, ugroup)
    basis = spaces.monogenic_basis(m, k, "left", ugroup)
    residuals = []
    for q in basis.elements:
        lhs = pairing_u(q, df, conjugated=True, group=ugroup)
        rhs = pairing_u(q, rf, conjugated=True, group=ugroup)
        residuals.append(lhs - rhs)
    return residuals
