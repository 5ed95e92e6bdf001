"""Exact integration over the unit sphere and unit ball, and Stokes checks.

All integrals are carried in units of the sphere area omega_(m-1), which
makes every moment an exact rational: the normalized monomial moment is

    (1/omega) * int_S u^alpha dS
        = prod_i (alpha_i - 1)!! / prod_{j=0}^{s-1} (m + 2j),   s = |alpha|/2,

zero whenever any exponent is odd.  Ball integrals pick up the radial factor
1/(d + m) per homogeneous degree d.  Both sides of every verified theorem
share the same units, so the omega factors cancel identically.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Multivector
from .poly import (
    MVPolynomial,
    mono_degree,
    mono_exps,
    mono_mul,
    mono_without,
    vector_poly,
)
from . import spaces


@functools.lru_cache(maxsize=None)
def _moment_from_profile(profile: tuple[int, ...], m: int) -> Fraction:
    total = sum(profile)
    s = total // 2
    num = 1
    for a in profile:
        for odd in range(1, a, 2):
            num *= odd
    den = 1
    for j in range(s):
        den *= m + 2 * j
    return Fraction(num, den)


def sphere_moment(alpha, m: int) -> Fraction:
    """Normalized sphere moment (1/omega) int_S u^alpha dS."""
    profile = []
    for a in alpha:
        if a & 1:
            return Fraction(0)
        if a:
            profile.append(a)
    if not profile:
        return Fraction(1)
    return _moment_from_profile(tuple(sorted(profile)), m)


def sphere_integral(p: MVPolynomial, group: str) -> MVPolynomial:
    """Integrate the group out over the unit sphere (normalized)."""
    out = MVPolynomial.zero(p.m)
    acc: dict = {}
    for mono, c in p.terms.items():
        mom = sphere_moment(mono_exps(mono, group, p.m), p.m)
        if not mom:
            continue
        rest = mono_without(mono, group)
        add = c * mom
        s = acc.get(rest)
        s = add if s is None else s + add
        if s.is_zero():
            acc.pop(rest, None)
        else:
            acc[rest] = s
    return MVPolynomial(p.m, acc, _checked=True)


def _as_multivector(p: MVPolynomial) -> Multivector:
    if p.is_zero():
        return Multivector.zero(p.m)
    if set(p.terms) != {()}:
        raise ValueError("polynomial still carries free variable groups")
    return p.terms[()]


def sphere_integral_full(p: MVPolynomial, group: str) -> Multivector:
    return _as_multivector(sphere_integral(p, group))


def ball_integral(p: MVPolynomial, group: str = "x") -> Multivector:
    """Normalized integral over the unit ball: moment / (degree + m)."""
    m = p.m
    total = Multivector.zero(m)
    for mono, c in p.terms.items():
        exps = mono_exps(mono, group, m)
        if mono_without(mono, group):
            raise ValueError("ball_integral expects a single-group polynomial")
        mom = sphere_moment(exps, m)
        if not mom:
            continue
        total = total + c * (mom / (sum(exps) + m))
    return total


def pairing_u(P: MVPolynomial, Q: MVPolynomial, conjugated: bool = False,
              group: str = "u") -> MVPolynomial:
    """Sphere pairing (P, Q)_u = (1/omega) int_S P(u) Q(u) dS(u).

    The conjugated flag applies Clifford conjugation to the left factor,
    giving the Fischer inner product; the plain version is the bilinear
    pairing used by the Stokes theorems.  Other variable groups pass
    through as polynomial coefficients.
    """
    if P.m != Q.m:
        raise ValueError("pairing of polynomials over different dimensions")
    m = P.m
    if conjugated:
        P = P.conjugate_coeffs()
    pterms = [
        (mono_exps(mono, group, m), mono_without(mono, group), c)
        for mono, c in P.terms.items()
    ]
    qterms = [
        (mono_exps(mono, group, m), mono_without(mono, group), c)
        for mono, c in Q.terms.items()
    ]
    acc: dict = {}
    for pe, pr, pc in pterms:
        for qe, qr, qc in qterms:
            combined = tuple(a + b for a, b in zip(pe, qe))
            odd = False
            for a in combined:
                if a & 1:
                    odd = True
                    break
            if odd:
                continue
            mom = sphere_moment(combined, m)
            c = (pc * qc) * mom
            if c.is_zero():
                continue
            mono = mono_mul(pr, qr)
            s = acc.get(mono)
            s = c if s is None else s + c
            if s.is_zero():
                acc.pop(mono, None)
            else:
                acc[mono] = s
    return MVPolynomial(m, acc, _checked=True)


# ---------------------------------------------------------------- Stokes suite


STOKES_THEOREMS = ("rk", "qk", "tk", "tkstar", "alt", "cauchy-rk", "cauchy-qk")


@dataclass
class IntegralReport:
    """Outcome of one Stokes/Cauchy verification; pass iff residuals vanish."""

    theorem: str
    lhs: Multivector
    rhs: Multivector
    residuals: list = field(default_factory=list)

    @property
    def residual(self) -> Multivector:
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for r in self.residuals)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "residual_zero": self.passed,
            "residual_terms": sum(len(r.terms) for r in self.residuals),
            "pass": self.passed,
        }


def stokes_check(theorem: str, f: MVPolynomial, g: MVPolynomial, m: int,
                 k: int) -> IntegralReport:
    """Verify the named integral theorem exactly on the unit ball.

    Domain is the unit ball, boundary the unit sphere with outward normal
    n(x) = x.  Value-type hypotheses per theorem (validated exactly):

      rk:        f M_k-valued, g bar(M)_k-valued
      tk:        f u M_(k-1)-valued, g bar(M)_k-valued
      tkstar:    f M_k-valued, g bar(M)_(k-1) u-valued
      qk:        f u M_(k-1)-valued, g bar(M)_(k-1) u-valued
      alt:       f M_k-valued, g bar(M)_(k-1)-valued (paired as g u)
      cauchy-rk: as rk plus R_k f = 0 and g R_(k,r) = 0
      cauchy-qk: as qk plus Q_k f = 0 and g Q_(k,r) = 0

    The volume side pairs each function against the dual right/left operator
    of its partner; the boundary side is the double sphere integral of the
    projected normal pairing, computed through both projection placements.
    """
    from . import operators as ops

    if theorem not in STOKES_THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; expected one of {STOKES_THEOREMS}")
    xvec = vector_poly(m, "x")

    def P(h):
        return spaces.project_Pk(h, k, "u")

    def Pr(h):
        return spaces.project_Pk_right(h, k, "u")

    def IP(h):
        return h - P(h)

    def IPr(h):
        return h - Pr(h)

    if theorem in ("rk", "cauchy-rk"):
        rk_f = ops.apply_Rk(f, m, k)
        rk_g = ops.apply_Rk_right(g, m, k)
        vol = ball_integral(pairing_u(rk_g, f) + pairing_u(g, rk_f), "x")
        b1 = sphere_integral_full(pairing_u(g, P(xvec * f)), "x")
        b2 = sphere_integral_full(pairing_u(Pr(g * xvec), f), "x")
        if theorem == "cauchy-rk":
            if not rk_f.is_zero():
                raise ops.HypothesisError("cauchy-rk requires R_k f = 0")
            if not rk_g.is_zero():
                raise ops.HypothesisError("cauchy-rk requires g R_(k,r) = 0")
            zero = Multivector.zero(m)
            return IntegralReport("cauchy-rk", b1, zero, [b1, b2])
        return IntegralReport("rk", vol, b1, [vol - b1, b1 - b2])

    if theorem == "tk":
        tk_f = ops.apply_Tk(f, m, k)
        tks_g = ops.apply_TkStar_right(g, m, k)
        vol = ball_integral(pairing_u(tks_g, f) + pairing_u(g, tk_f), "x")
        b1 = sphere_integral_full(pairing_u(g, P(xvec * f)), "x")
        b2 = sphere_integral_full(pairing_u(IPr(g * xvec), f), "x")
        return IntegralReport("tk", vol, b1, [vol - b1, b1 - b2])

    if theorem == "tkstar":
        tks_f = ops.apply_TkStar(f, m, k)
        tk_g = ops.apply_Tk_right(g, m, k)
        vol = ball_integral(pairing_u(tk_g, f) + pairing_u(g, tks_f), "x")
        b1 = sphere_integral_full(pairing_u(g, IP(xvec * f)), "x")
        b2 = sphere_integral_full(pairing_u(Pr(g * xvec), f), "x")
        return IntegralReport("tkstar", vol, b1, [vol - b1, b1 - b2])

    if theorem in ("qk", "cauchy-qk"):
        qk_f = ops.apply_Qk(f, m, k)
        qk_g = ops.apply_Qk_right(g, m, k)
        vol = ball_integral(pairing_u(qk_g, f) + pairing_u(g, qk_f), "x")
        b1 = sphere_integral_full(pairing_u(g, IP(xvec * f)), "x")
        b2 = sphere_integral_full(pairing_u(IPr(g * xvec), f), "x")
        if theorem == "cauchy-qk":
            if not qk_f.is_zero():
                raise ops.HypothesisError("cauchy-qk requires Q_k f = 0")
            if not qk_g.is_zero():
                raise ops.HypothesisError("cauchy-qk requires g Q_(k,r) = 0")
            zero = Multivector.zero(m)
            return IntegralReport("cauchy-qk", b1, zero, [b1, b2])
        return IntegralReport("qk", vol, b1, [vol - b1, b1 - b2])

    # alternative form: boundary written without projection, g paired as g u
    uvec = vector_poly(m, "u")
    ops.validate_monogenic(f, m, k, "u", "left")
    ops.validate_monogenic(g, m, k - 1, "u", "right")
    gu = g * uvec
    tks_f = ops.apply_TkStar(f, m, k)
    tk_gu = ops.apply_Tk_right(gu, m, k)
    plain = sphere_integral_full(pairing_u(gu, xvec * f), "x")
    vol = ball_integral(pairing_u(tk_gu, f) + pairing_u(gu, tks_f), "x")
    b1 = sphere_integral_full(pairing_u(gu, IP(xvec * f)), "x")
    b2 = sphere_integral_full(pairing_u(Pr(gu * xvec), f), "x")
    return IntegralReport("alt", plain, vol, [plain - vol, plain - b1, plain - b2])
