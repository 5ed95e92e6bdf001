"""Explicit bases of harmonic and monogenic polynomial spaces.

H_k is the space of degree-k homogeneous harmonic polynomials (scalar kernel
of the Laplacian, with the Clifford-valued space obtained by tensoring
blades on the right).  M_k is the full Clifford-valued kernel of the left or
right Dirac operator, computed by exact Gaussian elimination with
lexicographic pivoting so bases are reproducible.

The Almansi-Fischer decomposition H_k = M_k + u M_{k-1} is realized by the
projection P_k = (u D_u / (m + 2k - 2) + 1) and its mirrored right version.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Multivector, _blade_mul
from .linalg import nullspace, rref
from .poly import (
    MVPolynomial,
    VarGroup,
    dirac_left,
    dirac_right,
    laplacian,
    mono_exps,
    mono_without,
    vector_poly,
    _single,
)


class SpaceError(ValueError):
    pass


@functools.lru_cache(maxsize=None)
def monomials_of_degree(m: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of total degree k in m variables, ascending lex."""
    if k < 0:
        return ()

    def gen(pos: int, remaining: int, prefix: tuple[int, ...]):
        if pos == m - 1:
            yield prefix + (remaining,)
            return
        for e in range(remaining + 1):
            yield from gen(pos + 1, remaining - e, prefix + (e,))

    return tuple(sorted(gen(0, k, ())))


@dataclass(frozen=True)
class PolySpaceBasis:
    """Explicit basis of H_k or M_k with metadata."""

    m: int
    k: int
    kind: str  # harmonic | left-monogenic | right-monogenic
    group: VarGroup
    elements: tuple[MVPolynomial, ...]

    @property
    def scalar_rank(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "kind": self.kind,
            "group": self.group.name,
            "scalar_rank": self.scalar_rank,
            "elements": [e.to_json() for e in self.elements],
        }


def projection_divisor(m: int, k: int) -> int:
    """Constant m + 2k - 2 in the Almansi-Fischer projection."""
    return m + 2 * k - 2


@functools.lru_cache(maxsize=None)
def harmonic_basis(m: int, k: int, group: str = "u") -> PolySpaceBasis:
    """Scalar-valued basis of ker Delta on degree-k homogeneous polynomials.

    The Clifford-valued space is this basis tensored with blades on the
    right; see tensor_with_blades.
    """
    if m < 2 or k < 0:
        raise SpaceError("harmonic_basis requires m >= 2, k >= 0")
    cols = monomials_of_degree(m, k)
    col_index = {mono: i for i, mono in enumerate(cols)}
    targets = monomials_of_degree(m, k - 2) if k >= 2 else ()
    row_index = {mono: i for i, mono in enumerate(targets)}
    rows: list[dict[int, Fraction]] = [{} for _ in targets]
    for j, alpha in enumerate(cols):
        for i, e in enumerate(alpha):
            if e < 2:
                continue
            beta = tuple(v - 2 if t == i else v for t, v in enumerate(alpha))
            rows[row_index[beta]][j] = rows[row_index[beta]].get(j, Fraction(0)) + e * (e - 1)
    kernel = nullspace(rows, len(cols))
    one = Multivector.scalar(m, 1)
    elements = []
    for vec in kernel:
        terms = {}
        for j, val in vec.items():
            terms[_single(group, cols[j])] = one * val
        elements.append(MVPolynomial(m, terms))
    basis = PolySpaceBasis(m, k, "harmonic", VarGroup(group, m), tuple(elements))
    for e in basis.elements:
        if not laplacian(group, e).is_zero():
            raise AssertionError("harmonic basis element not annihilated by Laplacian")
    return basis


@functools.lru_cache(maxsize=None)
def monogenic_basis(m: int, k: int, side: str = "left", group: str = "u") -> PolySpaceBasis:
    """Basis of Clifford-valued degree-k homogeneous monogenic polynomials.

    side selects the kernel of the left or the right Dirac operator; the
    coefficient space mixes blades, so the full 2^m-fold kernel is computed.
    """
    if side not in ("left", "right"):
        raise SpaceError(f"side must be 'left' or 'right', got {side!r}")
    if m < 2 or k < 0:
        raise SpaceError("monogenic_basis requires m >= 2, k >= 0")
    monos = monomials_of_degree(m, k)
    nblades = 1 << m
    ncols = len(monos) * nblades
    targets = monomials_of_degree(m, k - 1) if k >= 1 else ()
    target_index = {mono: i for i, mono in enumerate(targets)}
    rows: list[dict[int, Fraction]] = [{} for _ in range(len(targets) * nblades)]
    for mi, alpha in enumerate(monos):
        for blade in range(nblades):
            col = mi * nblades + blade
            for i, e in enumerate(alpha):
                if not e:
                    continue
                beta = tuple(v - 1 if t == i else v for t, v in enumerate(alpha))
                if side == "left":
                    out_blade, sign = _blade_mul(1 << i, blade)
                else:
                    out_blade, sign = _blade_mul(blade, 1 << i)
                row = target_index[beta] * nblades + out_blade
                val = rows[row].get(col, Fraction(0)) + sign * e
                if val:
                    rows[row][col] = val
                else:
                    rows[row].pop(col, None)
    kernel = nullspace(rows, ncols)
    elements = []
    for vec in kernel:
        coeffs: dict[tuple, dict[int, Fraction]] = {}
        for col, val in vec.items():
            mi, blade = divmod(col, nblades)
            coeffs.setdefault(monos[mi], {})[blade] = val
        terms = {
            _single(group, alpha): Multivector(m, blades)
            for alpha, blades in coeffs.items()
        }
        elements.append(MVPolynomial(m, terms))
    kind = f"{side}-monogenic"
    basis = PolySpaceBasis(m, k, kind, VarGroup(group, m), tuple(elements))
    op = dirac_left if side == "left" else dirac_right
    for e in basis.elements:
        if not op(group, e).is_zero():
            raise AssertionError("monogenic basis element not annihilated by Dirac")
    return basis


def tensor_with_blades(basis: PolySpaceBasis) -> list[MVPolynomial]:
    """Clifford-valued spanning set: each element right-multiplied by each blade."""
    m = basis.m
    out = []
    for e in basis.elements:
        for blade in range(1 << m):
            out.append(e.mul_mv_right(Multivector(m, {blade: Fraction(1)})))
    return out


# ------------------------------------------------------------------ projections


def _validate_harmonic_homogeneous(h: MVPolynomial, k: int, group: str):
    deg = h.homogeneous_degree(group)
    if deg is None or (h.terms and deg != k):
        raise SpaceError(f"input not homogeneous of degree {k} in group {group!r}")
    if not laplacian(group, h).is_zero():
        raise SpaceError("input is not harmonic")


def project_Pk(h: MVPolynomial, k: int, group: str = "u") -> MVPolynomial:
    """Almansi-Fischer projection of H_k onto M_k.

    P_k h = (u D_u / (m + 2k - 2) + 1) h; idempotent on harmonics, identity
    on monogenics, kills u M_{k-1}.
    """
    _validate_harmonic_homogeneous(h, k, group)
    if k == 0:
        return h
    m = h.m
    c = Fraction(1, projection_divisor(m, k))
    u = vector_poly(m, group)
    return u * dirac_left(group, h) * c + h


def project_Pk_right(h: MVPolynomial, k: int, group: str = "u") -> MVPolynomial:
    """Mirrored projection onto right-monogenics along bar(M)_{k-1} u.

    P_{k,r} h = (h D_u) u / (m + 2k - 2) + h.
    """
    _validate_harmonic_homogeneous(h, k, group)
    if k == 0:
        return h
    m = h.m
    c = Fraction(1, projection_divisor(m, k))
    u = vector_poly(m, group)
    return dirac_right(group, h) * u * c + h


def almansi_fischer_split(h: MVPolynomial, k: int, group: str = "u"):
    """Split h in H_k as p_k + u p_{k-1} with both parts monogenic.

    p_{k-1} is recovered by applying D_u to the complement and dividing by
    -(m + 2k - 2); the reconstruction is verified exactly.
    """
    p_k = project_Pk(h, k, group)
    r = h - p_k
    m = h.m
    if k == 0:
        if not r.is_zero():
            raise SpaceError("degree-0 harmonic failed to project to itself")
        return p_k, MVPolynomial.zero(m)
    c = Fraction(-1, projection_divisor(m, k))
    p_km1 = dirac_left(group, r) * c
    u = vector_poly(m, group)
    if u * p_km1 != r:
        raise SpaceError("Almansi-Fischer reconstruction failed")
    return p_k, p_km1


def spinor_filter(p: MVPolynomial, idempotent: Multivector) -> MVPolynomial:
    """Project values into the spinor left ideal by right-multiplying the
    idempotent from the Witt construction.  Identity on the ideal."""
    return p.map_coeffs(lambda c: c.complexify() * idempotent)


# ----------------------------------------------------------- coordinate helpers


def poly_coordinates(p: MVPolynomial, group: str) -> dict:
    """Flatten to (exponents, blade) -> Fraction for exact linear algebra.

    Any groups other than `group` must be absent.
    """
    out = {}
    for mono, c in p.terms.items():
        if mono_without(mono, group):
            raise SpaceError("poly_coordinates expects a single-group polynomial")
        exps = mono_exps(mono, group, p.m)
        for blade, val in c.terms.items():
            out[(exps, blade)] = val
    return out


def space_contains(elements, p: MVPolynomial, group: str = "u") -> bool:
    """Exact span membership test via rank comparison."""
    keys: dict = {}

    def row_of(q):
        row = {}
        for key, val in poly_coordinates(q, group).items():
            idx = keys.setdefault(key, len(keys))
            row[idx] = val
        return row

    rows = [row_of(e) for e in elements]
    prow = row_of(p)
    ncols = len(keys)
    base_rank = len(rref([dict(r) for r in rows], ncols))
    rows.append(prow)
    return len(rref(rows, ncols)) == base_rank
