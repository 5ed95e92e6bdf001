"""Exact arithmetic in the real Clifford algebra Cl_m and its complexification.

The algebra is generated by e_1 .. e_m subject to

    e_i e_j + e_j e_i = -2 delta_ij,

so every vector squares to minus its squared length.  A multivector is a
sparse map from basis blades to exact scalars; blades are bitmasks over the
generator indices (bit i-1 set means e_i participates).  Products are signed
by the parity of the transpositions needed to sort the concatenated index
lists, plus one factor of -1 per contracted generator pair.

All values are immutable after construction and every operation is a pure
function, so multivectors can be shared freely.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .scalars import ComplexRational, is_exact_scalar

MAX_DIM = 12

_BLADE_MUL_CACHE: dict[tuple[int, int], tuple[int, int]] = {}


def _blade_mul(a: int, b: int) -> tuple[int, int]:
    """Multiply basis blades given as bitmasks.

    Returns (blade, sign) with sign in {1, -1}.  Each generator common to
    both operands contracts with e_i^2 = -1.
    """
    key = (a, b)
    hit = _BLADE_MUL_CACHE.get(key)
    if hit is not None:
        return hit
    swaps = 0
    n = a >> 1
    while n:
        swaps += (n & b).bit_count()
        n >>= 1
    swaps += (a & b).bit_count()  # contractions, e_i^2 = -1
    result = (a ^ b, -1 if swaps & 1 else 1)
    if len(_BLADE_MUL_CACHE) < 1 << 18:
        _BLADE_MUL_CACHE[key] = result
    return result


def blade_indices(blade: int) -> tuple[int, ...]:
    """Generator indices (1-based, ascending) of a blade bitmask."""
    out = []
    i = 1
    while blade:
        if blade & 1:
            out.append(i)
        blade >>= 1
        i += 1
    return tuple(out)


def blade_from_indices(indices: Iterable[int], m: int) -> int:
    mask = 0
    for i in indices:
        if not 1 <= i <= m:
            raise ValueError(f"generator index {i} out of range 1..{m}")
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError(f"repeated generator index {i} in blade")
        mask |= bit
    return mask


class DimensionMismatchError(ValueError):
    pass


class Multivector:
    """Element of Cl_m as a sparse blade -> scalar map.

    Scalars are Fraction for the real algebra or ComplexRational once the
    complexification is in play.  Zero coefficients are never stored.
    """

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: dict | None = None, _checked: bool = False):
        if not 1 <= m <= MAX_DIM:
            raise ValueError(f"dimension m={m} outside supported range 1..{MAX_DIM}")
        self.m = m
        if terms is None:
            self.terms = {}
        elif _checked:
            self.terms = terms
        else:
            clean = {}
            for blade, c in terms.items():
                if blade >> m:
                    raise ValueError(f"blade {blade:#x} uses generators beyond m={m}")
                if isinstance(c, int):
                    c = Fraction(c)
                elif not is_exact_scalar(c):
                    raise TypeError(f"coefficient {c!r} is not an exact scalar")
                if c:
                    clean[blade] = c
            self.terms = clean

    # ---------------------------------------------------------------- factories

    @classmethod
    def zero(cls, m: int) -> "Multivector":
        return cls(m, {}, _checked=True)

    @classmethod
    def scalar(cls, m: int, value) -> "Multivector":
        return cls(m, {0: value})

    @classmethod
    def basis_vector(cls, m: int, i: int) -> "Multivector":
        return cls(m, {blade_from_indices([i], m): Fraction(1)}, _checked=True)

    @classmethod
    def blade(cls, m: int, indices: Iterable[int], coeff=1) -> "Multivector":
        return cls(m, {blade_from_indices(indices, m): coeff})

    @classmethod
    def from_vector(cls, m: int, coords) -> "Multivector":
        coords = list(coords)
        if len(coords) != m:
            raise DimensionMismatchError(f"expected {m} coordinates, got {len(coords)}")
        return cls(m, {1 << i: c for i, c in enumerate(coords)})

    # ---------------------------------------------------------------- basic ops

    def _require_same_m(self, other: "Multivector"):
        if self.m != other.m:
            raise DimensionMismatchError(f"dimension mismatch: {self.m} vs {other.m}")

    def __add__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._require_same_m(other)
        terms = dict(self.terms)
        for blade, c in other.terms.items():
            s = terms.get(blade, 0) + c
            if s:
                terms[blade] = s
            else:
                terms.pop(blade, None)
        return Multivector(self.m, terms, _checked=True)

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._require_same_m(other)
        terms = dict(self.terms)
        for blade, c in other.terms.items():
            s = terms.get(blade, 0) - c
            if s:
                terms[blade] = s
            else:
                terms.pop(blade, None)
        return Multivector(self.m, terms, _checked=True)

    def __neg__(self):
        return Multivector(self.m, {b: -c for b, c in self.terms.items()}, _checked=True)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            self._require_same_m(other)
            acc: dict[int, object] = {}
            for b1, c1 in self.terms.items():
                for b2, c2 in other.terms.items():
                    blade, sign = _blade_mul(b1, b2)
                    c = c1 * c2
                    if sign < 0:
                        c = -c
                    s = acc.get(blade)
                    s = c if s is None else s + c
                    if s:
                        acc[blade] = s
                    else:
                        acc.pop(blade, None)
            return Multivector(self.m, acc, _checked=True)
        if is_exact_scalar(other):
            if not other:
                return Multivector.zero(self.m)
            return Multivector(
                self.m, {b: c * other for b, c in self.terms.items()}, _checked=True
            )
        return NotImplemented

    def __rmul__(self, other):
        # scalars commute; multivector * multivector goes through __mul__
        if is_exact_scalar(other):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if is_exact_scalar(other):
            if not other:
                raise ZeroDivisionError("division of multivector by zero scalar")
            return Multivector(
                self.m, {b: c / other for b, c in self.terms.items()}, _checked=True
            )
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self.m == other.m and self.terms == other.terms
        if is_exact_scalar(other):
            if not other:
                return not self.terms
            return self.terms == {0: other}
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    # ---------------------------------------------------------------- structure

    def is_zero(self) -> bool:
        return not self.terms

    def grades(self) -> set[int]:
        return {b.bit_count() for b in self.terms}

    def grade_part(self, r: int) -> "Multivector":
        return Multivector(
            self.m,
            {b: c for b, c in self.terms.items() if b.bit_count() == r},
            _checked=True,
        )

    def scalar_part(self):
        return self.terms.get(0, Fraction(0))

    def is_scalar(self) -> bool:
        return all(b == 0 for b in self.terms)

    def is_vector(self) -> bool:
        """Pure grade-1 element; zero counts as a (degenerate) vector."""
        return all(b.bit_count() == 1 for b in self.terms)

    def vector_coords(self) -> list:
        if not self.is_vector():
            raise ValueError("multivector is not a pure vector")
        return [self.terms.get(1 << i, Fraction(0)) for i in range(self.m)]

    def norm_sq(self):
        """Squared Euclidean norm of a pure vector."""
        coords = self.vector_coords()
        return sum((c * c for c in coords), Fraction(0))

    # ------------------------------------------------------------- involutions

    def reverse(self) -> "Multivector":
        out = {}
        for b, c in self.terms.items():
            r = b.bit_count()
            out[b] = -c if (r * (r - 1) // 2) & 1 else c
        return Multivector(self.m, out, _checked=True)

    def conjugate(self) -> "Multivector":
        out = {}
        for b, c in self.terms.items():
            r = b.bit_count()
            out[b] = -c if (r * (r + 1) // 2) & 1 else c
        return Multivector(self.m, out, _checked=True)

    def grade_involution(self) -> "Multivector":
        out = {}
        for b, c in self.terms.items():
            out[b] = -c if b.bit_count() & 1 else c
        return Multivector(self.m, out, _checked=True)

    # ------------------------------------------------------- group-type inverses

    def gamma_norm_sq(self):
        """a * conj(a) when that product is a scalar, else None.

        For products of nonzero vectors this is the squared norm of the
        element and is nonzero.
        """
        s = self * self.conjugate()
        if not s.is_scalar():
            return None
        return s.scalar_part()

    def lipschitz_inverse(self) -> "Multivector":
        """Inverse of a product of nonzero vectors: conj(a) / (a conj(a))."""
        s = self.gamma_norm_sq()
        if s is None:
            raise ValueError("element has no scalar a*conj(a); not a vector product")
        if not s:
            raise ZeroDivisionError("singular element: a*conj(a) = 0")
        return self.conjugate() / s

    def is_vector_product(self) -> bool:
        """Membership test for the Lipschitz group (products of nonzero vectors).

        Checks that a*conj(a) is a nonzero scalar and that twisted conjugation
        a e_i alpha(a)^{-1} maps every generator to a vector.
        """
        if self.is_zero():
            return False
        s = self.gamma_norm_sq()
        if s is None or not s:
            return False
        inv_gi = (self.conjugate() / s).grade_involution()
        for i in range(1, self.m + 1):
            img = self * Multivector.basis_vector(self.m, i) * inv_gi
            if not img.is_vector():
                return False
        return True

    def complexify(self) -> "Multivector":
        return Multivector(
            self.m,
            {b: ComplexRational(c) if isinstance(c, Fraction) else c
             for b, c in self.terms.items()},
            _checked=True,
        )

    # ------------------------------------------------------------- serialization

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for b in sorted(self.terms, key=lambda b: (b.bit_count(), b)):
            c = self.terms[b]
            if isinstance(c, ComplexRational):
                neg = False
                cs = f"({c})"
            else:
                neg = c < 0
                cs = str(-c if neg else c)
            blade = "".join(f"e{i}" for i in blade_indices(b))
            if not blade:
                body = cs
            elif cs == "1":
                body = blade
            else:
                body = f"{cs}*{blade}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str, m: int) -> "Multivector":
        total = cls.zero(m)
        for sign, term in _split_terms(text):
            total = total + _parse_term(term, m) * sign
        return total

    def to_json(self) -> dict:
        terms = []
        for b in sorted(self.terms, key=lambda b: (b.bit_count(), b)):
            c = self.terms[b]
            entry = {"blade": list(blade_indices(b))}
            if isinstance(c, ComplexRational):
                entry["num"] = c.re.numerator
                entry["den"] = c.re.denominator
                entry["im_num"] = c.im.numerator
                entry["im_den"] = c.im.denominator
            else:
                entry["num"] = c.numerator
                entry["den"] = c.denominator
            terms.append(entry)
        return {"m": self.m, "terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> "Multivector":
        m = data["m"]
        terms = {}
        for entry in data["terms"]:
            blade = blade_from_indices(entry["blade"], m)
            c = Fraction(entry["num"], entry["den"])
            if "im_num" in entry:
                c = ComplexRational(c, Fraction(entry["im_num"], entry["im_den"]))
            terms[blade] = c
        return cls(m, terms)

    def __repr__(self):
        return f"Multivector(m={self.m}, {self.to_text()})"


def _split_terms(text: str):
    """Split 'a + b - c' into signed chunks, respecting parentheses."""
    text = text.strip()
    if not text:
        raise ValueError("empty multivector text")
    chunks = []
    depth = 0
    sign = 1
    cur = []
    i = 0
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        i = 1
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0:
            term = "".join(cur).strip()
            if term:
                chunks.append((sign, term))
            sign = -1 if ch == "-" else 1
            cur = []
        else:
            cur.append(ch)
        i += 1
    term = "".join(cur).strip()
    if term:
        chunks.append((sign, term))
    return chunks


def _parse_scalar(s: str):
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        inner = s[1:-1]
        re_part = Fraction(0)
        im_part = Fraction(0)
        for sg, piece in _split_terms(inner):
            piece = piece.strip()
            if piece.endswith("i"):
                body = piece[:-1] or "1"
                im_part += sg * Fraction(body)
            else:
                re_part += sg * Fraction(piece)
        return ComplexRational(re_part, im_part)
    if s.endswith("i"):
        return ComplexRational(0, Fraction(s[:-1] or "1"))
    return Fraction(s)


def _parse_term(term: str, m: int) -> Multivector:
    term = term.strip()
    if "*" in term:
        cs, blade_s = term.split("*", 1)
        coeff = _parse_scalar(cs)
    elif term.startswith("e") and term[1:2].isdigit():
        coeff = Fraction(1)
        blade_s = term
    else:
        return Multivector.scalar(m, _parse_scalar(term))
    blade_s = blade_s.strip()
    indices = [int(p) for p in blade_s.split("e") if p]
    return Multivector.blade(m, indices, coeff)


# ------------------------------------------------------------------ module ops


def geometric_product(lhs: Multivector, rhs: Multivector) -> Multivector:
    return lhs * rhs


def reverse(a: Multivector) -> Multivector:
    return a.reverse()


def conjugate(a: Multivector) -> Multivector:
    return a.conjugate()


def grade_involution(a: Multivector) -> Multivector:
    return a.grade_involution()


def vector_inverse(v: Multivector) -> Multivector:
    """Clifford inverse of a nonzero vector: v^{-1} = -v / |v|^2."""
    if not v.is_vector():
        raise ValueError("vector_inverse requires a pure grade-1 element")
    n = v.norm_sq()
    if not n:
        raise ZeroDivisionError("zero vector has no inverse")
    return -v / n

def reflect(a: Multivector, x: Multivector) -> Multivector:
    """Reflection a x reverse(a) of the vector x across the hyperplane of a.

    a must be an exactly-unit rational vector (axis vectors in practice)
    to keep the result radical-free.
    """
    if not a.is_vector():
        raise ValueError("reflect requires a pure vector a")
    if a.norm_sq() != 1:
        raise ValueError("reflect requires a unit vector a (|a|^2 = 1 exactly)")
    if not x.is_vector():
        raise ValueError("reflect requires a pure vector x")
    out = a * x * a.reverse()
    if not out.is_vector():
        raise AssertionError("reflection produced a non-vector")
    return out


def witt_basis(m: int):
    """Witt basis of the complexified algebra for even m = 2n.

    Returns (f, f_dagger, I) with f_j = (e_j - i e_{j+n})/2,
    f_j^dagger = -(e_j + i e_{j+n})/2 and the idempotent
    I = f_1 f_1^dagger ... f_n f_n^dagger generating the spinor left ideal.
    """
    if m % 2 != 0:
        raise ValueError("witt_basis requires even dimension m = 2n")
    n = m // 2
    half = Fraction(1, 2)
    i_half = ComplexRational(0, half)
    fs = []
    fdags = []
    for j in range(1, n + 1):
        ej = Multivector.basis_vector(m, j).complexify()
        ejn = Multivector.basis_vector(m, j + n).complexify()
        fs.append(ej * half - ejn * i_half)
        fdags.append(-(ej * half) - ejn * i_half)
    idem = Multivector.scalar(m, ComplexRational(1))
    for f, fd in zip(fs, fdags):
        idem = idem * f * fd
    return fs, fdags, idem
