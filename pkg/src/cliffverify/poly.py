"""Multivector-coefficient polynomials in named vector-variable groups.

A polynomial lives over one algebra dimension m and uses variable groups
named "x", "u", "y", "w", each a vector of m commuting real variables.
Coefficients are multivectors and do not commute, so the Dirac operators
come in left and right flavours and products keep coefficient order
(coefficient of the left factor multiplies on the left).

RadialForm extends the ring by a single denominator |y|^t, which is all the
Kelvin-type inversion images need.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .algebra import DimensionMismatchError, Multivector
from .scalars import is_exact_scalar

GROUP_NAMES = ("u", "w", "x", "y")


class VarGroup(NamedTuple):
    """A named group of m commuting variables sharing the algebra dimension."""

    name: str
    m: int


# A monomial is a sorted tuple of (group_name, exponent_tuple) pairs with
# all-zero groups omitted; the empty tuple is the constant monomial.
Mono = tuple

_EMPTY_MONO: Mono = ()


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for g, exps in b:
        cur = acc.get(g)
        if cur is None:
            acc[g] = exps
        else:
            acc[g] = tuple(x + y for x, y in zip(cur, exps))
    return tuple(sorted(acc.items()))


def mono_exps(mono: Mono, group: str, m: int) -> tuple[int, ...]:
    for g, exps in mono:
        if g == group:
            return exps
    return (0,) * m


def mono_degree(mono: Mono, group: str) -> int:
    for g, exps in mono:
        if g == group:
            return sum(exps)
    return 0


def mono_without(mono: Mono, group: str) -> Mono:
    return tuple((g, e) for g, e in mono if g != group)


def mono_replace(mono: Mono, group: str, exps: tuple[int, ...]) -> Mono:
    rest = [(g, e) for g, e in mono if g != group]
    if any(exps):
        rest.append((group, exps))
    return tuple(sorted(rest))


def _single(group: str, exps: tuple[int, ...]) -> Mono:
    if any(exps):
        return ((group, exps),)
    return _EMPTY_MONO


class MVPolynomial:
    """Sparse polynomial: map from monomials to multivector coefficients."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: dict | None = None, _checked: bool = False):
        self.m = m
        if terms is None:
            self.terms = {}
        elif _checked:
            self.terms = terms
        else:
            clean = {}
            for mono, c in terms.items():
                if not isinstance(c, Multivector):
                    raise TypeError("coefficients must be Multivector")
                if c.m != m:
                    raise DimensionMismatchError("coefficient dimension mismatch")
                if not c.is_zero():
                    clean[mono] = c
            self.terms = clean

    # ---------------------------------------------------------------- factories

    @classmethod
    def zero(cls, m: int) -> "MVPolynomial":
        return cls(m, {}, _checked=True)

    @classmethod
    def constant(cls, c: Multivector) -> "MVPolynomial":
        if c.is_zero():
            return cls.zero(c.m)
        return cls(c.m, {_EMPTY_MONO: c}, _checked=True)

    @classmethod
    def variable(cls, m: int, group: str, i: int, coeff=None) -> "MVPolynomial":
        """The scalar variable group_i (1-based), optionally times a coefficient."""
        if not 1 <= i <= m:
            raise ValueError(f"variable index {i} out of range 1..{m}")
        exps = tuple(1 if j == i - 1 else 0 for j in range(m))
        c = coeff if coeff is not None else Multivector.scalar(m, 1)
        return cls(m, {_single(group, exps): c})

    @classmethod
    def monomial(cls, m: int, group: str, exps: Sequence[int], coeff: Multivector) -> "MVPolynomial":
        return cls(m, {_single(group, tuple(exps)): coeff})

    # ---------------------------------------------------------------- basic ops

    def _require_same(self, other: "MVPolynomial"):
        if self.m != other.m:
            raise DimensionMismatchError("polynomial dimension mismatch")

    def __add__(self, other):
        if not isinstance(other, MVPolynomial):
            return NotImplemented
        self._require_same(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            s = terms.get(mono)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(mono, None)
            else:
                terms[mono] = s
        return MVPolynomial(self.m, terms, _checked=True)

    def __sub__(self, other):
        if not isinstance(other, MVPolynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return MVPolynomial(self.m, {k: -c for k, c in self.terms.items()}, _checked=True)

    def __mul__(self, other):
        """Ring product; left factor coefficients multiply on the left."""
        if isinstance(other, MVPolynomial):
            self._require_same(other)
            acc: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    c = c1 * c2
                    if c.is_zero():
                        continue
                    mono = mono_mul(m1, m2)
                    s = acc.get(mono)
                    s = c if s is None else s + c
                    if s.is_zero():
                        acc.pop(mono, None)
                    else:
                        acc[mono] = s
            return MVPolynomial(self.m, acc, _checked=True)
        if is_exact_scalar(other):
            if not other:
                return MVPolynomial.zero(self.m)
            return MVPolynomial(
                self.m, {k: c * other for k, c in self.terms.items()}, _checked=True
            )
        return NotImplemented

    def __rmul__(self, other):
        if is_exact_scalar(other):
            return self.__mul__(other)
        return NotImplemented

    def mul_mv_left(self, c: Multivector) -> "MVPolynomial":
        return MVPolynomial(self.m, {k: c * v for k, v in self.terms.items()})

    def mul_mv_right(self, c: Multivector) -> "MVPolynomial":
        return MVPolynomial(self.m, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, MVPolynomial):
            return self.m == other.m and self.terms == other.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "MVPolynomial(0)"
        bits = []
        for mono in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[mono]
            vars_s = "".join(
                f"{g}{i + 1}" + (f"^{e}" if e > 1 else "")
                for g, exps in mono
                for i, e in enumerate(exps)
                if e
            )
            bits.append(f"({c.to_text()})" + (f"*{vars_s}" if vars_s else ""))
        return "MVPolynomial(" + " + ".join(bits) + ")"

    # ---------------------------------------------------------------- structure

    def groups(self) -> set[str]:
        out = set()
        for mono in self.terms:
            for g, _ in mono:
                out.add(g)
        return out

    def degree(self, group: str) -> int:
        """Largest total degree in the group; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mono_degree(mono, group) for mono in self.terms)

    def homogeneous_degree(self, group: str):
        """Common degree in group if homogeneous, else None.  Zero -> 0."""
        degs = {mono_degree(mono, group) for mono in self.terms}
        if not degs:
            return 0
        if len(degs) == 1:
            return degs.pop()
        return None

    def coefficients_by(self, group: str) -> dict[tuple[int, ...], "MVPolynomial"]:
        """Split into exponent-of-group -> residual polynomial."""
        out: dict[tuple[int, ...], dict] = {}
        for mono, c in self.terms.items():
            exps = mono_exps(mono, group, self.m)
            rest = mono_without(mono, group)
            out.setdefault(exps, {})[rest] = c
        return {
            exps: MVPolynomial(self.m, terms, _checked=True)
            for exps, terms in out.items()
        }

    def map_coeffs(self, fn) -> "MVPolynomial":
        return MVPolynomial(self.m, {k: fn(c) for k, c in self.terms.items()})

    def conjugate_coeffs(self) -> "MVPolynomial":
        return self.map_coeffs(lambda c: c.conjugate())

    # ------------------------------------------------------------- serialization

    def to_json(self) -> dict:
        terms = []
        for mono in sorted(self.terms, key=_mono_sort_key):
            powers = {g: list(exps) for g, exps in mono}
            terms.append({"powers": powers, "coeff": self.terms[mono].to_json()})
        return {"m": self.m, "terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> "MVPolynomial":
        m = data["m"]
        terms = {}
        for entry in data["terms"]:
            mono = tuple(sorted((g, tuple(e)) for g, e in entry["powers"].items()))
            terms[mono] = Multivector.from_json(entry["coeff"])
        return cls(m, terms)


def _mono_sort_key(mono: Mono):
    return tuple((g, tuple(-e for e in exps)) for g, exps in mono)


# ----------------------------------------------------------------- constructors


def vector_poly(m: int, group: str) -> MVPolynomial:
    """The vector-valued polynomial sum_i group_i e_i."""
    terms = {}
    for i in range(1, m + 1):
        exps = tuple(1 if j == i - 1 else 0 for j in range(m))
        terms[_single(group, exps)] = Multivector.basis_vector(m, i)
    return MVPolynomial(m, terms, _checked=True)


def radius_sq_poly(m: int, group: str) -> MVPolynomial:
    """The scalar polynomial |group|^2 = sum_i group_i^2."""
    terms = {}
    one = Multivector.scalar(m, 1)
    for i in range(m):
        exps = tuple(2 if j == i else 0 for j in range(m))
        terms[_single(group, exps)] = one
    return MVPolynomial(m, terms, _checked=True)


def inner_product_poly(m: int, ga: str, gb: str) -> MVPolynomial:
    """The scalar polynomial <a, b> = sum_i a_i b_i for two groups."""
    terms = {}
    one = Multivector.scalar(m, 1)
    for i in range(m):
        e = tuple(1 if j == i else 0 for j in range(m))
        mono = mono_mul(_single(ga, e), _single(gb, e))
        terms[mono] = one
    return MVPolynomial(m, terms, _checked=True)


# ------------------------------------------------------------- differential ops


def p_add(lhs: MVPolynomial, rhs: MVPolynomial) -> MVPolynomial:
    return lhs + rhs


def p_mul(lhs: MVPolynomial, rhs: MVPolynomial) -> MVPolynomial:
    return lhs * rhs


def partial(group: str, i: int, p: MVPolynomial) -> MVPolynomial:
    """d/d(group_i), 1-based index."""
    out = {}
    for mono, c in p.terms.items():
        exps = mono_exps(mono, group, p.m)
        e = exps[i - 1]
        if not e:
            continue
        new = mono_replace(
            mono, group, tuple(v - 1 if j == i - 1 else v for j, v in enumerate(exps))
        )
        add = c * e
        s = out.get(new)
        s = add if s is None else s + add
        if s.is_zero():
            out.pop(new, None)
        else:
            out[new] = s
    return MVPolynomial(p.m, out, _checked=True)


def dirac_left(group: str, p: MVPolynomial) -> MVPolynomial:
    """D_g p = sum_i e_i d_i p with e_i multiplying on the left."""
    m = p.m
    out = MVPolynomial.zero(m)
    for i in range(1, m + 1):
        d = partial(group, i, p)
        if d.is_zero():
            continue
        out = out + d.mul_mv_left(Multivector.basis_vector(m, i))
    return out


def dirac_right(group: str, p: MVPolynomial) -> MVPolynomial:
    """p D_g = sum_i (d_i p) e_i with e_i multiplying on the right."""
    m = p.m
    out = MVPolynomial.zero(m)
    for i in range(1, m + 1):
        d = partial(group, i, p)
        if d.is_zero():
            continue
        out = out + d.mul_mv_right(Multivector.basis_vector(m, i))
    return out


def euler(group: str, p: MVPolynomial) -> MVPolynomial:
    """sum_i g_i d_i p; multiplies each term by its degree in the group."""
    out = {}
    for mono, c in p.terms.items():
        d = mono_degree(mono, group)
        if d:
            out[mono] = c * d
    return MVPolynomial(p.m, out, _checked=True)


def laplacian(group: str, p: MVPolynomial) -> MVPolynomial:
    """sum_i d_i^2 p, componentwise on coefficients."""
    out = {}
    for mono, c in p.terms.items():
        exps = mono_exps(mono, group, p.m)
        for i, e in enumerate(exps):
            if e < 2:
                continue
            new = mono_replace(
                mono, group,
                tuple(v - 2 if j == i else v for j, v in enumerate(exps)),
            )
            add = c * (e * (e - 1))
            s = out.get(new)
            s = add if s is None else s + add
            if s.is_zero():
                out.pop(new, None)
            else:
                out[new] = s
    return MVPolynomial(p.m, out, _checked=True)


# --------------------------------------------------------------- substitutions


def substitute(p: MVPolynomial, group: str, targets: Sequence[MVPolynomial]) -> MVPolynomial:
    """Replace each variable group_i by the scalar-coefficient polynomial
    targets[i-1].  Targets must have scalar coefficients so they commute with
    the multivector coefficients of p.
    """
    m = p.m
    if len(targets) != m:
        raise ValueError(f"need {m} substitution targets")
    for t in targets:
        for c in t.terms.values():
            if not c.is_scalar():
                raise ValueError("substitution targets must have scalar coefficients")
    power_cache: dict[tuple[int, int], MVPolynomial] = {}

    def power(i: int, e: int) -> MVPolynomial:
        key = (i, e)
        hit = power_cache.get(key)
        if hit is not None:
            return hit
        if e == 1:
            res = targets[i]
        else:
            res = power(i, e - 1) * targets[i]
        power_cache[key] = res
        return res

    out = MVPolynomial.zero(m)
    for mono, c in p.terms.items():
        exps = mono_exps(mono, group, m)
        rest = mono_without(mono, group)
        term = MVPolynomial(m, {rest: c}, _checked=True)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


def substitute_linear(
    p: MVPolynomial,
    group: str,
    matrix: Sequence[Sequence],
    new_group: str | None = None,
) -> MVPolynomial:
    """g_i -> sum_j M[i][j] h_j with h the new group (default: same group)."""
    m = p.m
    tgt = new_group if new_group is not None else group
    targets = []
    for i in range(m):
        row = matrix[i]
        if len(row) != m:
            raise ValueError("substitution matrix must be m x m")
        t = MVPolynomial.zero(m)
        for j, a in enumerate(row):
            a = Fraction(a)
            if a:
                t = t + MVPolynomial.variable(m, tgt, j + 1, Multivector.scalar(m, a))
        targets.append(t)
    return substitute(p, group, targets)


def rename_group(p: MVPolynomial, old: str, new: str) -> MVPolynomial:
    if old == new:
        return p
    out = {}
    for mono, c in p.terms.items():
        exps = mono_exps(mono, old, p.m)
        if any(exps):
            if mono_degree(mono, new):
                raise ValueError(f"cannot rename {old} to occupied group {new}")
            mono = mono_replace(mono_without(mono, old), new, exps)
        out[mono] = c
    return MVPolynomial(p.m, out, _checked=True)


def evaluate(p: MVPolynomial, assignments: dict[str, Sequence]) -> Multivector:
    """Exact evaluation at rational points, one point per variable group."""
    m = p.m
    points = {}
    for g, coords in assignments.items():
        coords = [Fraction(c) for c in coords]
        if len(coords) != m:
            raise DimensionMismatchError(f"point for group {g} must have {m} coordinates")
        points[g] = coords
    total = Multivector.zero(m)
    for mono, c in p.terms.items():
        factor = Fraction(1)
        for g, exps in mono:
            if g not in points:
                raise ValueError(f"no point assigned to group {g}")
            for v, e in zip(points[g], exps):
                if e:
                    factor *= v**e
        total = total + c * factor
    return total


# ----------------------------------------------------------------- radial forms


class RadialForm:
    """numerator * |rgroup|^(-t) with an integer weight t >= 0.

    The canonical representative divides out |rgroup|^2 from the numerator
    while possible (for t >= 2); equality is decided by cross multiplication
    so non-canonical forms compare correctly too.
    """

    __slots__ = ("num", "t", "rgroup")

    def __init__(self, num: MVPolynomial, t: int = 0, rgroup: str = "y"):
        if t < 0:
            num, t = _fold_negative_weight(num, t, rgroup)
        if num.is_zero():
            t = 0
        self.num = num
        self.t = t
        self.rgroup = rgroup

    @property
    def m(self) -> int:
        return self.num.m

    @classmethod
    def from_poly(cls, p: MVPolynomial, rgroup: str = "y") -> "RadialForm":
        return cls(p, 0, rgroup)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _require_compatible(self, other: "RadialForm"):
        if self.rgroup != other.rgroup or self.m != other.m:
            raise ValueError("incompatible radial forms")

    def _aligned(self, other: "RadialForm"):
        """Numerators brought to the common weight max(t1, t2)."""
        self._require_compatible(other)
        t = max(self.t, other.t)
        d1, d2 = t - self.t, t - other.t
        if d1 % 2 or d2 % 2:
            raise ValueError("cannot align radial weights of different parity")
        r2 = radius_sq_poly(self.m, self.rgroup)
        n1, n2 = self.num, other.num
        for _ in range(d1 // 2):
            n1 = n1 * r2
        for _ in range(d2 // 2):
            n2 = n2 * r2
        return n1, n2, t

    def __add__(self, other):
        if not isinstance(other, RadialForm):
            return NotImplemented
        n1, n2, t = self._aligned(other)
        return RadialForm(n1 + n2, t, self.rgroup)

    def __sub__(self, other):
        if not isinstance(other, RadialForm):
            return NotImplemented
        n1, n2, t = self._aligned(other)
        return RadialForm(n1 - n2, t, self.rgroup)

    def __neg__(self):
        return RadialForm(-self.num, self.t, self.rgroup)

    def __mul__(self, other):
        if is_exact_scalar(other):
            return RadialForm(self.num * other, self.t, self.rgroup)
        return NotImplemented

    __rmul__ = __mul__

    def mul_mv_left(self, c: Multivector) -> "RadialForm":
        return RadialForm(self.num.mul_mv_left(c), self.t, self.rgroup)

    def mul_poly_left(self, p: MVPolynomial) -> "RadialForm":
        return RadialForm(p * self.num, self.t, self.rgroup)

    def weight_shift(self, delta: int) -> "RadialForm":
        """Multiply by |rgroup|^(-delta)."""
        return RadialForm(self.num, self.t + delta, self.rgroup)

    def __eq__(self, other):
        if not isinstance(other, RadialForm):
            return NotImplemented
        self._require_compatible(other)
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if (self.t - other.t) % 2:
            # different weight parity: equal only if both vanish (handled above)
            a, b = self.canonical(), other.canonical()
            return a.t == b.t and a.num == b.num
        n1, n2, _ = self._aligned(other)
        return n1 == n2

    def __hash__(self):
        raise TypeError("RadialForm is not hashable")

    def canonical(self) -> "RadialForm":
        """Divide |rgroup|^2 out of the numerator while t >= 2 allows it."""
        num, t = self.num, self.t
        if num.is_zero():
            return RadialForm(num, 0, self.rgroup)
        while t >= 2:
            q = divide_by_radius_sq(num, self.rgroup)
            if q is None:
                break
            num, t = q, t - 2
        return RadialForm(num, t, self.rgroup)

    def evaluate(self, assignments: dict[str, Sequence]):
        """Exact value at a rational point.

        Returns a Multivector when the weight is even; for odd weight the
        combined value needs a square root, so the pair
        (numerator value, t) is returned instead.
        """
        val = evaluate(self.num, assignments)
        if self.t == 0:
            return val
        point = [Fraction(c) for c in assignments[self.rgroup]]
        r2 = sum((c * c for c in point), Fraction(0))
        if not r2:
            raise ZeroDivisionError("radial form evaluated at zero radius")
        if self.t % 2 == 0:
            return val * (Fraction(1) / r2 ** (self.t // 2))
        return (val, self.t)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "weight": self.t, "rgroup": self.rgroup}

    @classmethod
    def from_json(cls, data: dict) -> "RadialForm":
        return cls(MVPolynomial.from_json(data["num"]), data["weight"], data["rgroup"])

    def __repr__(self):
        return f"RadialForm({self.num!r}, t={self.t}, rgroup={self.rgroup!r})"


def _fold_negative_weight(num: MVPolynomial, t: int, rgroup: str):
    if t % 2:
        raise ValueError("cannot fold odd negative radial weight into numerator")
    r2 = radius_sq_poly(num.m, rgroup)
    while t < 0:
        num = num * r2
        t += 2
    return num, t


def divide_by_radius_sq(p: MVPolynomial, group: str) -> MVPolynomial | None:
    """Exact quotient p / |group|^2, or None when not divisible.

    Single-divisor reduction: the leading term (lex in the group exponents)
    must repeatedly be divisible by g_1^2; the subtraction only introduces
    lex-smaller monomials, so a heap makes the scan near-linear.
    """
    if p.is_zero():
        return p
    m = p.m
    work = dict(p.terms)
    quotient: dict = {}
    heap = []
    seen = set()
    for mono in work:
        key = mono_exps(mono, group, m)
        entry = (tuple(-e for e in key), mono)
        if entry not in seen:
            seen.add(entry)
            heapq.heappush(heap, entry)
    while heap:
        negkey, mono = heapq.heappop(heap)
        c = work.get(mono)
        if c is None or c.is_zero():
            continue
        exps = mono_exps(mono, group, m)
        if exps[0] < 2:
            return None  # leading term not divisible by g_1^2: remainder
        qexps = (exps[0] - 2,) + exps[1:]
        qmono = mono_replace(mono, group, qexps)
        prev = quotient.get(qmono)
        quotient[qmono] = c if prev is None else prev + c
        # subtract (c * g^qexps) * sum_i g_i^2
        for i in range(m):
            sexps = tuple(e + (2 if j == i else 0) for j, e in enumerate(qexps))
            smono = mono_replace(mono, group, sexps)
            cur = work.get(smono)
            new = (-c) if cur is None else cur - c
            if new.is_zero():
                work.pop(smono, None)
            else:
                work[smono] = new
                entry = (tuple(-e for e in sexps), smono)
                if entry not in seen:
                    seen.add(entry)
                    heapq.heappush(heap, entry)
    if any(not c.is_zero() for c in work.values()):
        return None
    return MVPolynomial(m, quotient)


def dirac_left_radial(group: str, r: RadialForm) -> RadialForm:
    """Left Dirac derivative of numerator * |group|^(-t).

    Product rule with D|g|^(-t) = -t g |g|^(-t-2); exact for every integer
    weight.
    """
    if group != r.rgroup:
        raise ValueError("dirac_left_radial group must be the radial group")
    d = dirac_left(group, r.num)
    if r.t == 0:
        return RadialForm(d, 0, r.rgroup)
    m = r.num.m
    r2 = radius_sq_poly(m, group)
    gvec = vector_poly(m, group)
    num = d * r2 - (gvec * r.num) * r.t
    return RadialForm(num, r.t + 2, r.rgroup)


# ------------------------------------------------------------ inversion images


def _inversion_targets(m: int, to_groups: tuple[str, str]):
    """Numerator substitution targets for x = y^{-1}, u = y w y / |y|^2.

    Per unit of weight |y|^2: x_i -> -y_i (weight 2 each power) and
    u_i -> w_i |y|^2 - 2 y_i <w, y> (weight 2 each power).
    """
    gy, gw = to_groups
    r2 = radius_sq_poly(m, gy)
    wy = inner_product_poly(m, gw, gy)
    x_targets = []
    u_targets = []
    for i in range(1, m + 1):
        yi = MVPolynomial.variable(m, gy, i)
        wi = MVPolynomial.variable(m, gw, i)
        x_targets.append(-yi)
        u_targets.append(wi * r2 - yi * wy * 2)
    return x_targets, u_targets


def inversion_substitute(
    p: MVPolynomial,
    from_groups: tuple[str, str] = ("x", "u"),
    to_groups: tuple[str, str] = ("y", "w"),
    extra_weight: int = 0,
) -> RadialForm:
    """Transport p(x, u) through x = y^{-1}, u = y w y / |y|^2 (no J weight).

    Each term of x-degree a and u-degree b lands at weight 2a + 2b minus
    extra_weight; terms are collected at the common maximal weight.
    extra_weight absorbs an incoming |x|^(-t) factor, which inverts to
    |y|^(+t).
    """
    gx, gu = from_groups
    gy, gw = to_groups
    m = p.m
    x_targets, u_targets = _inversion_targets(m, to_groups)
    x_cache: dict[tuple[int, int], MVPolynomial] = {}
    u_cache: dict[tuple[int, int], MVPolynomial] = {}

    def cached_power(cache, targets, i, e):
        key = (i, e)
        hit = cache.get(key)
        if hit is not None:
            return hit
        res = targets[i] if e == 1 else cached_power(cache, targets, i, e - 1) * targets[i]
        cache[key] = res
        return res

    by_weight: dict[int, MVPolynomial] = {}
    for mono, c in p.terms.items():
        xexps = mono_exps(mono, gx, m)
        uexps = mono_exps(mono, gu, m)
        rest = mono_without(mono_without(mono, gx), gu)
        if mono_degree(rest, gy) or mono_degree(rest, gw):
            raise ValueError("input already uses the target groups")
        term = MVPolynomial(m, {rest: c}, _checked=True)
        for i, e in enumerate(xexps):
            if e:
                term = term * cached_power(x_cache, x_targets, i, e)
        for i, e in enumerate(uexps):
            if e:
                term = term * cached_power(u_cache, u_targets, i, e)
        t = 2 * sum(xexps) + 2 * sum(uexps) - extra_weight
        cur = by_weight.get(t)
        by_weight[t] = term if cur is None else cur + term
    if not by_weight:
        return RadialForm(MVPolynomial.zero(m), 0, gy)
    tmax = max(by_weight)
    r2 = radius_sq_poly(m, gy)
    total = MVPolynomial.zero(m)
    for t, part in by_weight.items():
        d = tmax - t
        for _ in range(d // 2):
            part = part * r2
        total = total + part
    return RadialForm(total, tmax, gy)


def inversion_image(
    f: MVPolynomial,
    k: int,
    from_groups: tuple[str, str] = ("x", "u"),
    to_groups: tuple[str, str] = ("y", "w"),
) -> RadialForm:
    """Kelvin-type inversion image G(y) f(y^{-1}, y w y / |y|^2).

    f must be homogeneous of degree k in the u group.  The output weight per
    contributing term is m + 2k + 2 (x-degree of the term), collected into a
    single canonical RadialForm.
    """
    gx, gu = from_groups
    deg = f.homogeneous_degree(gu)
    if deg is None or (f.terms and deg != k):
        raise ValueError(f"input is not homogeneous of degree {k} in group {gu!r}")
    base = inversion_substitute(f, from_groups, to_groups)
    gy = to_groups[0]
    m = f.m
    g_num = vector_poly(m, gy)
    return RadialForm(g_num * base.num, base.t + m, gy).canonical()


def inversion_image_radial(
    r: RadialForm,
    k: int,
    from_groups: tuple[str, str],
    to_groups: tuple[str, str],
) -> RadialForm:
    """Inversion image of a radial form; used for the double-inversion check."""
    gu = from_groups[1]
    deg = r.num.homogeneous_degree(gu)
    if deg is None or (r.num.terms and deg != k):
        raise ValueError(f"numerator not homogeneous of degree {k} in group {gu!r}")
    base = inversion_substitute(r.num, from_groups, to_groups, extra_weight=r.t)
    gy = to_groups[0]
    m = r.m
    g_num = vector_poly(m, gy)
    return RadialForm(g_num * base.num, base.t + m, gy).canonical()
