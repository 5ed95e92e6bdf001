"""Verification checks tying each exact computation to its theorem.

Randomized fixtures draw coefficients uniformly from {-3..3} \\ {0} using the
Mersenne Twister (random.Random) through randrange only, so streams are
stable across platforms.  Per-check seeds are derived from the run seed and
the check identity via SHA-256, which keeps concurrent execution
deterministic regardless of scheduling.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import Multivector
from .integrate import STOKES_THEOREMS, pairing_u, stokes_check
from .moebius import ELEMENTARY_KINDS, MoebiusMap, intertwine_residual
from .operators import (
    apply_Qk,
    apply_Qk_right,
    apply_Rk,
    apply_Rk_radial,
    apply_Rk_right,
    stein_weiss_residual,
)
from .poly import (
    MVPolynomial,
    RadialForm,
    dirac_left_radial,
    inversion_image,
    vector_poly,
)
from . import spaces
from .linalg import nullspace, rref

SCHEMA_VERSION = "cliffverify-report.v1"

THEOREMS = {
    "counterexample": "the plain Dirac derivative is not conformally invariant "
                      "on monogenic-valued functions, but its M_k projection is",
    "conformal-rk": "conformal invariance of the Rarita-Schwinger equation "
                    "under Kelvin inversion",
    "intertwine-rk": "intertwining of the Rarita-Schwinger operator by the "
                     "conformal weights J_1 and J_{-1}",
    "stokes-rk": "Stokes theorem for the Rarita-Schwinger operator",
    "stokes-tk": "Stokes theorem for the twistor operator",
    "stokes-tkstar": "Stokes theorem for the dual twistor operator",
    "stokes-qk": "Stokes theorem for the Q_k operator",
    "stokes-alt": "alternative boundary form of the twistor-pair Stokes theorem",
    "stokes-cauchy-rk": "Cauchy theorem for the Rarita-Schwinger operator",
    "stokes-cauchy-qk": "Cauchy theorem for the Q_k operator",
    "stein-weiss": "Stein-Weiss gradient projection realizes the "
                   "Rarita-Schwinger operator",
    "almansi-fischer": "Almansi-Fischer decomposition of harmonic polynomials",
    "basis-ranks": "rank additivity of the Almansi-Fischer decomposition",
}


class CheckFailure(AssertionError):
    pass


@dataclass
class CheckReport:
    check_id: str
    theorem: str
    inputs_digest: str
    passed: bool
    residual_summary: dict
    wall_time_s: float

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "theorem_id": self.theorem,
            "theorem": THEOREMS[self.theorem],
            "inputs_digest": self.inputs_digest,
            "pass": self.passed,
            "residual_summary": self.residual_summary,
            "wall_time_s": self.wall_time_s,
        }


@dataclass(frozen=True)
class RunConfig:
    """Configuration of a verification run; the seed fixes every fixture."""

    m_values: tuple[int, ...] = (3, 4)
    k_values: tuple[int, ...] = (0, 1, 2)
    seed: int = 1
    trials: int = 3
    workers: int = 1
    out: str | None = None
    format: str = "json"


def derive_seed(base_seed: int, *parts) -> int:
    payload = "|".join([str(base_seed), *map(str, parts)])
    return int.from_bytes(hashlib.sha256(payload.encode()).digest()[:8], "big")


def digest_inputs(**kwargs) -> str:
    payload = json.dumps(kwargs, sort_keys=True, default=str)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def rand_coeff(rng: random.Random) -> Fraction:
    c = rng.randrange(1, 4)
    if rng.randrange(2):
        c = -c
    return Fraction(c)


def random_combo(elements, rng: random.Random, nterms: int = 3) -> MVPolynomial:
    """Random small-coefficient combination of distinct basis elements."""
    n = min(nterms, len(elements))
    picked = sorted(rng.randrange(len(elements)) for _ in range(n))
    out = MVPolynomial.zero(elements[0].m)
    for idx in dict.fromkeys(picked):
        out = out + elements[idx] * rand_coeff(rng)
    return out


def random_mk(m: int, k: int, rng: random.Random, side: str = "left",
              nterms: int = 3) -> MVPolynomial:
    basis = spaces.monogenic_basis(m, k, side)
    return random_combo(basis.elements, rng, nterms)


def random_mk_function(m: int, k: int, rng: random.Random, xdeg: int,
                       side: str = "left", nmonos: int = 3,
                       nterms: int = 2) -> MVPolynomial:
    """Random M_k- (or bar(M)_k-) valued polynomial in x of degree <= xdeg."""
    monos = []
    for d in range(xdeg + 1):
        monos.extend(spaces.monomials_of_degree(m, d))
    chosen = {0}  # always include the constant monomial
    while len(chosen) < min(nmonos, len(monos)):
        chosen.add(rng.randrange(len(monos)))
    out = MVPolynomial.zero(m)
    for idx in sorted(chosen):
        coeff_poly = random_mk(m, k, rng, side, nterms)
        xsel = MVPolynomial.monomial(m, "x", monos[idx], Multivector.scalar(m, 1))
        out = out + xsel * coeff_poly
    return out


def random_umk_function(m: int, k: int, rng: random.Random, xdeg: int,
                        side: str = "left", nmonos: int = 3) -> MVPolynomial:
    """u M_(k-1)-valued (left) or bar(M)_(k-1) u-valued (right) fixture."""
    inner = random_mk_function(m, k - 1, rng, xdeg, side, nmonos)
    u = vector_poly(m, "u")
    return u * inner if side == "left" else inner * u


# ------------------------------------------------- kernel fixtures for Cauchy


def _flatten_coords(p: MVPolynomial) -> dict:
    out = {}
    for mono, c in p.terms.items():
        for blade, val in c.terms.items():
            out[(mono, blade)] = val
    return out


def _kernel_combos(generators, op):
    """Nullspace of gen -> op(gen) over the rationals, as coefficient dicts."""
    coord_index: dict = {}
    rows_by_coord: dict = {}
    for j, gen in enumerate(generators):
        img = op(gen)
        for key, val in _flatten_coords(img).items():
            idx = coord_index.setdefault(key, len(coord_index))
            rows_by_coord.setdefault(idx, {})[j] = val
    rows = [rows_by_coord[i] for i in range(len(coord_index))]
    return nullspace(rows, len(generators))


@lru_cache(maxsize=None)
def _degree1_kernel(m: int, k: int, which: str, i1: int, i2: int):
    """Kernel elements of the named operator among f0 + x_i1 p + x_i2 q.

    which is one of rk-left, rk-right, qk-left, qk-right.  Only the linear
    part is constrained (constants are always in the kernel), so the
    returned elements are the linear kernel solutions.
    """
    side = which.split("-")[1]
    if which.startswith("rk"):
        basis = spaces.monogenic_basis(m, k, side).elements
        carrier = list(basis)
    else:
        inner = spaces.monogenic_basis(m, k - 1, side).elements
        u = vector_poly(m, "u")
        carrier = [u * b if side == "left" else b * u for b in inner]
    ops_map = {
        "rk-left": lambda p: apply_Rk(p, m, k),
        "rk-right": lambda p: apply_Rk_right(p, m, k),
        "qk-left": lambda p: apply_Qk(p, m, k),
        "qk-right": lambda p: apply_Qk_right(p, m, k),
    }
    op = ops_map[which]
    generators = []
    for i in (i1, i2):
        xi = MVPolynomial.variable(m, "x", i)
        generators.extend(xi * b for b in carrier)
    combos = _kernel_combos(generators, op)
    elements = []
    for vec in combos:
        p = MVPolynomial.zero(m)
        for j, val in vec.items():
            p = p + generators[j] * val
        elements.append(p)
    return tuple(elements)


def random_kernel_element(m: int, k: int, which: str, rng: random.Random) -> MVPolynomial:
    """Random operator-kernel fixture: constant part plus a linear kernel part."""
    i1 = rng.randrange(1, m + 1)
    i2 = rng.randrange(1, m + 1)
    while i2 == i1:
        i2 = rng.randrange(1, m + 1)
    i1, i2 = sorted((i1, i2))
    linear = _degree1_kernel(m, k, which, i1, i2)
    side = which.split("-")[1]
    if which.startswith("rk"):
        f = random_mk(m, k, rng, side)
    else:
        inner = random_mk(m, k - 1, rng, side)
        u = vector_poly(m, "u")
        f = u * inner if side == "left" else inner * u
    if linear:
        f = f + linear[rng.randrange(len(linear))] * rand_coeff(rng)
    return f


# ----------------------------------------------------------------- the checks


def _report(check_id: str, theorem: str, digest: str, passed: bool,
            summary: dict, started: float) -> CheckReport:
    return CheckReport(
        check_id=check_id,
        theorem=theorem,
        inputs_digest=digest,
        passed=passed,
        residual_summary=summary,
        wall_time_s=round(time.monotonic() - started, 6),
    )


def counterexample_function(m: int) -> MVPolynomial:
    """The witness f(x, u) = u_1 e_1 - u_2 e_2."""
    return (
        MVPolynomial.variable(m, "u", 1, Multivector.basis_vector(m, 1))
        - MVPolynomial.variable(m, "u", 2, Multivector.basis_vector(m, 2))
    )


def expected_counterexample_value(m: int) -> RadialForm:
    """-2 w y (y_1 e_1 - y_2 e_2) |y|^(-m-2), the nonzero Dirac image."""
    wvec = vector_poly(m, "w")
    yvec = vector_poly(m, "y")
    tail = (
        MVPolynomial.variable(m, "y", 1, Multivector.basis_vector(m, 1))
        - MVPolynomial.variable(m, "y", 2, Multivector.basis_vector(m, 2))
    )
    return RadialForm(wvec * yvec * tail * Fraction(-2), m + 2, "y")


def check_counterexample(m: int) -> CheckReport:
    """D_y of the inversion image of u_1 e_1 - u_2 e_2 is nonzero but its
    M_1 projection vanishes; the Dirac image is matched term by term."""
    started = time.monotonic()
    if m < 3:
        raise ValueError("counterexample requires m >= 3")
    f = counterexample_function(m)
    image = inversion_image(f, 1)
    dirac = dirac_left_radial("y", image).canonical()
    expected = expected_counterexample_value(m)
    matches = dirac == expected
    nonzero = not dirac.is_zero()
    projected = RadialForm(spaces.project_Pk(dirac.num, 1, "w"), dirac.t, "y")
    projected_zero = projected.is_zero()
    passed = matches and nonzero and projected_zero
    summary = {
        "dirac_image_matches_closed_form": matches,
        "dirac_image_nonzero": nonzero,
        "projection_annihilates": projected_zero,
        "residual_terms": 0 if passed else len((dirac - expected).num.terms),
    }
    return _report(
        f"counterexample-m{m}", "counterexample",
        digest_inputs(check="counterexample", m=m), passed, summary, started)


def check_conformal(m: int, k: int, seed: int, trials: int = 3) -> CheckReport:
    """Inversion images of x-independent M_k solutions stay in ker R_k."""
    started = time.monotonic()
    if m < 3:
        raise ValueError("conformal checks require m >= 3")
    nonzero_terms = 0
    for t in range(trials):
        rng = random.Random(derive_seed(seed, "conformal", m, k, t))
        f = random_mk(m, k, rng)
        image = inversion_image(f, k)
        residual = apply_Rk_radial(image, m, k, "y", "w")
        nonzero_terms += len(residual.num.terms)
    passed = nonzero_terms == 0
    summary = {"trials": trials, "residual_terms": nonzero_terms}
    return _report(
        f"conformal-m{m}-k{k}", "conformal-rk",
        digest_inputs(check="conformal", m=m, k=k, seed=seed, trials=trials),
        passed, summary, started)


def check_intertwine(map_kind: str, m: int, k: int, seed: int,
                     trials: int = 3, xdeg: int = 2) -> CheckReport:
    """Exact intertwining residual for one elementary Moebius factor."""
    started = time.monotonic()
    if map_kind not in ELEMENTARY_KINDS:
        raise ValueError(f"map kind must be one of {ELEMENTARY_KINDS}")
    if m < 3:
        raise ValueError("intertwine checks require m >= 3")
    nonzero_terms = 0
    for t in range(trials):
        rng = random.Random(derive_seed(seed, "intertwine", map_kind, m, k, t))
        f = random_mk_function(m, k, rng, xdeg)
        if map_kind == "translation":
            coords = [rand_coeff(rng) for _ in range(m)]
            mmap = MoebiusMap.translation(Multivector.from_vector(m, coords))
        elif map_kind == "dilation":
            s = Fraction(rng.randrange(1, 4), rng.randrange(1, 4))
            mmap = MoebiusMap.dilation(m, s)
        elif map_kind == "reflection":
            axis = Multivector.basis_vector(m, rng.randrange(1, m + 1))
            if rng.randrange(2):
                axis = -axis
            mmap = MoebiusMap.reflection(axis)
        else:
            mmap = MoebiusMap.inversion(m)
        residual = intertwine_residual(mmap, f, m, k)
        nonzero_terms += len(residual.num.terms)
    passed = nonzero_terms == 0
    summary = {"trials": trials, "residual_terms": nonzero_terms, "map": map_kind}
    return _report(
        f"intertwine-{map_kind}-m{m}-k{k}", "intertwine-rk",
        digest_inputs(check="intertwine", map=map_kind, m=m, k=k, seed=seed,
                      trials=trials, xdeg=xdeg),
        passed, summary, started)


def stokes_fixtures(theorem: str, m: int, k: int, rng: random.Random,
                    xdeg: int = 2):
    """Draw (f, g) satisfying the value-type hypotheses of the theorem."""
    if theorem == "rk":
        return (random_mk_function(m, k, rng, xdeg),
                random_mk_function(m, k, rng, xdeg, side="right"))
    if theorem == "tk":
        return (random_umk_function(m, k, rng, xdeg),
                random_mk_function(m, k, rng, xdeg, side="right"))
    if theorem == "tkstar":
        return (random_mk_function(m, k, rng, xdeg),
                random_umk_function(m, k, rng, xdeg, side="right"))
    if theorem == "qk":
        return (random_umk_function(m, k, rng, xdeg),
                random_umk_function(m, k, rng, xdeg, side="right"))
    if theorem == "alt":
        return (random_mk_function(m, k, rng, xdeg),
                random_mk_function(m, k - 1, rng, xdeg, side="right"))
    if theorem == "cauchy-rk":
        return (random_kernel_element(m, k, "rk-left", rng),
                random_kernel_element(m, k, "rk-right", rng))
    if theorem == "cauchy-qk":
        return (random_kernel_element(m, k, "qk-left", rng),
                random_kernel_element(m, k, "qk-right", rng))
    raise ValueError(f"unknown theorem {theorem!r}")


def check_stokes(theorem: str, m: int, k: int, seed: int,
                 trials: int = 3) -> CheckReport:
    """One Stokes/Cauchy variant on the unit ball with randomized inputs."""
    started = time.monotonic()
    if theorem not in STOKES_THEOREMS:
        raise ValueError(f"theorem must be one of {STOKES_THEOREMS}")
    if k < 1:
        raise ValueError("Stokes checks require k >= 1")
    nonzero_terms = 0
    for t in range(trials):
        rng = random.Random(derive_seed(seed, "stokes", theorem, m, k, t))
        f, g = stokes_fixtures(theorem, m, k, rng)
        report = stokes_check(theorem, f, g, m, k)
        nonzero_terms += sum(len(r.terms) for r in report.residuals)
    passed = nonzero_terms == 0
    summary = {"trials": trials, "residual_terms": nonzero_terms}
    return _report(
        f"stokes-{theorem}-m{m}-k{k}", f"stokes-{theorem}",
        digest_inputs(check="stokes", theorem=theorem, m=m, k=k, seed=seed,
                      trials=trials),
        passed, summary, started)


def check_stein_weiss(m: int, k: int, seed: int, trials: int = 3) -> CheckReport:
    """Residuals of the gradient-projection equivalence plus the exhaustive
    Fischer orthogonality between M_k and u M_(k-1) basis elements."""
    started = time.monotonic()
    nonzero_terms = 0
    for t in range(trials):
        rng = random.Random(derive_seed(seed, "stein-weiss", m, k, t))
        f = random_mk_function(m, k, rng, xdeg=1)
        for residual in stein_weiss_residual(f, m, k):
            nonzero_terms += len(residual.terms)
    ortho_failures = 0
    basis_k = spaces.monogenic_basis(m, k, "left")
    basis_km1 = spaces.monogenic_basis(m, k - 1, "left")
    u = vector_poly(m, "u")
    for q in basis_k.elements:
        for p in basis_km1.elements:
            val = pairing_u(q, u * p, conjugated=True)
            if not val.is_zero():
                ortho_failures += 1
    passed = nonzero_terms == 0 and ortho_failures == 0
    summary = {
        "trials": trials,
        "residual_terms": nonzero_terms,
        "orthogonality_failures": ortho_failures,
        "basis_pairs": len(basis_k.elements) * len(basis_km1.elements),
    }
    return _report(
        f"stein-weiss-m{m}-k{k}", "stein-weiss",
        digest_inputs(check="stein-weiss", m=m, k=k, seed=seed, trials=trials),
        passed, summary, started)


def check_almansi(m: int, k: int) -> CheckReport:
    """Exhaustive Almansi-Fischer split of the harmonic basis: reconstruction,
    monogenicity of both parts, idempotence, trivial intersection and the
    independently computed rank identity."""
    started = time.monotonic()
    from .poly import dirac_left

    harmonic = spaces.harmonic_basis(m, k)
    failures = []
    blades = [Multivector.scalar(m, 1),
              Multivector.basis_vector(m, 1),
              Multivector.blade(m, [1, 2])]
    u = vector_poly(m, "u")
    for idx, h_scalar in enumerate(harmonic.elements):
        for blade in blades:
            h = h_scalar.mul_mv_right(blade)
            p_k, p_km1 = spaces.almansi_fischer_split(h, k)
            if not dirac_left("u", p_k).is_zero():
                failures.append(f"p_k not monogenic at element {idx}")
            if not dirac_left("u", p_km1).is_zero():
                failures.append(f"p_(k-1) not monogenic at element {idx}")
            if p_k + u * p_km1 != h:
                failures.append(f"reconstruction failed at element {idx}")
            projected = spaces.project_Pk(h, k)
            if spaces.project_Pk(projected, k) != projected:
                failures.append(f"projection not idempotent at element {idx}")
    # direct sum: intersection of M_k and u M_(k-1) is trivial
    mk = spaces.monogenic_basis(m, k, "left").elements
    umkm1 = [u * b for b in spaces.monogenic_basis(m, k - 1, "left").elements] \
        if k >= 1 else []
    r1 = _span_rank(mk)
    r2 = _span_rank(umkm1)
    rj = _span_rank(list(mk) + umkm1)
    if r1 + r2 != rj:
        failures.append("M_k and u M_(k-1) intersect nontrivially")
    # rank identity, both sides computed independently
    rank_h = harmonic.scalar_rank * (1 << m)
    if r1 + r2 != rank_h:
        failures.append(
            f"rank identity failed: {r1} + {r2} != {rank_h}")
    passed = not failures
    summary = {
        "harmonic_elements": len(harmonic.elements),
        "rank_Mk": r1,
        "rank_uMkm1": r2,
        "rank_Hk_clifford": rank_h,
        "failures": failures,
    }
    return _report(
        f"almansi-m{m}-k{k}", "almansi-fischer",
        digest_inputs(check="almansi", m=m, k=k), passed, summary, started)


def _span_rank(elements) -> int:
    if not elements:
        return 0
    keys: dict = {}
    rows = []
    for e in elements:
        row = {}
        for key, val in _flatten_coords(e).items():
            idx = keys.setdefault(key, len(keys))
            row[idx] = val
        rows.append(row)
    return len(rref(rows, len(keys)))


def check_basis_ranks(m: int, k: int) -> CheckReport:
    """rank M_k + rank M_(k-1) = 2^m rank H_k, all three computed separately."""
    started = time.monotonic()
    rank_mk = spaces.monogenic_basis(m, k, "left").scalar_rank
    rank_mkm1 = spaces.monogenic_basis(m, k - 1, "left").scalar_rank if k >= 1 else 0
    rank_h = spaces.harmonic_basis(m, k).scalar_rank * (1 << m)
    total = rank_mk + rank_mkm1 if k >= 1 else rank_mk
    passed = total == rank_h
    summary = {"rank_Mk": rank_mk, "rank_Mkm1": rank_mkm1, "rank_Hk": rank_h}
    return _report(
        f"ranks-m{m}-k{k}", "basis-ranks",
        digest_inputs(check="ranks", m=m, k=k), passed, summary, started)


# ------------------------------------------------------------------- the suite


def suite_tasks(config: RunConfig):
    """The canonical task list for a full verification run.

    Each entry is (check_id, theorem_id, thunk); the id doubles as the
    error-report identity when a check raises.
    """
    tasks = []
    for m in config.m_values:
        tasks.append((f"counterexample-m{m}", "counterexample",
                      lambda m=m: check_counterexample(m)))
        for k in config.k_values:
            tasks.append((f"conformal-m{m}-k{k}", "conformal-rk",
                          lambda m=m, k=k: check_conformal(
                              m, k, config.seed, config.trials)))
            tasks.append((f"ranks-m{m}-k{k}", "basis-ranks",
                          lambda m=m, k=k: check_basis_ranks(m, k)))
            tasks.append((f"almansi-m{m}-k{k}", "almansi-fischer",
                          lambda m=m, k=k: check_almansi(m, k)))
            if k >= 1:
                for kind in ELEMENTARY_KINDS:
                    tasks.append((f"intertwine-{kind}-m{m}-k{k}", "intertwine-rk",
                                  lambda kind=kind, m=m, k=k: check_intertwine(
                                      kind, m, k, config.seed, config.trials)))
                for theorem in STOKES_THEOREMS:
                    tasks.append((f"stokes-{theorem}-m{m}-k{k}", f"stokes-{theorem}",
                                  lambda theorem=theorem, m=m, k=k: check_stokes(
                                      theorem, m, k, config.seed, config.trials)))
                tasks.append((f"stein-weiss-m{m}-k{k}", "stein-weiss",
                              lambda m=m, k=k: check_stein_weiss(
                                  m, k, config.seed, config.trials)))
    return tasks


def run_suite(config: RunConfig) -> list[CheckReport]:
    """Run every check; reports come back sorted by check id regardless of
    scheduling.  A check that raises is reported as failed."""
    tasks = suite_tasks(config)

    def run_one(task):
        check_id, theorem_id, fn = task
        try:
            return fn()
        except Exception as exc:  # hypothesis violations, internal errors
            return CheckReport(
                check_id=check_id,
                theorem=theorem_id,
                inputs_digest=digest_inputs(error=repr(exc)),
                passed=False,
                residual_summary={"error": repr(exc)},
                wall_time_s=0.0,
            )

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            reports = list(pool.map(run_one, tasks))
    else:
        reports = [run_one(t) for t in tasks]
    return sorted(reports, key=lambda r: r.check_id)


def suite_report_json(config: RunConfig, reports: list[CheckReport]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "m": list(config.m_values),
            "k": list(config.k_values),
            "seed": config.seed,
            "trials": config.trials,
            "workers": config.workers,
        },
        "checks": [r.to_json() for r in reports],
        "pass": all(r.passed for r in reports),
    }
