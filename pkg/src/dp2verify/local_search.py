"""Exhaustive residue search mod 2^k and the 2-adic descent argument.

The search walks the flattened index space of ``(Z/2^k)^n`` in fixed-size
chunks (first variable most significant), evaluating the form with numpy
``uint64`` arithmetic.  Wrap-around mod 2^64 is harmless because every modulus
is a power of two dividing 2^64.  Chunks are independent, so any partition of
the index range gives the same merged result.
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .poly import WeightedForm

MAX_SEARCH = 1 << 32
MAX_VARS = 6
WITNESS_CAP = 16
CHUNK = 1 << 20
PRIMITIVITY = ("at-least-one-odd", "none")
DESCENT_WEIGHTS = (2, 1, 1, 1)

NO_SOLUTION = "no nonzero Q2 solution"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ResidueSearchSpec:
    form: WeightedForm
    modulus: int
    primitivity: str = "at-least-one-odd"

    def __post_init__(self):
        m = self.modulus
        if m < 2 or m & (m - 1):
            raise ValueError(f"modulus must be 2^k with k >= 1, got {m}")
        if self.primitivity not in PRIMITIVITY:
            raise ValueError(f"unknown primitivity predicate {self.primitivity!r}")
        if not self.form.has_integer_coefficients():
            raise ValueError("residue search needs integer coefficients")
        n = self.form.nvars
        if n > MAX_VARS:
            raise ValueError(f"at most {MAX_VARS} variables, got {n}")
        if m**n > MAX_SEARCH:
            raise ValueError(f"search space {m}^{n} exceeds the 2^32 guard")

    @property
    def bits(self) -> int:
        return self.modulus.bit_length() - 1

    @property
    def size(self) -> int:
        return self.modulus**self.form.nvars


@dataclass
class SearchResult:
    count: int
    witnesses: list[tuple[int, ...]]
    tuples_enumerated: int
    chunks: int = 0


# --- vectorised kernel -------------------------------------------------------

def _integer_terms(form: WeightedForm, modulus: int):
    return [(e, int(c) % modulus) for e, c in form.terms.items() if int(c) % modulus]


def _decode(start: int, stop: int, nvars: int, bits: int) -> list[np.ndarray]:
    idx = np.arange(start, stop, dtype=np.uint64)
    mask = np.uint64((1 << bits) - 1)
    coords = []
    for i in range(nvars):
        shift = np.uint64(bits * (nvars - 1 - i))
        coords.append((idx >> shift) & mask)
    return coords


def _evaluate(terms, coords: list[np.ndarray], modulus: int) -> np.ndarray:
    size = coords[0].shape[0] if coords else 1
    acc = np.zeros(size, dtype=np.uint64)
    top = [max((e[i] for e, _ in terms), default=0) for i in range(len(coords))]
    # powers[i][k - 1] = coords[i]^k
    powers = []
    for c, kmax in zip(coords, top):
        row = [c] if kmax else []
        for _ in range(1, kmax):
            row.append(row[-1] * c)
        powers.append(row)
    for e, c in terms:
        t = np.full(size, c, dtype=np.uint64)
        for i, k in enumerate(e):
            if k:
                t *= powers[i][k - 1]
        acc += t
    return acc & np.uint64(modulus - 1)


def _primitive_mask(coords: list[np.ndarray]) -> np.ndarray:
    odd = np.zeros(coords[0].shape[0], dtype=bool)
    for c in coords:
        odd |= (c & np.uint64(1)).astype(bool)
    return odd


def _search_chunk(args):
    terms, nvars, bits, primitivity, start, stop, cap = args
    modulus = 1 << bits
    coords = _decode(start, stop, nvars, bits)
    values = _evaluate(terms, coords, modulus)
    hit = values == 0
    if primitivity == "at-least-one-odd":
        prim = _primitive_mask(coords)
        hit &= prim
        enumerated = int(prim.sum())
    else:
        enumerated = stop - start
    where = np.flatnonzero(hit)
    witnesses = [tuple(int(c[j]) for c in coords) for j in where[:cap]]
    return int(where.size), witnesses, enumerated


def _ranges(size: int, chunk: int):
    return [(s, min(s + chunk, size)) for s in range(0, size, chunk)]


def enumerate_residue_solutions(
    spec: ResidueSearchSpec,
    *,
    witness_cap: int = WITNESS_CAP,
    jobs: int = 1,
    chunk: int = CHUNK,
) -> SearchResult:
    """Count tuples in (Z/2^k)^n with f = 0 mod 2^k satisfying the predicate.

    Witnesses are the first ``witness_cap`` solutions in lexicographic order.
    """
    terms = _integer_terms(spec.form, spec.modulus)
    nvars, bits = spec.form.nvars, spec.bits
    tasks = [
        (terms, nvars, bits, spec.primitivity, s, e, witness_cap)
        for s, e in _ranges(spec.size, chunk)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_search_chunk, tasks))
    else:
        parts = [_search_chunk(t) for t in tasks]
    count = sum(p[0] for p in parts)
    witnesses = [w for p in parts for w in p[1]][:witness_cap]
    enumerated = sum(p[2] for p in parts)
    return SearchResult(count, witnesses, enumerated, len(tasks))


# --- parity-class diagnostics -------------------------------------------------

def _odd(c):
    return (c & np.uint64(1)).astype(bool)


def _class_all_odd(cs):
    return _odd(cs[0]) & _odd(cs[1]) & _odd(cs[2]) & _odd(cs[3])


def _n_odd_xyz(cs):
    return _odd(cs[1]).astype(np.int8) + _odd(cs[2]) + _odd(cs[3])


def _class_w_odd_one_odd(cs):
    return _odd(cs[0]) & (_n_odd_xyz(cs) == 1)


def _class_w_even_one_even(cs):
    return ~_odd(cs[0]) & (_n_odd_xyz(cs) == 2)


def _class_odd_parity(cs):
    return ((_odd(cs[0]).astype(np.int8) + _n_odd_xyz(cs)) % 2).astype(bool)


# The three cases of the parity analysis (w^2 + x^4 + y^4 + z^4 even), plus the
# complementary class where f is odd; together they partition primitive tuples.
PARITY_CLASSES: dict[str, Callable] = {
    "all-odd": _class_all_odd,
    "w-odd-one-of-xyz-odd": _class_w_odd_one_odd,
    "w-even-one-of-xyz-even": _class_w_even_one_even,
    "odd-number-of-odd": _class_odd_parity,
}


def _class_w4_x_even_yz_odd(cs):
    return ((cs[0] & np.uint64(3)) == 0) & ~_odd(cs[1]) & _odd(cs[2]) & _odd(cs[3])


def _class_w_even_x_even_yz_odd(cs):
    return ~_odd(cs[0]) & ~_odd(cs[1]) & _odd(cs[2]) & _odd(cs[3])


EXTRA_CLASSES: dict[str, Callable] = {
    "w-even-x-even-yz-odd": _class_w_even_x_even_yz_odd,
    "w-0mod4-x-even-yz-odd": _class_w4_x_even_yz_odd,
}


def residue_profile(
    form: WeightedForm,
    modulus: int,
    classes: Mapping[str, Callable] | None = None,
    *,
    chunk: int = CHUNK,
) -> dict[str, Counter]:
    """Residues attained by ``form`` mod ``modulus`` on each tuple class.

    ``classes`` maps a name to a vectorised predicate over the coordinate
    arrays; the default is :data:`PARITY_CLASSES` (four variables only).
    Returns ``name -> Counter(residue -> number of tuples)``.
    """
    spec = ResidueSearchSpec(form, modulus, "none")
    if modulus > 1 << 16:
        raise ValueError("profiles are limited to moduli up to 2^16")
    if classes is None:
        if form.nvars != 4:
            raise ValueError("default parity classes need four variables (w, x, y, z)")
        classes = PARITY_CLASSES
    terms = _integer_terms(form, modulus)
    tallies = {name: np.zeros(modulus, dtype=np.int64) for name in classes}
    for s, e in _ranges(spec.size, chunk):
        coords = _decode(s, e, form.nvars, spec.bits)
        values = _evaluate(terms, coords, modulus)
        for name, pred in classes.items():
            sel = values[pred(coords)]
            tallies[name] += np.bincount(sel.astype(np.int64), minlength=modulus)
    return {name: Counter({r: int(n) for r, n in enumerate(t) if n}) for name, t in tallies.items()}


# --- descent ----------------------------------------------------------------

@dataclass
class DescentCheck:
    ok: bool
    trace: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _scaled(form: WeightedForm, factors) -> WeightedForm:
    """form(c_0 v_0, c_1 v_1, ...) for scalar or polynomial factors c_i."""
    gens = WeightedForm.gens(form.variables, form.weights)
    return form.substitute([c * g for c, g in zip(factors, gens)])


def descent_reduction_check(form: WeightedForm, weights=DESCENT_WEIGHTS) -> DescentCheck:
    """Symbolically verify the two identities behind the 2-adic descent.

    (a) f(2w, 2x, 2y, 2z) = 4 (w^2 + 4 g) where g is the w-free part of f,
        so a solution with all coordinates even has 4 | w^2;
    (b) f(l^2 w, l x, l y, l z) = l^4 f(w, x, y, z) as polynomials in a fresh
        variable l, hence (4w', 2x, 2y, 2z) solves f iff (w', x, y, z) does.
    """
    weights = tuple(weights)
    if weights != DESCENT_WEIGHTS:
        raise ValueError(f"descent is set up for weights {DESCENT_WEIGHTS}, got {weights}")
    if form.nvars != 4 or form.weights != weights:
        raise ValueError("form must be in four variables with weights (2, 1, 1, 1)")
    if not form.is_weighted_homogeneous(4) or form.is_zero():
        raise ValueError(f"form is not weighted-homogeneous of degree 4 (degrees {sorted(form.degrees())})")
    if not form.has_integer_coefficients():
        raise ValueError("descent needs integer coefficients")

    trace = [f"f = {form.to_text()}", "weights (2, 1, 1, 1), weighted degree 4"]
    w_free = WeightedForm({e: c for e, c in form.terms.items() if e[0] == 0}, form.variables, form.weights)
    w_part = form - w_free
    w = WeightedForm.var(form.variables[0], form.variables, form.weights)
    ok_a = w_part == w * w
    lhs = _scaled(form, (2, 2, 2, 2))
    rhs = 4 * (w * w + 4 * w_free)
    ok_a = ok_a and lhs == rhs
    trace.append(f"(a) f(2w,2x,2y,2z) = {lhs.to_text()}")
    trace.append(f"    4*(w^2 + 4*g)   = {rhs.to_text()}  [{'equal' if ok_a else 'DIFFERENT'}]")
    if ok_a:
        trace.append("    so an all-even solution forces 4 | w^2, i.e. w = 2w'")

    # identity (b) with the scale as a formal fifth variable
    ext_vars = tuple(form.variables) + ("lam",)
    ext_weights = tuple(form.weights) + (1,)
    f_ext = form.with_variables(ext_vars, ext_weights)
    lam = WeightedForm.var("lam", ext_vars, ext_weights)
    gens = WeightedForm.gens(ext_vars, ext_weights)
    images = [lam * lam * gens[0], lam * gens[1], lam * gens[2], lam * gens[3], lam]
    scaled = f_ext.substitute(images)
    ok_b = scaled == lam**4 * f_ext
    trace.append(f"(b) f(l^2 w, l x, l y, l z) = l^4 f(w,x,y,z) symbolically: {ok_b}")
    at_two = _scaled(form, (4, 2, 2, 2)) == 16 * form
    trace.append(f"    at l = 2: f(4w', 2x, 2y, 2z) = 16 f(w', x, y, z): {at_two}")
    ok = bool(ok_a and ok_b and at_two)
    if ok:
        trace.append(
            "descent: any nonzero solution over Q2 scales (by weighted powers of 2) to one over Z2 "
            "with min weighted valuation 0; an all-even Z2 solution (2w,2x,2y,2z) has w = 2w' and "
            "(w',x,y,z) is again a solution, so we may assume one of w, x, y, z is odd"
        )
    return DescentCheck(ok, trace)


# --- certificate -------------------------------------------------------------

@dataclass
class InsolubilityCertificate:
    form: str
    modulus: int
    predicate: str
    tuples_enumerated: int
    solutions_found: int
    witnesses: list[tuple[int, ...]]
    descent_trace: list[str]
    verdict: str
    wall_time: float

    def to_dict(self) -> dict:
        return {
            "form": self.form,
            "modulus": self.modulus,
            "predicate": self.predicate,
            "tuples_enumerated": self.tuples_enumerated,
            "solutions_found": self.solutions_found,
            "witnesses": [list(w) for w in self.witnesses],
            "descent_trace": list(self.descent_trace),
            "verdict": self.verdict,
            "wall_time": self.wall_time,
        }


def q2_insolubility_certificate(
    form: WeightedForm,
    weights=DESCENT_WEIGHTS,
    *,
    modulus: int = 64,
    jobs: int = 1,
) -> InsolubilityCertificate:
    """No primitive solution mod 64 + descent  =>  no nonzero solution in Q2."""
    t0 = time.perf_counter()
    descent = descent_reduction_check(form, weights)
    if not descent:
        raise ValueError("descent identities fail for this form:\n" + "\n".join(descent.trace))
    spec = ResidueSearchSpec(form, modulus, "at-least-one-odd")
    result = enumerate_residue_solutions(spec, jobs=jobs)
    trace = list(descent.trace)
    if result.count == 0:
        trace += [
            f"searched all {result.tuples_enumerated} tuples of (Z/{modulus})^4 with an odd coordinate: none is a root",
            f"a primitive Z2 solution would reduce to one of them mod {modulus}: contradiction",
        ]
        verdict = NO_SOLUTION
    else:
        trace.append(f"{result.count} primitive residue solutions mod {modulus}; the obstruction does not apply")
        verdict = INCONCLUSIVE
    return InsolubilityCertificate(
        form=form.to_text(),
        modulus=modulus,
        predicate="at-least-one-odd",
        tuples_enumerated=result.tuples_enumerated,
        solutions_found=result.count,
        witnesses=result.witnesses,
        descent_trace=trace,
        verdict=verdict,
        wall_time=time.perf_counter() - t0,
    )

