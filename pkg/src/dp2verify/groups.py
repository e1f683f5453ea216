"""Matrix groups over GF(2): Sp6(2), the model Z/2 x Sp6(2) of W(E7), PSL3(2).

Matrices are packed row-major into integers (bit ``i*n + j`` is entry
``(i, j)``); a :class:`WeylElem` puts its sign in bit ``n*n``.  Whole groups
are sorted ``uint64`` arrays of such codes and all bulk operations are
vectorised: right multiplication by a fixed matrix is a per-row table lookup,
left multiplication and general products are XORs of masked rows.
"""

from __future__ import annotations

import hashlib
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 4_000_000
SIMPLE_GUARD = 100_000
SP6_ORDER = 1_451_520
WEYL_E7_ORDER = 2 * SP6_ORDER


class GroupError(ValueError):
    pass


# --- single elements -----------------------------------------------------------

@dataclass(frozen=True)
class GF2Mat:
    n: int
    bits: int

    def __post_init__(self):
        if not 1 <= self.n <= 7:
            raise ValueError("matrix size must be between 1 and 7")
        if self.bits >> (self.n * self.n):
            raise ValueError("bits outside the matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "GF2Mat":
        n = len(rows)
        bits = 0
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("matrix must be square")
            for j, v in enumerate(row):
                if v % 2:
                    bits |= 1 << (i * n + j)
        return cls(n, bits)

    @classmethod
    def identity(cls, n: int) -> "GF2Mat":
        return cls(n, sum(1 << (i * n + i) for i in range(n)))

    def row(self, i: int) -> int:
        return (self.bits >> (i * self.n)) & ((1 << self.n) - 1)

    def rows(self) -> list[list[int]]:
        return [[(self.row(i) >> j) & 1 for j in range(self.n)] for i in range(self.n)]

    def __getitem__(self, ij):
        i, j = ij
        return (self.bits >> (i * self.n + j)) & 1

    def __mul__(self, other: "GF2Mat") -> "GF2Mat":
        if other.n != self.n:
            raise ValueError("size mismatch")
        n = self.n
        out = 0
        for i in range(n):
            r = self.row(i)
            acc = 0
            for j in range(n):
                if (r >> j) & 1:
                    acc ^= other.row(j)
            out |= acc << (i * n)
        return GF2Mat(n, out)

    def transpose(self) -> "GF2Mat":
        return GF2Mat.from_rows([list(col) for col in zip(*self.rows())])

    def inverse(self) -> "GF2Mat":
        n = self.n
        a = [self.row(i) | (1 << (n + i)) for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if (a[r] >> col) & 1), None)
            if piv is None:
                raise GroupError("singular matrix over GF(2)")
            a[col], a[piv] = a[piv], a[col]
            for r in range(n):
                if r != col and (a[r] >> col) & 1:
                    a[r] ^= a[col]
        return GF2Mat(n, sum((a[i] >> n) << (i * n) for i in range(n)))

    def is_invertible(self) -> bool:
        try:
            self.inverse()
        except GroupError:
            return False
        return True

    def is_identity(self) -> bool:
        return self == GF2Mat.identity(self.n)

    @property
    def code(self) -> int:
        return self.bits

    def __str__(self):
        return "\n".join("".join(str(v) for v in row) for row in self.rows())


def block_diag(a: GF2Mat, b: GF2Mat) -> GF2Mat:
    ra, rb = a.rows(), b.rows()
    rows = [r + [0] * b.n for r in ra] + [[0] * a.n + r for r in rb]
    return GF2Mat.from_rows(rows)


def symplectic_form(n: int = 6) -> GF2Mat:
    """J = [[0, I], [I, 0]], the form preserved by diag(M, M^-T)."""
    h = n // 2
    rows = [[1 if (j == i + h or i == j + h) else 0 for j in range(n)] for i in range(n)]
    return GF2Mat.from_rows(rows)


def is_symplectic(m: GF2Mat) -> bool:
    j = symplectic_form(m.n)
    return m.transpose() * j * m == j


@dataclass(frozen=True)
class WeylElem:
    """(sign, symplectic matrix) in Z/2 x Sp6(2); sign 1 is the central -1."""

    sign: int
    sp: GF2Mat

    def __post_init__(self):
        if self.sign not in (0, 1):
            raise ValueError("sign is 0 (+1) or 1 (-1)")

    @classmethod
    def identity(cls, n: int = 6) -> "WeylElem":
        return cls(0, GF2Mat.identity(n))

    @classmethod
    def minus_one(cls, n: int = 6) -> "WeylElem":
        return cls(1, GF2Mat.identity(n))

    def __mul__(self, other: "WeylElem") -> "WeylElem":
        return WeylElem(self.sign ^ other.sign, self.sp * other.sp)

    def inverse(self) -> "WeylElem":
        return WeylElem(self.sign, self.sp.inverse())

    def is_identity(self) -> bool:
        return self.sign == 0 and self.sp.is_identity()

    @property
    def n(self) -> int:
        return self.sp.n

    @property
    def code(self) -> int:
        return self.sp.bits | (self.sign << (self.sp.n * self.sp.n))


def element_order(g) -> int:
    """Least k >= 1 with g^k = 1."""
    if isinstance(g, GF2Mat) and not g.is_invertible():
        raise GroupError("singular matrix has no order")
    x, k = g, 1
    while not x.is_identity():
        x = x * g
        k += 1
        if k > 1 << 16:
            raise GroupError("order bound exceeded")
    return k


# --- transvections, PSL3(2) embedding ------------------------------------------

def transvection(v: Sequence[int], n: int = 6) -> GF2Mat:
    """x -> x + <x, v> v for the form J, as the matrix I + v (J v)^T."""
    j = symplectic_form(n).rows()
    jv = [sum(j[r][c] * v[c] for c in range(n)) % 2 for r in range(n)]
    rows = [[(int(r == c) + v[r] * jv[c]) % 2 for c in range(n)] for r in range(n)]
    return GF2Mat.from_rows(rows)


def _unit(i: int, n: int = 6) -> list[int]:
    return [int(k == i) for k in range(n)]


def sp6_generators() -> list[GF2Mat]:
    """Fixed generating set of Sp6(2): transvections along e1..e6 and four adjacent sums.

    Correctness is certified after the fact by the order count 1,451,520.
    """
    vecs = [_unit(i) for i in range(6)]
    vecs += [[1, 1, 0, 0, 0, 0], [0, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 0], [0, 0, 0, 0, 1, 1]]
    return [transvection(v) for v in vecs]


def embed_psl32(m: GF2Mat) -> GF2Mat:
    """M -> diag(M, (M^-1)^T), landing in Sp6(2) for the form J."""
    if m.n != 3:
        raise ValueError("expects a 3x3 matrix")
    if not m.is_invertible():
        raise GroupError("singular matrix")
    return block_diag(m, m.inverse().transpose())


def companion_x3_x_1() -> GF2Mat:
    """Companion matrix of x^3 + x + 1 (primitive over GF(2), so order 7)."""
    return GF2Mat.from_rows([[0, 0, 1], [1, 0, 1], [0, 1, 0]])


def psl32_generators() -> list[GF2Mat]:
    elementary = GF2Mat.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    return [companion_x3_x_1(), elementary]


def order7_representative() -> WeylElem:
    return WeylElem(0, embed_psl32(companion_x3_x_1()))


# --- vectorised kernels --------------------------------------------------------

def _row_mask(n):
    return np.uint64((1 << n) - 1)


def _rows(x: np.ndarray, n: int) -> list[np.ndarray]:
    m = _row_mask(n)
    return [(x >> np.uint64(i * n)) & m for i in range(n)]


def _matrix_bits(n: int) -> np.uint64:
    return np.uint64((1 << (n * n)) - 1)


def _right_table(b: GF2Mat) -> np.ndarray:
    """table[r] = r * B for a row vector r."""
    n = b.n
    table = np.zeros(1 << n, dtype=np.uint64)
    brows = [b.row(j) for j in range(n)]
    for r in range(1 << n):
        acc = 0
        for j in range(n):
            if (r >> j) & 1:
                acc ^= brows[j]
        table[r] = acc
    return table


def mul_right(x: np.ndarray, g, n: int) -> np.ndarray:
    """x * g for an array of codes and one element ``g`` (GF2Mat or WeylElem)."""
    mat = g.sp if isinstance(g, WeylElem) else g
    table = _right_table(mat)
    out = np.zeros_like(x)
    for i, r in enumerate(_rows(x, n)):
        out |= table[r] << np.uint64(i * n)
    sign = np.uint64(1 << (n * n))
    out |= x & sign
    if isinstance(g, WeylElem) and g.sign:
        out ^= sign
    return out


def mul_left(g, x: np.ndarray, n: int) -> np.ndarray:
    """g * x for one element ``g`` and an array of codes."""
    mat = g.sp if isinstance(g, WeylElem) else g
    xr = _rows(x, n)
    out = np.zeros_like(x)
    for i in range(n):
        r = mat.row(i)
        acc = np.zeros_like(x)
        for j in range(n):
            if (r >> j) & 1:
                acc ^= xr[j]
        out |= acc << np.uint64(i * n)
    sign = np.uint64(1 << (n * n))
    out |= x & sign
    if isinstance(g, WeylElem) and g.sign:
        out ^= sign
    return out


def mul_arrays(x: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    """Elementwise product x[k] * y[k]."""
    yr = _rows(y, n)
    out = np.zeros_like(x)
    one = np.uint64(1)
    for i in range(n):
        acc = np.zeros_like(x)
        for j in range(n):
            bit = (x >> np.uint64(i * n + j)) & one
            acc ^= yr[j] * bit
        out |= acc << np.uint64(i * n)
    sign = np.uint64(1 << (n * n))
    out |= (x ^ y) & sign
    return out


def transpose_arrays(x: np.ndarray, n: int) -> np.ndarray:
    out = x & np.uint64(1 << (n * n))
    one = np.uint64(1)
    for i in range(n):
        for j in range(n):
            out |= ((x >> np.uint64(i * n + j)) & one) << np.uint64(j * n + i)
    return out


def symplectic_mask(x: np.ndarray, n: int = 6) -> np.ndarray:
    """Which codes satisfy M^T J M = J."""
    j = symplectic_form(n)
    lhs = mul_left(j, x & _matrix_bits(n), n)  # J M
    lhs = mul_arrays(transpose_arrays(x & _matrix_bits(n), n), lhs, n)
    return lhs == np.uint64(j.bits)


def _symplectic_inverse(x: np.ndarray, n: int) -> np.ndarray:
    # M^-1 = J M^T J because M^T J M = J and J^2 = I
    j = symplectic_form(n)
    return mul_right(mul_left(j, transpose_arrays(x, n), n), j, n)


def _power_inverse(x: np.ndarray, n: int) -> np.ndarray:
    identity = np.uint64(GF2Mat.identity(n).bits)
    sign = np.uint64(1 << (n * n))
    mat = x & _matrix_bits(n)
    inv = np.full_like(mat, identity)
    prev = np.full_like(mat, identity)
    cur = mat.copy()
    done = cur == identity
    inv[done] = identity
    steps = 0
    while not done.all():
        prev = cur
        cur = mul_arrays(cur, mat, n)
        newly = (cur == identity) & ~done
        inv[newly] = prev[newly]
        done |= newly
        steps += 1
        if steps > 1 << 12:
            raise GroupError("element of unbounded order; not a group of invertible matrices")
    return inv | (x & sign)


# --- groups --------------------------------------------------------------------

@dataclass
class SubgroupHandle:
    generators: list
    n: int
    elements: np.ndarray | None = None
    signed: bool = False
    symplectic: bool | None = None
    _inverses: np.ndarray | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        if self.elements is None:
            raise GroupError("group not enumerated")
        return int(self.elements.shape[0])

    @property
    def enumerated(self) -> bool:
        return self.elements is not None

    @property
    def identity_code(self) -> int:
        return GF2Mat.identity(self.n).bits

    def __contains__(self, g) -> bool:
        code = np.uint64(g.code)
        i = np.searchsorted(self.elements, code)
        return bool(i < self.order and self.elements[i] == code)

    def decode(self, code: int):
        code = int(code)
        mat = GF2Mat(self.n, code & ((1 << (self.n * self.n)) - 1))
        if self.signed:
            return WeylElem(code >> (self.n * self.n), mat)
        return mat

    def __iter__(self):
        return (self.decode(c) for c in self.elements)

    def inverses(self) -> np.ndarray:
        """Inverse of each element, aligned with ``elements``."""
        if self._inverses is None:
            if self.symplectic is None:
                self.symplectic = self.n % 2 == 0 and all(is_symplectic(_mat(g)) for g in self.generators)
            if self.symplectic:
                self._inverses = _symplectic_inverse(self.elements, self.n)
            else:
                self._inverses = _power_inverse(self.elements, self.n)
        return self._inverses

    def is_closed(self) -> bool:
        for g in self.generators:
            prod = mul_right(self.elements, g, self.n)
            if not np.array_equal(np.sort(prod), self.elements):
                return False
        return True


def _mat(g) -> GF2Mat:
    return g.sp if isinstance(g, WeylElem) else g


def _check_generators(generators) -> tuple[int, bool]:
    generators = list(generators)
    if not generators:
        raise GroupError("need at least one generator")
    n = _mat(generators[0]).n
    signed = isinstance(generators[0], WeylElem)
    for g in generators:
        if _mat(g).n != n or isinstance(g, WeylElem) != signed:
            raise GroupError("generators of mixed shape")
        if not _mat(g).is_invertible():
            raise GroupError("singular generator")
    return n, signed


def generate_group(generators: Iterable, max_order: int = MAX_ORDER) -> SubgroupHandle:
    """Breadth-first closure of the generators under right multiplication."""
    generators = list(generators)
    n, signed = _check_generators(generators)
    seen = np.array([GF2Mat.identity(n).bits], dtype=np.uint64)
    frontier = seen
    while frontier.size:
        cand = np.unique(np.concatenate([mul_right(frontier, g, n) for g in generators]))
        pos = np.searchsorted(seen, cand)
        pos[pos == seen.size] = 0
        fresh = cand[seen[pos] != cand]
        if seen.size + fresh.size > max_order:
            raise GroupError(f"group order exceeds guard {max_order}")
        seen = np.sort(np.concatenate([seen, fresh]))
        frontier = fresh
    return SubgroupHandle(generators, n, seen, signed)


def centralizer(sub_generators: Iterable, ambient: SubgroupHandle) -> SubgroupHandle:
    """{g in ambient : g h = h g for every generator h}."""
    if not ambient.enumerated:
        raise GroupError("ambient group must be enumerated")
    sub_generators = list(sub_generators)
    x = ambient.elements
    mask = np.ones(x.shape[0], dtype=bool)
    for h in sub_generators:
        mask &= mul_right(x, h, ambient.n) == mul_left(h, x, ambient.n)
    elems = x[mask]
    # the element list doubles as a generating set when it is small
    gens = [ambient.decode(c) for c in elems] if elems.size <= 4096 else []
    return SubgroupHandle(gens, ambient.n, elems, ambient.signed, ambient.symplectic)


def conjugacy_class(g, ambient: SubgroupHandle) -> np.ndarray:
    """Sorted codes of {h g h^-1 : h in ambient}."""
    if not ambient.enumerated:
        raise GroupError("ambient group must be enumerated")
    hg = mul_right(ambient.elements, g, ambient.n)
    return np.unique(mul_arrays(hg, ambient.inverses(), ambient.n))


def conjugacy_class_size(g, ambient: SubgroupHandle) -> int:
    return int(conjugacy_class(g, ambient).shape[0])


def is_simple(group: SubgroupHandle, guard: int = SIMPLE_GUARD) -> bool:
    """Every non-identity class has normal closure equal to the group."""
    if not group.enumerated:
        raise GroupError("group must be enumerated")
    if group.order > guard:
        raise GroupError(f"simplicity test limited to order {guard}")
    if group.order == 1:
        return False
    identity = np.uint64(group.identity_code)
    remaining = set(int(c) for c in group.elements) - {int(identity)}
    while remaining:
        code = min(remaining)
        cls = conjugacy_class(group.decode(code), group)
        remaining -= set(int(c) for c in cls)
        closure = generate_group([group.decode(c) for c in cls])
        if closure.order != group.order:
            return False
    return True


# --- Sp6(2) cache and the W(E7) model ------------------------------------------

CACHE_MAGIC = b"DP2SP6\x00\x01"
CACHE_VERSION = 1
CACHE_ENV = "DP2VERIFY_CACHE_DIR"
_HEADER = struct.Struct("<8sII32sQ")


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "dp2verify"


def generator_fingerprint(generators) -> bytes:
    h = hashlib.sha256()
    h.update(CACHE_VERSION.to_bytes(4, "little"))
    for g in generators:
        h.update(_mat(g).n.to_bytes(1, "little"))
        h.update(int(g.code).to_bytes(8, "little"))
    return h.digest()


def cache_path(cache_dir: Path | str | None = None) -> Path:
    return Path(cache_dir or default_cache_dir()) / "sp6_f2.bin"


def save_group(path: Path, group: SubgroupHandle) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _HEADER.pack(CACHE_MAGIC, CACHE_VERSION, group.n, generator_fingerprint(group.generators), group.order)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(group.elements.astype("<u8").tobytes())
    os.replace(tmp, path)


def load_group(path: Path, generators) -> SubgroupHandle | None:
    """Cached enumeration, or None if missing, corrupt or built from other generators."""
    try:
        raw = path.read_bytes()
    except OSError:
        return None
    if len(raw) < _HEADER.size:
        return None
    magic, version, n, fp, count = _HEADER.unpack_from(raw)
    if magic != CACHE_MAGIC or version != CACHE_VERSION or fp != generator_fingerprint(generators):
        return None
    body = raw[_HEADER.size :]
    if len(body) != 8 * count:
        return None
    elems = np.frombuffer(body, dtype="<u8").astype(np.uint64)
    return SubgroupHandle(list(generators), n, elems, isinstance(generators[0], WeylElem))


def sp6_group(cache_dir: Path | str | None = None, use_cache: bool = True) -> tuple[SubgroupHandle, bool]:
    """Enumerated Sp6(2) and whether it came from the cache."""
    gens = sp6_generators()
    path = cache_path(cache_dir)
    if use_cache:
        cached = load_group(path, gens)
        if cached is not None:
            return cached, True
    group = generate_group(gens)
    if use_cache:
        save_group(path, group)
    return group, False


def clear_cache(cache_dir: Path | str | None = None) -> bool:
    path = cache_path(cache_dir)
    if path.exists():
        path.unlink()
        return True
    return False


def weyl_e7_model(sp6: SubgroupHandle) -> SubgroupHandle:
    """Z/2 x Sp6(2) built from an enumerated Sp6(2)."""
    sign = np.uint64(1 << 36)
    elems = np.sort(np.concatenate([sp6.elements, sp6.elements | sign]))
    gens = [WeylElem(0, g) for g in sp6.generators] + [WeylElem.minus_one()]
    return SubgroupHandle(gens, 6, elems, signed=True, symplectic=True)


def embedded_psl32_weyl() -> list[WeylElem]:
    return [WeylElem(0, embed_psl32(m)) for m in psl32_generators()]
