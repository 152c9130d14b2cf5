"""Čech cochains on finite nerves with locally constant coefficients.

A k-cochain assigns a value to every sorted (k+1)-vertex simplex.  Abelian
coefficients are tuple modules; non-abelian coefficients are FiniteGroups
with element indices as values and are allowed in degrees 0 and 1 only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Mapping, Sequence, Union

from .abelian import FgAbGroup, Rationals, _TupleModule, coord_from_json
from .groups import FiniteCentralExt, FiniteGroup
from .intmat import QZ, IntMatrix, solve

Simplex = tuple[int, ...]
Coefficients = Union[_TupleModule, FiniteGroup]


@dataclass(frozen=True)
class Nerve:
    """An abstract simplicial complex given by its maximal faces."""

    vertex_count: int
    facets: tuple[Simplex, ...]

    def __post_init__(self) -> None:
        fs = tuple(sorted({tuple(sorted(set(f))) for f in self.facets}))
        for f in fs:
            if not f:
                raise ValueError("empty facet")
            if f[0] < 0 or f[-1] >= self.vertex_count:
                raise ValueError(f"facet {f} uses a vertex outside 0..{self.vertex_count - 1}")
        sets = [set(f) for f in fs]
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                if i != j and a < b:
                    raise ValueError(f"facet {fs[i]} is contained in facet {fs[j]}")
        covered = set().union(*sets) if sets else set()
        missing = set(range(self.vertex_count)) - covered
        if missing:
            raise ValueError(f"vertices {sorted(missing)} lie in no facet")
        object.__setattr__(self, "facets", fs)

    @cached_property
    def _simplices(self) -> tuple[tuple[Simplex, ...], ...]:
        top = max(len(f) for f in self.facets) - 1 if self.facets else -1
        out: list[set] = [set() for _ in range(top + 1)]
        for f in self.facets:
            for k in range(len(f)):
                out[k].update(itertools.combinations(f, k + 1))
        return tuple(tuple(sorted(s)) for s in out)

    @cached_property
    def _index(self) -> tuple[dict, ...]:
        return tuple({s: i for i, s in enumerate(lvl)} for lvl in self._simplices)

    @property
    def dimension(self) -> int:
        return len(self._simplices) - 1

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        return self._simplices[k] if 0 <= k <= self.dimension else ()

    def index(self, s: Simplex) -> int:
        return self._index[len(s) - 1][s]

    def is_simplex(self, s: Sequence[int]) -> bool:
        t = tuple(sorted(set(s)))
        return bool(t) and len(t) - 1 <= self.dimension and t in self._index[len(t) - 1]

    def components(self) -> list[int]:
        """Component label (least vertex) for every vertex."""
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.simplices(1):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        return [find(v) for v in range(self.vertex_count)]

    def to_text(self) -> str:
        lines = [f"vertices {self.vertex_count}"]
        lines += [" ".join(map(str, f)) for f in self.facets]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, source: str = "<nerve>") -> Nerve:
        lines = [(i + 1, ln.split("#")[0].strip()) for i, ln in enumerate(text.splitlines())]
        lines = [(i, ln) for i, ln in lines if ln]
        if not lines or not lines[0][1].startswith("vertices"):
            raise ValueError(f"{source}:1: expected 'vertices N'")
        lineno, head = lines[0]
        try:
            n = int(head.split()[1])
        except (IndexError, ValueError):
            raise ValueError(f"{source}:{lineno}: bad vertex count") from None
        facets = []
        for lineno, ln in lines[1:]:
            try:
                facets.append(tuple(int(x) for x in ln.split()))
            except ValueError:
                raise ValueError(f"{source}:{lineno}: facet entries must be integers") from None
        try:
            return cls(n, tuple(facets))
        except ValueError as exc:
            raise ValueError(f"{source}: {exc}") from None


def sphere_nerve(n: int) -> Nerve:
    """Nerve of the n+2 hemisphere-like sets covering S^n: the boundary of an (n+1)-simplex."""
    if n < 1:
        raise ValueError("sphere nerves need n >= 1")
    return Nerve(n + 2, tuple(itertools.combinations(range(n + 2), n + 1)))


RP2_FACETS = ((0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
              (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3))


def rp2_nerve() -> Nerve:
    """The six-vertex triangulation of the real projective plane."""
    return Nerve(6, RP2_FACETS)


# ---------------------------------------------------------------- cochains


def _perm_sign(seq: Sequence[int]) -> int:
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class CechCochain:
    nerve: Nerve
    degree: int
    coeff: Coefficients
    values: tuple  # aligned with nerve.simplices(degree)

    def __post_init__(self) -> None:
        simp = self.nerve.simplices(self.degree)
        if self.degree < 0:
            raise ValueError("negative degree")
        if len(self.values) != len(simp):
            raise ValueError(f"expected {len(simp)} values in degree {self.degree}, got {len(self.values)}")
        if isinstance(self.coeff, FiniteGroup):
            if self.degree > 1:
                raise ValueError("non-abelian cochains exist in degrees 0 and 1 only")
            if any(not 0 <= v < self.coeff.order for v in self.values):
                raise ValueError("group-valued cochain has an out-of-range element")
        else:
            memo: dict = {}
            red = self.coeff.reduce
            vals = tuple(memo[v] if v in memo else memo.setdefault(v, red(v)) for v in self.values)
            object.__setattr__(self, "values", vals)

    @property
    def abelian(self) -> bool:
        return not isinstance(self.coeff, FiniteGroup)

    @classmethod
    def from_mapping(cls, nerve: Nerve, degree: int, coeff: Coefficients, values: Mapping) -> CechCochain:
        """Build from a dict keyed by simplices; missing simplices get zero/identity."""
        zero = coeff.identity if isinstance(coeff, FiniteGroup) else coeff.zero()
        known = {}
        for s, v in values.items():
            t = tuple(sorted(s))
            if not nerve.is_simplex(t) or len(t) != degree + 1:
                raise ValueError(f"{s} is not a {degree}-simplex of the nerve")
            known[t] = _orient(coeff, v, s, t)
        return cls(nerve, degree, coeff, tuple(known.get(s, zero) for s in nerve.simplices(degree)))

    @classmethod
    def from_function(cls, nerve: Nerve, degree: int, coeff: Coefficients, func: Callable) -> CechCochain:
        return cls(nerve, degree, coeff, tuple(func(s) for s in nerve.simplices(degree)))

    @classmethod
    def zero(cls, nerve: Nerve, degree: int, coeff: Coefficients) -> CechCochain:
        z = coeff.identity if isinstance(coeff, FiniteGroup) else coeff.zero()
        return cls(nerve, degree, coeff, (z,) * len(nerve.simplices(degree)))

    def __getitem__(self, s: Sequence[int]):
        """Value on a (possibly unsorted) simplex, using antisymmetry."""
        s = tuple(s)
        idx = self.nerve._index
        if len(s) <= len(idx):
            i = idx[len(s) - 1].get(s)
            if i is not None:
                return self.values[i]
        t = tuple(sorted(s))
        if len(set(t)) != len(t):
            # degenerate tuples carry the zero value
            return self.coeff.identity if not self.abelian else self.coeff.zero()
        v = self.values[self.nerve.index(t)]
        return _orient(self.coeff, v, t, tuple(s))

    def items(self) -> Iterator[tuple[Simplex, object]]:
        return zip(self.nerve.simplices(self.degree), self.values)

    def _check(self, other: CechCochain) -> None:
        if (self.nerve, self.degree, self.coeff) != (other.nerve, other.degree, other.coeff):
            raise ValueError("cochains live in different spaces")
        if not self.abelian:
            raise ValueError("arithmetic needs abelian coefficients")

    def __add__(self, other: CechCochain) -> CechCochain:
        self._check(other)
        return CechCochain(self.nerve, self.degree, self.coeff,
                           tuple(self.coeff.add(a, b) for a, b in zip(self.values, other.values)))

    def __neg__(self) -> CechCochain:
        return CechCochain(self.nerve, self.degree, self.coeff, tuple(self.coeff.neg(a) for a in self.values))

    def __sub__(self, other: CechCochain) -> CechCochain:
        return self + (-other)

    def scale(self, k: int) -> CechCochain:
        return CechCochain(self.nerve, self.degree, self.coeff, tuple(self.coeff.scale(k, a) for a in self.values))

    def is_zero(self) -> bool:
        if self.abelian:
            return all(self.coeff.is_zero(v) for v in self.values)
        return all(v == self.coeff.identity for v in self.values)

    def map_values(self, func: Callable, coeff: Coefficients) -> CechCochain:
        return CechCochain(self.nerve, self.degree, coeff, tuple(func(v) for v in self.values))

    def to_text(self) -> str:
        return "".join(f"{s} : {_value_text(v)}\n" for s, v in self.items())


def _orient(coeff: Coefficients, v, stored: Simplex, wanted: Simplex):
    """Convert the value stored on `stored` into the value on the reordering `wanted`."""
    if stored == wanted:
        return v
    pos = {x: i for i, x in enumerate(stored)}
    sign = _perm_sign([pos[x] for x in wanted])
    if isinstance(coeff, FiniteGroup):
        return v if sign == 1 else coeff.inv(v)
    return v if sign == 1 else coeff.neg(v)


def _value_text(v) -> str:
    if isinstance(v, tuple):
        return " ".join(str(x) for x in v)
    return str(v)


def cochain_from_text(text: str, nerve: Nerve, degree: int, coeff: Coefficients, source: str = "<cochain>") -> CechCochain:
    """Parse lines 'σ : value' where σ is a simplex tuple and value its coordinates."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#")[0].strip()
        if not ln:
            continue
        if ":" not in ln:
            raise ValueError(f"{source}:{lineno}: expected 'simplex : value'")
        left, right = ln.split(":", 1)
        try:
            s = tuple(int(x) for x in left.replace("(", " ").replace(")", " ").replace(",", " ").split())
            parts = right.split()
            if isinstance(coeff, FiniteGroup):
                (v,) = parts
                v = int(v)
            else:
                if len(parts) != coeff.ngens:
                    raise ValueError(f"expected {coeff.ngens} coordinates")
                v = tuple(coord_from_json(x, k) for x, k in zip(parts, coeff.kinds))
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
        if s in values:
            raise ValueError(f"{source}:{lineno}: simplex {s} given twice")
        values[s] = v
    try:
        return CechCochain.from_mapping(nerve, degree, coeff, values)
    except ValueError as exc:
        raise ValueError(f"{source}: {exc}") from None


# ---------------------------------------------------------------- coboundary


@lru_cache(maxsize=128)
def coboundary_matrix(nerve: Nerve, k: int) -> IntMatrix:
    """Matrix of δ : C^k -> C^{k+1}; (δc)(v0..v{k+1}) = sum (-1)^i c(..v̂i..)."""
    rows = []
    cols = nerve.simplices(k)
    for s in nerve.simplices(k + 1):
        row = [0] * len(cols)
        for i in range(len(s)):
            row[nerve.index(s[:i] + s[i + 1:])] += (-1) ** i
        rows.append(row)
    return IntMatrix.from_rows(rows, len(cols))


def _apply(c: CechCochain, mat: IntMatrix, target: _TupleModule, degree: int) -> CechCochain:
    vals = []
    for r in range(mat.rows):
        acc = [0] * target.ngens
        for j, a in enumerate(mat.row(r)):
            if a:
                acc = [x + a * y for x, y in zip(acc, c.values[j])]
        vals.append(tuple(acc))
    return CechCochain(c.nerve, degree, target, tuple(vals))


def coboundary(c: CechCochain) -> CechCochain:
    if not c.abelian:
        raise ValueError("use delta1_lift for non-abelian coefficients")
    if c.degree >= c.nerve.dimension:
        raise ValueError(f"degree {c.degree} is the top degree of the nerve")
    return _apply(c, coboundary_matrix(c.nerve, c.degree), c.coeff, c.degree + 1)


def is_cocycle(c: CechCochain) -> bool:
    if not c.abelian:
        return nonabelian_cocycle_defect(c) is None
    if c.degree >= c.nerve.dimension:
        return True
    return coboundary(c).is_zero()


def nonabelian_cocycle_defect(g: CechCochain) -> Simplex | None:
    """First triangle (i, j, k) with g_ij g_jk != g_ik, or None."""
    if g.degree != 1 or g.abelian:
        raise ValueError("expects a group-valued 1-cochain")
    grp = g.coeff
    for i, j, k in g.nerve.simplices(2):
        if grp.mul(g[(i, j)], g[(j, k)]) != g[(i, k)]:
            return (i, j, k)
    return None


def is_coboundary(c: CechCochain) -> CechCochain | None:
    """A witness b with δb = c, or None."""
    if not c.abelian:
        raise ValueError("is_coboundary needs abelian coefficients")
    if c.degree == 0:
        return None if not c.is_zero() else c
    if not is_cocycle(c):
        raise ValueError("input is not a cocycle")
    mat = coboundary_matrix(c.nerve, c.degree - 1)
    coords = []
    for k, kind in enumerate(c.coeff.kinds):
        x = solve(mat, [v[k] for v in c.values], kind)
        if x is None:
            return None
        coords.append(x)
    n = len(c.nerve.simplices(c.degree - 1))
    return CechCochain(c.nerve, c.degree - 1, c.coeff, tuple(tuple(col[i] for col in coords) for i in range(n)))


def cohomologous(a: CechCochain, b: CechCochain) -> bool:
    return is_coboundary(a - b) is not None


# ---------------------------------------------------------------- spheres


def _check_sphere(nerve: Nerve) -> int:
    n = nerve.vertex_count - 2
    if n < 1 or nerve != sphere_nerve(n):
        raise ValueError("cochain does not live on a sphere nerve")
    return n


def s_tilde(c: CechCochain, flip_first: bool = False) -> tuple:
    """Alternating sum over top facets: sum_j (-1)^j c(facet omitting j).

    flip_first negates the j = 0 term; it exists only for fault-injection runs.
    """
    n = _check_sphere(c.nerve)
    if c.degree != n:
        raise ValueError(f"s_tilde expects a top-degree ({n}) cochain, got degree {c.degree}")
    if not c.abelian:
        raise ValueError("s_tilde needs abelian coefficients")
    acc = c.coeff.zero()
    for j in range(n + 2):
        facet = tuple(v for v in range(n + 2) if v != j)
        sign = (-1) ** j * (-1 if flip_first and j == 0 else 1)
        acc = c.coeff.add(acc, c.coeff.scale(sign, c[facet]))
    return acc


def suspend(c: CechCochain) -> CechCochain:
    """Carry a k-cochain on the n-sphere nerve to a (k+1)-cochain on the (n+1)-sphere nerve.

    The value on σ + (n+2) is the old value on σ; simplices missing the new
    vertex get zero.
    """
    n = _check_sphere(c.nerve)
    if not c.abelian:
        raise ValueError("suspend needs abelian coefficients")
    big = sphere_nerve(n + 1)
    new = n + 2
    z = c.coeff.zero()
    vals = tuple(c[s[:-1]] if s[-1] == new else z for s in big.simplices(c.degree + 1))
    return CechCochain(big, c.degree + 1, c.coeff, vals)


# ---------------------------------------------------------------- lifts


def delta1_lift(g: CechCochain, ext: FiniteCentralExt) -> CechCochain:
    """(i, j, k) -> s(g_ij) s(g_jk) s(g_ik)^-1 read in the center of the extension."""
    if g.coeff != ext.quotient:
        raise ValueError("cocycle coefficients differ from the extension quotient")
    bad = nonabelian_cocycle_defect(g)
    if bad is not None:
        raise ValueError(f"cocycle condition fails on {bad}")
    t, s = ext.total, ext.section

    def val(tri):
        i, j, k = tri
        x = t.mul(t.mul(s[g[(i, j)]], s[g[(j, k)]]), t.inv(s[g[(i, k)]]))
        return ext.center_value(x)

    return CechCochain.from_function(g.nerve, 2, ext.center, val)


def delta0_lift(f: CechCochain, ext: FiniteCentralExt) -> CechCochain:
    """(i, j) -> s(f_i) s(f_j)^-1 for f constant on components."""
    if f.degree != 0 or f.coeff != ext.quotient:
        raise ValueError("expects a quotient-valued 0-cochain")
    for i, j in f.nerve.simplices(1):
        if f.values[i] != f.values[j]:
            raise ValueError(f"0-cochain is not locally constant across edge {(i, j)}")
    t, s = ext.total, ext.section
    return CechCochain.from_function(
        f.nerve, 1, ext.center,
        lambda e: ext.center_value(t.mul(s[f.values[e[0]]], t.inv(s[f.values[e[1]]]))),
    )


def iota_lift(c: CechCochain) -> CechCochain:
    """Lift (Q/Z)^m values to [0, 1)^m, take δ over Q^m; the result is Z^m-valued."""
    if not c.abelian or any(k != QZ for k in c.coeff.kinds):
        raise ValueError("iota_lift needs (Q/Z)^m coefficients")
    m = c.coeff.ngens
    lifted = CechCochain(c.nerve, c.degree, Rationals(m), c.values)
    d = _apply(lifted, coboundary_matrix(c.nerve, c.degree), Rationals(m), c.degree + 1)
    if any(Fraction(x).denominator != 1 for v in d.values for x in v):
        raise ValueError("input is not a cocycle modulo Z")
    return CechCochain(c.nerve, c.degree + 1, FgAbGroup(m), tuple(tuple(int(x) for x in v) for v in d.values))


def pushforward_cochain(c: CechCochain, func: Callable, coeff: Coefficients) -> CechCochain:
    return c.map_values(func, coeff)


# ---------------------------------------------------------------- maps


def check_simplicial(src: Nerve, dst: Nerve, vmap: Sequence[int]) -> None:
    if len(vmap) != src.vertex_count:
        raise ValueError("vertex map has the wrong length")
    for f in src.facets:
        if not dst.is_simplex([vmap[v] for v in f]):
            raise ValueError(f"facet {f} maps to a non-simplex")


def pullback_cochain(vmap: Sequence[int], src: Nerve, c: CechCochain) -> CechCochain:
    """Pull c back along a simplicial vertex map src -> c.nerve."""
    check_simplicial(src, c.nerve, vmap)
    return CechCochain.from_function(src, c.degree, c.coeff, lambda s: c[tuple(vmap[v] for v in s)])


def simplicial_maps(src: Nerve, dst: Nerve) -> Iterator[tuple[int, ...]]:
    """Every simplicial vertex map src -> dst, by backtracking over vertices."""
    n = src.vertex_count
    # a partial map extends only if every face among assigned vertices maps to a simplex
    faces_by_last = [[s for k in range(1, src.dimension + 1) for s in src.simplices(k) if s[-1] == v]
                     for v in range(n)]
    cur: list[int] = []

    def rec(v):
        if v == n:
            yield tuple(cur)
            return
        for w in range(dst.vertex_count):
            cur.append(w)
            if all(dst.is_simplex([cur[u] for u in s]) for s in faces_by_last[v]):
                yield from rec(v + 1)
            cur.pop()

    yield from rec(0)


# ---------------------------------------------------------------- enumeration helpers


def group_cocycles(nerve: Nerve, grp: FiniteGroup) -> Iterator[CechCochain]:
    """Every grp-valued 1-cocycle on the nerve, by backtracking over edges."""
    edges = nerve.simplices(1)
    eidx = {e: i for i, e in enumerate(edges)}
    # triangles become checkable once their last edge (in edge order) is assigned
    checks: list[list[Simplex]] = [[] for _ in edges]
    for tri in nerve.simplices(2):
        i, j, k = tri
        last = max(eidx[(i, j)], eidx[(j, k)], eidx[(i, k)])
        checks[last].append(tri)
    vals = [0] * len(edges)

    def rec(p):
        if p == len(edges):
            yield CechCochain(nerve, 1, grp, tuple(vals))
            return
        for x in grp.elements():
            vals[p] = x
            if all(grp.mul(vals[eidx[(i, j)]], vals[eidx[(j, k)]]) == vals[eidx[(i, k)]] for i, j, k in checks[p]):
                yield from rec(p + 1)

    yield from rec(0)


def all_cochains(nerve: Nerve, degree: int, module: _TupleModule) -> Iterator[CechCochain]:
    """Every cochain with values in a finite module."""
    elems = list(module.elements())
    for vals in itertools.product(elems, repeat=len(nerve.simplices(degree))):
        yield CechCochain(nerve, degree, module, vals)


def gauge(g: CechCochain, h: Sequence[int]) -> CechCochain:
    """The gauge-equivalent cocycle h_i g_ij h_j^-1."""
    grp = g.coeff
    return CechCochain.from_function(
        g.nerve, 1, grp, lambda e: grp.mul(grp.mul(h[e[0]], g[e]), grp.inv(h[e[1]]))
    )

