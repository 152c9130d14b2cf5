"""Bar-resolution cohomology of small finite groups with trivial coefficients.

Cochains are functions G^n -> M stored as flat tables indexed by tuples of
element indices.  A cochain is normalized when it vanishes as soon as one
argument is the identity; linear algebra runs on the normalized subcomplex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .abelian import (
    AbHom, ExtClass, FgAbGroup, Rationals, _TupleModule, complex_cohomology,
)
from .groups import AbelianStructure, FiniteCentralExt, FiniteGroup, FiniteModule, abelian_structure
from .intmat import QZ, IntMatrix, solve

DEFAULT_ORDER_BOUND = 8
MAX_DEGREE = 3


@dataclass(frozen=True)
class GroupCochain:
    """An n-cochain G^n -> M with trivial action."""

    group: FiniteGroup
    degree: int
    module: _TupleModule
    values: tuple[tuple, ...]  # row-major over G^n
    normalized: bool = field(init=False)

    def __post_init__(self) -> None:
        if not 0 <= self.degree <= MAX_DEGREE + 1:
            raise ValueError(f"degree {self.degree} out of range")
        n = self.group.order ** self.degree
        if len(self.values) != n:
            raise ValueError(f"expected {n} values, got {len(self.values)}")
        memo: dict = {}
        vals = tuple(memo[v] if v in memo else memo.setdefault(v, self.module.reduce(v)) for v in self.values)
        object.__setattr__(self, "values", vals)
        e = self.group.identity
        norm = all(self.module.is_zero(self.value(args))
                   for args in self.arguments() if e in args)
        object.__setattr__(self, "normalized", norm)

    @classmethod
    def from_function(cls, group: FiniteGroup, degree: int, module: _TupleModule, func: Callable) -> GroupCochain:
        vals = tuple(func(*args) for args in itertools.product(group.elements(), repeat=degree))
        return cls(group, degree, module, vals)

    @classmethod
    def zero(cls, group: FiniteGroup, degree: int, module: _TupleModule) -> GroupCochain:
        z = module.zero()
        return cls(group, degree, module, (z,) * group.order ** degree)

    def arguments(self):
        return itertools.product(self.group.elements(), repeat=self.degree)

    def _index(self, args: Sequence[int]) -> int:
        i = 0
        for a in args:
            i = i * self.group.order + a
        return i

    def value(self, args: Sequence[int]) -> tuple:
        return self.values[self._index(args)]

    def __call__(self, *args: int) -> tuple:
        return self.value(args)

    def _check(self, other: GroupCochain) -> None:
        if (self.group, self.degree, self.module) != (other.group, other.degree, other.module):
            raise ValueError("cochains live in different spaces")

    def __add__(self, other: GroupCochain) -> GroupCochain:
        self._check(other)
        return GroupCochain(self.group, self.degree, self.module,
                            tuple(self.module.add(a, b) for a, b in zip(self.values, other.values)))

    def __neg__(self) -> GroupCochain:
        return GroupCochain(self.group, self.degree, self.module, tuple(self.module.neg(a) for a in self.values))

    def __sub__(self, other: GroupCochain) -> GroupCochain:
        return self + (-other)

    def scale(self, k: int) -> GroupCochain:
        return pushforward_coeff(lambda a: self.module.scale(k, a), self, self.module)

    def is_zero(self) -> bool:
        return all(self.module.is_zero(v) for v in self.values)

    def is_symmetric(self) -> bool:
        if self.degree != 2:
            raise ValueError("symmetry is defined for 2-cochains")
        return all(self(a, b) == self(b, a) for a in self.group.elements() for b in self.group.elements())

    def is_cocycle(self) -> bool:
        return bar_coboundary(self).is_zero()


def _raw_coboundary(c: GroupCochain, module: _TupleModule) -> GroupCochain:
    g, n = c.group, c.degree

    def f(*args):
        acc = list(c.value(args[1:]))
        for i in range(n):
            merged = args[:i] + (g.mul(args[i], args[i + 1]),) + args[i + 2:]
            v = c.value(merged)
            sign = -1 if i % 2 == 0 else 1
            acc = [x + sign * y for x, y in zip(acc, v)]
        v = c.value(args[:n])
        sign = -1 if n % 2 == 0 else 1
        return tuple(x + sign * y for x, y in zip(acc, v))

    return GroupCochain.from_function(g, n + 1, module, f)


def bar_coboundary(c: GroupCochain) -> GroupCochain:
    """(dc)(g1..g{n+1}) = c(g2..) + sum (-1)^i c(..gi g{i+1}..) + (-1)^{n+1} c(g1..gn)."""
    if c.degree > 2:
        raise ValueError("bar_coboundary is provided for degree <= 2")
    return _raw_coboundary(c, c.module)


def normalize_cocycle(c: GroupCochain) -> tuple[GroupCochain, GroupCochain | None]:
    """Return (normalized cocycle, shift) with c = normalized + d(shift).

    For a 2-cocycle with trivial action, f(1, g) = f(g, 1) = f(1, 1), so
    subtracting the coboundary of the constant 1-cochain f(1, 1) normalizes.
    """
    if c.normalized:
        return c, None
    if c.degree != 2 or not c.is_cocycle():
        raise ValueError("only 2-cocycles are normalized automatically")
    g = c.group
    k = c(g.identity, g.identity)
    shift = GroupCochain.from_function(g, 1, c.module, lambda x: k)
    return c - bar_coboundary(shift), shift


@lru_cache(maxsize=64)
def _normalized_args(g: FiniteGroup, n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product(g.non_identity(), repeat=n))


@lru_cache(maxsize=64)
def bar_matrix(g: FiniteGroup, n: int) -> IntMatrix:
    """Integer matrix of d : C^n -> C^{n+1} on normalized coordinates."""
    cols = {a: i for i, a in enumerate(_normalized_args(g, n))}
    rows = _normalized_args(g, n + 1)
    e = g.identity
    out = []
    for args in rows:
        row = [0] * len(cols)
        terms = [(args[1:], 1)]
        for i in range(n):
            terms.append((args[:i] + (g.mul(args[i], args[i + 1]),) + args[i + 2:], (-1) ** (i + 1)))
        terms.append((args[:n], (-1) ** (n + 1)))
        for t, s in terms:
            if e not in t:
                row[cols[t]] += s
        out.append(row)
    return IntMatrix.from_rows(out, len(cols))


def _check_bound(g: FiniteGroup, bound: int) -> None:
    if g.order > bound:
        raise ValueError(f"group order {g.order} exceeds the bound {bound}")


def cohomology_group(g: FiniteGroup, module: _TupleModule, n: int, bound: int = DEFAULT_ORDER_BOUND) -> FgAbGroup:
    """H^n(G, M) for trivial coefficients, n <= 3."""
    _check_bound(g, bound)
    if not 0 <= n <= MAX_DEGREE:
        raise ValueError(f"degree {n} outside 0..{MAX_DEGREE}")
    dim = len(_normalized_args(g, n))
    prev = bar_matrix(g, n - 1) if n >= 1 else None
    nxt = bar_matrix(g, n)
    return complex_cohomology(prev, nxt, dim, module)


def _coordinate_rhs(c: GroupCochain) -> list[list]:
    args = _normalized_args(c.group, c.degree)
    per_coord = []
    for k in range(c.module.ngens):
        per_coord.append([c.value(a)[k] for a in args])
    return per_coord


def is_group_coboundary(c: GroupCochain, bound: int = DEFAULT_ORDER_BOUND) -> GroupCochain | None:
    """A cochain b with db = c, or None if c is not a coboundary."""
    _check_bound(c.group, bound)
    if c.degree < 1:
        raise ValueError("0-cochains are never coboundaries of anything")
    if c.degree <= 2 and not c.is_cocycle():
        raise ValueError("input is not a cocycle")
    base, shift = normalize_cocycle(c) if not c.normalized else (c, None)
    if not base.normalized:
        raise ValueError("degree-3 input must be normalized")
    g, n = c.group, c.degree
    a = bar_matrix(g, n - 1)
    sol_coords = []
    for k, rhs in enumerate(_coordinate_rhs(base)):
        x = solve(a, rhs, c.module.kinds[k])
        if x is None:
            return None
        sol_coords.append(x)
    idx = {args: i for i, args in enumerate(_normalized_args(g, n - 1))}
    e = g.identity

    def w(*args):
        if e in args:
            return c.module.zero()
        i = idx[args]
        return tuple(col[i] for col in sol_coords)

    witness = GroupCochain.from_function(g, n - 1, c.module, w)
    if shift is not None:
        witness = witness + shift
    return witness


def delta2_connecting(f: GroupCochain) -> GroupCochain:
    """Connecting map H^2(G, (Q/Z)^m) -> H^3(G, Z^m) on cocycles.

    Lift each value to its representative in [0, 1)^m and take the bar
    coboundary over Q^m; the result is integral.
    """
    mod = f.module
    if any(k != QZ for k in mod.kinds):
        raise ValueError("delta2_connecting needs (Q/Z)^m coefficients")
    if f.degree != 2:
        raise ValueError("delta2_connecting acts on 2-cochains")
    m = mod.ngens
    lifted = GroupCochain(f.group, 2, Rationals(m), f.values)
    d = _raw_coboundary(lifted, Rationals(m))
    if any(x.denominator != 1 for v in d.values for x in v):
        raise ValueError("input is not a cocycle modulo Z")
    return GroupCochain(f.group, 3, FgAbGroup(m), tuple(tuple(int(x) for x in v) for v in d.values))


def cocycle_of_extension(ext: FiniteCentralExt) -> GroupCochain:
    """f(k, k') = s(k) s(k') s(kk')^-1 read in the center."""
    t, q, s = ext.total, ext.quotient, ext.section

    def f(a, b):
        x = t.mul(t.mul(s[a], s[b]), t.inv(s[q.mul(a, b)]))
        return ext.center_value(x)

    return GroupCochain.from_function(q, 2, ext.center, f)


def extension_of_cocycle(f: GroupCochain) -> FiniteCentralExt:
    """The group Z x G with (z, k)(z', k') = (z + z' + f(k, k'), kk')."""
    if f.degree != 2:
        raise ValueError("extensions come from 2-cocycles")
    mod = f.module
    if any(not isinstance(k, int) or k < 1 for k in mod.kinds):
        raise ValueError("extension_of_cocycle needs finite coefficients")
    if not f.normalized:
        raise ValueError("cocycle must be normalized")
    g = f.group
    zs = list(itertools.product(*(range(k) for k in mod.kinds)))
    elems = [(z, k) for z in zs for k in g.elements()]
    idx = {x: i for i, x in enumerate(elems)}
    table = tuple(
        tuple(idx[(mod.add(mod.add(z, w), f(k, l)), g.mul(k, l))] for (w, l) in elems)
        for (z, k) in elems
    )
    try:
        total = FiniteGroup(table)
    except ValueError as exc:
        raise ValueError(f"not a cocycle: {exc}") from None
    center = mod if isinstance(mod, FiniteModule) else FiniteModule(tuple(mod.kinds))
    embed = tuple(idx[(z, g.identity)] for z in zs)
    proj = tuple(k for (_, k) in elems)
    section = tuple(idx[(mod.zero(), k)] for k in g.elements())
    return FiniteCentralExt(total, center, embed, g, proj, section)


def pushforward_coeff(gamma: AbHom | Callable, c: GroupCochain, target: _TupleModule | None = None) -> GroupCochain:
    """Apply a coefficient homomorphism pointwise.

    gamma is an AbHom, or any callable on coordinate tuples together with
    its target module.
    """
    if isinstance(gamma, AbHom):
        if gamma.source.kinds != c.module.kinds:
            raise ValueError(f"coefficients {c.module} differ from source {gamma.source}")
        target = gamma.target
    elif target is None:
        raise ValueError("a callable pushforward needs its target module")
    memo: dict = {}
    vals = tuple(memo[v] if v in memo else memo.setdefault(v, gamma(v)) for v in c.values)
    return GroupCochain(c.group, c.degree, target, vals)


def ext_of_symmetric_class(f: GroupCochain) -> ExtClass:
    """The Ext class of the abelian extension defined by a symmetric cocycle."""
    g = f.group
    if not g.is_abelian:
        raise ValueError("ext_of_symmetric_class needs an abelian group")
    if not f.is_symmetric():
        raise ValueError("cocycle is not symmetric")
    mod = f.module
    if isinstance(mod, FiniteModule):
        try:
            mod = FgAbGroup(0, mod.kinds)
        except ValueError:
            raise ValueError("finite coefficients must be in invariant-factor form") from None
    if not isinstance(mod, FgAbGroup):
        raise ValueError("coefficients must be a finitely generated abelian group")
    st = abelian_structure(g)
    comps = []
    for j, d in enumerate(st.canonical.invariant_factors):
        gen = st.generators[st.canonical.free_rank + j]
        x, acc = g.identity, mod.zero()
        for _ in range(d):
            acc = mod.add(acc, f(x, gen))
            x = g.mul(x, gen)
        comps.append(acc)
    return ExtClass(st.canonical, mod, tuple(comps))


# ---------------------------------------------------------------- abelian G: H_2 and the commutator form


@dataclass(frozen=True)
class SchurData:
    """H_2 of a finite abelian group as the exterior square.

    H_2(Z/d1 + ... + Z/dt) is the sum of Z/gcd(di, dj) over i < j, generated
    by gi ^ gj; pairs lists (i, j) for each canonical generator of h2.
    """

    structure: AbelianStructure
    h2: FgAbGroup
    pairs: tuple[tuple[int, int], ...]


def schur_data(g: FiniteGroup) -> SchurData:
    st = abelian_structure(g)
    ds = st.canonical.invariant_factors
    pairs = sorted(((i, j) for i in range(len(ds)) for j in range(i + 1, len(ds))),
                   key=lambda p: (ds[p[0]], p))
    return SchurData(st, FgAbGroup(0, tuple(ds[i] for i, _ in pairs)), tuple(pairs))


def commutator_form(f: GroupCochain) -> tuple[SchurData, list[tuple]]:
    """Values of w(a, b) = f(a, b) - f(b, a) on the generators gi ^ gj of H_2(G).

    For a 2-cocycle on an abelian group this form is bilinear and
    alternating, and it vanishes exactly on the symmetric classes.
    """
    sd = schur_data(f.group)
    gens = sd.structure.generators
    vals = [f.module.sub(f(gens[i], gens[j]), f(gens[j], gens[i])) for i, j in sd.pairs]
    return sd, vals
