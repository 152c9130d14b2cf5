"""Finitely generated abelian groups with their homomorphisms, Hom and Ext.

Groups are kept in invariant-factor form Z^r + Z/d1 + ... + Z/dt with
d1 | d2 | ... | dt and every di >= 2.  Canonical generators are ordered free
first, then torsion in increasing order; every homomorphism matrix is written
against that ordering.  Elements of any coefficient module are plain tuples of
coordinates (ints, or Fractions for the rational and Q/Z coordinates).

>>> A = FgAbGroup(0, (2, 4))
>>> ext_group(A, FgAbGroup(1))
FgAbGroup(free_rank=0, invariant_factors=(2, 4))
>>> hom_group(FgAbGroup(0, (6,)), FgAbGroup(0, (4,)))
FgAbGroup(free_rank=0, invariant_factors=(2,))
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterator, Sequence

from .intmat import QQ, QZ, IntMatrix, image_basis, integer_kernel, invariant_factors, snf_data, solve


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def reduce_coord(x, kind):
    """Reduce one coordinate into its canonical representative."""
    if kind == 0:
        return int(x)
    if kind == QQ:
        return Fraction(x)
    if kind == QZ:
        return Fraction(x) % 1
    return int(x) % kind


class _TupleModule:
    """Shared arithmetic for modules whose elements are coordinate tuples."""

    kinds: tuple

    @property
    def ngens(self) -> int:
        return len(self.kinds)

    def reduce(self, vec: Sequence) -> tuple:
        if len(vec) != len(self.kinds):
            raise ValueError(f"expected {len(self.kinds)} coordinates, got {len(vec)}")
        return tuple(reduce_coord(x, k) for x, k in zip(vec, self.kinds))

    def zero(self) -> tuple:
        return self.reduce([0] * len(self.kinds))

    def add(self, a: Sequence, b: Sequence) -> tuple:
        return self.reduce([x + y for x, y in zip(a, b)])

    def neg(self, a: Sequence) -> tuple:
        return self.reduce([-x for x in a])

    def sub(self, a: Sequence, b: Sequence) -> tuple:
        return self.reduce([x - y for x, y in zip(a, b)])

    def scale(self, k: int, a: Sequence) -> tuple:
        return self.reduce([k * x for x in a])

    def is_zero(self, a: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(a))


@dataclass(frozen=True)
class FgAbGroup(_TupleModule):
    """Z^free_rank + Z/d1 + ... + Z/dt in invariant-factor form."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        ds = self.invariant_factors
        if any(d < 2 for d in ds):
            raise ValueError(f"invariant factors must be >= 2, got {ds}")
        if any(b % a for a, b in zip(ds, ds[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain, got {ds}")

    @classmethod
    def cyclic(cls, n: int) -> FgAbGroup:
        """Z/n for n >= 1, or Z for n = 0."""
        if n == 0:
            return cls(1)
        return cls(0, (n,) if n > 1 else ())

    @property
    def kinds(self) -> tuple[int, ...]:
        return (0,) * self.free_rank + self.invariant_factors

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each canonical generator, 0 for the free ones."""
        return self.kinds

    @property
    def torsion_rank(self) -> int:
        return len(self.invariant_factors)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        if self.free_rank:
            return None
        return reduce(lambda a, b: a * b, self.invariant_factors, 1)

    def exponent(self) -> int:
        """Least n > 0 killing the group, or 0 if it has a free part."""
        if self.free_rank:
            return 0
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def elements(self) -> Iterator[tuple[int, ...]]:
        if self.free_rank:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def element_order(self, a: Sequence[int]) -> int:
        """Order of an element, 0 if it has infinite order."""
        a = self.reduce(a)
        if any(a[: self.free_rank]):
            return 0
        out = 1
        for x, d in zip(a[self.free_rank:], self.invariant_factors):
            out = _lcm(out, d // gcd(x, d))
        return out

    def presentation(self) -> Presentation:
        n = self.ngens
        cols = [[d if i == self.free_rank + j else 0 for i in range(n)]
                for j, d in enumerate(self.invariant_factors)]
        return Presentation(n, IntMatrix.from_columns(cols, n))

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.invariant_factors)}

    @classmethod
    def from_json(cls, obj, path: str = "group") -> FgAbGroup:
        if isinstance(obj, str):
            return parse_group(obj)
        if not isinstance(obj, dict):
            raise ValueError(f"{path}: expected a group object or name")
        try:
            rank = int(obj.get("free_rank", 0))
            tors = [int(d) for d in obj.get("torsion", [])]
        except (TypeError, ValueError):
            raise ValueError(f"{path}: free_rank and torsion must be integers") from None
        # accept any list of orders, then canonicalize
        return cyclic_sum([0] * rank + tors)


def parse_group(text: str) -> FgAbGroup:
    """Parse names like 'Z', 'Z^2', 'Z/6', 'Z/2 x Z/4', 'Z + Z/3' or '0'."""
    s = text.strip()
    if s in ("0", "1", ""):
        return FgAbGroup()
    orders = []
    for part in re.split(r"\s*(?:\+|x|\*|⊕|×)\s*", s):
        m = re.fullmatch(r"Z(?:/(\d+)|\^(\d+))?", part.strip())
        if not m:
            raise ValueError(f"cannot parse group {text!r}")
        if m.group(1):
            orders.append(int(m.group(1)))
        else:
            orders += [0] * int(m.group(2) or 1)
    return cyclic_sum(orders)


@dataclass(frozen=True)
class Presentation:
    """Z^m modulo the span of the columns of the relation matrix."""

    generator_count: int
    relation_matrix: IntMatrix

    def __post_init__(self) -> None:
        if self.relation_matrix.rows != self.generator_count:
            raise ValueError("relation matrix must have one row per generator")


@dataclass(frozen=True)
class CanonicalForm:
    group: FgAbGroup
    to_canonical: IntMatrix  # canonical coords from original coords
    from_canonical: IntMatrix  # original coords of each canonical generator


def canonical_form(p: Presentation) -> CanonicalForm:
    m = p.generator_count
    rel = p.relation_matrix
    if rel.cols == 0 or m == 0:
        return CanonicalForm(FgAbGroup(m), IntMatrix.identity(m), IntMatrix.identity(m))
    d = snf_data(rel)
    diag = list(d.diag) + [0] * (m - d.rank)
    free = [i for i in range(m) if diag[i] == 0]
    tors = [i for i in range(m) if diag[i] >= 2]
    g = FgAbGroup(len(free), tuple(diag[i] for i in tors))
    keep = free + tors
    to_c = [[x % diag[i] if diag[i] else x for x in d.u.row(i)] for i in keep]
    from_c = d.u_inv.select_columns(keep)
    return CanonicalForm(g, IntMatrix.from_rows(to_c, m), from_c)


def canonicalize(p: Presentation) -> tuple[FgAbGroup, IntMatrix]:
    """Return the invariant-factor form of p and the coordinate change into it."""
    cf = canonical_form(p)
    return cf.group, cf.to_canonical


def cyclic_sum(orders: Sequence[int]) -> FgAbGroup:
    """Canonical form of a direct sum of cyclic groups (0 meaning Z)."""
    n = len(orders)
    cols = [[o if i == j else 0 for i in range(n)] for j, o in enumerate(orders) if o]
    return canonicalize(Presentation(n, IntMatrix.from_columns(cols, n)))[0]


def direct_sum(groups: Sequence[FgAbGroup]) -> FgAbGroup:
    return cyclic_sum([o for g in groups for o in g.orders])


@dataclass(frozen=True)
class AbHom:
    """A homomorphism between canonical groups given by an integer matrix.

    Column j holds the target coordinates of the j-th canonical source
    generator.  Entries are reduced modulo the target orders on construction.
    """

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self) -> None:
        mat = self.matrix
        if not isinstance(mat, IntMatrix):
            mat = IntMatrix.from_rows(mat, self.source.ngens) if mat else IntMatrix.zeros(self.target.ngens, self.source.ngens)
        if (mat.rows, mat.cols) != (self.target.ngens, self.source.ngens):
            raise ValueError(
                f"matrix is {mat.rows}x{mat.cols}, expected {self.target.ngens}x{self.source.ngens}"
                f" for a map {self.source} -> {self.target}"
            )
        tk = self.target.kinds
        for j, d in enumerate(self.source.kinds):
            if d == 0:
                continue
            for i, e in enumerate(tk):
                if (d * mat[i, j]) % e if e else d * mat[i, j]:
                    raise ValueError(
                        f"not well defined: generator {j} has order {d} but its image"
                        f" coordinate {i} is {mat[i, j]} in {self.target}"
                    )
        reduced = [[reduce_coord(x, tk[i]) for x in mat.row(i)] for i in range(mat.rows)]
        object.__setattr__(self, "matrix", IntMatrix.from_rows(reduced, mat.cols))

    @classmethod
    def identity(cls, g: FgAbGroup) -> AbHom:
        return cls(g, g, IntMatrix.identity(g.ngens))

    @classmethod
    def zero(cls, a: FgAbGroup, b: FgAbGroup) -> AbHom:
        return cls(a, b, IntMatrix.zeros(b.ngens, a.ngens))

    @classmethod
    def from_images(cls, source: FgAbGroup, target: FgAbGroup, images: Sequence[Sequence[int]]) -> AbHom:
        return cls(source, target, IntMatrix.from_columns(images, target.ngens))

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix.apply(list(vec)))

    def image_of_generator(self, j: int) -> tuple[int, ...]:
        return self.matrix.column(j)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def _check_parallel(self, other: AbHom) -> None:
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("homomorphisms have different source or target")

    def __add__(self, other: AbHom) -> AbHom:
        self._check_parallel(other)
        return AbHom(self.source, self.target, self.matrix + other.matrix)

    def __neg__(self) -> AbHom:
        return AbHom(self.source, self.target, -self.matrix)

    def __sub__(self, other: AbHom) -> AbHom:
        return self + (-other)

    def scale(self, k: int) -> AbHom:
        return AbHom(self.source, self.target, self.matrix.scale(k))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.matrix.entries]


def compose(f: AbHom, g: AbHom) -> AbHom:
    """f after g."""
    if g.target != f.source:
        raise ValueError(f"cannot compose: target {g.target} differs from source {f.source}")
    return AbHom(g.source, f.target, f.matrix @ g.matrix)


def _relations_of_target(f: AbHom) -> IntMatrix:
    b = f.target
    n = b.ngens
    cols = [[d if i == b.free_rank + j else 0 for i in range(n)]
            for j, d in enumerate(b.invariant_factors)]
    return IntMatrix.from_columns(cols, n)


@dataclass(frozen=True)
class Cokernel:
    group: FgAbGroup
    projection: AbHom
    section: tuple[tuple[int, ...], ...]  # target coordinates lifting each generator


def cokernel(f: AbHom) -> Cokernel:
    n = f.target.ngens
    rel = f.matrix.hstack(_relations_of_target(f))
    cf = canonical_form(Presentation(n, rel))
    proj = AbHom(f.target, cf.group, cf.to_canonical)
    section = tuple(f.target.reduce(c) for c in cf.from_canonical.columns())
    return Cokernel(cf.group, proj, section)


@dataclass(frozen=True)
class Kernel:
    group: FgAbGroup
    inclusion: AbHom


def kernel(f: AbHom) -> Kernel:
    a = f.source
    na = a.ngens
    if na == 0:
        return Kernel(FgAbGroup(), AbHom.zero(FgAbGroup(), a))
    big = f.matrix.hstack(_relations_of_target(f))
    ker = integer_kernel(big)
    gens = ker.select_rows(range(na))
    if gens.cols == 0:
        return Kernel(FgAbGroup(), AbHom.zero(FgAbGroup(), a))
    lat = image_basis(gens)
    # express the torsion relations of the source in the lattice basis
    rels = []
    for j, d in enumerate(a.invariant_factors):
        e = [d if i == a.free_rank + j else 0 for i in range(na)]
        x = solve(lat, e, 0)
        if x is None:
            raise ArithmeticError("torsion relation outside the kernel lattice")
        rels.append(x)
    cf = canonical_form(Presentation(lat.cols, IntMatrix.from_columns(rels, lat.cols)))
    incl = lat @ cf.from_canonical
    return Kernel(cf.group, AbHom(cf.group, a, incl))


def kernel_cokernel(f: AbHom) -> tuple[FgAbGroup, FgAbGroup, AbHom]:
    """Canonical kernel and cokernel, with the projection onto the cokernel."""
    c = cokernel(f)
    return kernel(f).group, c.group, c.projection


def _hom_cyclic(a: int, b: int) -> int:
    # order of Hom(Z/a, Z/b) with 0 meaning Z; returns 1 for the zero group
    if a == 0:
        return b
    if b == 0:
        return 1
    return gcd(a, b)


def hom_group(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    return cyclic_sum([_hom_cyclic(x, y) for x in a.orders for y in b.orders])


def ext_group(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    return cyclic_sum([gcd(d, y) if y else d for d in a.invariant_factors for y in b.orders])


# ---------------------------------------------------------------- Ext classes


def _component_moduli(d: int, b: FgAbGroup) -> tuple[int, ...]:
    # B/dB coordinatewise: free coordinates mod d, torsion mod gcd(d, b_j)
    return tuple(gcd(d, y) if y else d for y in b.orders)


@dataclass(frozen=True)
class ExtClass:
    """An element of Ext(base, coeff).

    There is one component in coeff/d*coeff per invariant factor d of base; the
    component for generator g of order d is d*(lift of g) in any extension.
    """

    base: FgAbGroup
    coeff: FgAbGroup
    components: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        comps = tuple(tuple(c) for c in self.components)
        if len(comps) != self.base.torsion_rank:
            raise ValueError(
                f"expected {self.base.torsion_rank} components for base {self.base}, got {len(comps)}"
            )
        out = []
        for d, c in zip(self.base.invariant_factors, comps):
            mods = _component_moduli(d, self.coeff)
            if len(c) != len(mods):
                raise ValueError(f"component {c} does not have {len(mods)} coordinates")
            out.append(tuple(x % m for x, m in zip(c, mods)))
        object.__setattr__(self, "components", tuple(out))

    @classmethod
    def zero(cls, base: FgAbGroup, coeff: FgAbGroup) -> ExtClass:
        return cls(base, coeff, tuple((0,) * coeff.ngens for _ in base.invariant_factors))

    @classmethod
    def all(cls, base: FgAbGroup, coeff: FgAbGroup) -> Iterator[ExtClass]:
        """Every element of Ext(base, coeff)."""
        ranges = [range(m) for d in base.invariant_factors for m in _component_moduli(d, coeff)]
        k = coeff.ngens
        for flat in itertools.product(*ranges):
            yield cls(base, coeff, tuple(flat[i * k:(i + 1) * k] for i in range(base.torsion_rank)))

    def is_zero(self) -> bool:
        return all(x == 0 for c in self.components for x in c)

    def _check(self, other: ExtClass) -> None:
        if (self.base, self.coeff) != (other.base, other.coeff):
            raise ValueError("Ext classes live over different groups")

    def __add__(self, other: ExtClass) -> ExtClass:
        self._check(other)
        return ExtClass(self.base, self.coeff, tuple(
            tuple(x + y for x, y in zip(c, e)) for c, e in zip(self.components, other.components)))

    def __neg__(self) -> ExtClass:
        return ExtClass(self.base, self.coeff, tuple(tuple(-x for x in c) for c in self.components))

    def __sub__(self, other: ExtClass) -> ExtClass:
        return self + (-other)

    def scale(self, k: int) -> ExtClass:
        return ExtClass(self.base, self.coeff, tuple(tuple(k * x for x in c) for c in self.components))

    def order(self) -> int:
        out = 1
        for d, c in zip(self.base.invariant_factors, self.components):
            for x, m in zip(c, _component_moduli(d, self.coeff)):
                out = _lcm(out, m // gcd(x, m))
        return out

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "coeff": self.coeff.to_json(),
            "components": [list(c) for c in self.components],
        }

    @classmethod
    def from_json(cls, obj: dict) -> ExtClass:
        return cls(FgAbGroup.from_json(obj["base"]), FgAbGroup.from_json(obj["coeff"]),
                   tuple(tuple(c) for c in obj["components"]))

    def __str__(self) -> str:
        if not self.components:
            return f"0 in Ext({self.base}, {self.coeff})"
        parts = [f"Z/{d}: {list(c)}" for d, c in zip(self.base.invariant_factors, self.components)]
        return f"Ext({self.base}, {self.coeff}) class [" + "; ".join(parts) + "]"


# ---------------------------------------------------------------- Z = (Q/Z)^m x D


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class QmodZVector:
    """A vector in (Q/Z)^m with every entry reduced into [0, 1)."""

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(_frac(v) % 1 for v in self.values))

    @classmethod
    def zero(cls, m: int) -> QmodZVector:
        return cls((0,) * m)

    def lift(self) -> tuple[Fraction, ...]:
        """The canonical representative in [0, 1)^m."""
        return self.values

    def __add__(self, other: QmodZVector) -> QmodZVector:
        if len(self.values) != len(other.values):
            raise ValueError("shape mismatch in Q/Z vectors")
        return QmodZVector(tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> QmodZVector:
        return QmodZVector(tuple(-a for a in self.values))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class ZShape(_TupleModule):
    """The coefficient group Z = (Q/Z)^m x D; elements are tuples (Q/Z part, D part)."""

    m: int
    D: FgAbGroup = field(default_factory=FgAbGroup)

    @property
    def kinds(self) -> tuple:
        return (QZ,) * self.m + self.D.kinds

    def element(self, z: ZElement) -> tuple:
        return tuple(z.connected_part.values) + tuple(z.discrete_part)

    def as_zelement(self, t: Sequence) -> ZElement:
        t = self.reduce(t)
        return ZElement(QmodZVector(t[: self.m]), t[self.m:], self.D)


@dataclass(frozen=True)
class Rationals(_TupleModule):
    """Q^m as a coefficient module."""

    m: int

    @property
    def kinds(self) -> tuple:
        return (QQ,) * self.m


@dataclass(frozen=True)
class ZElement:
    """An element of Z = (Q/Z)^m x D."""

    connected_part: QmodZVector
    discrete_part: tuple[int, ...] = ()
    D: FgAbGroup = field(default_factory=FgAbGroup)

    def __post_init__(self) -> None:
        if not isinstance(self.connected_part, QmodZVector):
            object.__setattr__(self, "connected_part", QmodZVector(tuple(self.connected_part)))
        object.__setattr__(self, "discrete_part", self.D.reduce(tuple(self.discrete_part)))

    @classmethod
    def zero(cls, m: int, D: FgAbGroup | None = None) -> ZElement:
        D = D or FgAbGroup()
        return cls(QmodZVector.zero(m), D.zero(), D)

    @property
    def m(self) -> int:
        return len(self.connected_part.values)

    def is_zero(self) -> bool:
        return self.connected_part.is_zero() and not any(self.discrete_part)

    def __add__(self, other: ZElement) -> ZElement:
        return z_arith(self, other, "add")

    def __neg__(self) -> ZElement:
        return z_arith(self, self, "negate")

    def scale(self, k: int) -> ZElement:
        return ZElement(
            QmodZVector(tuple(k * v for v in self.connected_part.values)),
            tuple(k * x for x in self.discrete_part),
            self.D,
        )

    def to_json(self) -> dict:
        return {
            "connected": [str(v) for v in self.connected_part.values],
            "discrete": list(self.discrete_part),
        }

    def __str__(self) -> str:
        s = str(self.connected_part)
        if self.D.ngens:
            s += f" x {list(self.discrete_part)}"
        return s


def z_arith(a: ZElement, b: ZElement, op: str) -> ZElement:
    """Add two elements of Z, or negate the first ('add' / 'negate')."""
    if op == "negate":
        return ZElement(-a.connected_part, tuple(-x for x in a.discrete_part), a.D)
    if op != "add":
        raise ValueError(f"unknown operation {op!r}")
    if a.m != b.m or a.D != b.D:
        raise ValueError("shape mismatch in Z elements")
    return ZElement(
        a.connected_part + b.connected_part,
        tuple(x + y for x, y in zip(a.discrete_part, b.discrete_part)),
        a.D,
    )


def module_from_json(obj) -> _TupleModule:
    """Coefficient module from a group object, or {"qmodz": m, "D": group}, or {"rationals": m}."""
    if isinstance(obj, dict) and "qmodz" in obj:
        return ZShape(int(obj["qmodz"]), FgAbGroup.from_json(obj.get("D", {})))
    if isinstance(obj, dict) and "rationals" in obj:
        return Rationals(int(obj["rationals"]))
    return FgAbGroup.from_json(obj)


def module_to_json(mod: _TupleModule):
    if isinstance(mod, ZShape):
        return {"qmodz": mod.m, "D": mod.D.to_json()}
    if isinstance(mod, Rationals):
        return {"rationals": mod.m}
    return mod.to_json()


def coord_to_json(x):
    return str(x) if isinstance(x, Fraction) else x


def coord_from_json(x, kind):
    return reduce_coord(_frac(x) if isinstance(x, str) else x, kind)


# ---------------------------------------------------------------- cochain complexes


def complex_cohomology(
    prev: IntMatrix | None, nxt: IntMatrix | None, dim: int, module: _TupleModule
) -> FgAbGroup:
    """Cohomology at the middle of C' --prev--> C --nxt--> C'' with coefficients.

    The maps are integer matrices acting on coordinate vectors of free
    abelian groups (dim is the rank of C); the coefficients are tensored in
    coordinatewise.  Rational and Q/Z coefficients must give a finite answer.
    """
    if nxt is not None and nxt.rows and dim:
        d = snf_data(nxt, row_transforms=False)
        diag, vinv = d.diag, d.v_inv
    else:
        diag, vinv = (), IntMatrix.identity(dim)
    r = len(diag)
    if prev is not None and prev.cols:
        moved = (vinv @ prev).select_rows(range(r, dim))
    else:
        moved = IntMatrix.zeros(dim - r, 0)
    pieces: list[FgAbGroup] = []
    for kind in module.kinds:
        if kind == 0:
            pieces.append(canonicalize(Presentation(dim - r, moved))[0])
        elif kind in (QQ, QZ):
            free_dim = (dim - r) - len(invariant_factors(moved)) if moved.cols else dim - r
            if free_dim:
                raise ValueError("cohomology has a divisible part and is not finitely generated")
            if kind == QZ:
                pieces.append(cyclic_sum(list(diag)))
        else:
            tors = [gcd(s, kind) for s in diag]
            dI = IntMatrix.diagonal([kind] * (dim - r))
            rel = moved.hstack(dI) if moved.rows else dI
            pieces.append(direct_sum([cyclic_sum(tors),
                                      canonicalize(Presentation(dim - r, rel))[0]]))
    return direct_sum(pieces)
