"""Small finite groups given by multiplication tables, and central extensions.

Elements are the indices 0..n-1 of the table.  Built-in constructors cover
cyclic groups and their products, the quaternion group Q8 and the dihedral
group D8 of order 8.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Sequence

from .abelian import FgAbGroup, IntMatrix, Presentation, _TupleModule, canonical_form


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as a verified multiplication table."""

    table: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self) -> None:
        t = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", t)
        n = len(t)
        if n == 0 or any(len(r) != n for r in t):
            raise ValueError("multiplication table must be square and non-empty")
        if any(not 0 <= x < n for r in t for x in r):
            raise ValueError("table entries must be element indices")
        ident = next((e for e in range(n) if all(t[e][g] == g and t[g][e] == g for g in range(n))), None)
        if ident is None:
            raise ValueError("table has no identity element")
        inv = []
        for g in range(n):
            h = next((h for h in range(n) if t[g][h] == ident), None)
            if h is None or t[h][g] != ident:
                raise ValueError(f"element {g} has no two-sided inverse")
            inv.append(h)
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tab = t[ta[b]]
                tb = t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise ValueError(f"table is not associative at ({a}, {b}, {c})")
        object.__setattr__(self, "_identity", ident)
        object.__setattr__(self, "_inverse", tuple(inv))
        object.__setattr__(self, "_abelian", all(t[a][b] == t[b][a] for a in range(n) for b in range(a)))

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return self._identity

    @property
    def inverse(self) -> tuple[int, ...]:
        return self._inverse

    @property
    def is_abelian(self) -> bool:
        return self._abelian

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def elements(self) -> range:
        return range(self.order)

    def power(self, a: int, k: int) -> int:
        out = self.identity
        base = a if k >= 0 else self.inv(a)
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def non_identity(self) -> list[int]:
        return [g for g in range(self.order) if g != self.identity]

    def to_text(self) -> str:
        return f"order {self.order}\n" + "\n".join(" ".join(map(str, r)) for r in self.table) + "\n"

    def __str__(self) -> str:
        return self.name or f"group of order {self.order}"

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or self.order!r})"

    def __hash__(self) -> int:
        return hash(self.table)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table


def group_from_function(elements: Sequence, mul: Callable, name: str = "") -> FiniteGroup:
    idx = {x: i for i, x in enumerate(elements)}
    return FiniteGroup(tuple(tuple(idx[mul(a, b)] for b in elements) for a in elements), name)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    return FiniteGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), f"Z/{n}")


def abelian_group(orders: Sequence[int]) -> FiniteGroup:
    """Z/a x Z/b x ..., elements ordered lexicographically (first factor slowest)."""
    elems = list(itertools.product(*(range(n) for n in orders)))
    name = " x ".join(f"Z/{n}" for n in orders) or "1"
    return group_from_function(
        elems, lambda a, b: tuple((x + y) % n for x, y, n in zip(a, b, orders)), name)


def quaternion_group() -> FiniteGroup:
    """Q8 with elements 1, -1, i, -i, j, -j, k, -k in that order."""
    # unit quaternions as (sign, basis) with basis in 1, i, j, k
    mult = {
        ("1", "1"): (1, "1"), ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }

    def mul(a, b):
        (sa, x), (sb, y) = a, b
        if x == "1":
            return (sa * sb, y)
        if y == "1":
            return (sa * sb, x)
        s, z = mult[(x, y)]
        return (sa * sb * s, z)

    elems = [(1, "1"), (-1, "1"), (1, "i"), (-1, "i"), (1, "j"), (-1, "j"), (1, "k"), (-1, "k")]
    return group_from_function(elems, mul, "Q8")


def dihedral_group(n: int = 4) -> FiniteGroup:
    """Symmetries of an n-gon, order 2n; elements (flip, rotation)."""
    elems = [(f, r) for f in range(2) for r in range(n)]

    def mul(a, b):
        (f1, r1), (f2, r2) = a, b
        return ((f1 + f2) % 2, (r1 + (r2 if f1 == 0 else -r2)) % n)

    return group_from_function(elems, mul, f"D{2 * n}")


def named_group(name: str) -> FiniteGroup:
    """Built-in groups: 'Z/n', 'Z/a x Z/b', 'Q8', 'D8', '1'."""
    s = name.strip()
    if s in ("1", "trivial"):
        return cyclic_group(1)
    if s == "Q8":
        return quaternion_group()
    m = re.fullmatch(r"D(\d+)", s)
    if m and int(m.group(1)) % 2 == 0:
        return dihedral_group(int(m.group(1)) // 2)
    parts = [p.strip() for p in re.split(r"\s*(?:x|×|\*)\s*", s)]
    orders = []
    for p in parts:
        m = re.fullmatch(r"Z/(\d+)", p)
        if not m:
            raise ValueError(f"unknown group name {name!r}")
        orders.append(int(m.group(1)))
    if len(orders) == 1:
        return cyclic_group(orders[0])
    return abelian_group(orders)


def group_from_text(text: str, source: str = "<group>") -> FiniteGroup:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines or not re.fullmatch(r"order\s+\d+", lines[0][1]):
        raise ValueError(f"{source}:1: expected header 'order N'")
    n = int(lines[0][1].split()[1])
    rows = []
    for lineno, ln in lines[1:]:
        try:
            rows.append([int(x) for x in ln.split()])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: non-integer table entry") from None
        if len(rows[-1]) != n:
            raise ValueError(f"{source}:{lineno}: expected {n} entries")
    if len(rows) != n:
        raise ValueError(f"{source}: expected {n} table rows, found {len(rows)}")
    try:
        return FiniteGroup(tuple(map(tuple, rows)))
    except ValueError as exc:
        raise ValueError(f"{source}: {exc}") from None


# ---------------------------------------------------------------- homomorphisms


def generators(g: FiniteGroup) -> list[int]:
    """A small generating set, chosen greedily by element index."""
    gens: list[int] = []
    span = {g.identity}
    for x in g.elements():
        if x not in span:
            gens.append(x)
            span = _closure(g, gens)
            if len(span) == g.order:
                break
    return gens


def _closure(g: FiniteGroup, gens: Sequence[int]) -> set[int]:
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def extend_homomorphism(g: FiniteGroup, h: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> list[int] | None:
    """Extend generator images to a homomorphism G -> H, or None if impossible."""
    phi = {g.identity: h.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s, t in zip(gens, images):
                y, v = g.mul(x, s), h.mul(phi[x], t)
                if y in phi:
                    if phi[y] != v:
                        return None
                else:
                    phi[y] = v
                    nxt.append(y)
        frontier = nxt
    if len(phi) != g.order:
        return None
    out = [phi[x] for x in g.elements()]
    for a in g.elements():
        for b in g.elements():
            if out[g.mul(a, b)] != h.mul(out[a], out[b]):
                return None
    return out


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> list[int] | None:
    """An isomorphism G -> H as a list of images, or None."""
    if g.order != h.order or g.is_abelian != h.is_abelian:
        return None
    gens = generators(g)
    cands = [[y for y in h.elements() if h.element_order(y) == g.element_order(x)] for x in gens]
    for images in itertools.product(*cands):
        phi = extend_homomorphism(g, h, gens, images)
        if phi is not None and len(set(phi)) == g.order:
            return phi
    return None


@dataclass(frozen=True)
class AbelianStructure:
    """An abelian FiniteGroup identified with its invariant-factor form."""

    group: FiniteGroup
    canonical: FgAbGroup
    coords: tuple[tuple[int, ...], ...]  # canonical coordinates of each element
    generators: tuple[int, ...]  # element realizing each canonical generator

    def element(self, vec: Sequence[int]) -> int:
        out = self.group.identity
        for k, s in zip(self.canonical.reduce(vec), self.generators):
            out = self.group.mul(out, self.group.power(s, k))
        return out


def abelian_structure(g: FiniteGroup) -> AbelianStructure:
    if not g.is_abelian:
        raise ValueError(f"{g} is not abelian")
    n = g.order
    # generators e_x for every element, relations e_a + e_b - e_ab
    cols = []
    for a in range(n):
        for b in range(a, n):
            col = [0] * n
            col[a] += 1
            col[b] += 1
            col[g.mul(a, b)] -= 1
            cols.append(col)
    cf = canonical_form(Presentation(n, IntMatrix.from_columns(cols, n)))
    can = cf.group
    coords = tuple(can.reduce(cf.to_canonical.column(x)) for x in range(n))
    gens = []
    for j in range(can.ngens):
        out = g.identity
        for x, k in enumerate(cf.from_canonical.column(j)):
            out = g.mul(out, g.power(x, k))
        gens.append(out)
    st = AbelianStructure(g, can, coords, tuple(gens))
    if any(st.element(coords[x]) != x for x in range(n)):
        raise ArithmeticError("abelian decomposition failed to round-trip")
    return st


# ---------------------------------------------------------------- central extensions


@dataclass(frozen=True)
class FiniteModule(_TupleModule):
    """A finite abelian group Z/n1 x ... x Z/nk without the divisibility requirement."""

    kinds: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(k < 1 for k in self.kinds):
            raise ValueError("finite module factors must be positive")

    def elements(self):
        return itertools.product(*(range(k) for k in self.kinds))


@dataclass(frozen=True)
class FiniteCentralExt:
    """A central extension Z -> total -> quotient of finite groups with a section.

    center is a finite coefficient module; embed[i] is the total-group element
    of the i-th element of center (in center.elements() order); proj maps
    total to quotient; section maps quotient to total with section(1) = 1.
    """

    total: FiniteGroup
    center: _TupleModule
    embed: tuple[int, ...]
    quotient: FiniteGroup
    proj: tuple[int, ...]
    section: tuple[int, ...]

    def __post_init__(self) -> None:
        t, q = self.total, self.quotient
        zs = list(self.center.elements())
        if len(self.embed) != len(zs) or len(set(self.embed)) != len(zs):
            raise ValueError("center embedding must be injective")
        for i, z in enumerate(zs):
            for j, w in enumerate(zs):
                if self.embed[zs.index(self.center.add(z, w))] != t.mul(self.embed[i], self.embed[j]):
                    raise ValueError("center embedding is not a homomorphism")
        for x in self.embed:
            if any(t.mul(x, y) != t.mul(y, x) for y in t.elements()):
                raise ValueError("embedded subgroup is not central")
        if len(self.proj) != t.order:
            raise ValueError("projection must be defined on every element")
        for a in t.elements():
            for b in t.elements():
                if self.proj[t.mul(a, b)] != q.mul(self.proj[a], self.proj[b]):
                    raise ValueError("projection is not a homomorphism")
        kernel = {x for x in t.elements() if self.proj[x] == q.identity}
        if kernel != set(self.embed):
            raise ValueError("kernel of the projection differs from the embedded center")
        if len(set(self.proj)) != q.order:
            raise ValueError("projection is not surjective")
        if any(self.proj[self.section[k]] != k for k in q.elements()):
            raise ValueError("section is not a right inverse of the projection")
        if self.section[q.identity] != t.identity:
            raise ValueError("section must send 1 to 1")
        object.__setattr__(self, "_center_index", {x: z for x, z in zip(self.embed, zs)})

    def center_value(self, x: int) -> tuple:
        """The center coordinates of a total-group element lying in the center."""
        try:
            return self._center_index[x]
        except KeyError:
            raise ValueError(f"element {x} is not in the embedded center") from None

    def with_section(self, section: Sequence[int]) -> FiniteCentralExt:
        return FiniteCentralExt(self.total, self.center, self.embed, self.quotient, self.proj, tuple(section))

    def sections(self):
        """Every section with section(1) = 1."""
        q, t = self.quotient, self.total
        fibers = [[x for x in t.elements() if self.proj[x] == k] for k in q.elements()]
        fibers[q.identity] = [t.identity]
        for choice in itertools.product(*fibers):
            yield self.with_section(choice)


def central_quotient(total: FiniteGroup, center: _TupleModule, embed: Sequence[int], name: str = "") -> FiniteCentralExt:
    """The extension center -> total -> total/center with least-index section."""
    image = set(embed)
    cosets: dict[frozenset, int] = {}
    reps = []
    label = [0] * total.order
    for x in total.elements():
        c = frozenset(total.mul(x, z) for z in image)
        if c not in cosets:
            cosets[c] = len(reps)
            reps.append(min(c))
        label[x] = cosets[c]
    table = tuple(tuple(label[total.mul(reps[a], reps[b])] for b in range(len(reps))) for a in range(len(reps)))
    quotient = FiniteGroup(table, name)
    section = list(reps)
    section[quotient.identity] = total.identity
    return FiniteCentralExt(total, center, tuple(embed), quotient, tuple(label), tuple(section))


def z4_over_z2() -> FiniteCentralExt:
    """Z/2 -> Z/4 -> Z/2, center {0, 2}, least-residue section."""
    return central_quotient(cyclic_group(4), FiniteModule((2,)), (0, 2), "Z/2")


def split_z2_over_z2() -> FiniteCentralExt:
    g = abelian_group((2, 2))
    # center is the first factor: elements (0,0) and (1,0)
    return central_quotient(g, FiniteModule((2,)), (0, 2), "Z/2")


def q8_over_v4() -> FiniteCentralExt:
    """Z/2 = {1, -1} -> Q8 -> Z/2 x Z/2."""
    return central_quotient(quaternion_group(), FiniteModule((2,)), (0, 1), "Z/2 x Z/2")


def d8_over_v4() -> FiniteCentralExt:
    d = dihedral_group(4)
    # the center of D8 is {1, r^2}
    return central_quotient(d, FiniteModule((2,)), (0, 2), "Z/2 x Z/2")


def baer_sum_extension(e1: FiniteCentralExt, e2: FiniteCentralExt) -> FiniteCentralExt:
    """Fiber product over the quotient modulo the antidiagonal center."""
    if e1.quotient != e2.quotient or e1.center != e2.center:
        raise ValueError("Baer sum needs the same quotient and center")
    t1, t2, q, zmod = e1.total, e2.total, e1.quotient, e1.center
    pairs = [(a, b) for a in t1.elements() for b in t2.elements() if e1.proj[a] == e2.proj[b]]
    fiber = group_from_function(pairs, lambda x, y: (t1.mul(x[0], y[0]), t2.mul(x[1], y[1])))
    idx = {p: i for i, p in enumerate(pairs)}
    zs = list(zmod.elements())
    anti = {idx[(e1.embed[i], e2.embed[zs.index(zmod.neg(z))])] for i, z in enumerate(zs)}
    # cosets of the antidiagonal
    cosets: dict[frozenset, int] = {}
    reps = []
    label = [0] * fiber.order
    for x in fiber.elements():
        c = frozenset(fiber.mul(x, a) for a in anti)
        if c not in cosets:
            cosets[c] = len(reps)
            reps.append(min(c))
        label[x] = cosets[c]
    table = tuple(tuple(label[fiber.mul(reps[a], reps[b])] for b in range(len(reps))) for a in range(len(reps)))
    total = FiniteGroup(table)
    embed = tuple(label[idx[(e1.embed[i], t2.identity)]] for i in range(len(zs)))
    proj = [0] * total.order
    for x in fiber.elements():
        proj[label[x]] = e1.proj[pairs[x][0]]
    section = tuple(label[idx[(e1.section[k], e2.section[k])]] for k in q.elements())
    return FiniteCentralExt(total, zmod, embed, q, tuple(proj), section)
