"""Extension classes and the characteristic data of central extensions.

The coefficient group is Z = (Q/Z)^m x D with Gamma = Z^m its fundamental
group.  The connecting map of Z^m -> Q^m -> (Q/Z)^m sends a homomorphism
phi : A -> (Q/Z)^m to the class whose component at a generator g of order d
is d times the canonical lift of phi(g).

Sign convention: the fundamental-group class attached to flat data gamma is
+connecting_delta(gamma_0).  It is fixed here once and used everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .abelian import AbHom, ExtClass, FgAbGroup, ZElement, ZShape, compose, ext_group


def baer_sum(e1: ExtClass, e2: ExtClass) -> ExtClass:
    return e1 + e2


def pushforward_ext(phi: AbHom, e: ExtClass) -> ExtClass:
    """Push an extension of A by B forward along phi : B -> B'."""
    if e.coeff != phi.source:
        raise ValueError(f"cannot push forward: coefficients {e.coeff} differ from source {phi.source}")
    return ExtClass(e.base, phi.target, tuple(phi(c) for c in e.components))


def symmetric_cocycle(e: ExtClass):
    """The carry cocycle of e on canonical coordinates of its base.

    f(u, v) adds c_i for every torsion coordinate i where u_i + v_i wraps
    around d_i (u, v taken as least residues).  Free coordinates never carry.
    """
    a, b = e.base, e.coeff
    r = a.free_rank

    def f(u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        out = [0] * b.ngens
        for i, (d, c) in enumerate(zip(a.invariant_factors, e.components)):
            if u[r + i] % d + v[r + i] % d >= d:
                out = [x + y for x, y in zip(out, c)]
        return b.reduce(out)

    return f


def pullback_ext(psi: AbHom, e: ExtClass) -> ExtClass:
    """Pull an extension of A by B back along psi : A' -> A."""
    if e.base != psi.target:
        raise ValueError(f"cannot pull back: base {e.base} differs from target {psi.target}")
    a2, b = psi.source, e.coeff
    f = symmetric_cocycle(e)
    comps = []
    for j, d in enumerate(a2.invariant_factors):
        g = [0] * a2.ngens
        g[a2.free_rank + j] = 1
        pg = psi(g)
        x = a2.zero()
        acc = b.zero()
        # d-fold sum of the lift (0, g) in the pulled-back extension
        for _ in range(d):
            acc = b.add(acc, f(psi(x), pg))
            x = a2.add(x, g)
        comps.append(acc)
    return ExtClass(a2, b, tuple(comps))


@dataclass(frozen=True)
class FlatHom:
    """A homomorphism gamma : A -> Z = (Q/Z)^m x D, one value per canonical generator."""

    source: FgAbGroup
    shape: ZShape
    values: tuple[tuple, ...]

    def __post_init__(self) -> None:
        vals = tuple(self.shape.reduce(v) for v in self.values)
        if len(vals) != self.source.ngens:
            raise ValueError(f"expected {self.source.ngens} values, got {len(vals)}")
        for j, d in enumerate(self.source.orders):
            if d and not self.shape.is_zero(self.shape.scale(d, vals[j])):
                raise ValueError(
                    f"order condition violated: generator {j} has order {d} but value {vals[j]}"
                )
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_zelements(cls, source: FgAbGroup, values: Sequence[ZElement], m: int, D: FgAbGroup | None = None) -> FlatHom:
        shape = ZShape(m, D or FgAbGroup())
        return cls(source, shape, tuple(shape.element(z) for z in values))

    @classmethod
    def zero(cls, source: FgAbGroup, m: int, D: FgAbGroup | None = None) -> FlatHom:
        shape = ZShape(m, D or FgAbGroup())
        return cls(source, shape, tuple(shape.zero() for _ in range(source.ngens)))

    @property
    def m(self) -> int:
        return self.shape.m

    def value(self, j: int) -> ZElement:
        return self.shape.as_zelement(self.values[j])

    def __call__(self, vec: Sequence[int]) -> tuple:
        out = self.shape.zero()
        for k, v in zip(vec, self.values):
            if k:
                out = self.shape.add(out, self.shape.scale(k, v))
        return out

    def precompose(self, psi: AbHom) -> FlatHom:
        """gamma after psi."""
        if psi.target != self.source:
            raise ValueError(f"cannot precompose: target {psi.target} differs from source {self.source}")
        return FlatHom(psi.source, self.shape, tuple(self(c) for c in psi.matrix.columns()))

    def __add__(self, other: FlatHom) -> FlatHom:
        if (self.source, self.shape) != (other.source, other.shape):
            raise ValueError("flat homomorphisms have different shapes")
        return FlatHom(self.source, self.shape,
                       tuple(self.shape.add(a, b) for a, b in zip(self.values, other.values)))

    def __neg__(self) -> FlatHom:
        return FlatHom(self.source, self.shape, tuple(self.shape.neg(a) for a in self.values))

    def connected(self) -> FlatHom:
        """The component in (Q/Z)^m, with D dropped."""
        shape = ZShape(self.m)
        return FlatHom(self.source, shape, tuple(v[: self.m] for v in self.values))

    def discrete(self) -> AbHom:
        """The component in D as a homomorphism A -> D."""
        return AbHom.from_images(self.source, self.shape.D, [v[self.m:] for v in self.values])

    def is_zero(self) -> bool:
        return all(self.shape.is_zero(v) for v in self.values)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "gamma_rank": self.m,
            "D": self.shape.D.to_json(),
            "values": [self.value(j).to_json() for j in range(self.source.ngens)],
        }


def connecting_delta(phi: FlatHom) -> ExtClass:
    """The connecting map Hom(A, (Q/Z)^m) -> Ext(A, Z^m)."""
    if phi.shape.D.ngens and any(any(v[phi.m:]) for v in phi.values):
        raise ValueError("connecting_delta needs a homomorphism with zero discrete part")
    a = phi.source
    gamma = FgAbGroup(phi.m)
    comps = []
    for j, d in enumerate(a.invariant_factors):
        lift = phi.values[a.free_rank + j][: phi.m]
        prod = [d * Fraction(x) for x in lift]
        if any(x.denominator != 1 for x in prod):
            raise ValueError(f"order condition violated at torsion generator {j}")
        comps.append(tuple(int(x) for x in prod))
    return ExtClass(a, gamma, tuple(comps))


def flat_hom_of_class(e: ExtClass) -> FlatHom:
    """A homomorphism A -> (Q/Z)^m whose connecting image is e.

    The value on a torsion generator of order d with component c is c/d, and
    free generators go to 0.  This realizes surjectivity of connecting_delta.
    """
    a = e.base
    if e.coeff.torsion_rank:
        raise ValueError("only coefficients Z^m have a connecting preimage")
    shape = ZShape(e.coeff.free_rank)
    vals = [shape.zero() for _ in range(a.free_rank)]
    vals += [tuple(Fraction(x, d) for x in c) for d, c in zip(a.invariant_factors, e.components)]
    return FlatHom(a, shape, tuple(vals))


@dataclass(frozen=True)
class CentralExtData:
    """Characteristic data of a central extension Z -> K^ -> K.

    d1 : pi1(K) -> D and d2 : pi2(K) -> Z^m are the connecting maps of the
    extension; fund_ext is the class of the fundamental-group extension in
    Ext(pi1(K), Z^m), which is only meaningful when d2 = 0.
    """

    pi1K: FgAbGroup
    pi2K: FgAbGroup
    D: FgAbGroup
    m: int
    d1: AbHom
    d2: AbHom
    fund_ext: ExtClass | None = None

    def __post_init__(self) -> None:
        gamma = FgAbGroup(self.m)
        if (self.d1.source, self.d1.target) != (self.pi1K, self.D):
            raise ValueError(f"d1 must map {self.pi1K} -> {self.D}")
        if (self.d2.source, self.d2.target) != (self.pi2K, gamma):
            raise ValueError(f"d2 must map {self.pi2K} -> {gamma}")
        if self.fund_ext is not None:
            if not self.d2.is_zero():
                raise ValueError(
                    "fund_ext is only defined for extensions with d2 = 0"
                    " (the flat part of the extension group)"
                )
            if (self.fund_ext.base, self.fund_ext.coeff) != (self.pi1K, gamma):
                raise ValueError(f"fund_ext must lie in Ext({self.pi1K}, {gamma})")

    @property
    def gamma(self) -> FgAbGroup:
        return FgAbGroup(self.m)

    @classmethod
    def trivial(cls, pi1K: FgAbGroup, pi2K: FgAbGroup, D: FgAbGroup, m: int) -> CentralExtData:
        g = FgAbGroup(m)
        return cls(pi1K, pi2K, D, m, AbHom.zero(pi1K, D), AbHom.zero(pi2K, g), ExtClass.zero(pi1K, g))

    def fund_class_known_zero(self) -> bool:
        """True when the fundamental-group class is certainly zero."""
        if self.fund_ext is not None:
            return self.fund_ext.is_zero()
        return self.d2.is_zero() and ext_group(self.pi1K, self.gamma).is_trivial()

    def flat_hom(self) -> FlatHom | None:
        """A flat homomorphism gamma with E*(gamma) having this data, if d2 = 0.

        The connected part realizes fund_ext through flat_hom_of_class and the
        discrete part is d1.  Returns None when the class is unknown.
        """
        if not self.d2.is_zero():
            return None
        if self.fund_ext is not None:
            conn = flat_hom_of_class(self.fund_ext)
        elif ext_group(self.pi1K, self.gamma).is_trivial():
            conn = FlatHom.zero(self.pi1K, self.m)
        else:
            return None
        shape = ZShape(self.m, self.D)
        vals = tuple(c + tuple(self.d1.image_of_generator(j)) for j, c in enumerate(conn.values))
        return FlatHom(self.pi1K, shape, vals)

    def to_json(self) -> dict:
        out = {
            "pi1K": self.pi1K.to_json(),
            "pi2K": self.pi2K.to_json(),
            "D": self.D.to_json(),
            "gamma_rank": self.m,
            "d1": self.d1.to_json(),
            "d2": self.d2.to_json(),
        }
        if self.fund_ext is not None:
            out["fund_ext"] = [list(c) for c in self.fund_ext.components]
        return out


def flat_extension_data(gamma: FlatHom, pi2K: FgAbGroup) -> CentralExtData:
    """Characteristic data of the flat extension gamma_* of the universal cover."""
    m = gamma.m
    g = FgAbGroup(m)
    return CentralExtData(
        gamma.source, pi2K, gamma.shape.D, m,
        gamma.discrete(), AbHom.zero(pi2K, g), connecting_delta(gamma.connected()),
    )


def _check_same_shape(e1: CentralExtData, e2: CentralExtData) -> None:
    if (e1.pi1K, e1.pi2K, e1.D, e1.m) != (e2.pi1K, e2.pi2K, e2.D, e2.m):
        raise ValueError("extension data have different groups")


def baer_sum_data(e1: CentralExtData, e2: CentralExtData) -> CentralExtData:
    _check_same_shape(e1, e2)
    d2 = e1.d2 + e2.d2
    fund = None
    if e1.fund_ext is not None and e2.fund_ext is not None:
        fund = e1.fund_ext + e2.fund_ext
    return CentralExtData(e1.pi1K, e1.pi2K, e1.D, e1.m, e1.d1 + e2.d1, d2, fund)


def pullback_data(phi_pi1: AbHom, phi_pi2: AbHom, e: CentralExtData) -> CentralExtData:
    """Data of the extension pulled back along a homomorphism into K."""
    if phi_pi1.target != e.pi1K or phi_pi2.target != e.pi2K:
        raise ValueError("pullback maps must land in pi1(K) and pi2(K)")
    d2 = compose(e.d2, phi_pi2)
    fund = None
    if e.fund_ext is not None and d2.is_zero():
        fund = pullback_ext(phi_pi1, e.fund_ext)
    return CentralExtData(phi_pi1.source, phi_pi2.source, e.D, e.m,
                          compose(e.d1, phi_pi1), d2, fund)
