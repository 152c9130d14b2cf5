"""Obstruction classes of lifting problems from characteristic data.

Given the data of a central extension Z -> K^ -> K (CentralExtData) and of
a K-bundle P over X (BundleData), compute the homotopy components of the
obstruction class, its Ext-level refinements where they are determined,
and a verdict.  Nothing topological is constructed; the inputs are trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Sequence

from .abelian import (
    AbHom, ExtClass, FgAbGroup, ZShape, cokernel, compose, ext_group, kernel,
)
from .cech import CechCochain, Nerve, delta1_lift, iota_lift, is_coboundary, nonabelian_cocycle_defect
from .extensions import CentralExtData, FlatHom, connecting_delta
from .groups import FiniteGroup, FiniteModule
from .grpcoh import (
    GroupCochain, commutator_form, delta2_connecting, ext_of_symmetric_class,
    extension_of_cocycle, is_group_coboundary, normalize_cocycle, pushforward_coeff,
)


@dataclass(frozen=True)
class SignEntry:
    name: str
    sign: int
    formula: str


# Every sign used by the engine, in one place.
SIGN_LEDGER: tuple[SignEntry, ...] = (
    SignEntry("pi3_component", +1, "alpha_3(obs) = d2 o d3P"),
    SignEntry("pi2_component", -1, "alpha_2(obs) = -(d1 o d2P)"),
    SignEntry("sphere_class_s2", -1, "S_2(obs) = -d1(h)"),
    SignEntry("chern_class_s2", -1, "S_2(obs of universal cover lift) = -h"),
    SignEntry("degree_zero_component", -1, "d2 o pi2(f) = -alpha_2(iota_1(delta_0 f))"),
    SignEntry("flat_obstruction_1conn", -1, "flat_ext = -connecting_delta(gamma_0 o d2P)"),
    SignEntry("flat_obstruction_general", -1, "pushed = -(gamma_bar)_* [pi1 P]"),
    SignEntry("cover_lift", -1, "obs_P(K+) = -obs_cover([pi1 P])"),
    SignEntry("universal_bundle", -1, "obs of the universal bundle = -connecting_delta(gamma)"),
    SignEntry("connecting_delta", +1, "[pi1 of gamma_* K~] = +connecting_delta(gamma_0)"),
    SignEntry("commutator_form", +1, "w(a ^ b) = f(a, b) - f(b, a)"),
)


def sign_of(name: str) -> int:
    for e in SIGN_LEDGER:
        if e.name == name:
            return e.sign
    raise KeyError(name)


def sign_ledger_text() -> str:
    width = max(len(e.name) for e in SIGN_LEDGER)
    return "\n".join(f"{e.name:<{width}}  {'+' if e.sign > 0 else '-'}  {e.formula}" for e in SIGN_LEDGER) + "\n"


class Verdict(str, Enum):
    LIFTS_FOR_ALL_P = "LiftsForAllP"
    NONZERO_ON_PI3 = "NonzeroOnPi3"
    NONZERO_ON_PI2 = "NonzeroOnPi2"
    ASPHERICAL_NONZERO = "AsphericalNonzero"
    ASPHERICAL_UNDETERMINED = "AsphericalUndetermined"
    ZERO = "Zero"


class PreconditionError(ValueError):
    """An operation was called outside the hypotheses of its formula."""


class InvariantBreach(RuntimeError):
    """Two independent routes to the same class disagreed."""


# ---------------------------------------------------------------- bundle data


@dataclass(frozen=True)
class Covering:
    """A finite model of the universal covering: a pi1(X)-valued 1-cocycle on a nerve of X."""

    nerve: Nerve
    cocycle: CechCochain


@dataclass(frozen=True)
class BundleData:
    """Homotopy data of a K-bundle P over X.

    Without pi1X the base is treated as 1-connected, and then h2 must be an
    isomorphism.  pi1P_class is a 2-cocycle over pi1X with values in
    coker(d2P), describing pi1(P) as a central extension of pi1(X).
    """

    pi2X: FgAbGroup
    pi3X: FgAbGroup
    H2X: FgAbGroup
    H3X: FgAbGroup
    h2: AbHom
    d2P: AbHom
    d3P: AbHom
    pi1X: FiniteGroup | None = None
    covering: Covering | None = None
    pi1P_class: GroupCochain | None = None

    def __post_init__(self) -> None:
        if (self.h2.source, self.h2.target) != (self.pi2X, self.H2X):
            raise ValueError(f"h2 must map {self.pi2X} -> {self.H2X}")
        if self.d2P.source != self.pi2X:
            raise ValueError(f"d2P must have source pi2(X) = {self.pi2X}")
        if self.d3P.source != self.pi3X:
            raise ValueError(f"d3P must have source pi3(X) = {self.pi3X}")
        if self.simply_connected and not is_isomorphism(self.h2):
            raise ValueError("h2 must be an isomorphism on a 1-connected base")
        if self.pi1P_class is not None:
            if self.pi1X is None:
                raise ValueError("pi1P_class needs pi1X")
            c = self.pi1P_class
            if c.group != self.pi1X or c.degree != 2:
                raise ValueError("pi1P_class must be a 2-cochain over pi1X")
            coker = cokernel(self.d2P).group
            if c.module != coker:
                raise ValueError(f"pi1P_class must take values in coker(d2P) = {coker}, got {c.module}")
            if not c.is_cocycle():
                raise ValueError("pi1P_class is not a cocycle")
        if self.covering is not None:
            if self.pi1X is None:
                raise ValueError("a covering cocycle needs pi1X")
            g = self.covering.cocycle
            if g.nerve != self.covering.nerve or g.degree != 1 or g.coeff != self.pi1X:
                raise ValueError("covering cocycle must be a pi1X-valued 1-cochain on the nerve")
            if g.nerve.dimension < 2:
                raise ValueError("covering nerve must have triangles")
            bad = nonabelian_cocycle_defect(g)
            if bad is not None:
                raise ValueError(f"covering cocycle fails the cocycle condition on {bad}")

    @property
    def simply_connected(self) -> bool:
        return self.pi1X is None or self.pi1X.order == 1

    @classmethod
    def one_connected(cls, pi2X: FgAbGroup, pi3X: FgAbGroup, d2P: AbHom, d3P: AbHom,
                      H3X: FgAbGroup | None = None) -> BundleData:
        """A 1-connected base with H2 = pi2 via the identity."""
        h3 = H3X if H3X is not None else pi3X
        return cls(pi2X, pi3X, pi2X, h3, AbHom.identity(pi2X), d2P, d3P)

    def precomposed(self, phi2: AbHom, phi3: AbHom) -> BundleData:
        """Bundle data pulled back along a map inducing phi2, phi3 on pi2, pi3 (1-connected model)."""
        if self.pi1X is not None:
            raise PreconditionError("precomposition is modelled for 1-connected bases only")
        return BundleData.one_connected(phi2.source, phi3.source, compose(self.d2P, phi2), compose(self.d3P, phi3))


def is_isomorphism(f: AbHom) -> bool:
    return kernel(f).group.is_trivial() and cokernel(f).group.is_trivial()


def check_shapes(ext: CentralExtData, b: BundleData) -> None:
    if b.d2P.target != ext.pi1K:
        raise ValueError(f"d2P lands in {b.d2P.target} but pi1(K) is {ext.pi1K}")
    if b.d3P.target != ext.pi2K:
        raise ValueError(f"d3P lands in {b.d3P.target} but pi2(K) is {ext.pi2K}")


# ---------------------------------------------------------------- homotopy components


def pi3_component(ext: CentralExtData, b: BundleData) -> AbHom:
    check_shapes(ext, b)
    return compose(ext.d2, b.d3P).scale(sign_of("pi3_component"))


def pi2_component(ext: CentralExtData, b: BundleData) -> AbHom:
    check_shapes(ext, b)
    return compose(ext.d1, b.d2P).scale(sign_of("pi2_component"))


def sphere_class_s2(ext: CentralExtData, h: Sequence[int]) -> tuple[int, ...]:
    """Evaluation on S^2 of the obstruction for the bundle with clutching class h."""
    return ext.D.scale(sign_of("sphere_class_s2"), ext.d1(h))


def chern_class_s2(h: Sequence[int]) -> tuple[int, ...]:
    return tuple(sign_of("chern_class_s2") * x for x in h)


def degree_zero_component(ext: CentralExtData, pi2f: AbHom) -> AbHom:
    """d2 o pi2(f); the class alpha_2(iota_1(delta_0 f)) is its negative."""
    if pi2f.target != ext.pi2K:
        raise ValueError(f"pi2(f) must land in pi2(K) = {ext.pi2K}")
    return compose(ext.d2, pi2f)


def alpha2_of_degree_zero(ext: CentralExtData, pi2f: AbHom) -> AbHom:
    return degree_zero_component(ext, pi2f).scale(sign_of("degree_zero_component"))


# ---------------------------------------------------------------- flat extensions


def flat_obstruction_1conn(gamma: FlatHom, b: BundleData) -> ExtClass:
    """Ext(pi2 X, Z^m) class of the flat extension gamma_* K~ over a 1-connected base."""
    if not b.simply_connected:
        raise PreconditionError("flat_obstruction_1conn needs a 1-connected base")
    if gamma.source != b.d2P.target:
        raise ValueError(f"gamma is defined on {gamma.source}, d2P lands in {b.d2P.target}")
    composite = gamma.connected().precompose(b.d2P)
    return connecting_delta(composite).scale(sign_of("flat_obstruction_1conn"))


def universal_bundle_class(gamma: FlatHom) -> ExtClass:
    """The class over pi2(BK) = pi1(K) for the universal bundle, where d2P is the identity."""
    return connecting_delta(gamma.connected()).scale(sign_of("universal_bundle"))


@dataclass(frozen=True)
class FlatGeneral:
    pushed: GroupCochain
    gamma_bar: FlatHom
    ext_view: ExtClass | None
    discrete_ext_view: ExtClass | None
    cech_view: CechCochain | None


def factor_through_coker(gamma: FlatHom, d2P: AbHom) -> FlatHom:
    """gamma_bar on coker(d2P) with gamma = gamma_bar o projection."""
    if not gamma.precompose(d2P).is_zero():
        raise PreconditionError("gamma o d2P is nonzero, so the class is not aspherical")
    ck = cokernel(d2P)
    return FlatHom(ck.group, gamma.shape, tuple(gamma(s) for s in ck.section))


def split_parts(c: GroupCochain, shape: ZShape) -> tuple[GroupCochain, GroupCochain]:
    """Connected ((Q/Z)^m) and discrete (D) parts of a Z-valued group cochain."""
    m = shape.m
    conn = GroupCochain(c.group, c.degree, ZShape(m), tuple(v[:m] for v in c.values))
    disc = GroupCochain(c.group, c.degree, shape.D, tuple(v[m:] for v in c.values))
    return conn, disc


def flat_obstruction_general(gamma: FlatHom, b: BundleData) -> FlatGeneral:
    """The aspherical class -gamma_bar_*[pi1 P] with its Ext and Čech views."""
    if b.pi1P_class is None:
        raise PreconditionError("flat_obstruction_general needs pi1P_class")
    if gamma.source != b.d2P.target:
        raise ValueError(f"gamma is defined on {gamma.source}, d2P lands in {b.d2P.target}")
    gbar = factor_through_coker(gamma, b.d2P)
    shape = gamma.shape
    sign = sign_of("flat_obstruction_general")
    pushed = pushforward_coeff(lambda v: shape.scale(sign, gbar(v)), b.pi1P_class, shape)
    conn, disc = split_parts(pushed, shape)
    ext_view = disc_view = None
    if b.pi1X.is_abelian:
        if shape.m:
            sd, vals = commutator_form(conn)
            ext_view = connecting_delta(FlatHom(sd.h2, ZShape(shape.m), tuple(vals)))
        if shape.D.ngens and disc.is_symmetric():
            disc_view = ext_of_symmetric_class(disc)
    cech = None
    if b.covering is not None:
        cech = obs_cover_z(b.covering.cocycle, pushed)
    return FlatGeneral(pushed, gbar, ext_view, disc_view, cech)


# ---------------------------------------------------------------- covering realization


def obs_cover(g: CechCochain, f: GroupCochain) -> CechCochain:
    """Čech 2-cocycle of the extension defined by f, transported along the covering cocycle g."""
    if g.coeff != f.group:
        raise ValueError("covering cocycle and group cocycle use different groups")
    if f.degree != 2:
        raise ValueError("obs_cover needs a group 2-cocycle")
    if not f.is_cocycle():
        raise ValueError("f is not a cocycle")
    base, _ = normalize_cocycle(f)
    ext = extension_of_cocycle(base)
    out = delta1_lift(g, ext)
    return CechCochain(out.nerve, 2, f.module, out.values)


def _finite_model(shape: ZShape, values: Sequence[tuple]) -> tuple[FiniteModule, list[int]]:
    """A finite module containing all values: Z/N_k for each Q/Z coordinate, D as is."""
    ns = []
    for k in range(shape.m):
        n = 1
        for v in values:
            n = lcm(n, Fraction(v[k]).denominator)
        ns.append(n)
    if any(d == 0 for d in shape.D.kinds):
        raise ValueError("Čech realization needs a finite discrete part")
    return FiniteModule(tuple(ns) + shape.D.kinds), ns


def obs_cover_z(g: CechCochain, f: GroupCochain) -> CechCochain:
    """obs_cover for (Q/Z)^m x D coefficients through a finite subgroup containing the values."""
    shape = f.module
    if not isinstance(shape, ZShape):
        return obs_cover(g, f)
    fin, ns = _finite_model(shape, f.values)
    m = shape.m

    def down(v):
        return tuple(int(v[k] * ns[k]) for k in range(m)) + tuple(v[m:])

    def up(v):
        return tuple(Fraction(v[k], ns[k]) for k in range(m)) + tuple(v[m:])

    ff = GroupCochain(f.group, 2, fin, tuple(down(v) for v in f.values))
    out = obs_cover(g, ff)
    return CechCochain(out.nerve, 2, shape, tuple(up(v) for v in out.values))


def cech_parts_vanish(c: CechCochain) -> tuple[bool, bool]:
    """Whether the Γ-part (via iota) and the D-part of a Z-valued Čech 2-cocycle are coboundaries."""
    shape = c.coeff
    m = shape.m
    conn = c.map_values(lambda v: v[:m], ZShape(m))
    disc = c.map_values(lambda v: v[m:], shape.D)
    gamma_zero = True
    if m:
        gamma_zero = is_coboundary(iota_lift(conn)) is not None
    disc_zero = True
    if shape.D.ngens:
        disc_zero = is_coboundary(disc) is not None
    return gamma_zero, disc_zero


def zeta_lift_verdict(pi1P_class: GroupCochain) -> bool:
    """True iff the class of pi1(P) vanishes, i.e. P lifts to a bundle for the universal cover."""
    return is_group_coboundary(pi1P_class) is not None


def lambda3_group(b: BundleData, m: int) -> FgAbGroup:
    if not b.simply_connected:
        raise PreconditionError("lambda3_group needs a 1-connected base")
    return ext_group(b.H2X, FgAbGroup(m))


# ---------------------------------------------------------------- report


ZERO, NONZERO, UNKNOWN = "zero", "nonzero", "unknown"


@dataclass(frozen=True)
class ObstructionReport:
    pi2_hom: AbHom
    pi3_hom: AbHom
    verdict: Verdict
    gamma_part: str = UNKNOWN
    discrete_part: str = UNKNOWN
    flat_ext: ExtClass | None = None
    group_ext_view: ExtClass | None = None
    discrete_ext_view: ExtClass | None = None
    cech_class: CechCochain | None = None
    provenance: tuple[str, ...] = field(default_factory=tuple)


def torsion_flag(report: ObstructionReport, b: BundleData) -> bool:
    """Check that the flat Ext component is a torsion element of the Ext group."""
    if not b.simply_connected:
        raise PreconditionError("torsion_flag needs a 1-connected base")
    if report.flat_ext is None:
        raise PreconditionError("torsion_flag needs a computed flat_ext (d2 = 0)")
    e = report.flat_ext
    tors = [d for d in e.base.invariant_factors]
    expo = lcm(*tors) if tors else 1
    return e.scale(expo).is_zero() and expo % e.order() == 0


def _discrete_flat(ext: CentralExtData) -> FlatHom:
    """d1 viewed as a flat homomorphism with no connected part."""
    return FlatHom(ext.pi1K, ZShape(0, ext.D),
                   tuple(ext.d1.image_of_generator(j) for j in range(ext.pi1K.ngens)))


def compute_report(ext: CentralExtData, b: BundleData) -> ObstructionReport:
    check_shapes(ext, b)
    prov = ["pi3_hom = d2 o d3P", "pi2_hom = -(d1 o d2P)"]
    pi3 = pi3_component(ext, b)
    pi2 = pi2_component(ext, b)
    gamma = ext.flat_hom()  # None unless d2 = 0 and the fundamental class is known
    flat_ext = group_view = disc_view = cech = None

    # discrete part in H^2(X, D)
    if ext.D.is_trivial() or ext.d1.is_zero():
        disc_state = ZERO
    elif not pi2.is_zero():
        disc_state = NONZERO
    elif b.simply_connected:
        disc_state = ZERO
        prov.append("discrete part: H^2(X, D) = Hom(pi2 X, D) on a 1-connected base")
    elif b.pi1P_class is not None:
        res = flat_obstruction_general(_discrete_flat(ext), b)
        _, disc = split_parts(res.pushed, res.pushed.module)
        disc_state = ZERO if is_group_coboundary(disc) is not None else NONZERO
        disc_view = res.discrete_ext_view
        prov.append("discrete part: -(d1_bar)_*[pi1 P], detected injectively on the covering")
    else:
        disc_state = UNKNOWN

    # Γ part: the aspherical Ext component in H^3(X, Γ)
    if ext.m == 0:
        gamma_state = ZERO
    elif ext.d2.is_zero() and ext.fund_class_known_zero():
        gamma_state = ZERO
        prov.append("Γ part vanishes: d2 = 0 and the fundamental-group class is zero")
        if b.simply_connected and gamma is not None:
            # still report the (zero) class so that reports stay additive
            flat_ext = flat_obstruction_1conn(gamma, b)
    elif b.simply_connected:
        if gamma is not None:
            flat_ext = flat_obstruction_1conn(gamma, b)
            gamma_state = ZERO if flat_ext.is_zero() else NONZERO
            prov.append("flat_ext = -connecting_delta(gamma_0 o d2P)")
        elif lambda3_group(b, ext.m).is_trivial():
            gamma_state = ZERO
            prov.append("Γ part vanishes: Ext(H2 X, Γ) = 0")
        else:
            gamma_state = UNKNOWN
    elif gamma is not None and b.pi1P_class is not None and gamma.connected().precompose(b.d2P).is_zero():
        res = flat_obstruction_general(gamma.connected(), b)
        conn = res.pushed
        group_view = res.ext_view
        prov.append("pushed = -(gamma_bar)_*[pi1 P]")
        if is_group_coboundary(delta2_connecting(conn)) is not None:
            gamma_state = ZERO
        elif b.pi2X.is_trivial():
            gamma_state = NONZERO
        else:
            gamma_state = UNKNOWN
    else:
        gamma_state = UNKNOWN

    # the Čech realization decides both parts on the model nerve
    if b.covering is not None and b.pi1P_class is not None:
        candidates = ([gamma] if gamma is not None else []) + [_discrete_flat(ext)]
        for cand in candidates:
            try:
                cech = flat_obstruction_general(cand, b).cech_view
            except PreconditionError:
                continue
            decided = [("discrete", ZERO if cech_parts_vanish(cech)[1] else NONZERO)]
            if cand.m:
                decided.append(("Γ", ZERO if cech_parts_vanish(cech)[0] else NONZERO))
            prov.append("cech_class = obs_cover(covering, pushed)")
            for name, new in decided:
                old = gamma_state if name == "Γ" else disc_state
                if old != UNKNOWN and old != new:
                    raise InvariantBreach(f"{name} part: group route says {old}, Čech route says {new}")
                if name == "Γ":
                    gamma_state = new
                else:
                    disc_state = new
            break

    lifts = ext.d2.is_zero() and ext.fund_class_known_zero() and ext.d1.is_zero()
    if not pi3.is_zero():
        verdict = Verdict.NONZERO_ON_PI3
    elif not pi2.is_zero():
        verdict = Verdict.NONZERO_ON_PI2
    elif lifts:
        verdict = Verdict.LIFTS_FOR_ALL_P
        prov.append("lifts for every bundle: d2 = 0, fundamental-group class = 0, no discrete part")
    elif NONZERO in (gamma_state, disc_state):
        verdict = Verdict.ASPHERICAL_NONZERO
    elif gamma_state == ZERO and disc_state == ZERO:
        verdict = Verdict.ZERO
    else:
        verdict = Verdict.ASPHERICAL_UNDETERMINED
    return ObstructionReport(pi2, pi3, verdict, gamma_state, disc_state, flat_ext,
                             group_view, disc_view, cech, tuple(prov))


def vanishing_verdict(ext: CentralExtData, b: BundleData) -> Verdict:
    return compute_report(ext, b).verdict
