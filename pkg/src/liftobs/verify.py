"""Exhaustive verification suites behind `liftobs verify`.

Every suite is a list of independent cases.  A case returns the number of
objects it checked and a list of counterexamples rendered as text; cases may
run in a process pool and are merged in case order, so output is
deterministic regardless of the worker count.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .abelian import AbHom, FgAbGroup, ZShape, cokernel, parse_group
from .cech import (
    CechCochain, all_cochains, coboundary, cohomologous, delta1_lift, gauge, group_cocycles,
    iota_lift, is_coboundary, is_cocycle, pullback_cochain, rp2_nerve, s_tilde, simplicial_maps,
    sphere_nerve, suspend,
)
from .extensions import FlatHom
from .groups import (
    abelian_group, abelian_structure, baer_sum_extension, cyclic_group, d8_over_v4, q8_over_v4,
    split_z2_over_z2, z4_over_z2,
)
from .grpcoh import (
    GroupCochain, cocycle_of_extension, cohomology_group, delta2_connecting, is_group_coboundary,
)
from .obstruction import BundleData, flat_obstruction_1conn, flat_obstruction_general, obs_cover

MAX_DUMP = 5


@dataclass
class CaseResult:
    label: str
    checked: int = 0
    counterexamples: list[str] = field(default_factory=list)

    def fail(self, text: str) -> None:
        if len(self.counterexamples) < MAX_DUMP:
            self.counterexamples.append(text)
        else:
            self.counterexamples.append("")  # counted, not dumped


@dataclass
class SuiteResult:
    suite: str
    cases: list[CaseResult]

    @property
    def passed(self) -> bool:
        return not any(c.counterexamples for c in self.cases)

    @property
    def checked(self) -> int:
        return sum(c.checked for c in self.cases)

    def summary(self) -> str:
        lines = []
        for c in self.cases:
            bad = len(c.counterexamples)
            lines.append(f"  {c.label}: {c.checked} checked, {bad} counterexample{'s' if bad != 1 else ''}")
            for text in c.counterexamples[:MAX_DUMP]:
                if text:
                    lines.append("    counterexample:")
                    lines.extend("      " + ln for ln in text.rstrip("\n").splitlines())
        status = "PASS" if self.passed else "FAIL"
        return f"{self.suite}: {status} ({self.checked} checked)\n" + "\n".join(lines) + "\n"


# ---------------------------------------------------------------- cases


def case_lemma41(n: int, k: int, fault: bool = False) -> CaseResult:
    """Top cochains on the n-sphere nerve: s_tilde(c) = 0 exactly when c is a coboundary."""
    res = CaseResult(f"n={n} Z/{k}")
    nerve = sphere_nerve(n)
    mod = FgAbGroup.cyclic(k)
    image = {coboundary(b).values for b in all_cochains(nerve, n - 1, mod)}
    for c in all_cochains(nerve, n, mod):
        res.checked += 1
        in_kernel = mod.is_zero(s_tilde(c, flip_first=fault))
        if in_kernel != (c.values in image):
            res.fail(c.to_text())
    return res


def case_triangle(n: int, k: int, fault: bool = False, samples: int = 200, seed: int = 0) -> CaseResult:
    """s_tilde after suspension equals s_tilde, exhaustively for Z/k and on samples for Z (k = 0)."""
    res = CaseResult(f"n={n} {'Z' if k == 0 else f'Z/{k}'}")
    nerve = sphere_nerve(n)
    mod = FgAbGroup.cyclic(k)
    if k:
        cochains = all_cochains(nerve, n, mod)
    else:
        rng = random.Random(seed)
        size = len(nerve.simplices(n))
        cochains = (CechCochain(nerve, n, mod, tuple((rng.randint(-9, 9),) for _ in range(size)))
                    for _ in range(samples))
    for c in cochains:
        res.checked += 1
        if s_tilde(suspend(c)) != s_tilde(c, flip_first=fault):
            res.fail(c.to_text())
    return res


QUARTERS = tuple(sorted({Fraction(p, q) for q in range(1, 5) for p in range(q)}))


def case_square(n: int, degree: int) -> CaseResult:
    """suspend o iota_lift and iota_lift o suspend agree up to coboundary."""
    res = CaseResult(f"n={n} degree {degree}")
    nerve = sphere_nerve(n)
    shape = ZShape(1)
    size = len(nerve.simplices(degree))
    for vals in itertools.product(QUARTERS, repeat=size):
        c = CechCochain(nerve, degree, shape, tuple((v,) for v in vals))
        if not is_cocycle(c):
            continue
        res.checked += 1
        if not cohomologous(suspend(iota_lift(c)), iota_lift(suspend(c))):
            res.fail(c.to_text())
    return res


CORPUS_NERVES = {
    "S1": lambda: sphere_nerve(1),
    "S2": lambda: sphere_nerve(2),
    "S3": lambda: sphere_nerve(3),
    "RP2": rp2_nerve,
}

EXTENSIONS = {
    "Z/4->Z/2": z4_over_z2,
    "Q8->V4": q8_over_v4,
}

# pairs of extensions with the same quotient and center, for additivity
BAER_FAMILIES = {
    "Z/4->Z/2": (split_z2_over_z2, z4_over_z2),
    "Q8->V4": (q8_over_v4, d8_over_v4),
}


def case_delta1(nerve_name: str, ext_name: str) -> CaseResult:
    """delta1_lift is independent of choices (sections, gauge) and additive under Baer sum."""
    res = CaseResult(f"{nerve_name} {ext_name}")
    nerve = CORPUS_NERVES[nerve_name]()
    ext = EXTENSIONS[ext_name]()
    sections = list(ext.sections())
    family = [f() for f in BAER_FAMILIES[ext_name]]
    sums = {(i, j): baer_sum_extension(family[i], family[j])
            for i in range(len(family)) for j in range(len(family))}
    grp = ext.quotient
    for g in group_cocycles(nerve, grp):
        base = delta1_lift(g, ext)
        for s in sections:
            res.checked += 1
            if not cohomologous(delta1_lift(g, s), base):
                res.fail(f"# section {s.section}\n" + g.to_text())
        # gauge by a single vertex moved to every group element
        for v in range(nerve.vertex_count):
            for x in grp.elements():
                h = [grp.identity] * nerve.vertex_count
                h[v] = x
                res.checked += 1
                if not cohomologous(delta1_lift(gauge(g, h), ext), base):
                    res.fail(f"# gauge at vertex {v} by {x}\n" + g.to_text())
        outs = [delta1_lift(g, e) for e in family]
        for (i, j), e in sums.items():
            res.checked += 1
            if not cohomologous(delta1_lift(g, e), outs[i] + outs[j]):
                res.fail(f"# Baer sum of family members {i}, {j}\n" + g.to_text())
    return res


def h2_cyclic_oracle(n: int, m: int) -> int:
    """|H^2(Z/n, Z/m)| by enumerating normalized cocycles and coboundaries.

    A normalized cocycle on Z/n is determined by its row f(1, .) through
    f(b + 1, c) = f(b, c) + f(1, b + c) - f(1, b); every candidate row is
    expanded and checked against the full cocycle identity.
    """
    cocycles = 0
    for row in itertools.product(range(m), repeat=n - 1):
        f = _expand_row(n, (0,) + row, m)
        if f is not None and _is_cocycle_table(f, n, m):
            cocycles += 1
    cobs = set()
    for beta in itertools.product(range(m), repeat=n - 1):
        b = (0,) + beta
        cobs.add(tuple((b[y] - b[(x + y) % n] + b[x]) % m for x in range(n) for y in range(n)))
    return cocycles // len(cobs)


def _expand_row(n: int, row: tuple, m: int | None):
    f = [[0] * n for _ in range(n)]
    f[1 % n] = list(row) if n > 1 else [0]
    for b in range(1, n - 1):
        for c in range(n):
            v = f[b][c] + f[1][(b + c) % n] - f[1][b]
            f[b + 1][c] = v % m if m else v
    return f


def _is_cocycle_table(f, n: int, m: int | None) -> bool:
    if any(f[0][c] for c in range(n)) or any(f[a][0] for a in range(n)):
        return False
    for a in range(n):
        for b in range(n):
            for c in range(n):
                v = f[b][c] - f[(a + b) % n][c] + f[a][(b + c) % n] - f[a][b]
                if (v % m if m else v):
                    return False
    return True


def integral_coboundary_witness(f, n: int):
    """beta with d(beta) = f over Z, for a normalized table on Z/n, or None.

    d(beta)(a, b) = beta(b) - beta(a + b) + beta(a) forces
    beta(b + 1) = beta(b) + beta(1) - f(1, b), and going once around gives
    n * beta(1) = sum_b f(1, b).
    """
    total = sum(f[1 % n][b] for b in range(n)) if n > 1 else 0
    if total % n:
        return None
    beta = [0] * n
    if n > 1:
        beta[1] = total // n
        for b in range(1, n - 1):
            beta[b + 1] = beta[b] + beta[1] - f[1][b]
    for a in range(n):
        for b in range(n):
            if beta[b] - beta[(a + b) % n] + beta[a] != f[a][b]:
                return None
    return beta


def h2_cyclic_integral_oracle(n: int) -> tuple[int, int]:
    """(number of classes met in a box of rows, order of the carry cocycle) for H^2(Z/n, Z)."""
    tables = []
    for row in itertools.product(range(n), repeat=n - 1):
        f = _expand_row(n, (0,) + row, None)
        if _is_cocycle_table(f, n, None):
            tables.append(f)
    reps: list = []
    for f in tables:
        if not any(integral_coboundary_witness(_diff(f, r, n), n) is not None for r in reps):
            reps.append(f)
    carry = [[1 if a + b >= n else 0 for b in range(n)] for a in range(n)]
    order = next(k for k in range(1, n + 1)
                 if integral_coboundary_witness([[k * x for x in r] for r in carry], n) is not None)
    return len(reps), order


def _diff(f, g, n):
    return [[f[a][b] - g[a][b] for b in range(n)] for a in range(n)]


def case_grpcoh(n: int, m: int) -> CaseResult:
    res = CaseResult(f"H^2(Z/{n}, {'Z' if m == 0 else f'Z/{m}'})")
    computed = cohomology_group(cyclic_group(n), FgAbGroup.cyclic(m), 2)
    res.checked += 1
    if m:
        want = gcd(n, m)
        oracle = h2_cyclic_oracle(n, m)
        if not (computed.order() == want == oracle):
            res.fail(f"computed {computed}, oracle order {oracle}, expected order {want}")
    else:
        classes, order = h2_cyclic_integral_oracle(n)
        if not (computed == FgAbGroup.cyclic(n) and classes == n and order == n):
            res.fail(f"computed {computed}, oracle found {classes} classes, carry order {order}")
    return res


def transfer_bundle(a: int, pi1K: FgAbGroup, c: tuple[int, ...]) -> BundleData:
    """A base with pi1 = (Z/a)^2, pi2 = 0 and pi1(P) the Heisenberg-type class c * x1 * y2.

    Its commutator form sends the canonical generator of H_2((Z/a)^2) = Z/a
    to c, so it stands in for a 1-connected base with pi2 = Z/a and d2P(1) = c.
    """
    grp = abelian_group((a, a))
    st = abelian_structure(grp)
    coker = cokernel(AbHom.zero(FgAbGroup(), pi1K)).group
    coords = st.coords

    def f(x, y):
        k = coords[x][0] * coords[y][1] if len(coords[x]) == 2 else 0
        return tuple(k * v for v in c)

    cls = GroupCochain.from_function(grp, 2, coker, f)
    zero = FgAbGroup()
    return BundleData(zero, zero, zero, zero, AbHom.zero(zero, zero), AbHom.zero(zero, pi1K),
                      AbHom.zero(zero, FgAbGroup()), pi1X=grp, pi1P_class=cls)


def flat_homs(pi1K: FgAbGroup, m: int, denominators: int = 6):
    """Every gamma : pi1K -> (Q/Z)^m (free generators: values with denominator up to the bound)."""
    k = pi1K.orders[0] if pi1K.ngens else 1
    d = k if k else denominators
    shape = ZShape(m)
    for vals in itertools.product(range(d), repeat=m * pi1K.ngens):
        yield FlatHom(pi1K, shape, tuple(tuple(Fraction(v, d) for v in vals[j * m:(j + 1) * m])
                                         for j in range(pi1K.ngens)))


def case_flat(a: int, k: int, m_max: int = 2) -> CaseResult:
    """The 1-connected flat formula against the commutator-form route through pi1(P)."""
    res = CaseResult(f"pi2X=Z/{a} pi1K={'Z' if k == 0 else f'Z/{k}'}")
    pi1K = FgAbGroup.cyclic(k)
    pi2X = FgAbGroup.cyclic(a)
    trivial = FgAbGroup()
    for img in (range(k) if k else [0]):
        if (pi1K.ngens == 0 and img) or (k and (a * img) % k):
            continue
        d2P = AbHom.from_images(pi2X, pi1K, [[img] if pi1K.ngens else []] * pi2X.ngens)
        b1 = BundleData.one_connected(pi2X, trivial, d2P, AbHom.zero(trivial, FgAbGroup()))
        c = d2P.image_of_generator(0) if pi2X.ngens else tuple(0 for _ in range(pi1K.ngens))
        bt = transfer_bundle(a, pi1K, c)
        for m in range(1, m_max + 1):
            for gamma in flat_homs(pi1K, m):
                route_a = flat_obstruction_1conn(gamma, b1)
                route_b = flat_obstruction_general(gamma, bt).ext_view
                res.checked += 1
                comps_b = route_b.components if route_b.base.ngens else ()
                comps_a = route_a.components if route_a.base.ngens else ()
                if comps_a != comps_b:
                    res.fail(f"gamma {gamma.values} d2P(1) = {c}: 1-connected {route_a}, transfer {route_b}")
                if a == 2 and m == 1:
                    pushed = flat_obstruction_general(gamma, bt).pushed
                    nonzero = is_group_coboundary(delta2_connecting(pushed)) is None
                    res.checked += 1
                    if nonzero != (not route_b.is_zero()):
                        res.fail(f"gamma {gamma.values} d2P(1) = {c}: delta2 class disagrees with ext view")
    return res


def case_obs_cover() -> CaseResult:
    """Injectivity on the RP2 nerve and vanishing after restriction to the S2 nerve."""
    res = CaseResult("RP2 with the double cover")
    rp = rp2_nerve()
    z2 = cyclic_group(2)
    mod = FgAbGroup.cyclic(2)
    g = double_cover_cocycle()
    f1 = cocycle_of_extension(z4_over_z2())
    f1 = GroupCochain(z2, 2, mod, f1.values)
    f0 = GroupCochain.zero(z2, 2, mod)
    outs = [obs_cover(g, f0), obs_cover(g, f1)]
    res.checked += 1
    if cohomologous(outs[0], outs[1]):
        res.fail("the two classes of H^2(Z/2, Z/2) give the same Čech class")
    res.checked += 1
    if is_coboundary(outs[0]) is None:
        res.fail("the zero class gives a non-coboundary")
    res.checked += 1
    if not cohomologous(obs_cover(g, f1 + f1), outs[1] + outs[1]):
        res.fail("obs_cover is not additive on f1 + f1")
    s2 = sphere_nerve(2)
    for vmap in simplicial_maps(s2, rp):
        for out in outs:
            res.checked += 1
            if is_coboundary(pullback_cochain(vmap, s2, out)) is None:
                res.fail(f"# vertex map {vmap}\n" + out.to_text())
    return res


def double_cover_cocycle() -> CechCochain:
    """The least Z/2-valued 1-cocycle on the RP2 nerve that is not a coboundary."""
    rp = rp2_nerve()
    z2 = cyclic_group(2)
    mod = FgAbGroup.cyclic(2)
    for g in group_cocycles(rp, z2):
        ab = CechCochain(rp, 1, mod, tuple((v,) for v in g.values))
        if is_coboundary(ab) is None:
            return g
    raise ArithmeticError("RP2 nerve has no nontrivial double cover")


# ---------------------------------------------------------------- suites


def suite_cases(name: str, n: int | None = None, gamma: str | None = None, fault: bool = False) -> list[tuple]:
    ks = [parse_group(gamma).orders[0]] if gamma else None
    if name == "lemma-4.1":
        return [(case_lemma41, nn, k, fault) for nn in ([n] if n else [1, 2, 3]) for k in (ks or [2, 3])]
    if name == "triangle":
        return [(case_triangle, nn, k, fault) for nn in ([n] if n else [1, 2]) for k in (ks or [2, 3, 0])]
    if name == "square-shadow":
        pairs = [(1, 0), (2, 0), (2, 1)]
        return [(case_square, nn, d) for nn, d in pairs if not n or nn == n]
    if name == "delta1-section":
        return [(case_delta1, nv, e) for nv in CORPUS_NERVES for e in EXTENSIONS]
    if name == "grpcoh-known":
        return [(case_grpcoh, a, m) for a in range(1, 7) for m in ([*range(1, 7), 0] if ks is None else ks)]
    if name == "flat-consistency":
        return [(case_flat, a, k) for a in range(1, 7) for k in [*range(1, 7), 0]]
    if name == "obs-cover":
        return [(case_obs_cover,)]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


SUITES = ("lemma-4.1", "triangle", "square-shadow", "delta1-section", "grpcoh-known",
          "flat-consistency", "obs-cover")


def _run(case: tuple) -> CaseResult:
    return case[0](*case[1:])


def run_suite(name: str, n: int | None = None, gamma: str | None = None,
              jobs: int = 1, fault: bool = False) -> SuiteResult:
    cases = suite_cases(name, n, gamma, fault)
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run, cases))
    else:
        results = [_run(c) for c in cases]
    return SuiteResult(name, results)
