"""Čech calculus on the boundary-of-a-simplex nerve of a sphere.

The n-sphere is covered by the n + 2 facets of the boundary of an
(n+1)-simplex.  Its nerve has every proper subset of {0, ..., n+1} as a
simplex, and the alternating sum S-tilde of a top cochain detects its
cohomology class.  This script checks that by brute force for S^1 and S^2
with coefficients Z/3, then shows that suspension preserves S-tilde.

Run with ``python3 demos/sphere_cech_calculus.py``.
"""

from __future__ import annotations

from liftobs import FgAbGroup
from liftobs.cech import all_cochains, coboundary, s_tilde, sphere_nerve, suspend


def main() -> None:
    mod = FgAbGroup.cyclic(3)
    for n in (1, 2):
        nerve = sphere_nerve(n)
        counts = [len(nerve.simplices(k)) for k in range(n + 1)]
        image = {coboundary(b) for b in all_cochains(nerve, n - 1, mod)}
        tops = list(all_cochains(nerve, n, mod))
        kernel = [c for c in tops if s_tilde(c) == (0,)]
        agree = all((c in image) == (s_tilde(c) == (0,)) for c in tops)
        print(f"S^{n}: simplex counts {counts}, {len(tops)} top cochains,"
              f" {len(kernel)} with S-tilde = 0, {len(image)} coboundaries, agree: {agree}")

    nerve = sphere_nerve(1)
    c = next(c for c in all_cochains(nerve, 1, mod) if s_tilde(c) == (2,))
    print("\na top cochain on S^1:")
    print(c.to_text(), end="")
    sc = suspend(c)
    print(f"S-tilde before suspension {s_tilde(c)}, after {s_tilde(sc)}")


if __name__ == "__main__":
    main()
