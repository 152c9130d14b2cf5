"""Projective unitary bundles over the 3-sphere.

The projective unitary group of an infinite-dimensional Hilbert space has
pi2 = Z, and the connecting map d2 of the circle extension by the unitary
group is an isomorphism.  A bundle over S^3 with clutching degree m has
d3P = m, so the degree-3 component of the obstruction is multiplication by
m.  For a finite-dimensional structure group pi2 vanishes and so does this
component.

Run with ``python3 demos/projective_unitary_over_s3.py``.
"""

from __future__ import annotations

from liftobs import AbHom, BundleData, CentralExtData, FgAbGroup, compute_report, report_to_text

Z = FgAbGroup(1)
TRIVIAL = FgAbGroup()


def projective_unitary() -> CentralExtData:
    # pi1 = 0, pi2 = Z, Γ = Z with d2 the identity
    return CentralExtData(TRIVIAL, Z, TRIVIAL, 1, AbHom.zero(TRIVIAL, TRIVIAL), AbHom.identity(Z))


def bundle_over_s3(m: int) -> BundleData:
    d3P = AbHom.from_images(Z, Z, [[m]])
    return BundleData.one_connected(TRIVIAL, Z, AbHom.zero(TRIVIAL, TRIVIAL), d3P)


def main() -> None:
    ext = projective_unitary()
    for m in (0, 1, 2, 5):
        report = compute_report(ext, bundle_over_s3(m))
        print(f"clutching degree {m}:")
        print(report_to_text(report), end="")
        print()

    # a finite-dimensional group: pi2 = 0, so nothing can be seen on pi3
    pu3 = CentralExtData(FgAbGroup.cyclic(3), TRIVIAL, TRIVIAL, 1,
                         AbHom.zero(FgAbGroup.cyclic(3), TRIVIAL), AbHom.zero(TRIVIAL, Z))
    b = BundleData.one_connected(TRIVIAL, Z, AbHom.zero(TRIVIAL, FgAbGroup.cyclic(3)), AbHom.zero(Z, TRIVIAL))
    print("PU(3) over S^3:")
    print(report_to_text(compute_report(pu3, b)), end="")


if __name__ == "__main__":
    main()
