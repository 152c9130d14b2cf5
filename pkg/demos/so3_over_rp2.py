"""An SO(3)-bundle over RP^2 whose obstruction is invisible on homotopy groups.

Over RP^2 the double cover S^2 is the universal cover, so a bundle P is
described on homotopy by pi1(P), a central extension of Z/2.  Take
pi1(P) = Z/4.  The homotopy components of the obstruction to an SU(2) lift
vanish, yet the class is nonzero: transporting the Z/4 cocycle along the
covering cocycle of a six-vertex triangulation of RP^2 gives a Čech
2-cocycle with Z/2 values that is not a coboundary.

Run with ``python3 demos/so3_over_rp2.py``.
"""

from __future__ import annotations

from pathlib import Path

from liftobs import compute_report, parse_scenario, report_to_text
from liftobs.cech import is_coboundary, s_tilde, sphere_nerve, pullback_cochain, simplicial_maps

SCENARIO = Path(__file__).resolve().parent.parent / "scenarios" / "so3_over_rp2.json"


def main() -> None:
    cfg = parse_scenario(SCENARIO)
    report = compute_report(cfg.extension, cfg.bundle)
    print(report_to_text(report, verbosity=1), end="")

    cech = report.cech_class
    disc = cech.map_values(lambda v: v[cech.coeff.m:], cech.coeff.D)
    print(f"\nis the Čech class a coboundary on RP^2? {is_coboundary(disc) is not None}")

    # along every simplicial map from the 2-sphere nerve the class dies
    s2 = sphere_nerve(2)
    maps = list(simplicial_maps(s2, cech.nerve))
    dead = all(is_coboundary(pullback_cochain(f, s2, disc)) is not None for f in maps)
    print(f"pulled back along all {len(maps)} simplicial maps from S^2: always a coboundary: {dead}")
    print(f"for instance S-tilde of the first pullback is {s_tilde(pullback_cochain(maps[0], s2, disc))}")


if __name__ == "__main__":
    main()
