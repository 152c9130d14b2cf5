"""Exact lifting obstructions for principal bundles along central extensions.

Given a central extension Z -> K^ -> K of topological groups, described by
its connecting maps, and the low homotopy of a K-bundle P over X, the
package decides whether the class obstructing a lift of P to K^ vanishes.
All arithmetic is exact, over integers and fractions.

Modules: ``intmat`` (Smith form and linear solving), ``abelian`` (finitely
generated abelian groups, Hom, Ext), ``extensions`` (Baer sums, flat
homomorphisms), ``groups`` and ``grpcoh`` (finite groups and their bar
cohomology), ``cech`` (nerves and Čech cochains), ``obstruction`` (the
obstruction engine), ``verify`` (brute-force suites) and ``cli``.
"""

from __future__ import annotations

from .abelian import AbHom, ExtClass, FgAbGroup, ZElement, ZShape, cokernel, ext_group, hom_group, kernel
from .cech import CechCochain, Nerve
from .config import ConfigError, ScenarioConfig, parse_scenario
from .extensions import CentralExtData, FlatHom, baer_sum, connecting_delta, pullback_ext, pushforward_ext
from .groups import FiniteGroup, named_group
from .grpcoh import GroupCochain, cohomology_group, is_group_coboundary
from .intmat import IntMatrix, smith_normal_form, solve
from .obstruction import (BundleData, InvariantBreach, ObstructionReport, PreconditionError, Verdict,
                          compute_report, vanishing_verdict)
from .report import report_from_json, report_to_json, report_to_text

__version__ = "0.1.0"

__all__ = [
    "AbHom", "BundleData", "CechCochain", "CentralExtData", "ConfigError", "ExtClass", "FgAbGroup",
    "FiniteGroup", "FlatHom", "GroupCochain", "IntMatrix", "InvariantBreach", "Nerve",
    "ObstructionReport", "PreconditionError", "ScenarioConfig", "Verdict", "ZElement", "ZShape",
    "baer_sum", "cohomology_group", "cokernel", "compute_report", "connecting_delta", "ext_group",
    "hom_group", "is_group_coboundary", "kernel", "named_group", "parse_scenario", "pullback_ext",
    "pushforward_ext", "report_from_json", "report_to_json", "report_to_text", "smith_normal_form",
    "solve", "vanishing_verdict",
]
