"""Serialization of obstruction reports.

The machine format is JSON with a fixed key order, so equal reports give
byte-identical output; ``report_from_json`` inverts ``report_to_json``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .abelian import (AbHom, ExtClass, FgAbGroup, coord_from_json, coord_to_json,
                      module_from_json, module_to_json)
from .cech import CechCochain, Nerve
from .intmat import IntMatrix
from .obstruction import ObstructionReport, Verdict, sign_ledger_text

REPORT_KEYS = ("verdict", "pi2_hom", "pi3_hom", "gamma_part", "discrete_part", "flat_ext",
               "group_ext_view", "discrete_ext_view", "cech_class", "provenance")


def _hom_to_json(f: AbHom) -> dict:
    return {"source": f.source.to_json(), "target": f.target.to_json(), "matrix": f.to_json()}


def _hom_from_json(obj: dict) -> AbHom:
    src, tgt = FgAbGroup.from_json(obj["source"]), FgAbGroup.from_json(obj["target"])
    return AbHom(src, tgt, IntMatrix.from_rows(obj["matrix"], src.ngens))


def _ext_to_json(e: ExtClass | None):
    return None if e is None else e.to_json()


def _ext_from_json(obj) -> ExtClass | None:
    return None if obj is None else ExtClass.from_json(obj)


def _value_to_json(v):
    return [coord_to_json(x) for x in v] if isinstance(v, tuple) else v


def _cech_to_json(c: CechCochain | None):
    if c is None:
        return None
    return {
        "nerve": {"vertices": c.nerve.vertex_count, "facets": [list(f) for f in c.nerve.facets]},
        "degree": c.degree,
        "coeff": module_to_json(c.coeff),
        "values": [[list(s), _value_to_json(v)] for s, v in c.items()],
    }


def _cech_from_json(obj) -> CechCochain | None:
    if obj is None:
        return None
    nerve = Nerve(int(obj["nerve"]["vertices"]), tuple(tuple(f) for f in obj["nerve"]["facets"]))
    coeff = module_from_json(obj["coeff"])
    vals = {tuple(s): tuple(coord_from_json(x, k) for x, k in zip(v, coeff.kinds))
            for s, v in obj["values"]}
    return CechCochain.from_mapping(nerve, int(obj["degree"]), coeff, vals)


def report_to_json(r: ObstructionReport) -> dict:
    return {
        "verdict": r.verdict.value,
        "pi2_hom": _hom_to_json(r.pi2_hom),
        "pi3_hom": _hom_to_json(r.pi3_hom),
        "gamma_part": r.gamma_part,
        "discrete_part": r.discrete_part,
        "flat_ext": _ext_to_json(r.flat_ext),
        "group_ext_view": _ext_to_json(r.group_ext_view),
        "discrete_ext_view": _ext_to_json(r.discrete_ext_view),
        "cech_class": _cech_to_json(r.cech_class),
        "provenance": list(r.provenance),
    }


def report_from_json(obj: dict) -> ObstructionReport:
    missing = [k for k in REPORT_KEYS if k not in obj]
    if missing:
        raise ValueError(f"report is missing {', '.join(missing)}")
    return ObstructionReport(
        pi2_hom=_hom_from_json(obj["pi2_hom"]),
        pi3_hom=_hom_from_json(obj["pi3_hom"]),
        verdict=Verdict(obj["verdict"]),
        gamma_part=obj["gamma_part"],
        discrete_part=obj["discrete_part"],
        flat_ext=_ext_from_json(obj["flat_ext"]),
        group_ext_view=_ext_from_json(obj["group_ext_view"]),
        discrete_ext_view=_ext_from_json(obj["discrete_ext_view"]),
        cech_class=_cech_from_json(obj["cech_class"]),
        provenance=tuple(obj["provenance"]),
    )


def dumps_report(r: ObstructionReport) -> str:
    return json.dumps(report_to_json(r), indent=2, ensure_ascii=False) + "\n"


def _hom_text(f: AbHom) -> str:
    if f.is_zero():
        return f"0 : {f.source} -> {f.target}"
    return f"{f.to_json()} : {f.source} -> {f.target}"


def _fmt(x) -> str:
    return str(x) if not isinstance(x, Fraction) else f"{x.numerator}/{x.denominator}"


def report_to_text(r: ObstructionReport, sign_ledger: bool = False, verbosity: int = 0) -> str:
    lines = [r.verdict.value]
    lines.append(f"  pi3 component: {_hom_text(r.pi3_hom)}")
    lines.append(f"  pi2 component: {_hom_text(r.pi2_hom)}")
    lines.append(f"  Γ part: {r.gamma_part}")
    lines.append(f"  discrete part: {r.discrete_part}")
    for label, e in (("flat Ext class", r.flat_ext), ("group Ext view", r.group_ext_view),
                     ("discrete Ext view", r.discrete_ext_view)):
        if e is not None:
            lines.append(f"  {label}: {e}")
    if r.cech_class is not None:
        nz = sum(1 for _, v in r.cech_class.items() if not r.cech_class.coeff.is_zero(v))
        lines.append(f"  Čech class: {nz} nonzero values on {len(r.cech_class.values)} triangles")
        if verbosity > 0:
            for s, v in r.cech_class.items():
                if not r.cech_class.coeff.is_zero(v):
                    vals = " ".join(_fmt(x) for x in v) if isinstance(v, tuple) else str(v)
                    lines.append(f"    {s} : {vals}")
    if verbosity > 0 and r.provenance:
        lines.append("  provenance:")
        lines += [f"    {p}" for p in r.provenance]
    if sign_ledger:
        lines.append(sign_ledger_text().rstrip("\n"))
    return "\n".join(lines) + "\n"
