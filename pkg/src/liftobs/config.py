"""Scenario documents: JSON in, validated CentralExtData and BundleData out.

Every problem found is collected with a path into the document (for
example ``bundle.d2P``) so that one run reports all of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .abelian import AbHom, ExtClass, FgAbGroup, cokernel, coord_from_json
from .cech import CechCochain, Nerve, cochain_from_text
from .extensions import CentralExtData
from .groups import FiniteGroup, group_from_text, named_group
from .grpcoh import GroupCochain
from .intmat import IntMatrix
from .obstruction import BundleData, Covering


class ConfigError(ValueError):
    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


@dataclass(frozen=True)
class ScenarioConfig:
    extension: CentralExtData
    bundle: BundleData
    sign_ledger: bool = False
    verbosity: int = 0
    name: str = ""


@dataclass
class _Collector:
    errors: list[str] = field(default_factory=list)

    def get(self, path: str, fn: Callable[[], Any]):
        try:
            return fn()
        except ConfigError as exc:
            self.errors.extend(exc.errors)
        except (ValueError, TypeError, KeyError) as exc:
            msg = exc.args[0] if exc.args else type(exc).__name__
            self.errors.append(f"{path}: {msg}")
        return None


def _group(obj, path: str) -> FgAbGroup:
    if obj is None:
        raise ValueError("missing field")
    return FgAbGroup.from_json(obj, path)


def _matrix(obj, source: FgAbGroup, target: FgAbGroup) -> AbHom:
    if obj is None:
        return AbHom.zero(source, target)
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise ValueError("expected a matrix as a list of rows")
    rows, cols = target.ngens, source.ngens
    if len(obj) != rows or any(len(r) != cols for r in obj):
        got = f"{len(obj)}x{len(obj[0]) if obj else 0}"
        raise ValueError(f"expected a {rows}x{cols} matrix for a map {source} -> {target}, got {got}")
    return AbHom(source, target, IntMatrix.from_rows([[int(x) for x in r] for r in obj], cols))


def _finite_group(obj, base: Path) -> FiniteGroup:
    if isinstance(obj, str):
        p = base / obj
        if obj.endswith(".txt") or p.is_file():
            return group_from_text(p.read_text(encoding="utf-8"), str(p))
        return named_group(obj)
    if isinstance(obj, dict) and "table" in obj:
        return FiniteGroup(tuple(tuple(int(x) for x in r) for r in obj["table"]))
    raise ValueError("expected a group name, a table file or {\"table\": [...]}")


def parse_extension(doc: dict, col: _Collector, path: str = "extension") -> CentralExtData | None:
    if not isinstance(doc, dict):
        col.errors.append(f"{path}: expected an object")
        return None
    pi1K = col.get(f"{path}.pi1K", lambda: _group(doc.get("pi1K"), f"{path}.pi1K"))
    pi2K = col.get(f"{path}.pi2K", lambda: _group(doc.get("pi2K"), f"{path}.pi2K"))
    D = col.get(f"{path}.D", lambda: _group(doc.get("D", "0"), f"{path}.D"))
    m = col.get(f"{path}.gamma_rank", lambda: _rank(doc.get("gamma_rank", 0)))
    if None in (pi1K, pi2K, D, m):
        return None
    gamma = FgAbGroup(m)
    d1 = col.get(f"{path}.d1", lambda: _matrix(doc.get("d1"), pi1K, D))
    d2 = col.get(f"{path}.d2", lambda: _matrix(doc.get("d2"), pi2K, gamma))
    fund = None
    if "fund_ext" in doc:
        fund = col.get(f"{path}.fund_ext", lambda: ExtClass(pi1K, gamma, tuple(tuple(c) for c in doc["fund_ext"])))
        if fund is None:
            return None
    if d1 is None or d2 is None:
        return None
    if fund is not None and not d2.is_zero():
        col.errors.append(
            f"{path}.fund_ext: the fundamental-group class is only part of the data when d2 = 0"
            " (flat extensions); drop fund_ext or set d2 to zero"
        )
        return None
    return col.get(path, lambda: CentralExtData(pi1K, pi2K, D, m, d1, d2, fund))


def _rank(x) -> int:
    if not isinstance(x, int) or x < 0:
        raise ValueError("expected a non-negative integer")
    return x


def _pi1P_class(obj, grp: FiniteGroup, coker: FgAbGroup) -> GroupCochain:
    """{"values": [[a, b, [coords...]], ...]}; unlisted pairs are zero."""
    if not isinstance(obj, dict) or not isinstance(obj.get("values"), list):
        raise ValueError("expected {\"values\": [[a, b, [coords]], ...]}")
    table = {}
    for i, entry in enumerate(obj["values"]):
        if not (isinstance(entry, list) and len(entry) == 3):
            raise ValueError(f"values[{i}]: expected [a, b, [coords]]")
        a, b, coords = entry
        if not (0 <= a < grp.order and 0 <= b < grp.order):
            raise ValueError(f"values[{i}]: element index out of range")
        if len(coords) != coker.ngens:
            raise ValueError(f"values[{i}]: coker(d2P) = {coker} needs {coker.ngens} coordinates")
        table[(a, b)] = tuple(coord_from_json(x, k) for x, k in zip(coords, coker.kinds))
    return GroupCochain.from_function(grp, 2, coker, lambda a, b: table.get((a, b), coker.zero()))


def _nerve(obj, base: Path) -> Nerve:
    if isinstance(obj, str):
        p = base / obj
        return Nerve.from_text(p.read_text(encoding="utf-8"), str(p))
    if isinstance(obj, dict):
        return Nerve(int(obj["vertices"]), tuple(tuple(f) for f in obj["facets"]))
    raise ValueError("expected a nerve file path or {\"vertices\": N, \"facets\": [...]}")


def _cocycle(obj, nerve: Nerve, grp: FiniteGroup, base: Path) -> CechCochain:
    if isinstance(obj, str):
        p = base / obj
        return cochain_from_text(p.read_text(encoding="utf-8"), nerve, 1, grp, str(p))
    if isinstance(obj, list):
        return CechCochain.from_mapping(nerve, 1, grp, {(int(i), int(j)): int(x) for i, j, x in obj})
    raise ValueError("expected a cochain file path or a list of [i, j, element]")


def parse_bundle(doc: dict, ext: CentralExtData | None, col: _Collector, base: Path,
                 path: str = "bundle") -> BundleData | None:
    if not isinstance(doc, dict):
        col.errors.append(f"{path}: expected an object")
        return None
    pi2X = col.get(f"{path}.pi2X", lambda: _group(doc.get("pi2X"), f"{path}.pi2X"))
    pi3X = col.get(f"{path}.pi3X", lambda: _group(doc.get("pi3X"), f"{path}.pi3X"))
    H2X = col.get(f"{path}.H2X", lambda: _group(doc["H2X"], f"{path}.H2X") if "H2X" in doc else pi2X)
    H3X = col.get(f"{path}.H3X", lambda: _group(doc["H3X"], f"{path}.H3X") if "H3X" in doc else pi3X)
    if None in (pi2X, pi3X, H2X, H3X) or ext is None:
        return None
    if "h2" in doc:
        h2 = col.get(f"{path}.h2", lambda: _matrix(doc["h2"], pi2X, H2X))
    elif H2X == pi2X:
        h2 = AbHom.identity(pi2X)
    else:
        col.errors.append(f"{path}.h2: required when H2X differs from pi2X")
        h2 = None
    d2P = col.get(f"{path}.d2P", lambda: _matrix(doc.get("d2P"), pi2X, ext.pi1K))
    d3P = col.get(f"{path}.d3P", lambda: _matrix(doc.get("d3P"), pi3X, ext.pi2K))
    pi1X = None
    if doc.get("pi1X") is not None:
        pi1X = col.get(f"{path}.pi1X", lambda: _finite_group(doc["pi1X"], base))
    if None in (h2, d2P, d3P) or (doc.get("pi1X") is not None and pi1X is None):
        return None
    cls = covering = None
    if "pi1P_class" in doc:
        if pi1X is None:
            col.errors.append(f"{path}.pi1P_class: requires pi1X")
            return None
        coker = cokernel(d2P).group
        cls = col.get(f"{path}.pi1P_class", lambda: _pi1P_class(doc["pi1P_class"], pi1X, coker))
        if cls is None:
            return None
    if "nerve" in doc or "cocycle" in doc:
        if pi1X is None or "nerve" not in doc or "cocycle" not in doc:
            col.errors.append(f"{path}.nerve: a covering needs pi1X together with nerve and cocycle")
            return None
        nerve = col.get(f"{path}.nerve", lambda: _nerve(doc["nerve"], base))
        if nerve is None:
            return None
        g = col.get(f"{path}.cocycle", lambda: _cocycle(doc["cocycle"], nerve, pi1X, base))
        if g is None:
            return None
        covering = Covering(nerve, g)
    return col.get(path, lambda: BundleData(pi2X, pi3X, H2X, H3X, h2, d2P, d3P, pi1X, covering, cls))


def scenario_from_dict(doc: Any, base: Path = Path("."), name: str = "") -> ScenarioConfig:
    col = _Collector()
    if not isinstance(doc, dict):
        raise ConfigError(["<root>: expected a JSON object"])
    for key in ("extension", "bundle"):
        if key not in doc:
            col.errors.append(f"{key}: missing section")
    unknown = sorted(set(doc) - {"extension", "bundle", "options", "name", "description"})
    for key in unknown:
        col.errors.append(f"{key}: unknown section")
    if col.errors:
        raise ConfigError(col.errors)
    ext = parse_extension(doc["extension"], col)
    bundle = parse_bundle(doc["bundle"], ext, col, base)
    if ext is not None and bundle is not None:
        if bundle.d2P.target != ext.pi1K:
            col.errors.append("bundle.d2P: target differs from extension.pi1K")
        if bundle.d3P.target != ext.pi2K:
            col.errors.append("bundle.d3P: target differs from extension.pi2K")
    opts = doc.get("options", {})
    if not isinstance(opts, dict):
        col.errors.append("options: expected an object")
        opts = {}
    sign_ledger = opts.get("sign_ledger", False)
    verbosity = opts.get("verbosity", 0)
    if not isinstance(sign_ledger, bool):
        col.errors.append("options.sign_ledger: expected true or false")
    if not isinstance(verbosity, int):
        col.errors.append("options.verbosity: expected an integer")
    if col.errors or ext is None or bundle is None:
        raise ConfigError(col.errors or ["<root>: invalid scenario"])
    return ScenarioConfig(ext, bundle, bool(sign_ledger), int(verbosity), str(doc.get("name", name)))


def parse_scenario(path: str | Path) -> ScenarioConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"{p}: {exc.strerror}"]) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{p}:{exc.lineno}: invalid JSON ({exc.msg})"]) from None
    try:
        return scenario_from_dict(doc, p.parent, p.stem)
    except ConfigError as exc:
        raise ConfigError([f"{p}: {e}" for e in exc.errors]) from None
