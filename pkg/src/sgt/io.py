"""JSON artifacts: semigroups, actions, morphisms and homomorphisms.

Semigroup   {"n", "table", "star"?, "labels"?}
Action      {"semigroup": <semigroup or "@path">, "x_size", "p", "act", "labels"?}
Morphism    {"alpha"?, "beta"}
Hom         {"source": <semigroup or "@path">, "target": <semigroup or "@path">, "map"}

Any nested semigroup may be given as ``"@path"``, resolved relative to the
file that contains it.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .action import ActionMorphism, EtaleAction, load_action
from .core import DEFAULT_MAX_N, FiniteSemigroup, SemigroupHom, load_semigroup
from .errors import DimensionMismatch, InvalidInput
from .star import StarStructure, load_star


class SchemaError(InvalidInput):
    pass


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SchemaError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None


def write_json(path: str | Path, payload: Any) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def _resolve(obj: Any, base_dir: Path) -> tuple[Any, Path]:
    if isinstance(obj, str) and obj.startswith("@"):
        path = (base_dir / obj[1:]).resolve()
        return read_json(path), path.parent
    return obj, base_dir


def _field(obj: dict, key: str, kind: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{kind} JSON is missing {key!r}")
    return obj[key]


def parse_semigroup(obj: Any, base_dir: Path = Path("."), max_n: int | None = DEFAULT_MAX_N
                    ) -> tuple[FiniteSemigroup, list[int] | None]:
    obj, _ = _resolve(obj, base_dir)
    n = _field(obj, "n", "semigroup")
    table = _field(obj, "table", "semigroup")
    if not isinstance(n, int) or isinstance(n, bool):
        raise SchemaError("semigroup 'n' must be an integer")
    S = load_semigroup(n, table, labels=obj.get("labels"), max_n=max_n)
    return S, obj.get("star")


def parse_star_structure(obj: Any, base_dir: Path = Path("."), max_n: int | None = DEFAULT_MAX_N
                         ) -> StarStructure:
    S, star = parse_semigroup(obj, base_dir, max_n)
    return load_star(S, star)


def parse_action(obj: Any, base_dir: Path = Path("."), max_n: int | None = DEFAULT_MAX_N) -> EtaleAction:
    obj, base_dir = _resolve(obj, base_dir)
    sg, sg_dir = _resolve(_field(obj, "semigroup", "action"), base_dir)
    S, _ = parse_semigroup(sg, sg_dir, max_n)
    return load_action(S, _field(obj, "x_size", "action"), _field(obj, "p", "action"),
                       _field(obj, "act", "action"), labels=obj.get("labels"))


def parse_morphism(obj: Any, source: EtaleAction, target: EtaleAction) -> ActionMorphism:
    beta = _field(obj, "beta", "morphism")
    alpha = obj.get("alpha")
    hom = None if alpha is None else SemigroupHom(source.S, target.S, alpha)
    if len(beta) != source.x_size:
        raise DimensionMismatch("beta length does not match the source action")
    return ActionMorphism(beta, hom)


def parse_hom(obj: Any, base_dir: Path = Path("."), max_n: int | None = DEFAULT_MAX_N
              ) -> tuple[SemigroupHom, list[int] | None, list[int] | None]:
    obj, base_dir = _resolve(obj, base_dir)
    src, src_dir = _resolve(_field(obj, "source", "hom"), base_dir)
    dst, dst_dir = _resolve(_field(obj, "target", "hom"), base_dir)
    S, s_star = parse_semigroup(src, src_dir, max_n)
    T, t_star = parse_semigroup(dst, dst_dir, max_n)
    return SemigroupHom(S, T, _field(obj, "map", "hom")), s_star, t_star


def detect_kind(obj: Any) -> str:
    if isinstance(obj, dict):
        if "act" in obj:
            return "action"
        if "map" in obj:
            return "hom"
        if "table" in obj:
            return "semigroup"
    raise SchemaError("file is not a semigroup, action or hom document")


def semigroup_to_json(S: FiniteSemigroup, star=None) -> dict:
    out: dict[str, Any] = {"n": S.n, "table": S.table.tolist()}
    if star is not None:
        out["star"] = [int(v) for v in star]
    if S.labels:
        out["labels"] = list(S.labels)
    return out


def star_structure_to_json(T: StarStructure) -> dict:
    return semigroup_to_json(T.base, T.star)


def action_to_json(A: EtaleAction) -> dict:
    out = {"semigroup": semigroup_to_json(A.S), "x_size": A.x_size,
           "p": list(A.p), "act": A.act.tolist()}
    if A.labels:
        out["labels"] = list(A.labels)
    return out


def morphism_to_json(m: ActionMorphism) -> dict:
    out: dict[str, Any] = {"beta": list(m.beta)}
    if m.alpha is not None:
        out["alpha"] = list(m.alpha.map)
    return out


def hom_to_json(h: SemigroupHom, source_star=None, target_star=None) -> dict:
    return {"source": semigroup_to_json(h.source, source_star),
            "target": semigroup_to_json(h.target, target_star),
            "map": list(h.map)}
