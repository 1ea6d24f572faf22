"""``sgt`` command line.

Every subcommand prints one JSON report on stdout.  Exit codes:
0 all verdicts pass, 1 a checked property fails, 2 invalid input,
3 a proven statement was falsified.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any

from . import io
from .action import (
    action_order,
    check_action_morphism,
    check_etale_hom,
    etale_characterization,
    has_global_support,
)
from .core import (
    DEFAULT_MAX_N,
    Witness,
    check_hom,
    classify,
    green_relations,
    is_right_generalized_inverse,
    partial_order_witness,
)
from .equivalence import (
    build_action_from_etale,
    build_semidirect,
    roundtrip_action,
    roundtrip_etale,
)
from .errors import InvalidInput, MissingStar, SemigroupError, TheoremFalsified
from .families import FAMILIES, FamilySpec, find_stars, generate
from .gamma import check_idempotent_pure, check_l_cover, coordinatize, gamma, quotient
from .star import StarStructure, check_star, load_star, verify_s4_derivation
from .suite import INJECTIONS, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_FALSIFIED = 0, 1, 2, 3


class Report:
    def __init__(self, argv: list[str]):
        self.command = list(argv)
        self.instance: dict[str, Any] = {}
        self.verdicts: dict[str, bool] = {}
        self.witnesses: dict[str, Any] = {}
        self.result: dict[str, Any] = {}
        self.error: dict[str, Any] | None = None
        self.forced_exit: int | None = None

    def verdict(self, name: str, witness: Witness | None) -> None:
        self.verdicts[name] = witness is None
        if witness is not None:
            self.witnesses[name] = witness.to_json()

    @property
    def exit_code(self) -> int:
        if self.forced_exit is not None:
            return self.forced_exit
        return EXIT_OK if all(self.verdicts.values()) else EXIT_FAIL

    def to_json(self, seconds: float) -> dict:
        out = {"command": self.command, "instance": self.instance, "verdicts": self.verdicts,
               "witnesses": self.witnesses, "result": self.result, "exit_code": self.exit_code,
               "timing": {"seconds": round(seconds, 6)}}
        if self.error is not None:
            out["error"] = self.error
        return out


def _doc(path: str) -> tuple[Any, Path]:
    return io.read_json(path), Path(path).resolve().parent


def _summary_semigroup(S) -> dict:
    return {"n": S.n, "idempotents": len(S.idempotents)}


def _load_semigroup(args):
    obj, base = _doc(args.file)
    return io.parse_semigroup(obj, base, args.max_n)


def _etale_input(args):
    """(theta, source star) from a hom document or, for a semigroup, its natural map."""
    obj, base = _doc(args.file)
    kind = io.detect_kind(obj)
    if kind == "hom":
        theta, s_star, _ = io.parse_hom(obj, base, args.max_n)
        return theta, load_star(theta.source, s_star), "hom"
    if kind == "semigroup":
        T = io.parse_star_structure(obj, base, args.max_n)
        return quotient(T.base, gamma(T.base)).projection, T, "natural_map"
    raise io.SchemaError("expected a semigroup or hom document")


def _write_or_embed(args, rep: Report, key: str, payload: dict) -> None:
    if args.output:
        io.write_json(args.output, payload)
        rep.result["written"] = str(args.output)
    else:
        rep.result[key] = payload


def cmd_validate(args, rep: Report) -> None:
    obj, base = _doc(args.file)
    kind = io.detect_kind(obj)
    rep.instance["kind"] = kind
    if kind == "semigroup":
        S, star = io.parse_semigroup(obj, base, args.max_n)
        rep.instance.update(_summary_semigroup(S))
        if star is not None:
            load_star(S, star)
            rep.instance["star"] = True
    elif kind == "action":
        A = io.parse_action(obj, base, args.max_n)
        rep.instance.update({"s_size": A.S.n, "x_size": A.x_size})
    else:
        theta, _, _ = io.parse_hom(obj, base, args.max_n)
        rep.instance.update({"source_n": theta.source.n, "target_n": theta.target.n})
        rep.verdict("homomorphism", check_hom(theta))
        return
    rep.verdicts["valid"] = True


def cmd_classify(args, rep: Report) -> None:
    S, _ = _load_semigroup(args)
    rep.instance.update(_summary_semigroup(S))
    c = classify(S)
    rep.result["classification"] = c.to_json()


def cmd_green(args, rep: Report) -> None:
    S, _ = _load_semigroup(args)
    rep.instance.update(_summary_semigroup(S))
    rep.result["green"] = green_relations(S).to_json()


def cmd_order(args, rep: Report) -> None:
    S, _ = _load_semigroup(args)
    rep.instance.update(_summary_semigroup(S))
    m = S.order_matrix
    rep.result["order"] = [[int(a), int(b)] for a, b in zip(*m.nonzero())]
    rep.verdict("partial_order", partial_order_witness(m))


def cmd_star_check(args, rep: Report) -> None:
    S, star = _load_semigroup(args)
    rep.instance.update(_summary_semigroup(S))
    if star is None:
        if not S.is_inverse:
            raise MissingStar("no star given and the semigroup is not inverse")
        star = S.inversion
        rep.instance["star"] = "inversion"
    sr = check_star(S, star)
    rep.result["star"] = sr.to_json()
    for axiom, w in sr.witnesses.items():
        rep.verdict(axiom, w)


def cmd_gamma(args, rep: Report) -> None:
    S, _ = _load_semigroup(args)
    rep.instance.update(_summary_semigroup(S))
    g = gamma(S)
    q = quotient(S, g)
    rep.result["classes"] = [list(c) for c in g.classes]
    rep.result["quotient_n"] = q.quotient.n
    rep.result["idempotent_pure"] = check_idempotent_pure(S, g) is None
    rep.verdicts["quotient_inverse"] = q.quotient.is_inverse
    if args.quotient:
        payload = io.semigroup_to_json(q.quotient)
        payload["projection"] = list(q.projection.map)
        io.write_json(args.quotient, payload)
        rep.result["written"] = str(args.quotient)


def cmd_coordinatize(args, rep: Report) -> None:
    S, _ = _load_semigroup(args)
    rep.instance.update(_summary_semigroup(S))
    c = coordinatize(S)
    rep.result["coordinatization"] = c.to_json()
    rep.verdicts["bijective"] = len(c.kappa) == len(c.codomain) == S.n


def cmd_lcover(args, rep: Report) -> None:
    obj, base = _doc(args.file)
    if io.detect_kind(obj) == "hom":
        h, _, _ = io.parse_hom(obj, base, args.max_n)
    else:
        S, _ = io.parse_semigroup(obj, base, args.max_n)
        h = quotient(S, gamma(S)).projection
    rep.instance.update({"source_n": h.source.n, "target_n": h.target.n})
    rep.verdict("l_cover", check_l_cover(h))


def cmd_action_check(args, rep: Report) -> None:
    obj, base = _doc(args.file)
    A = io.parse_action(obj, base, args.max_n)
    rep.instance.update({"s_size": A.S.n, "x_size": A.x_size})
    rep.verdicts["valid"] = True
    pairs, w = action_order(A)
    rep.result["order"] = sorted([list(p) for p in pairs])
    rep.result["global_support"] = has_global_support(A)
    rep.verdict("partial_order", w)
    if args.morphism:
        if not args.target:
            raise io.SchemaError("--morphism needs --target")
        tobj, tbase = _doc(args.target)
        B = io.parse_action(tobj, tbase, args.max_n)
        m = io.parse_morphism(io.read_json(args.morphism), A, B)
        rep.verdict("morphism", check_action_morphism(A, B, m))


def cmd_etale_check(args, rep: Report) -> None:
    theta, star, how = _etale_input(args)
    rep.instance.update({"input": how, "source_n": theta.source.n, "target_n": theta.target.n})
    er = check_etale_hom(theta, star)
    rep.result["etale_report"] = er.to_json()
    rep.result["characterization"] = etale_characterization(theta, star).to_json()
    rep.verdict("etale", er.witness)


def cmd_build_sx(args, rep: Report) -> None:
    obj, base = _doc(args.file)
    A = io.parse_action(obj, base, args.max_n)
    R = build_semidirect(A)
    rep.instance.update({"s_size": A.S.n, "x_size": A.x_size, "product_n": R.product.n})
    rep.verdicts["verified"] = True
    rep.result["projection_surjective"] = R.projection.is_surjective()
    _write_or_embed(args, rep, "semidirect", R.to_json())


def cmd_build_action(args, rep: Report) -> None:
    theta, star, how = _etale_input(args)
    A = build_action_from_etale(theta, star)
    rep.instance.update({"input": how, "source_n": theta.source.n, "x_size": A.x_size})
    rep.verdicts["valid"] = True
    _write_or_embed(args, rep, "action", io.action_to_json(A))


def cmd_roundtrip(args, rep: Report) -> None:
    if args.direction == "action":
        obj, base = _doc(args.file)
        A = io.parse_action(obj, base, args.max_n)
        rep.instance.update({"s_size": A.S.n, "x_size": A.x_size})
        rt = roundtrip_action(A)
    else:
        theta, star, how = _etale_input(args)
        rep.instance.update({"input": how, "source_n": theta.source.n, "target_n": theta.target.n})
        rt = roundtrip_etale(theta, star)
    rep.result["roundtrip"] = rt.to_json()
    rep.verdicts.update(rt.verdicts)


def _parse_value(text: str, base_dir: Path):
    if text.startswith("@"):
        obj = io.read_json(base_dir / text[1:])
        S, _ = io.parse_semigroup(obj, base_dir)
        return S
    if ":" in text:
        tag, _, rest = text.partition(":")
        return FamilySpec(tag, _parse_params(rest.split(",") if rest else [], base_dir))
    if text.lstrip("-").isdigit():
        return int(text)
    if text.startswith("["):
        return json.loads(text)
    return text


def _parse_params(items: list[str], base_dir: Path) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise io.SchemaError(f"parameter {item!r} is not key=value")
        out[key] = _parse_value(value, base_dir)
    return out


def cmd_gen(args, rep: Report) -> None:
    if args.find_stars:
        obj, base = _doc(args.find_stars)
        S, _ = io.parse_semigroup(obj, base, args.max_n)
        stars = find_stars(S)
        rep.instance.update(_summary_semigroup(S))
        rep.result["stars"] = [list(t.star) for t in stars]
        rep.result["count"] = len(stars)
        if is_right_generalized_inverse(S):
            for k, t in enumerate(stars):
                w = verify_s4_derivation(S, t.star)
                if w is not None:
                    raise TheoremFalsified("S1-S3 imply S4", f"star #{k} violates S4", w)
            rep.verdicts["all_satisfy_S4"] = True
        return
    if not args.family:
        raise io.SchemaError("gen needs a family or --find-stars")
    spec = FamilySpec(args.family, _parse_params(args.params or [], Path.cwd()), args.seed)
    obj = generate(spec)
    rep.instance.update({"family": spec.tag, "params": {k: str(v) for k, v in spec.params.items()},
                         "seed": spec.seed})
    if isinstance(obj, StarStructure):
        payload = io.star_structure_to_json(obj)
    elif hasattr(obj, "act"):
        payload = io.action_to_json(obj)
    else:
        payload = io.semigroup_to_json(obj)
    rep.verdicts["generated"] = True
    _write_or_embed(args, rep, "artifact", payload)


def cmd_suite(args, rep: Report) -> None:
    max_n = 6 if args.max_n is None else args.max_n
    sr = run_suite(max_n, args.seed, inject=args.inject)
    rep.instance.update({"max_n": max_n, "seed": args.seed, "corpus_size": sr.corpus_size})
    for r in sr.results:
        rep.verdicts[r.key] = r.passed
        rep.result[r.key] = r.to_json()
        print(r.line(), file=sys.stderr)
    if not sr.passed:
        rep.forced_exit = EXIT_FALSIFIED
        rep.witnesses = {r.key: r.failures for r in sr.results if r.failures}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON report (the default and only format)")
    common.add_argument("--max-n", type=int, default=None,
                        help=f"element cap for loaded files (default {DEFAULT_MAX_N}); corpus size for suite")
    common.add_argument("-o", "--output", help="write the constructed artifact here")

    p = argparse.ArgumentParser(prog="sgt", description=__doc__.splitlines()[0],
                                parents=[common])
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_, file=True):
        sp = sub.add_parser(name, help=help_, parents=[common])
        if file:
            sp.add_argument("file")
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "validate a semigroup, action or hom file")
    add("classify", cmd_classify, "structural classification")
    add("green", cmd_green, "Green's relations")
    add("order", cmd_order, "natural partial order")
    add("star-check", cmd_star_check, "check star axioms S1-S4")
    sp = add("gamma", cmd_gamma, "minimum inverse congruence")
    sp.add_argument("--quotient", help="write S/γ with its projection")
    add("coordinatize", cmd_coordinatize, "coordinatization s -> (γ(s), s's)")
    add("lcover", cmd_lcover, "L-cover check (natural map, or a hom file)")
    sp = add("action-check", cmd_action_check, "validate an étale action")
    sp.add_argument("--morphism", help="morphism JSON to check from FILE to --target")
    sp.add_argument("--target", help="target action JSON for --morphism")
    add("etale-check", cmd_etale_check, "étale homomorphism check")
    add("build-sx", cmd_build_sx, "build S∗X from an action")
    add("build-action", cmd_build_action, "build the action on E(T) from an étale map")
    sp = sub.add_parser("roundtrip", help="round-trip isomorphism checks", parents=[common])
    sp.add_argument("direction", choices=("action", "etale"))
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_roundtrip)
    sp = add("gen", cmd_gen, "generate a family member", file=False)
    sp.add_argument("family", nargs="?", choices=FAMILIES)
    sp.add_argument("--params", nargs="*", metavar="KEY=VALUE")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--find-stars", metavar="FILE", help="enumerate stars satisfying S1-S3")
    sp = add("suite", cmd_suite, "run the property suite over the corpus", file=False)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--inject", choices=INJECTIONS, help=argparse.SUPPRESS)
    return p


def run(argv: list[str]) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    if args.cmd != "suite" and args.max_n is None:
        args.max_n = DEFAULT_MAX_N
    rep = Report(["sgt", *argv])
    start = time.perf_counter()
    try:
        args.fn(args, rep)
    except TheoremFalsified as exc:
        rep.forced_exit = EXIT_FALSIFIED
        rep.error = _error_json(exc)
        print(f"sgt: FALSIFIED {exc}", file=sys.stderr)
    except InvalidInput as exc:
        rep.forced_exit = EXIT_INVALID
        rep.error = _error_json(exc)
        print(f"sgt: {type(exc).__name__}: {exc}", file=sys.stderr)
    except SemigroupError as exc:
        rep.forced_exit = EXIT_INVALID
        rep.error = _error_json(exc)
        print(f"sgt: {exc}", file=sys.stderr)
    return rep.exit_code, rep.to_json(time.perf_counter() - start)


def _error_json(exc: SemigroupError) -> dict:
    w = exc.witness
    return {"type": type(exc).__name__, "message": str(exc),
            "witness": w.to_json() if isinstance(w, Witness) else None}


def main(argv: list[str] | None = None) -> int:
    code, report = run(sys.argv[1:] if argv is None else argv)
    json.dump(report, sys.stdout, sort_keys=True, ensure_ascii=False)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
