"""Command line front end: spec-file ingestion, table construction,
transform pipelines, and deterministic JSON reports.

Exit codes are part of the contract: 0 success, 1 verification failure,
2 parse error, 3 cutoff violation, 4 not applicable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .category import (
    CutoffError,
    ExtFixTable,
    FixTable,
    TableError,
    closure,
    ext_closure,
    ext_fix_from_morphism,
    glue_table,
    free_product_table,
)
from .frame import Frame, FrameError, fix_from_morphism, make_frame
from .linalg import LinMap, Scalar, ShapeError, parse_scalar
from .partitions import Partition, PartitionError, partition_map
from .transforms import (
    NotApplicableError,
    VERIFIERS,
    canonical_unglue_z2,
    degree_of_reflection,
    free_complexify,
    is_alternating_category,
    is_colour_inversion_invariant,
    is_globally_colourized,
    max_unglue,
    tensor_complexify,
)
from .words import (
    ExtWord,
    WordError,
    enumerate_words,
    parse_ext_word,
    validate_word,
)


class SpecError(ValueError):
    pass


EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_CUTOFF = 3
EXIT_NOT_APPLICABLE = 4


PRESETS = {
    "U+": [],
    "O+": [
        {"kind": "partition", "upper": "", "lower": "ww", "blocks": [[1, 2]]},
    ],
    "B+": [
        {"kind": "partition", "upper": "", "lower": "ww", "blocks": [[1, 2]]},
        {"kind": "partition", "upper": "", "lower": "w", "blocks": [[1]]},
    ],
    "S+": [
        {"kind": "partition", "upper": "", "lower": "ww", "blocks": [[1, 2]]},
        {"kind": "partition", "upper": "", "lower": "w", "blocks": [[1]]},
        {
            "kind": "partition",
            "upper": "",
            "lower": "wwww",
            "blocks": [[1, 2, 3, 4]],
        },
    ],
}


def _parse_entry(v) -> Scalar:
    if isinstance(v, str):
        return parse_scalar(v)
    if isinstance(v, int):
        return Scalar(v)
    raise SpecError(f"scalar entries must be strings or integers, got {v!r}")


def resolve_spec(raw: dict, cutoff=None, work=None) -> dict:
    """Validated, preset-expanded, canonical form of a spec object."""
    if not isinstance(raw, dict):
        raise SpecError("spec must be a JSON object")
    out: dict = {}
    n = raw.get("N")
    if not isinstance(n, int) or n < 1:
        raise SpecError("spec needs a positive integer N")
    out["N"] = n
    f = raw.get("F")
    if f is None:
        f = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
    if len(f) != n or any(len(row) != n for row in f):
        raise SpecError("F must be an N x N grid")
    out["F"] = [[_parse_entry(v).text() for v in row] for row in f]
    gens = list(raw.get("generators", []))
    preset = raw.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise SpecError(f"unknown preset {preset!r} (have {sorted(PRESETS)})")
        gens = PRESETS[preset] + gens
        out["preset"] = preset
    out["generators"] = gens
    cutoffs = dict(raw.get("cutoffs", {}))
    report = cutoff if cutoff is not None else cutoffs.get("report", 6)
    workc = work if work is not None else cutoffs.get("work", report + 2)
    if not isinstance(report, int) or not isinstance(workc, int) or report < 0:
        raise SpecError("cutoffs must be non-negative integers")
    if report > workc:
        raise SpecError("report cutoff exceeds work cutoff")
    out["cutoffs"] = {"report": report, "work": workc}
    if "modulus" in raw:
        k = raw["modulus"]
        if not isinstance(k, int) or k < 0:
            raise SpecError("modulus must be a non-negative integer")
        out["modulus"] = k
    out["transforms"] = list(raw.get("transforms", []))
    return out


def spec_digest(spec: dict) -> str:
    blob = json.dumps(spec, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def _build_frame(spec: dict) -> Frame:
    entries = [[parse_scalar(v) for v in row] for row in spec["F"]]
    return make_frame(entries)


def _fix_generator(frame: Frame, gen: dict):
    kind = gen.get("kind")
    if kind == "partition":
        p = Partition(
            gen.get("upper", ""),
            gen.get("lower", ""),
            tuple(tuple(b) for b in gen.get("blocks", [])),
        )
        t = partition_map(p, frame.n)
        if p.upper:
            vec, word = fix_from_morphism(frame, t, p.upper, p.lower)
            return word, vec
        return p.lower, t
    if kind == "matrix":
        dom = gen.get("domain", "")
        cod = gen.get("codomain", "")
        validate_word(dom)
        validate_word(cod)
        entries = [[_parse_entry(v) for v in row] for row in gen["entries"]]
        t = LinMap.from_entries(frame.n, len(dom), len(cod), entries)
        vec, word = fix_from_morphism(frame, t, dom, cod)
        return word, vec
    raise SpecError(f"unknown generator kind {kind!r}")


def _ext_generator(frame: Frame, k: int, gen: dict):
    kind = gen.get("kind")
    if kind == "matrix":
        dom = parse_ext_word(gen.get("domain", ""), k)
        cod = parse_ext_word(gen.get("codomain", ""), k)
        entries = [[_parse_entry(v) for v in row] for row in gen["entries"]]
        t = LinMap.from_entries(
            frame.n, len(dom.body), len(cod.body), entries
        )
        vec, word = ext_fix_from_morphism(frame, t, dom, cod)
        return word, vec
    if kind == "partition":
        word, vec = _fix_generator(frame, gen)
        ext = parse_ext_word(
            "".join("s" if a == "w" else "S" for a in word), k
        )
        return ext, vec
    raise SpecError(f"unknown generator kind {kind!r}")


def build_state(spec: dict):
    """Build the table (plain or extended) and run the transform
    pipeline; returns a FixTable or ExtFixTable."""
    frame = _build_frame(spec)
    report = spec["cutoffs"]["report"]
    work = spec["cutoffs"]["work"]
    if "modulus" in spec:
        k = spec["modulus"]
        gens = [_ext_generator(frame, k, g) for g in spec["generators"]]
        state: FixTable | ExtFixTable = ext_closure(frame, k, gens, report, work)
    else:
        gens = [_fix_generator(frame, g) for g in spec["generators"]]
        state = closure(frame, gens, report, work)
    for tr in spec["transforms"]:
        state = apply_transform(state, tr)
    return state


def apply_transform(state, tr: dict):
    op = tr.get("op")
    if op == "tensor":
        _need_plain(state, op)
        return tensor_complexify(state, _order(tr, "k"))
    if op == "free":
        _need_plain(state, op)
        return free_complexify(state, _order(tr, "l"))
    if op == "glue":
        if not isinstance(state, ExtFixTable):
            raise SpecError("glue applies to an extended table")
        return glue_table(state)
    if op == "max_unglue":
        _need_plain(state, op)
        return max_unglue(state, _order(tr, "k"))
    if op == "canonical_unglue":
        _need_plain(state, op)
        return canonical_unglue_z2(state)
    if op == "free_product":
        _need_plain(state, op)
        return free_product_table(state, _order(tr, "l"))
    raise SpecError(f"unknown transform {op!r}")


def _need_plain(state, op):
    if isinstance(state, ExtFixTable):
        raise SpecError(f"transform {op!r} applies to a plain table")


def _order(tr: dict, key: str) -> int:
    v = tr.get(key)
    if not isinstance(v, int) or v < 0:
        raise SpecError(f"transform needs a non-negative integer {key!r}")
    return v


# ---------------------------------------------------------------------------
# payload builders


def dims_payload(state) -> dict:
    if isinstance(state, ExtFixTable):
        dims = {
            w.text(): state.spaces[w].dim
            for w in state.nonzero_words()
            if len(w.body) <= state.square_report
        }
        return {"dimensions": dims, "domain": "nonzero stored words"}
    dims = {w: state.space(w).dim for w in enumerate_words(state.report_cutoff)}
    return {"dimensions": dims, "domain": "all words up to the report cutoff"}


def _map_grid(m: LinMap) -> list[list[str]]:
    return [[v.text() for v in row] for row in m.dense()]


def mor_payload(state: FixTable, w1: str, w2: str) -> dict:
    sp = state.mor_space(w1, w2)
    return {
        "dimension": sp.dim,
        "basis": [_map_grid(b) for b in sp.basis_maps()],
    }


def degree_payload(state: FixTable) -> dict:
    cert = degree_of_reflection(state)
    return {
        "value": cert.value,
        "witnesses": [
            {"word": w, "colour_sum": c} for w, c in cert.witnesses
        ],
    }


def check_payload(state: FixTable, predicate: str) -> dict:
    if predicate == "global":
        holds = is_globally_colourized(state)
        return {"predicate": predicate, "holds_up_to_cutoff": holds,
                "counterexample": None}
    if predicate == "inversion":
        holds, witness = is_colour_inversion_invariant(state)
        return {"predicate": predicate, "holds_up_to_cutoff": holds,
                "counterexample": witness}
    if predicate == "alternating":
        holds, witness = is_alternating_category(state)
        return {"predicate": predicate, "holds_up_to_cutoff": holds,
                "counterexample": witness}
    raise SpecError(f"unknown predicate {predicate!r}")


def relations_payload(spec: dict, frame: Frame) -> dict:
    rels: list[str] = []
    from .presentation import relations_from_intertwiner

    for gen in spec["generators"]:
        if gen.get("kind") == "partition":
            p = Partition(
                gen.get("upper", ""),
                gen.get("lower", ""),
                tuple(tuple(b) for b in gen.get("blocks", [])),
            )
            t = partition_map(p, frame.n)
            w1, w2 = p.upper, p.lower
        else:
            w1 = gen.get("domain", "")
            w2 = gen.get("codomain", "")
            entries = [[_parse_entry(v) for v in row] for row in gen["entries"]]
            t = LinMap.from_entries(frame.n, len(w1), len(w2), entries)
        for poly in relations_from_intertwiner(t, w1, w2, frame):
            if not poly.is_zero():
                rels.append(poly.text())
    return {"relations": sorted(set(rels))}


# ---------------------------------------------------------------------------
# command driver


def _report(
    spec: dict, command: str, params: dict, payload: dict, semantics: str,
    status: str = "ok", timing_ms: int | None = None
) -> dict:
    rep = {
        "command": command,
        "cutoffs": spec["cutoffs"],
        "engine": {"name": "qgcat", "version": __version__},
        "input_digest": spec_digest(spec),
        "params": params,
        "payload": payload,
        "semantics": semantics,
        "status": status,
    }
    if timing_ms is not None:
        rep["timing_ms"] = timing_ms
    return rep


def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_spec(args) -> dict:
    if args.spec:
        try:
            with open(args.spec, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(
                f"{args.spec}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
        except OSError as exc:
            raise SpecError(str(exc)) from exc
    elif args.preset:
        raw = {"N": args.dim or 2, "preset": args.preset}
    else:
        raise SpecError("either --spec or --preset is required")
    return resolve_spec(raw, args.cutoff, args.work)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help="spec file (JSON)")
    p.add_argument("--preset", choices=sorted(PRESETS), help="built-in generator set")
    p.add_argument("--dim", type=int, help="N for --preset (default 2)")
    p.add_argument("--cutoff", type=int, help="report cutoff override")
    p.add_argument("--work", type=int, help="work cutoff override")
    p.add_argument("--json", dest="json_out", help="write the report to a file")
    p.add_argument("--timing", action="store_true", help="include timing_ms")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qgcat",
        description="exact computations with two-coloured representation categories",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    for name in ("dims", "degree", "glue", "relations"):
        p = sub.add_parser(name)
        _add_common(p)

    p = sub.add_parser("mor")
    _add_common(p)
    p.add_argument("w1")
    p.add_argument("w2")

    p = sub.add_parser("check")
    _add_common(p)
    p.add_argument("predicate", choices=["global", "inversion", "alternating"])

    p = sub.add_parser("complexify")
    _add_common(p)
    p.add_argument("--mode", choices=["tensor", "free"], required=True)
    p.add_argument("--order", type=int, required=True, help="the cyclic order")

    p = sub.add_parser("unglue")
    _add_common(p)
    p.add_argument("--mode", choices=["maximal", "canonical"], required=True)
    p.add_argument("--order", type=int, help="cyclic order for maximal ungluing")

    p = sub.add_parser("verify")
    _add_common(p)
    p.add_argument("check_id", choices=sorted(VERIFIERS))
    p.add_argument("--modulus", type=int, default=0,
                   help="cyclic order for check B (positive = evidence only)")
    p.add_argument("--moduli", default="2,3",
                   help="comma-separated orders for check C")
    return ap


def _workers_cap() -> int:
    raw = os.environ.get("QGCAT_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        return 1
    return max(1, cap)


def run(args) -> tuple[dict, int]:
    _workers_cap()  # the engine is sequential; one worker always complies
    spec = _load_spec(args)
    t0 = time.monotonic()
    command = args.command

    if command == "relations":
        frame = _build_frame(spec)
        payload = relations_payload(spec, frame)
        rep = _report(spec, command, {}, payload, "exact")
        return _with_timing(rep, args, t0), EXIT_OK

    state = build_state(spec)
    semantics = state.semantics

    if command == "dims":
        rep = _report(spec, command, {}, dims_payload(state), semantics)
        return _with_timing(rep, args, t0), EXIT_OK

    if command == "mor":
        validate_word(args.w1)
        validate_word(args.w2)
        if isinstance(state, ExtFixTable):
            raise SpecError("mor expects a plain (circle word) table")
        payload = mor_payload(state, args.w1, args.w2)
        rep = _report(spec, command, {"w1": args.w1, "w2": args.w2}, payload, semantics)
        return _with_timing(rep, args, t0), EXIT_OK

    if command == "degree":
        _need_plain(state, command)
        rep = _report(spec, command, {}, degree_payload(state), semantics)
        return _with_timing(rep, args, t0), EXIT_OK

    if command == "check":
        _need_plain(state, command)
        payload = check_payload(state, args.predicate)
        rep = _report(spec, command, {"predicate": args.predicate}, payload, semantics)
        return _with_timing(rep, args, t0), EXIT_OK

    if command == "complexify":
        _need_plain(state, command)
        tr = (
            {"op": "tensor", "k": args.order}
            if args.mode == "tensor"
            else {"op": "free", "l": args.order}
        )
        derived = dict(spec)
        derived["transforms"] = spec["transforms"] + [tr]
        new_state = apply_transform(state, tr)
        payload = {
            "derived_spec": derived,
            "derived_digest": spec_digest(derived),
            **dims_payload(new_state),
        }
        rep = _report(spec, command, tr, payload, new_state.semantics)
        return _with_timing(rep, args, t0), EXIT_OK

    if command == "glue":
        if not isinstance(state, ExtFixTable):
            raise SpecError("glue expects an extended table")
        tr = {"op": "glue"}
        derived = dict(spec)
        derived["transforms"] = spec["transforms"] + [tr]
        new_state = glue_table(state)
        payload = {
            "derived_spec": derived,
            "derived_digest": spec_digest(derived),
            **dims_payload(new_state),
        }
        rep = _report(spec, command, tr, payload, new_state.semantics)
        return _with_timing(rep, args, t0), EXIT_OK

    if command == "unglue":
        _need_plain(state, command)
        if args.mode == "maximal":
            if args.order is None:
                raise SpecError("maximal ungluing needs --order")
            tr = {"op": "max_unglue", "k": args.order}
        else:
            tr = {"op": "canonical_unglue"}
        derived = dict(spec)
        derived["transforms"] = spec["transforms"] + [tr]
        new_state = apply_transform(state, tr)
        payload = {
            "derived_spec": derived,
            "derived_digest": spec_digest(derived),
            **dims_payload(new_state),
        }
        rep = _report(spec, command, tr, payload, new_state.semantics)
        return _with_timing(rep, args, t0), EXIT_OK

    if command == "verify":
        _need_plain(state, command)
        check_id = args.check_id
        if check_id == "B":
            verdict = VERIFIERS["B"](state, args.modulus)
            params = {"check_id": check_id, "modulus": args.modulus}
        elif check_id == "C":
            moduli = tuple(int(x) for x in args.moduli.split(",") if x)
            verdict = VERIFIERS["C"](state, moduli)
            params = {"check_id": check_id, "moduli": list(moduli)}
        elif check_id == "A":
            verdict = VERIFIERS["A"](state, args.modulus)
            params = {"check_id": check_id, "modulus": args.modulus}
        else:
            verdict = VERIFIERS[check_id](state)
            params = {"check_id": check_id}
        payload = {
            "clauses": [
                {
                    "name": c.name,
                    "holds_up_to_cutoff": c.holds,
                    "counterexample": c.counterexample,
                }
                for c in verdict.clauses
            ],
            "evidence_only": verdict.evidence_only,
            "holds_up_to_cutoff": verdict.holds,
        }
        status = "ok" if verdict.holds else "failed"
        rep = _report(spec, command, params, payload, semantics, status)
        code = EXIT_OK if verdict.holds else EXIT_VERIFY_FAILED
        return _with_timing(rep, args, t0), code

    raise SpecError(f"unknown command {command!r}")


def _with_timing(rep: dict, args, t0: float) -> dict:
    if args.timing:
        rep["timing_ms"] = int((time.monotonic() - t0) * 1000)
    return rep


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        rep, code = run(args)
    except (SpecError, WordError, PartitionError, ShapeError, FrameError,
            TableError, ValueError) as exc:
        if isinstance(exc, CutoffError):
            print(f"qgcat: cutoff violation: {exc}", file=sys.stderr)
            return EXIT_CUTOFF
        if isinstance(exc, NotApplicableError):
            print(f"qgcat: not applicable: {exc}", file=sys.stderr)
            return EXIT_NOT_APPLICABLE
        print(f"qgcat: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    _emit(rep, args.json_out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
