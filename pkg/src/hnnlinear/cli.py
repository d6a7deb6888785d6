"""Command line front end.

    hnnlinear analyze|extend|rep|reduce|selftest <file> [--word NAME] [--seed N] [--json-out PATH]

Exit status: 0 ok, 1 negative outcome (not Z-linear, extension impossible,
certification obstructed, selftest failure), 2 invalid input, 3 internal
assertion.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any

from . import __version__, intmat
from .finite_order import ExtensionError, ObstructionError, extend_to_finite_order, root_overgroup
from .hnn import Base, InvalidInstanceError, Stable, Word, britton_reduce
from .invariants import compute_H, decide, m_chain
from .io import (
    InstanceRecord,
    ParseError,
    dumps_line,
    ints,
    lattice_json,
    load,
    number_json,
    record_json,
    rows,
)
from .pipeline import run_pipeline
from .raag import PipelineError
from .selftest import run_selftest

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3
DENSE_LIMIT = 64


def analysis_json(rec: InstanceRecord) -> tuple[dict, bool]:
    inst = rec.instance
    chain = m_chain(inst)
    h = compute_H(inst, chain)
    v = decide(inst)
    out = {
        "instance": record_json(rec),
        "m_chain": {
            "k": str(chain.k),
            "ranks": [str(M.rank) for M in chain.chain],
            "M_k": lattice_json(chain.M_k),
            "D": lattice_json(chain.D),
            "psi": {"numerators": rows(chain.psi.numerators), "denominator": str(chain.psi.denominator)},
        },
        "H": {
            "char_poly": ints(h.char_poly),
            "factors": [{"factor": ints(f), "multiplicity": str(e), "unit": u} for f, e, u in h.factors],
            "H": lattice_json(h.H),
        },
        "verdict": {
            "verdict": v.verdict.value,
            "rank_D": str(v.rank_D),
            "rank_H": str(v.rank_H),
            "index_D_over_H": number_json(v.index_D_over_H),
            "case_flags": {k: (x if isinstance(x, bool) else str(x)) for k, x in v.case_flags.items()},
        },
    }
    return out, v.is_z_linear


def extension_json(rec: InstanceRecord) -> tuple[dict, Any]:
    ext = extend_to_finite_order(rec.instance)
    X = root_overgroup(ext, rec.instance)
    d = {
        "K_bar": lattice_json(ext.K_bar),
        "phi_bar": rows(ext.phi_bar),
        "order": str(ext.order),
        "index_in_K": str(ext.index_in_K),
        "complement": lattice_json(ext.complement),
        "root_overgroup": {"denominator": str(X.denominator), "index_of_K": str(X.index_of_K)},
    }
    if ext.system is not None:
        d["runs"] = [{"c": ints(r.c), "lambda": str(r.lam), "mu": str(r.mu),
                      "S_bar": rows(r.S_bar), "replacements": str(len(r.replacements))}
                     for r in ext.system.runs]
    return d, ext


def rep_json(rec: InstanceRecord, ext, matrices_path: Path | None) -> tuple[dict, bool]:
    res = run_pipeline(rec.instance, ext)
    cert = res.certificate
    d: dict[str, Any] = {
        "nu": str(res.schreier.nu),
        "kernel_index": str(res.schreier.kernel_index()),
        "acts_on": "G" if res.acts_on_g else "multiple extension over K_bar",
        "stable_letters": str(res.presentation.n),
        "certificate": {"outcome": cert.outcome},
    }
    if not cert.is_raag:
        d["certificate"]["offending"] = list(cert.offending)
        return d, False
    d["certificate"]["vertices"] = list(cert.graph.vertices)
    d["certificate"]["edges"] = [list(e) for e in cert.graph.edge_list()]
    rep = res.representation
    d["representation"] = {"dimension": str(rep.dimension)}
    gens = {}
    n = res.presentation.n
    for i in range(n):
        gens[f"t{i + 1}" if n > 1 else "t"] = Word((Stable(1, i),))
    for k, e in enumerate(intmat.identity(res.word_instance.ambient_rank)):
        gens[f"e{k + 1}"] = Word((Base(e),))
    mats = {name: rep.dense(w) for name, w in gens.items()}
    if rep.dimension <= DENSE_LIMIT:
        d["representation"]["generators"] = {name: rows(m.tolist()) for name, m in mats.items()}
    if matrices_path is not None:
        with open(matrices_path, "w") as fh:
            for name, m in mats.items():
                fh.write(dumps_line({"generator": name, "matrix": rows(m.tolist())}) + "\n")
        d["representation"]["matrix_file"] = str(matrices_path)
    return d, True


def _emit(reports: list[dict], json_out: str | None):
    text = "".join(dumps_line(r) + "\n" for r in reports)
    if json_out:
        Path(json_out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(records, args) -> int:
    reports, ok = [], True
    for rec in records:
        r, good = analysis_json(rec)
        ok &= good
        reports.append(r)
    _emit(reports, args.json_out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_extend(records, args) -> int:
    reports, ok = [], True
    for rec in records:
        r, _ = analysis_json(rec)
        try:
            r["extension"], _ = extension_json(rec)
        except (ExtensionError, ObstructionError) as exc:
            r["extension"] = {"error": str(exc)}
            if isinstance(exc, ObstructionError):
                r["extension"]["kind"] = exc.report["kind"]
            ok = False
        reports.append(r)
    _emit(reports, args.json_out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_rep(records, args) -> int:
    reports, ok = [], True
    for k, rec in enumerate(records):
        r, _ = analysis_json(rec)
        try:
            r["extension"], ext = extension_json(rec)
        except (ExtensionError, ObstructionError) as exc:
            r["extension"] = {"error": str(exc)}
            reports.append(r)
            ok = False
            continue
        mpath = None
        if args.json_out:
            suffix = f".{k}" if len(records) > 1 else ""
            mpath = Path(args.json_out).with_suffix(f"{suffix}.matrices.jsonl")
        try:
            r["rep"], good = rep_json(rec, ext, mpath)
        except PipelineError as exc:
            r["rep"], good = {"error": str(exc)}, False
        ok &= good
        reports.append(r)
    _emit(reports, args.json_out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_reduce(records, args) -> int:
    lines, reports = [], []
    found = False
    for rec in records:
        names = [args.word] if args.word else list(rec.words)
        for name in names:
            if name not in rec.words:
                continue
            found = True
            red = britton_reduce(rec.instance, rec.words[name])
            lines.append(f"{name}: {red}")
            reports.append({"word": name, "reduced": str(red), "t_length": str(red.t_length)})
    if not found:
        print(f"no word named {args.word!r}" if args.word else "no words in file", file=sys.stderr)
        return EXIT_INVALID
    if args.json_out:
        _emit(reports, args.json_out)
    else:
        print("\n".join(lines))
    return EXIT_OK


def cmd_selftest(records, args) -> int:
    results = run_selftest(args.seed, records)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_NEGATIVE


COMMANDS = {
    "analyze": cmd_analyze,
    "extend": cmd_extend,
    "rep": cmd_rep,
    "reduce": cmd_reduce,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hnnlinear", description="Linearity of HNN-extensions of abelian groups.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file", nargs="?", help="line-delimited JSON instance file (optional for selftest)")
    p.add_argument("--word", help="word name for reduce")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json-out", help="write the JSON report here instead of stdout")
    p.add_argument("--version", action="version", version=__version__)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file is None:
            if args.command != "selftest":
                print(f"{args.command} needs an instance file", file=sys.stderr)
                return EXIT_INVALID
            records = None
        else:
            records = load(args.file)
        return COMMANDS[args.command](records, args)
    except (ParseError, InvalidInstanceError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AssertionError as exc:
        print(f"internal assertion: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
