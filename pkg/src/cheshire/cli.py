"""Command-line entry point: ``cheshire verify|table|dump|pointer|circuit``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .core import POLS, BasisLabel, LinearOperator
from .observables import CONVENTIONS, DEFAULT_CONVENTION, ActionTable, observable
from .states import get_state

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_OP_KINDS = {"pi": "pi", "position": "pi", "sigma_zz": "zz", "zz": "zz", "sigma_zx": "zx", "zx": "zx"}


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--convention", choices=CONVENTIONS, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("markdown", "json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    return common


def _g_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid coupling list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="cheshire",
        description="Exact weak values for twin quantum Cheshire cat pre/post-selections.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="compare the engine with the published table")
    p.add_argument("--json", action="store_true", help="machine-readable manifest")
    p.add_argument("--allow-convention-gaps", action="store_true")

    p = sub.add_parser("table", parents=[common], help="weak-value table for one post-selection")
    p.add_argument("--post", choices=("phi1", "phi2"), required=True)

    p = sub.add_parser("dump", parents=[common], help="print states or observables")
    dsub = p.add_subparsers(dest="what", required=True)
    d = dsub.add_parser("state", parents=[common])
    d.add_argument("--state", required=True)
    d = dsub.add_parser("observable", parents=[common])
    d.add_argument("--op", choices=sorted(_OP_KINDS), required=True)
    d.add_argument("--arms", required=True)

    p = sub.add_parser("pointer", parents=[common], help="dynamic pointer simulation")
    psub = p.add_subparsers(dest="action", required=True)
    s = psub.add_parser("sweep", parents=[common])
    s.add_argument("--op", choices=sorted(_OP_KINDS), required=True)
    s.add_argument("--arms", required=True)
    s.add_argument("--post", choices=("phi1", "phi2"), required=True)
    s.add_argument("--g", type=_g_list, default=[0.1, 0.03, 0.01, 0.003])
    s.add_argument("--width", type=float, default=1.0)
    s.add_argument("--range", dest="half_range", type=float, default=None)
    s.add_argument("--points", type=int, default=4096)
    s.add_argument("--json", action="store_true")

    p = sub.add_parser("circuit", parents=[common], help="optical circuit tools")
    csub = p.add_subparsers(dest="action", required=True)
    r = csub.add_parser("run", parents=[common])
    r.add_argument("--file", default=None, help="circuit JSON; default is the bare tuned layout")
    r.add_argument("--report", choices=("clicks", "conditioned"), default="clicks")
    r.add_argument("--pair", default=None, help="detector pair such as D11,D22")
    csub.add_parser("search-phi1", parents=[common])
    y = csub.add_parser("synthesize", parents=[common])
    y.add_argument("--target", choices=("phi1", "phi2"), default="phi2")
    y.add_argument("--restarts", type=int, default=100)
    y.add_argument("--tolerance", type=float, default=1e-6)
    return parser


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_verify(args) -> int:
    from .verify import cmd_verify

    manifest = cmd_verify(args.convention)
    if args.json or args.format == "json":
        _emit(json.dumps(manifest.to_dict(), indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "status", "expected", "actual", "note"])
        for c in manifest.checks:
            w.writerow([c.id, c.status, "; ".join(c.expected), "; ".join(c.actual), c.note])
        _emit(buf.getvalue())
    else:
        _emit(manifest.render_text())
    return manifest.exit_code(args.allow_convention_gaps)


def _cmd_table(args) -> int:
    from .weak import build_report, render

    _emit(render(build_report(args.post, args.convention), args.format))
    return EXIT_OK


def _dump_state(args) -> int:
    st = get_state(args.state)
    vec = st.vector
    labels = (
        [str(BasisLabel.from_index(k)) for k in range(16)] if vec.dim == 16 else [f"|{p}>" for p in POLS]
    )
    if args.format == "json":
        _emit(json.dumps({"name": st.name, "basis": labels, "amplitudes": vec.to_json()}, indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "label", "value", "float"])
        for k, a in enumerate(vec):
            w.writerow([k, labels[k], a.to_string(), repr(float(a))])
        _emit(buf.getvalue())
    else:
        rows = [f"| {k} | {labels[k]} | {a} |" for k, a in enumerate(vec) if a]
        _emit("\n".join([f"### {st.name}", "", "| index | label | amplitude |", "|---|---|---|", *rows]))
    return EXIT_OK


def _dump_observable(args) -> int:
    op = observable(_OP_KINDS[args.op], args.arms, args.convention)
    if isinstance(op, ActionTable):
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["index", "label", "image_on_psi"])
            for k, a in enumerate(op.image):
                w.writerow([k, str(BasisLabel.from_index(k)), a.to_string()])
            _emit(buf.getvalue())
        else:
            _emit(json.dumps({"convention": args.convention, "action_table": op.to_json()}, indent=2))
        return EXIT_OK
    assert isinstance(op, LinearOperator)
    if args.format == "json":
        _emit(json.dumps({
            "op": args.op, "arms": args.arms, "convention": args.convention,
            "hermitian": op.hermitian_flag, "matrix": op.to_json(),
        }, indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(op.to_json())
        _emit(buf.getvalue())
    else:
        lines = [
            f"### {args.op}^{args.arms} ({args.convention}), hermitian={op.hermitian_flag}",
            "", "| row | col | entry |", "|---|---|---|",
        ]
        for r in range(16):
            for c in range(16):
                if op[r, c]:
                    lines.append(
                        f"| {BasisLabel.from_index(r)} | {BasisLabel.from_index(c)} | {op[r, c]} |"
                    )
        _emit("\n".join(lines))
    return EXIT_OK


def _cmd_pointer(args) -> int:
    from .pointer import convergence_sweep, make_pointer
    from .states import make_postselected, make_preselected

    op = observable(_OP_KINDS[args.op], args.arms, args.convention)
    if not isinstance(op, LinearOperator):
        raise ValueError("pointer simulation needs a matrix-form convention")
    pointer = make_pointer(args.width, args.half_range, args.points)
    result = convergence_sweep(op, make_preselected(), make_postselected(args.post), args.g, pointer)
    if args.json or args.format == "json":
        _emit(json.dumps(result.to_dict(), indent=2))
        return EXIT_OK
    lines = [
        f"pointer sweep: {args.op}^{args.arms}, post = {args.post}, convention = {args.convention}",
        f"exact weak value: {result.exact_weak_value:.12g}",
        "",
        "| g | shift/g | abs error | success probability |",
        "|---|---|---|---|",
    ]
    for row in result.rows:
        lines.append(f"| {row.g:.3g} | {row.ratio:.10f} | {row.error:.3e} | {row.probability:.8f} |")
    lines += [f"warning: {w}" for w in result.warnings]
    _emit("\n".join(lines))
    return EXIT_OK


def _cmd_circuit(args) -> int:
    from . import interferometer as ifm

    if args.action == "run":
        circuit = ifm.OpticalCircuit.load(args.file) if args.file else ifm.bare_circuit()
        if args.report == "clicks":
            stats = ifm.click_statistics(circuit, ifm.propagate(circuit))
            if args.format == "json":
                _emit(json.dumps({f"{a}+{b}": p.to_string() for (a, b), p in stats.items()}, indent=2))
            else:
                _emit("\n".join(f"{a}+{b}: {p}" for (a, b), p in stats.items()))
            return EXIT_OK
        pairs = [tuple(args.pair.split(","))] if args.pair else list(ifm.PURE_PAIRS)
        out = {}
        for pair in pairs:
            cond = ifm.conditioned_state(circuit, pair, allow_zero=True)
            out[f"{pair[0]}+{pair[1]}"] = {
                "probability": cond.probability.to_string(),
                "state": cond.vector.to_json(),
            }
        _emit(json.dumps(out, indent=2))
        return EXIT_OK
    if args.action == "search-phi1":
        res = ifm.hwp_search_phi1()
        if res.warning:
            sys.stderr.write(res.warning + "\n")
        if args.format == "json":
            _emit(json.dumps(res.to_dict(), indent=2))
        else:
            lines = [f"enumerated {len(res.configurations)} configurations; found: {res.found}"]
            lines += [c.describe() for c in res.configurations]
            if res.warning:
                lines.append(res.warning)
            _emit("\n".join(lines))
        return EXIT_OK
    from .synthesis import unitary_synthesis_phi2

    res = unitary_synthesis_phi2(args.tolerance, args.restarts, args.seed, args.target)
    if args.format == "json":
        _emit(json.dumps(res.to_dict(), indent=2))
    else:
        _emit(f"[non-exact, floating point] {res.finding}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("convention", DEFAULT_CONVENTION), ("format", "markdown"), ("seed", 0)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "table":
            return _cmd_table(args)
        if args.command == "dump":
            return _dump_state(args) if args.what == "state" else _dump_observable(args)
        if args.command == "pointer":
            return _cmd_pointer(args)
        return _cmd_circuit(args)
    except (ValueError, ZeroDivisionError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
