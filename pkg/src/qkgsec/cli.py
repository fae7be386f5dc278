"""Command-line entry point.

    qkgsec profile analyze --profile FILE [--l BITS]
    qkgsec profile worstcase --n INT --ie-per-bit FLOAT
    qkgsec pamp experiment --profile FILE --out-bits R --seeds COUNT --rng-seed INT
    qkgsec fock decohere --n1 INT --n2 INT --eta-grid START:STOP:STEP [--out json|csv|PATH]
    qkgsec fock qfi --state noon|eq2|coherent|squeezed [--N INT | --alpha F | --squeeze F] --generator G
    qkgsec fock cat --alpha FLOAT --eta FLOAT [--parity 1|-1]
    qkgsec reproduce 1..10|all

Exit status is 0 on success, 1 on a domain error (JSON on stderr) or a
failed reproduction, and 2 on a usage error.  ``FILE`` may be ``-`` for
stdin.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import io
import json
import sys
from typing import Optional, Sequence, Tuple

import numpy as np

from qkgsec import config
from qkgsec.errors import DomainError
from qkgsec.io import dumps, rows_to_csv
from qkgsec.pamp import pa_experiment
from qkgsec.profile import analyze, check_bounds, profile_from_dict
from qkgsec.worstcase import solve_spike_for_mutual_info, spike_profile


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


class InputError(DomainError):
    """Unreadable or malformed input file."""


def _read_json(path: str, stdin: Optional[bytes]):
    try:
        if path == "-":
            text = (stdin or b"").decode("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return json.loads(text)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path!r}: {exc}") from None


def _parse_grid(spec: str):
    try:
        start, stop, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise _Usage(f"--eta-grid must look like START:STOP:STEP, got {spec!r}") from None
    if step <= 0 or stop < start:
        raise _Usage("--eta-grid needs step > 0 and stop >= start")
    count = int(round((stop - start) / step)) + 1
    return [float(np.round(start + i * step, 12)) for i in range(count)]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qkgsec", description="Security measures and lossy Fock-space decoherence.")
    parser.add_argument("--config", help="JSON file overriding caps and tolerances")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    prof = groups.add_parser("profile").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = prof.add_parser("analyze", help="security report of a profile file")
    p.add_argument("--profile", required=True)
    p.add_argument("--l", type=float, help="also check the bounds for p1 <= 2**-l")
    p = prof.add_parser("worstcase", help="spike profile leaking n * ie-per-bit bits")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ie-per-bit", type=float, required=True)

    pamp = groups.add_parser("pamp").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = pamp.add_parser("experiment", help="Toeplitz privacy amplification on a dense profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--out-bits", type=int, required=True)
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--rng-seed", type=int, required=True)

    fock = groups.add_parser("fock").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = fock.add_parser("decohere", help="trace distance of a number superposition under loss")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--eta-grid", required=True)
    p.add_argument("--out", default="json", help="json, csv (stdout) or a CSV file path")
    p = fock.add_parser("qfi", help="quantum Fisher information of a state")
    p.add_argument("--state", choices=["noon", "eq2", "coherent", "squeezed"], required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--squeeze", type=float)
    p.add_argument(
        "--generator", choices=["mode1", "mode2", "relative", "total", "all"], default="mode1"
    )
    p = fock.add_parser("cat", help="lossy cat state versus its incoherent mixture")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--parity", type=int, choices=[1, -1], default=1)

    p = groups.add_parser("reproduce", help="run an acceptance experiment")
    p.add_argument("criterion", choices=[str(k) for k in range(1, 11)] + ["all"])
    return parser


def _cmd_profile(args, stdin):
    if args.cmd == "analyze":
        profile = profile_from_dict(_read_json(args.profile, stdin))
        report = analyze(profile)
        if args.l is None:
            return 0, dumps(report) + "\n"
        return 0, dumps({"report": report, "bounds": check_bounds(report, args.l)}) + "\n"
    if args.n < 1:
        raise DomainError("--n must be positive")
    delta = solve_spike_for_mutual_info(args.n, args.n * args.ie_per_bit)
    profile = spike_profile(args.n, delta)
    return 0, dumps({"profile": profile, "report": analyze(profile)}) + "\n"


def _cmd_pamp(args, stdin):
    profile = profile_from_dict(_read_json(args.profile, stdin)).materialize()
    rec = pa_experiment(profile, args.out_bits, args.seeds, args.rng_seed)
    return 0, dumps(rec) + "\n"


def _qfi_state(args):
    from qkgsec.fock.states import Coherent, NumberSuperposition, SqueezedVacuum, make_state

    def need(name):
        value = getattr(args, name)
        if value is None:
            raise _Usage(f"--state {args.state} requires --{name}")
        return value

    if args.state == "noon":
        return make_state(NumberSuperposition(need("N"), 0))
    if args.state == "eq2":
        n = need("N")
        return make_state(NumberSuperposition(n, n - 1))
    if args.state == "coherent":
        return make_state(Coherent(need("alpha")))
    return make_state(SqueezedVacuum(need("squeeze")))


def _cmd_fock(args, stdin):
    from qkgsec.fock.metrology import Generator, cat_decoherence, decoherence_curve, qfi

    if args.cmd == "decohere":
        rows = decoherence_curve(args.n1, args.n2, _parse_grid(args.eta_grid))
        if args.out == "csv":
            return 0, rows_to_csv(rows)
        if args.out != "json":
            try:
                with open(args.out, "w", encoding="utf-8", newline="") as fh:
                    fh.write(rows_to_csv(rows))
            except OSError as exc:
                raise InputError(f"cannot write {args.out!r}: {exc}") from None
        return 0, dumps({"n1": args.n1, "n2": args.n2, "rows": rows}) + "\n"
    if args.cmd == "qfi":
        state = _qfi_state(args)
        names = ["mode1", "mode2", "relative", "total"] if args.generator == "all" else [args.generator]
        records = []
        for name in names:
            res = qfi(state, Generator(name))
            records.append({"state": args.state, "generator": name, **res.to_dict()})
        mean_n = float((state.probabilities() * Generator.TOTAL_NUMBER.diagonal(state.cutoff1, state.cutoff2)).sum())
        out = records[0] if len(records) == 1 else {"state": args.state, "results": records}
        out = {**out, "mean_photon_number": mean_n, "cutoff1": state.cutoff1, "cutoff2": state.cutoff2}
        return 0, dumps(out) + "\n"
    return 0, dumps(cat_decoherence(args.alpha, args.eta, args.parity)) + "\n"


def _cmd_reproduce(args, stdin):
    from qkgsec import reproduce

    if args.criterion == "10":
        first = dumps(reproduce.run())
        second = dumps(reproduce.run())
        same = first == second
        result = {
            "criterion": 10,
            "name": "reproduce reruns criteria 1-9 byte-identically",
            "passed": same,
            "measured": {"bytes": len(first), "identical": same},
        }
        results = [result]
    elif args.criterion == "all":
        results = reproduce.run()
    else:
        results = reproduce.run([int(args.criterion)])
    passed = all(r["passed"] for r in results)
    lines = [
        f"criterion {r['criterion']}: {'PASS' if r['passed'] else 'FAIL'}  {r['name']}" for r in results
    ]
    text = "\n".join(lines) + "\n" + dumps({"all_passed": passed, "results": results}) + "\n"
    return (0 if passed else 1), text


COMMANDS = {
    "profile": _cmd_profile,
    "pamp": _cmd_pamp,
    "fock": _cmd_fock,
    "reproduce": _cmd_reproduce,
}


def _load_config(path: str, stdin):
    data = _read_json(path, stdin)
    if not isinstance(data, dict):
        raise InputError("config file must hold a JSON object")
    try:
        config.update(**data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad config: {exc}") from None


def execute_command(argv: Sequence[str], stdin: Optional[bytes] = None) -> Tuple[int, bytes, bytes]:
    """Run one command and return ``(exit_code, stdout, stderr)``."""
    saved = dataclasses.replace(config.settings)
    err = io.StringIO()
    try:
        with contextlib.redirect_stderr(err):
            try:
                args = build_parser().parse_args(list(argv))
            except SystemExit as exc:  # --help
                return int(exc.code or 0), b"", err.getvalue().encode()
        if args.config:
            _load_config(args.config, stdin)
        code, out = COMMANDS[args.group](args, stdin)
        return code, out.encode(), b""
    except _Usage as exc:
        return 2, b"", (str(exc) + "\n").encode()
    except DomainError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        return 1, b"", (dumps(payload) + "\n").encode()
    finally:
        for f in dataclasses.fields(config.Settings):
            setattr(config.settings, f.name, getattr(saved, f.name))


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    stdin = None
    if "-" in argv:
        stdin = sys.stdin.buffer.read()
    code, out, err = execute_command(argv, stdin)
    sys.stdout.buffer.write(out)
    sys.stderr.buffer.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
