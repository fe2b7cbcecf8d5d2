"""Command-line front end.

Exit codes: 0 success, 1 negative decision (not transformable, verification
failed), 2 bad input or usage, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io as _io
import json
import sys
from dataclasses import asdict, dataclass

from . import io
from .asymptotics import rate_row
from .exceptions import (DimensionMismatch, EmptyTypicalSet, InvalidParameter,
                         InvariantViolation, NotMajorized, NumericalFailure,
                         ParseError, TooLarge)
from .monotones import monotone_report
from .protocol import can_transform, communication_cost, synthesize
from .sampling import crossing_profile, incomparable_fraction
from .simulator import enumerate_branches, run, verify_transformation
from .specvec import Comparison, apply_chain, compare, decompose_t_transforms, sorted_desc
from .states import schmidt_spectrum

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class CommandResult:
    exit_code: int
    stdout_payload: str = ""
    stderr_payload: str = ""


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _fmt(v):
    return "(" + ", ".join(f"{x:.6g}" for x in v) + ")"


def _count(n, noun):
    return f"{n} {noun}" + ("" if n == 1 else "s")


def _cmd_check(args, out):
    psi, phi = io.load_state(args.source), io.load_state(args.target)
    lam_psi, lam_phi = schmidt_spectrum(psi), schmidt_spectrum(phi)
    forward, backward = can_transform(psi, phi), can_transform(phi, psi)
    relation = compare(lam_psi, lam_phi)
    verdict = {
        Comparison.EQUIVALENT: "equivalent",
        Comparison.LEFT_PRECEDES: "transformable",
        Comparison.RIGHT_PRECEDES: "reverse only",
        Comparison.INCOMPARABLE: "incomparable",
    }[relation]
    if args.json:
        json.dump({"source_spectrum": lam_psi.tolist(), "target_spectrum": lam_phi.tolist(),
                   "source_to_target": forward, "target_to_source": backward,
                   "verdict": verdict}, out)
        out.write("\n")
    else:
        out.write(f"source spectrum: {_fmt(lam_psi)}\n")
        out.write(f"target spectrum: {_fmt(lam_phi)}\n")
        out.write(f"source -> target: {'yes' if forward else 'no'}\n")
        out.write(f"target -> source: {'yes' if backward else 'no'}\n")
        out.write(f"{verdict}\n")
    return EXIT_OK if forward else EXIT_NO


def _cmd_synthesize(args, out):
    psi, phi = io.load_state(args.source), io.load_state(args.target)
    try:
        p = synthesize(psi, phi)
    except NotMajorized as exc:
        out.write(f"not transformable: {exc}\n")
        return EXIT_NO
    io.save_protocol(p, args.out)
    n_meas, bits = len(p.measurements), communication_cost(p)
    out.write(f"wrote {args.out}: {len(p.steps)} steps, {_count(n_meas, 'measurement')}, "
              f"{_count(bits, 'bit')}\n")
    for sp in p.synthesis:
        out.write(f"  block {sp.block}: alpha+={sp.alpha_plus:.6f} beta+={sp.beta_plus:.6f} "
                  f"gamma={sp.gamma:.9f} delta={sp.delta:.9f}\n")
    return EXIT_OK


def _cmd_simulate(args, out):
    p, psi = io.load_protocol(args.protocol), io.load_state(args.state)
    if args.enumerate:
        branches = enumerate_branches(p, psi)
        if args.json:
            json.dump({"branches": [
                {"outcomes": list(b.outcomes), "probability": b.probability,
                 "final_state": io.state_to_dict(b.final_state)} for b in branches]}, out)
            out.write("\n")
        else:
            for b in branches:
                out.write(f"outcomes={list(b.outcomes)} probability={b.probability:.12f}\n")
            out.write(f"{len(branches)} branches, total probability "
                      f"{sum(b.probability for b in branches):.12f}\n")
        return EXIT_OK
    final, transcript = run(p, psi, args.seed)
    if args.json:
        json.dump({"transcript": transcript.to_dict(), "final_state": io.state_to_dict(final)}, out)
        out.write("\n")
    else:
        for e in transcript.events:
            shown = "" if e.outcome is None else f" outcome={e.outcome}"
            out.write(f"step {e.step} {e.kind} [{e.party}]{shown} p={e.probability:.6f}\n")
    return EXIT_OK


def _cmd_verify(args, out):
    p = io.load_protocol(args.protocol)
    psi, phi = io.load_state(args.source), io.load_state(args.target)
    report = verify_transformation(p, psi, phi)
    if args.json:
        json.dump(report.to_dict(), out)
        out.write("\n")
    else:
        out.write(f"branches: {report.n_branches}\n")
        out.write(f"total probability: {report.total_probability:.12f}\n")
        out.write(f"min fidelity: {report.min_fidelity:.15f}\n")
        out.write(f"communication: {_count(report.communication_cost, 'bit')}\n")
        out.write("PASS\n" if report.passed else "FAIL\n")
    return EXIT_OK if report.passed else EXIT_NO


def _cmd_monotones(args, out):
    psi, phi = io.load_state(args.source), io.load_state(args.target)
    rep = monotone_report(psi, phi, args.k)
    if args.json:
        json.dump(rep.to_dict(), out)
        out.write("\n")
    else:
        out.write(f"entropy: source {rep.entropy_source:.9f} bits, "
                  f"target {rep.entropy_target:.9f} bits\n")
        for k, (s, t) in rep.power_sums.items():
            out.write(f"power sum k={k:g}: source {s:.9f}, target {t:.9f}\n")
        out.write(f"consistent: {rep.consistent}\n")
    return EXIT_OK


def _cmd_rates(args, out):
    spectrum = io.parse_vector(args.spectrum)
    header = ["n", "delta", "m_formation", "m_distillation", "epsilon",
              "rate_formation", "rate_distillation"]
    rows = []
    for n in args.n:
        for delta in args.delta:
            r = rate_row(spectrum, n, delta)
            rows.append([r.n, r.delta, r.m_formation, r.m_distillation, r.epsilon,
                         r.rate_formation, r.rate_distillation])
    if args.csv:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        out.write("{:>6} {:>7} {:>11} {:>14} {:>11} {:>14} {:>17}\n".format(*header))
        for r in rows:
            out.write(f"{r[0]:>6} {r[1]:>7.3g} {r[2]:>11} {r[3]:>14} {r[4]:>11.3e} "
                      f"{r[5]:>14.6f} {r[6]:>17.6f}\n")
    return EXIT_OK


def _cmd_sample(args, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["d", "n_samples", "fraction", "std_error", "seed"])
    for d in args.dim:
        w.writerow(incomparable_fraction(d, args.n, args.seed).to_row())
    if args.crossings:
        out.write("\n")
        w.writerow(["d", "sign_changes", "count"])
        for d in args.dim:
            for changes, count in crossing_profile(d, args.n, args.seed).items():
                w.writerow([d, changes, count])
    return EXIT_OK


def _cmd_decompose(args, out):
    x, y = io.parse_vector(args.x), io.parse_vector(args.y)
    try:
        chain = decompose_t_transforms(x, y)
    except NotMajorized as exc:
        out.write(f"not majorized: {exc}\n")
        return EXIT_NO
    if args.json:
        json.dump({"transforms": [asdict(T) for T in chain]}, out)
        out.write("\n")
    else:
        for T in chain:
            out.write(f"T(i={T.i}, j={T.j}, t={T.t:.12g})\n")
        d = max(x.size, y.size)
        ys = sorted_desc(list(y) + [0.0] * (d - y.size))
        out.write(f"result: {_fmt(apply_chain(ys, chain))}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="locctransform", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="decide transformability in both directions")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("synthesize", help="write an explicit LOCC protocol")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("simulate", help="run a protocol on a state")
    p.add_argument("--protocol", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--enumerate", action="store_true", help="list every branch")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="check every branch reaches the target")
    p.add_argument("--protocol", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("monotones", help="entropy and power sums of both spectra")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--k", type=_float_list, default=[2.0, 3.0, 4.0])
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_monotones)

    p = sub.add_parser("rates", help="EPR counts for n copies of a spectrum")
    p.add_argument("--spectrum", required=True, help="JSON array or file")
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated copy counts")
    p.add_argument("--delta", type=_float_list, required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("sample", help="Monte Carlo incomparability fraction")
    p.add_argument("--dim", type=_int_list, required=True, help="comma-separated dimensions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--crossings", action="store_true", help="also emit the sign-change histogram")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("decompose", help="T-transform chain taking y to x")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_decompose)
    return parser


def dispatch(argv) -> CommandResult:
    out = _io.StringIO()
    try:
        args = build_parser().parse_args(argv)
        code = args.func(args, out)
    except _UsageError as exc:
        return CommandResult(EXIT_USAGE, out.getvalue(), str(exc))
    except NumericalFailure as exc:
        return CommandResult(EXIT_NUMERIC, out.getvalue(), f"numerical failure: {exc}")
    except (ParseError, InvariantViolation, InvalidParameter, DimensionMismatch,
            TooLarge, EmptyTypicalSet, ValueError) as exc:
        msg = " ".join(str(exc).split())
        return CommandResult(EXIT_USAGE, out.getvalue(), f"error: {msg}")
    return CommandResult(code, out.getvalue())


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    with contextlib.suppress(SystemExit):
        result = dispatch(argv)
        sys.stdout.write(result.stdout_payload)
        if result.stderr_payload:
            sys.stderr.write(result.stderr_payload.rstrip("\n") + "\n")
        return result.exit_code
    return EXIT_OK  # --help
