"""
spectrum: probe every order up to n_max and compare with the closed form
"""
import argparse
from pathlib import Path

from models.graph import BlockShape
from models.schemas import ProbeStatus
from routers.common import cli_errors, common_parser, print_trace
from services.spectrum_service import cmd_spectrum, write_report


def register(subparsers):
    p = subparsers.add_parser("spectrum", parents=[common_parser()], help="witnessed orders n for (gamma, v)")
    p.add_argument("--gamma", required=True, help="shape containing a P4, e.g. C4, P5, C9")
    p.add_argument("--v", type=int, required=True, help="domain order")
    p.add_argument("--n-max", type=int, required=True, help="largest order probed")
    p.add_argument("--csv", action="store_true", help="also write report.csv")
    p.set_defaults(handler=run_spectrum)


@cli_errors
def run_spectrum(args: argparse.Namespace) -> int:
    gamma = BlockShape.parse(args.gamma)
    out_dir = Path(args.output) if args.output else Path(f"spectrum-{gamma.label}-v{args.v}")
    out_dir.mkdir(parents=True, exist_ok=True)

    report = cmd_spectrum(gamma, args.v, args.n_max, out_dir)
    write_report(report, out_dir)
    frame = report.to_frame()
    if args.csv:
        frame.to_csv(out_dir / "report.csv", index=False)
    print(frame.to_string(index=False))
    print(f"witnessed: {report.witnessed()}  eta: {report.eta}")

    matches = report.matches_closed_form()
    if matches is not None:
        print(f"closed form {'matches' if matches else 'DIFFERS'}: {report.closed_form}")
    print_trace([f"{e.n}: {e.bundle}" for e in report.entries if e.bundle], args)

    failed = any(e.status == ProbeStatus.FAILED for e in report.entries)
    return 1 if failed or matches is False else 0
