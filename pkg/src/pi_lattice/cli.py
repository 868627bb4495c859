"""Command line entry point: ``pi-lattice <subcommand> MODEL [options]``.

Exit codes: 0 success, 1 model not regular, 2 check failed, 3 usage or
format error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from typing import Sequence

from . import engine
from .config import CheckConfig
from .errors import ExprError, FormatError, NoRationalSolution, PiLatticeError, RankDeficient, SamplingExhausted
from .fields import Field, get_field
from .model_io import ModelFile, Report, emit_report, load_model

EXIT_OK, EXIT_NOT_REGULAR, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pi-lattice", description="Exact dimensional analysis on dimensional-matrix files.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("model", help="model file (.csv or .json), or - for stdin")
        sp.add_argument("--format", choices=["csv", "json"], help="input format (default: from suffix or content)")
        sp.add_argument("--json", action="store_true", help="emit the JSON report instead of text")
        sp.add_argument("--field", choices=["rational", "float", "complex"], help="scalar field (default rational)")
        sp.add_argument("--repeating", help="comma separated repeating variables, overriding the file")
        return sp

    common(sub.add_parser("analyze", help="regularity verdict and exponent matrix"))
    common(sub.add_parser("pi", help="pi groups and powers"))
    sp = common(sub.add_parser("check", help="sampled covariance and representation checks"))
    sp.add_argument("--phi", help="scalar model expression (default: from the model file)")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=None)
    sp = common(sub.add_parser("scale", help="scaling-law exponent for a repeating variable"))
    sp.add_argument("--var", required=True)
    sp = common(sub.add_parser("psi-eval", help="evaluate the reduced function at pi coordinates"))
    sp.add_argument("--phi", help="scalar model expression (default: from the model file)")
    sp.add_argument("--at", default="", help="comma separated pi coordinates pi_1,...")
    return p


def _base_report(command: str, mf: ModelFile, field: Field) -> Report:
    return Report(command=command, model=mf.to_dict(), regular=True, field=field.name)


def fill_model(report: Report, model: engine.RegularModel) -> None:
    report.repeating = list(model.repeating)
    report.matrix = [
        {"name": model.names[i], "row": list(model.row(i)), "power": model.power(i)} for i in range(model.n + 1)
    ]
    report.pi_groups = [
        {
            "index": g.index,
            "name": g.name,
            "power": g.power,
            "exponents": list(g.exponents),
            "text": g.render(),
        }
        for g in engine.compute_pi_groups(model)
    ]


def check_dict(rep: engine.CheckReport, field: Field) -> dict:
    d = asdict(rep)
    ce = rep.counterexample
    if ce is not None:
        d["counterexample"] = {
            "trial": ce.trial,
            "kind": ce.kind,
            "arguments": [field.format(v) for v in ce.arguments],
            "lambdas": [field.format(v) for v in ce.lambdas],
            "lhs": field.format(ce.lhs),
            "rhs": field.format(ce.rhs),
        }
    return d


def _phi_source(args, mf: ModelFile) -> str:
    src = args.phi if args.phi is not None else mf.phi
    if not src:
        raise UsageError("no scalar model given: pass --phi or add a phi to the model file")
    return src


def run_command(args) -> tuple[int, Report]:
    mf = load_model(args.model, args.format)
    field = get_field(args.field or mf.field or "rational")
    report = _base_report(args.command, mf, field)
    repeating = mf.repeating
    if args.repeating is not None:
        repeating = tuple(s.strip() for s in args.repeating.split(",") if s.strip())
        names = {v.name for v in mf.inputs}
        for name in repeating:
            if name not in names:
                raise UsageError(f"--repeating names {name!r}, which is not an input variable")
    names, dims = mf.ordered()
    try:
        model = engine.build_model(names, dims, repeating)
    except (RankDeficient, NoRationalSolution) as exc:
        report.regular = False
        report.error = str(exc)
        return EXIT_NOT_REGULAR, report
    fill_model(report, model)

    if args.command in ("analyze", "pi"):
        report.scaling = _scaling_rows(model)
        return EXIT_OK, report

    if args.command == "scale":
        try:
            law = engine.scaling_law(model, args.var)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        report.scaling = [_scaling_row(law)]
        return EXIT_OK, report

    phi = engine.scalar_model(_phi_source(args, mf), model, field)

    if args.command == "check":
        try:
            cfg = CheckConfig.from_env(trials=args.trials, seed=args.seed, field=field.name)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        seed = cfg.seed
        report.seed, report.trials = seed, cfg.trials
        cov = engine.check_covariance(phi, model, cfg.trials, seed, field)
        report.checks.append(check_dict(cov, field))
        if cov.passed:
            rep = engine.verify_representation(phi, model, cfg.trials, seed, field)
        else:
            rep = engine.CheckReport("representation", False, cfg.trials, seed, reason="skipped: covariance failed")
        report.checks.append(check_dict(rep, field))
        return (EXIT_OK if cov.passed and rep.passed else EXIT_CHECK_FAILED), report

    # psi-eval
    if phi.reads_output:
        raise UsageError(f"the scalar model may not read the output variable {model.output!r}")
    at = [s for s in (x.strip() for x in args.at.split(",")) if s]
    want = model.n - model.r
    if len(at) != want:
        raise UsageError(f"--at needs {want} pi coordinate(s), got {len(at)}")
    try:
        coords = [field.parse(s) for s in at]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read pi coordinates {args.at!r} in the {field.name} field") from None
    psi = engine.construct_psi(phi, model, field=field)
    value = psi(*coords)
    report.psi = {"at": [field.format(c) for c in coords], "value": field.format(value)}
    return EXIT_OK, report


def _scaling_row(law: engine.ScalingLaw) -> dict:
    return {"variable": law.name, "exponent": law.exponent, "identity": law.identity_text()}


def _scaling_rows(model: engine.RegularModel) -> list[dict]:
    return [_scaling_row(engine.scaling_law(model, j)) for j in range(1, model.r + 1)]


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _parser().parse_args(argv)
        code, report = run_command(args)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"format error: {exc}", file=stderr)
        return EXIT_USAGE
    except ExprError as exc:
        print(f"expression error: {exc}", file=stderr)
        return EXIT_USAGE
    except SamplingExhausted as exc:
        print(f"check aborted: {exc}", file=stderr)
        return EXIT_CHECK_FAILED
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except PiLatticeError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NOT_REGULAR
    # buffered: nothing is written until the whole report exists
    text = emit_report(report, "json" if args.json else "text")
    stdout.write(text)
    if code == EXIT_NOT_REGULAR:
        print(report.error, file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
