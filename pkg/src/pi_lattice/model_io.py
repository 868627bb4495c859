"""Dimensional-matrix files in, analysis reports out.

CSV models have a header ``name,role,<sym1>,<sym2>,...`` and one row per
variable with integer exponents. Lines starting with ``#`` are comments,
except directives of the form ``# key = value`` for ``repeating`` (comma
separated names), ``phi``, ``field`` and ``title``. JSON models mirror :class:`ModelFile`.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path
from typing import IO, Any

from .dimensions import BaseDimensionSet, Dimension
from .errors import FormatError
from .fields import FIELDS

__all__ = ["Variable", "ModelFile", "Report", "load_model", "loads_model", "dump_model", "emit_report", "render_text"]

ROLES = ("output", "input")
DIRECTIVES = ("title", "repeating", "phi", "field")


@dataclass(frozen=True)
class Variable:
    name: str
    role: str
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class ModelFile:
    base: tuple[str, ...]
    variables: tuple[Variable, ...]
    repeating: tuple[str, ...] | None = None
    phi: str | None = None
    field: str | None = None
    title: str | None = None

    @property
    def base_set(self) -> BaseDimensionSet:
        return BaseDimensionSet(self.base)

    @property
    def output(self) -> Variable:
        return next(v for v in self.variables if v.role == "output")

    @property
    def inputs(self) -> tuple[Variable, ...]:
        return tuple(v for v in self.variables if v.role == "input")

    def ordered(self) -> tuple[list[str], list[Dimension]]:
        """Names and dimensions with the output first, inputs in file order."""
        base = self.base_set
        vs = (self.output,) + self.inputs
        return [v.name for v in vs], [Dimension(base, v.exponents) for v in vs]

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "base": list(self.base),
            "variables": [{"name": v.name, "role": v.role, "exponents": list(v.exponents)} for v in self.variables],
        }
        for key in ("repeating", "phi", "field", "title"):
            value = getattr(self, key)
            if value is not None:
                d[key] = list(value) if key == "repeating" else value
        return d


def _validate(base, variables, repeating, fld, locus_of) -> None:
    """Semantic checks shared by both formats; ``locus_of(kind, i)`` names the spot."""
    names = set()
    outputs = []
    for i, v in enumerate(variables):
        if v.name in names:
            raise FormatError(f"duplicate variable name {v.name!r}", locus_of("name", i))
        names.add(v.name)
        if v.role == "output":
            outputs.append(i)
    if not outputs:
        raise FormatError("no output variable", locus_of("outputs", None))
    if len(outputs) > 1:
        raise FormatError("more than one output variable", locus_of("role", outputs[1]))
    if repeating is not None:
        inputs = {v.name for v in variables if v.role == "input"}
        seen = set()
        for k, name in enumerate(repeating):
            if name not in inputs:
                raise FormatError(f"repeating variable {name!r} is not a declared input", locus_of("repeating", k))
            if name in seen:
                raise FormatError(f"repeating variable {name!r} listed twice", locus_of("repeating", k))
            seen.add(name)
    if fld is not None and fld not in FIELDS:
        raise FormatError(f"unknown field {fld!r}", locus_of("field", None))


def _int_entry(text: Any, locus, allow_str: bool = True) -> int:
    if isinstance(text, bool):
        raise FormatError(f"exponent {text!r} is not an integer", locus)
    if isinstance(text, int):
        return text
    if isinstance(text, str) and allow_str:
        s = text.strip()
        try:
            return int(s)
        except ValueError:
            pass
    raise FormatError(f"exponent {text!r} is not an integer", locus)


def _parse_csv(text: str) -> ModelFile:
    directives: dict[str, tuple[str, int]] = {}
    data_lines: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            key, sep, value = body.partition("=")
            key = key.strip().lower()
            if sep and key in DIRECTIVES:
                if key in directives:
                    raise FormatError(f"directive {key!r} given twice", lineno)
                directives[key] = (value.strip(), lineno)
            continue
        data_lines.append((lineno, line))
    if not data_lines:
        raise FormatError("empty model file", 1)
    rows = list(csv.reader([line for _, line in data_lines]))
    header_line = data_lines[0][0]
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 or header[0].lower() != "name" or header[1].lower() != "role":
        raise FormatError("header must start with 'name,role'", header_line)
    symbols = tuple(header[2:])
    try:
        BaseDimensionSet(symbols)
    except ValueError as exc:
        raise FormatError(str(exc), header_line) from None
    variables = []
    line_of = []
    for (lineno, _), row in zip(data_lines[1:], rows[1:]):
        cells = [c.strip() for c in row]
        if len(cells) != len(header):
            raise FormatError(f"expected {len(header)} fields, found {len(cells)}", lineno)
        name, role = cells[0], cells[1].lower()
        if not name:
            raise FormatError("empty variable name", lineno)
        if role not in ROLES:
            raise FormatError(f"role must be 'output' or 'input', got {cells[1]!r}", lineno)
        exps = tuple(_int_entry(c, lineno) for c in cells[2:])
        variables.append(Variable(name, role, exps))
        line_of.append(lineno)

    repeating = None
    if "repeating" in directives:
        value, _ = directives["repeating"]
        repeating = tuple(s.strip() for s in value.split(",") if s.strip())
    fld = directives.get("field", (None, None))[0]
    phi = directives.get("phi", (None, None))[0]
    title = directives.get("title", (None, None))[0]

    def locus_of(kind, i):
        if kind in ("name", "role"):
            return line_of[i]
        if kind in ("repeating", "field"):
            return directives[kind][1]
        return data_lines[-1][0]

    _validate(symbols, variables, repeating, fld, locus_of)
    return ModelFile(symbols, tuple(variables), repeating, phi or None, fld, title or None)


def _parse_json(text: str) -> ModelFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from None
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object", "$")
    base = doc.get("base")
    if not isinstance(base, list) or not all(isinstance(s, str) for s in base):
        raise FormatError("'base' must be a list of symbol strings", "$.base")
    try:
        BaseDimensionSet(base)
    except ValueError as exc:
        raise FormatError(str(exc), "$.base") from None
    raw_vars = doc.get("variables")
    if not isinstance(raw_vars, list):
        raise FormatError("'variables' must be a list", "$.variables")
    variables = []
    for i, rv in enumerate(raw_vars):
        where = f"$.variables[{i}]"
        if not isinstance(rv, dict):
            raise FormatError("variable entries must be objects", where)
        name = rv.get("name")
        if not isinstance(name, str) or not name:
            raise FormatError("missing or empty name", f"{where}.name")
        role = rv.get("role")
        if role not in ROLES:
            raise FormatError(f"role must be 'output' or 'input', got {role!r}", f"{where}.role")
        exps = rv.get("exponents")
        if not isinstance(exps, list):
            raise FormatError("'exponents' must be a list", f"{where}.exponents")
        if len(exps) != len(base):
            raise FormatError(f"expected {len(base)} exponents, found {len(exps)}", f"{where}.exponents")
        exps = tuple(_int_entry(e, f"{where}.exponents[{k}]", allow_str=False) for k, e in enumerate(exps))
        variables.append(Variable(name, role, exps))
    repeating = doc.get("repeating")
    if repeating is not None:
        if not isinstance(repeating, list) or not all(isinstance(s, str) for s in repeating):
            raise FormatError("'repeating' must be a list of names", "$.repeating")
        repeating = tuple(repeating)
    phi = doc.get("phi")
    if phi is not None and not isinstance(phi, str):
        raise FormatError("'phi' must be a string", "$.phi")
    fld = doc.get("field")
    title = doc.get("title")

    def locus_of(kind, i):
        if kind in ("name", "role"):
            return f"$.variables[{i}].{kind}"
        if kind == "repeating":
            return f"$.repeating[{i}]"
        if kind == "field":
            return "$.field"
        return "$.variables"

    _validate(tuple(base), variables, repeating, fld, locus_of)
    return ModelFile(tuple(base), tuple(variables), repeating, phi, fld, title)


def _sniff(text: str) -> str:
    return "json" if text.lstrip().startswith(("{", "[")) else "csv"


def loads_model(text: str, format: str | None = None) -> ModelFile:
    text = text.lstrip("﻿")
    fmt = format or _sniff(text)
    if fmt == "csv":
        return _parse_csv(text)
    if fmt == "json":
        return _parse_json(text)
    raise ValueError(f"unknown model format {format!r}")


def load_model(source: str | Path | IO[str], format: str | None = None) -> ModelFile:
    """Read a model from a path, ``-`` for stdin, or an open text stream."""
    if hasattr(source, "read"):
        text = source.read()
    elif str(source) == "-":
        text = sys.stdin.read()
    else:
        path = Path(source)
        text = path.read_bytes().decode("utf-8")
        if format is None and path.suffix.lower() in (".csv", ".json"):
            format = path.suffix.lower()[1:]
    return loads_model(text, format)


def dump_model(mf: ModelFile, format: str = "json") -> str:
    if format == "json":
        return json.dumps(mf.to_dict(), indent=2) + "\n"
    if format != "csv":
        raise ValueError(f"unknown model format {format!r}")
    buf = io.StringIO()
    if mf.title is not None:
        buf.write(f"# title = {mf.title}\n")
    if mf.repeating is not None:
        buf.write(f"# repeating = {', '.join(mf.repeating)}\n")
    if mf.phi is not None:
        buf.write(f"# phi = {mf.phi}\n")
    if mf.field is not None:
        buf.write(f"# field = {mf.field}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "role", *mf.base])
    for v in mf.variables:
        w.writerow([v.name, v.role, *v.exponents])
    return buf.getvalue()


# -- reports -----------------------------------------------------------------


@dataclass
class Report:
    """Everything a subcommand has to say, as JSON-ready values.

    Scalars (counterexample values, psi values) are stored pre-formatted as
    strings; rationals appear as ``p/q``.
    """

    command: str
    model: dict[str, Any]
    regular: bool
    error: str | None = None
    field: str = "rational"
    repeating: list[str] = dc_field(default_factory=list)
    matrix: list[dict[str, Any]] = dc_field(default_factory=list)
    pi_groups: list[dict[str, Any]] = dc_field(default_factory=list)
    scaling: list[dict[str, Any]] = dc_field(default_factory=list)
    checks: list[dict[str, Any]] = dc_field(default_factory=list)
    psi: dict[str, Any] | None = None
    seed: int | None = None
    trials: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Report":
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def _pow_text(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def render_text(r: Report) -> str:
    title = r.model.get("title")
    lines = [f"model: {title}" if title else None]
    names = [v["name"] for v in r.model["variables"]]
    lines.append(f"base: {' '.join(r.model['base'])}")
    lines.append(f"variables: {', '.join(names)}")
    if not r.regular:
        lines.append("verdict: not regular")
        lines.append(f"error: {r.error}")
        return "\n".join(x for x in lines if x is not None) + "\n"
    lines.append("verdict: regular")
    lines.append(f"repeating: {', '.join(r.repeating) if r.repeating else '(none)'}")
    if r.command in ("analyze", "pi") and r.matrix:
        width = max(len(row["name"]) for row in r.matrix)
        header = " ".join(r.repeating) if r.repeating else "(empty basis)"
        lines.append(f"exponent matrix over {header}:")
        for row in r.matrix:
            exps = " ".join(f"{e:>3d}" for e in row["row"]) if row["row"] else "  -"
            extra = f"   power {row['power']}" if row["power"] != 1 else ""
            lines.append(f"  {row['name']:<{width}} {exps}{extra}")
    if r.command in ("pi", "analyze") and r.pi_groups:
        lines.append("pi groups:")
        for g in r.pi_groups:
            lines.append(f"  {g['text']}")
        out = r.pi_groups[0]
        p0 = " * ".join(_pow_text(x, e) for x, e in zip(r.repeating, [-v for v in out["exponents"]]) if e != 0) or "1"
        lhs = _pow_text(out["name"], out["power"])
        args = ", ".join(f"pi_{g['index']}" for g in r.pi_groups[1:])
        if len(r.pi_groups) == 1:
            lines.append(f"form: {lhs} = {p0} * const  (Psi is constant)")
        else:
            lines.append(f"form: {lhs} = {p0} * Psi({args})")
    if r.scaling:
        lines.append("scaling laws:")
        for s in r.scaling:
            lines.append(f"  {s['variable']}: exponent {s['exponent']}   {s['identity']}")
    for c in r.checks:
        verdict = "pass" if c["passed"] else "FAIL"
        lines.append(f"{c['check']}: {verdict} ({c['trials']} trials, seed {c['seed']}, {c['resampled']} resampled)")
        if c.get("zero_checks"):
            lines.append(f"  zero-equivalence samples: {c['zero_checks']}")
        if c.get("reason"):
            lines.append(f"  reason: {c['reason']}")
        ce = c.get("counterexample")
        if ce:
            lines.append(f"  first counterexample (trial {ce['trial']}, {ce['kind']}):")
            lines.append(f"    arguments: ({', '.join(ce['arguments'])})")
            if ce["lambdas"]:
                lines.append(f"    lambda: ({', '.join(ce['lambdas'])})")
            lines.append(f"    lhs = {ce['lhs']}, rhs = {ce['rhs']}")
    if r.psi is not None:
        at = ", ".join(r.psi["at"])
        lines.append(f"psi({at}) = {r.psi['value']}")
    return "\n".join(x for x in lines if x is not None) + "\n"


def emit_report(r: Report, format: str = "text", destination: IO[str] | str | Path | None = None) -> str:
    """Render ``r`` and write it to ``destination`` (a stream or path) if given."""
    text = r.to_json() if format == "json" else render_text(r)
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")
    return text
