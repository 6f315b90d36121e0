"""CPLEX-style LP text format.

Layout written (and read back) here:

    \\ comment lines
    Minimize
     obj: + 3 x + 2 y
    Subject To
     c1: + 1 x + 1 y >= 1
    Bounds
     0 <= x <= 1
     -inf <= y <= +inf
    Binaries
     x
    Generals
     y
    End

Every variable gets an explicit bounds line, so defaults never matter.
Long expressions wrap onto indented continuation lines. The reader also
accepts the common shorthands (``x free``, one-sided bounds, ``st``,
``min``) but it is not a general LP parser.
"""
from __future__ import annotations

import re
from typing import Iterable, TextIO

from .model import Constraint, ModelDescription, Variable

_NAME_OK = re.compile(r"^[A-Za-z_!\"#$%&()/,.;?@`'{}|~][A-Za-z0-9_!\"#$%&()/,.;?@`'{}|~]*$")
_WRAP = 200


class LpFormatError(ValueError):
    pass


def _num(x) -> str:
    return str(x) if isinstance(x, int) else repr(float(x))


def _parse_num(tok: str):
    t = tok.lower()
    if t in ("inf", "+inf", "infinity", "+infinity"):
        return float("inf")
    if t in ("-inf", "-infinity"):
        return float("-inf")
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def _check_name(name: str) -> None:
    if (not _NAME_OK.match(name) or re.match(r"^[eE][0-9+-]", name)
            or name.lower() in ("inf", "infinity", "free")):
        raise LpFormatError(f"name {name!r} is not valid in LP format")


def _expr_lines(label: str, coeffs: dict, tail: str = "") -> list[str]:
    parts = [f" {label}:"]
    for v, a in coeffs.items():
        sign = "-" if a < 0 else "+"
        parts.append(f"{sign} {_num(abs(a))} {v}")
    if tail:
        parts.append(tail)
    lines, cur = [], ""
    for p in parts:
        if cur and len(cur) + 1 + len(p) > _WRAP:
            lines.append(cur)
            cur = "   " + p
        else:
            cur = f"{cur} {p}" if cur else p
    lines.append(cur)
    return lines


def write_lp(model: ModelDescription, sink: TextIO, header: Iterable[str] = ()) -> None:
    model.check()
    for name in model.variables:
        _check_name(name)
    for name in model.constraints:
        _check_name(name)
    out = [f"\\ {h}" for h in header]
    out.append(f"\\ model {model.name}")
    out.append("Minimize" if model.sense == "minimize" else "Maximize")
    if model.objective:
        out.extend(_expr_lines("obj", model.objective))
    else:
        out.append(" obj:")
    out.append("Subject To")
    for row in model.constraints.values():
        out.extend(_expr_lines(row.name, row.coeffs, f"{row.sense} {_num(row.rhs)}"))
    out.append("Bounds")
    for v in model.variables.values():
        lb = "-inf" if v.lb is None else _num(v.lb)
        ub = "+inf" if v.ub is None else _num(v.ub)
        out.append(f" {lb} <= {v.name} <= {ub}")
    for title, kind in (("Binaries", "binary"), ("Generals", "integer")):
        names = [v.name for v in model.variables.values() if v.kind == kind]
        if names:
            out.append(title)
            out.extend(f" {n}" for n in names)
    out.append("End")
    sink.write("\n".join(out) + "\n")


_SECTIONS = {
    "minimize": "min", "minimum": "min", "min": "min",
    "maximize": "max", "maximum": "max", "max": "max",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st",
    "bounds": "bounds", "bound": "bounds",
    "binaries": "bin", "binary": "bin", "bin": "bin",
    "generals": "gen", "general": "gen", "gen": "gen",
    "end": "end",
}
_SENSES = {"<=": "<=", "=<": "<=", "<": "<=", ">=": ">=", "=>": ">=", ">": ">=", "=": "="}


def _statements(lines: list[str]) -> list[str]:
    # join continuation lines: a statement starts at "name:" or at a
    # line that does not begin with an operator or number
    stmts: list[str] = []
    for line in lines:
        s = line.strip()
        if not s:
            continue
        starts_new = re.match(r"^[^\s:]+\s*:", s) is not None or not stmts
        if not starts_new and re.match(r"^[+\-<>=0-9.]", s) is None:
            starts_new = True
        if starts_new:
            stmts.append(s)
        else:
            stmts[-1] += " " + s
    return stmts


def _parse_expr(tokens: list[str]) -> dict:
    coeffs: dict = {}
    sign, coef = 1, None
    for tok in tokens:
        if tok in ("+", "-"):
            sign = -1 if tok == "-" else 1
            continue
        try:
            coef = _parse_num(tok)
            continue
        except ValueError:
            pass
        a = sign * (1 if coef is None else coef)
        coeffs[tok] = coeffs.get(tok, 0) + a
        sign, coef = 1, None
    return coeffs


def _tokens(text: str) -> list[str]:
    text = re.sub(r"(<=|>=|=<|=>)", r" \1 ", text)
    text = re.sub(r"(?<![<>=])([<>=])(?![<>=])", r" \1 ", text)
    return text.split()


def read_lp(source: TextIO) -> ModelDescription:
    raw = []
    m = ModelDescription()
    for ln in source.read().splitlines():
        if ln.lstrip().startswith("\\"):
            comment = ln.lstrip()[1:].strip()
            if comment.startswith("model "):
                m.name = comment[6:].strip()
            raw.append("")
        else:
            raw.append(ln)
    section = None
    body: dict[str, list[str]] = {"min": [], "max": [], "st": [], "bounds": [], "bin": [], "gen": []}
    for ln in raw:
        key = ln.strip().lower()
        if key in _SECTIONS:
            section = _SECTIONS[key]
            if section in ("min", "max"):
                m.sense = "minimize" if section == "min" else "maximize"
            continue
        if section is None or section == "end":
            if ln.strip():
                raise LpFormatError(f"text outside a section: {ln.strip()!r}")
            continue
        body[section].append(ln)

    bounds: dict[str, list] = {}
    order: list[str] = []

    def see(name):
        if name not in bounds:
            bounds[name] = [0, None]
            order.append(name)

    for stmt in _statements(body["min"] + body["max"]):
        label, _, expr = stmt.partition(":")
        m.objective = {v: a for v, a in _parse_expr(_tokens(expr)).items() if a}
        for v in _parse_expr(_tokens(expr)):
            see(v)
    rows = []
    for stmt in _statements(body["st"]):
        label, _, expr = stmt.partition(":")
        toks = _tokens(expr)
        k = next((i for i, t in enumerate(toks) if t in _SENSES), None)
        if k is None or len(toks) != k + 2:
            raise LpFormatError(f"cannot read constraint {stmt!r}")
        coeffs = _parse_expr(toks[:k])
        try:
            rhs = _parse_num(toks[k + 1])
        except ValueError:
            raise LpFormatError(f"bad right-hand side in {stmt!r}") from None
        for v in coeffs:
            see(v)
        rows.append(Constraint(label.strip(), {v: a for v, a in coeffs.items() if a}, _SENSES[toks[k]], rhs))
    explicit = set()
    for stmt in (ln.strip() for ln in body["bounds"]):
        if not stmt:
            continue
        toks = _tokens(stmt)
        if len(toks) == 2 and toks[1].lower() == "free":
            see(toks[0])
            explicit.add(toks[0])
            bounds[toks[0]] = [None, None]
        elif len(toks) == 5:
            lo, name, hi = _parse_num(toks[0]), toks[2], _parse_num(toks[4])
            see(name)
            explicit.add(name)
            bounds[name] = [lo, hi]
        elif len(toks) == 3:
            a, op, b = toks
            op = _SENSES[op]
            try:
                val, name, op = _parse_num(a), b, {"<=": ">=", ">=": "<=", "=": "="}[op]
            except ValueError:
                val, name = _parse_num(b), a
            see(name)
            explicit.add(name)
            if op in ("<=", "="):
                bounds[name][1] = val
            if op in (">=", "="):
                bounds[name][0] = val
        else:
            raise LpFormatError(f"cannot read bound {stmt!r}")
    kinds = {}
    for sec, kind in (("bin", "binary"), ("gen", "integer")):
        for ln in body[sec]:
            for name in ln.split():
                see(name)
                kinds[name] = kind
                if kind == "binary" and name not in explicit:
                    bounds[name] = [0, 1]
    for name in order:
        lo, hi = bounds[name]
        lo = None if lo == float("-inf") else lo
        hi = None if hi == float("inf") else hi
        m.variables[name] = Variable(name, kinds.get(name, "continuous"), lo, hi)
    for row in rows:
        m.constraints[row.name] = row
    return m
