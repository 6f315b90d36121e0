"""Fixed-format MPS.

Names longer than eight characters (or containing blanks) do not fit the
fixed columns. When any row or column name fails that test, every row is
renamed R0000001, R0000002, ... and every column C0000001, ... in
declaration order, and the mapping is returned so it can be stored in a
CSV sidecar (kind, mangled, original).

Integer and binary columns sit between INTORG/INTEND markers. Every
column gets explicit bounds: BV for a 0/1 binary, FX for a fixed column,
otherwise a lower (LO/LI/MI) and an upper (UP/UI/PL) entry. On reading,
an integer column whose bounds lie inside [0, 1] is taken to be binary.
"""
from __future__ import annotations

import csv
from typing import Iterable, Optional, TextIO

from .model import Constraint, ModelDescription, Variable

_OBJ = "COST"


class MpsFormatError(ValueError):
    pass


def _fits(name: str) -> bool:
    return 0 < len(name) <= 8 and not any(c.isspace() for c in name) and name[0] not in "*$"


def _num(x) -> str:
    s = str(x) if isinstance(x, int) else repr(float(x))
    if len(s) > 12:
        raise MpsFormatError(f"value {s} does not fit a 12-character MPS field")
    return s


def _line(f1: str = "", f2: str = "", f3: str = "", f4: str = "", f5: str = "", f6: str = "") -> str:
    # fields start at columns 2, 5, 15, 25, 40, 50
    s = f" {f1:<2} {f2:<8}  {f3:<8}  {f4:>12}"
    if f5:
        s += f"   {f5:<8}  {f6:>12}"
    return s.rstrip()


def mangle_map(model: ModelDescription) -> dict[str, dict[str, str]]:
    """original -> written name, per kind ('row', 'col')."""
    rows, cols = list(model.constraints), list(model.variables)
    need = not all(_fits(n) for n in rows + cols) or _OBJ in rows
    if not need:
        return {"row": {n: n for n in rows}, "col": {n: n for n in cols}}
    return {"row": {n: f"R{k:07d}" for k, n in enumerate(rows, 1)},
            "col": {n: f"C{k:07d}" for k, n in enumerate(cols, 1)}}


def write_mps(model: ModelDescription, sink: TextIO, header: Iterable[str] = ()) -> dict[str, tuple[str, str]]:
    """Write ``model``; return {written name: (kind, original)} for every
    renamed entity (empty when no mangling was needed)."""
    model.check()
    names = mangle_map(model)
    rn, cn = names["row"], names["col"]
    if len(rn) + len(cn) > 2 * 10**7:
        raise MpsFormatError("too many names to mangle")
    out = [f"* {h}" for h in header]
    out.append(f"NAME          {model.name[:8] if _fits(model.name) else 'FREIGHT'}")
    out.append("OBJSENSE")
    out.append("    MIN" if model.sense == "minimize" else "    MAX")
    out.append("ROWS")
    out.append(_line("N", _OBJ))
    sense_code = {"<=": "L", ">=": "G", "=": "E"}
    for row in model.constraints.values():
        out.append(_line(sense_code[row.sense], rn[row.name]))
    out.append("COLUMNS")
    entries: dict[str, list[tuple[str, object]]] = {v: [] for v in model.variables}
    for v, c in model.objective.items():
        entries[v].append((_OBJ, c))
    for row in model.constraints.values():
        for v, a in row.coeffs.items():
            entries[v].append((rn[row.name], a))
    in_int = False
    marker = 0
    for v in model.variables.values():
        is_int = v.kind in ("binary", "integer")
        if is_int != in_int:
            tag = "'INTORG'" if is_int else "'INTEND'"
            out.append(_line("", f"MARKER{marker:02d}"[:8], "'MARKER'", "", tag))
            marker += 1
            in_int = is_int
        col = cn[v.name]
        items = entries[v.name] or [(_OBJ, 0)]
        for k in range(0, len(items), 2):
            pair = items[k:k + 2]
            if len(pair) == 2:
                out.append(_line("", col, pair[0][0], _num(pair[0][1]), pair[1][0], _num(pair[1][1])))
            else:
                out.append(_line("", col, pair[0][0], _num(pair[0][1])))
    if in_int:
        out.append(_line("", f"MARKER{marker:02d}"[:8], "'MARKER'", "", "'INTEND'"))
    out.append("RHS")
    for row in model.constraints.values():
        if row.rhs:
            out.append(_line("", "RHS", rn[row.name], _num(row.rhs)))
    out.append("BOUNDS")
    for v in model.variables.values():
        col = cn[v.name]
        is_int = v.kind in ("binary", "integer")
        if v.kind == "binary" and (v.lb, v.ub) == (0, 1):
            out.append(_line("BV", "BND", col))
            continue
        if v.lb is not None and v.lb == v.ub:
            out.append(_line("FX", "BND", col, _num(v.lb)))
            continue
        if v.lb is None:
            out.append(_line("MI", "BND", col))
        else:
            out.append(_line("LI" if is_int else "LO", "BND", col, _num(v.lb)))
        if v.ub is None:
            out.append(_line("PL", "BND", col))
        else:
            out.append(_line("UI" if is_int else "UP", "BND", col, _num(v.ub)))
    out.append("ENDATA")
    sink.write("\n".join(out) + "\n")
    renamed = {}
    for kind, mapping in (("row", rn), ("col", cn)):
        for orig, new in mapping.items():
            if orig != new:
                renamed[new] = (kind, orig)
    return renamed


def write_names(renamed: dict[str, tuple[str, str]], sink: TextIO) -> None:
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(["kind", "mangled", "original"])
    for new, (kind, orig) in renamed.items():
        w.writerow([kind, new, orig])


def read_names(source: TextIO) -> dict[str, tuple[str, str]]:
    rd = csv.DictReader(source)
    return {r["mangled"]: (r["kind"], r["original"]) for r in rd}


def _parse_num(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


_MPS_SECTIONS = {"NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "BOUNDS", "RANGES", "ENDATA"}


def read_mps(source: TextIO, names: Optional[dict[str, tuple[str, str]]] = None) -> ModelDescription:
    try:
        return _read_mps(source, names or {})
    except (IndexError, KeyError, ValueError) as exc:
        if isinstance(exc, MpsFormatError):
            raise
        raise MpsFormatError(f"malformed MPS input: {exc!r}") from None


def _read_mps(source: TextIO, names: dict[str, tuple[str, str]]) -> ModelDescription:

    def real(n):
        return names[n][1] if n in names else n

    m = ModelDescription()
    section = None
    obj_row = None
    row_sense: dict[str, str] = {}
    row_coeffs: dict[str, dict] = {}
    rhs: dict[str, object] = {}
    cols: dict[str, dict] = {}  # name -> {"int": bool, "lb":, "ub":, "bv": bool}
    in_int = False
    sense_of = {"L": "<=", "G": ">=", "E": "="}
    for raw in source.read().splitlines():
        if not raw.strip() or raw.startswith("*"):
            continue
        if not raw[0].isspace():
            head = raw.split()
            section = head[0].upper()
            if section not in _MPS_SECTIONS:
                raise MpsFormatError(f"unknown section {head[0]}")
            if section == "NAME" and len(head) > 1:
                m.name = head[1]
            continue
        f = raw.split()
        if section == "OBJSENSE":
            m.sense = "maximize" if f[0].upper().startswith("MAX") else "minimize"
        elif section == "ROWS":
            code, name = f[0].upper(), f[1]
            if code == "N":
                if obj_row is None:
                    obj_row = name
                continue
            row_sense[name] = sense_of[code]
            row_coeffs[name] = {}
        elif section == "COLUMNS":
            if len(f) >= 3 and f[1] == "'MARKER'":
                in_int = f[2] == "'INTORG'"
                continue
            col = f[0]
            if col not in cols:
                cols[col] = {"int": in_int, "lb": 0, "ub": None, "bv": False}
            for k in range(1, len(f) - 1, 2):
                row, val = f[k], _parse_num(f[k + 1])
                if not val:
                    continue
                if row == obj_row:
                    m.objective[real(col)] = val
                elif row in row_coeffs:
                    row_coeffs[row][real(col)] = val
                else:
                    raise MpsFormatError(f"column {col} references unknown row {row}")
        elif section == "RHS":
            for k in range(1, len(f) - 1, 2):
                if f[k] != obj_row:
                    rhs[f[k]] = _parse_num(f[k + 1])
        elif section == "BOUNDS":
            code, col = f[0].upper(), f[2]
            c = cols[col]
            val = _parse_num(f[3]) if len(f) > 3 else None
            if code == "BV":
                c.update(lb=0, ub=1, bv=True)
            elif code == "FX":
                c.update(lb=val, ub=val)
            elif code == "MI":
                c["lb"] = None
            elif code == "PL":
                c["ub"] = None
            elif code in ("LO", "LI"):
                c["lb"] = val
            elif code in ("UP", "UI"):
                c["ub"] = val
            elif code == "FR":
                c.update(lb=None, ub=None)
            else:
                raise MpsFormatError(f"unsupported bound type {code}")
        elif section in ("RANGES",):
            raise MpsFormatError("RANGES are not supported")
    for col, c in cols.items():
        if c["bv"]:
            kind = "binary"
        elif c["int"]:
            kind = "binary" if (c["lb"] is not None and c["ub"] is not None
                                and 0 <= c["lb"] and c["ub"] <= 1) else "integer"
        else:
            kind = "continuous"
        m.variables[real(col)] = Variable(real(col), kind, c["lb"], c["ub"])
    for row, sense in row_sense.items():
        m.constraints[real(row)] = Constraint(real(row), row_coeffs[row], sense, rhs.get(row, 0))
    return m
