"""MPS file reader (fixed and free format) and a minimal writer.

Covers the sections used by NETLIB/MIPLIB-style corpora: ROWS, COLUMNS,
RHS, RANGES, BOUNDS, ENDATA. Integer markers are recorded but variables
stay continuous (LP relaxation). Gzip input is accepted for ``.gz`` paths.
"""

from __future__ import annotations

import gzip
import io
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from qlpbench.lp import (
    ROW_EQ,
    ROW_GE,
    ROW_LE,
    LinearProgram,
    MAXIMIZE,
    MINIMIZE,
    SparseMatrix,
)


class MpsParseError(Exception):
    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        where = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"{message}{where}")


@dataclass
class MpsDocument:
    name: str = ""
    objective_row: str | None = None
    row_types: dict[str, str] = field(default_factory=dict)  # name -> N/E/L/G
    row_order: list[str] = field(default_factory=list)       # constraint rows only
    col_order: list[str] = field(default_factory=list)
    col_entries: dict[str, list[tuple[str, float]]] = field(default_factory=dict)
    rhs: dict[str, float] = field(default_factory=dict)
    ranges: dict[str, float] = field(default_factory=dict)
    bounds: dict[str, list[tuple[str, float | None]]] = field(default_factory=dict)
    integer_cols: set[str] = field(default_factory=set)
    objective_constant: float = 0.0
    objective_sense: str = "MIN"


_ROW_TYPE_MAP = {"E": ROW_EQ, "L": ROW_LE, "G": ROW_GE}


def _number(tok: str, line_no: int) -> float:
    # Fortran-style exponents: 1.0D+2
    t = tok.replace("D", "E").replace("d", "e")
    try:
        return float(t)
    except ValueError:
        raise MpsParseError(f"bad numeric field {tok!r}", line_no) from None


def parse_mps(data: bytes | str) -> MpsDocument:
    """Parse MPS text into a document; raises MpsParseError with line numbers."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MpsParseError(f"input not decodable as UTF-8: {e}") from None
    else:
        text = data

    doc = MpsDocument()
    section = None
    saw_endata = False
    in_integer_block = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        if raw[0] not in (" ", "\t"):
            fields = raw.split()
            keyword = fields[0].upper()
            if keyword == "NAME":
                doc.name = fields[1] if len(fields) > 1 else ""
                continue
            if keyword == "ENDATA":
                saw_endata = True
                break
            if keyword in ("ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS"):
                section = keyword
                continue
            if keyword == "OBJSENSE":
                section = "OBJSENSE"
                continue
            raise MpsParseError(f"unknown section {keyword!r}", line_no)

        fields = raw.split()
        if section == "ROWS":
            if len(fields) < 2:
                raise MpsParseError("ROWS line needs type and name", line_no)
            rtype, rname = fields[0].upper(), fields[1]
            if rtype == "N":
                if doc.objective_row is None:
                    doc.objective_row = rname
                else:
                    warnings.warn(
                        f"duplicate objective row {rname!r} ignored "
                        f"(line {line_no}); first N row wins")
                doc.row_types[rname] = "N"
            elif rtype in _ROW_TYPE_MAP:
                doc.row_types[rname] = rtype
                doc.row_order.append(rname)
            else:
                raise MpsParseError(f"unknown row type {rtype!r}", line_no)
        elif section == "COLUMNS":
            if len(fields) >= 3 and fields[1].upper() == "'MARKER'":
                marker = fields[2].strip("'").upper()
                if marker == "INTORG":
                    in_integer_block = True
                elif marker == "INTEND":
                    in_integer_block = False
                continue
            if "MARKER" in raw.upper() and "'" in raw:
                up = raw.upper()
                if "INTORG" in up:
                    in_integer_block = True
                elif "INTEND" in up:
                    in_integer_block = False
                continue
            if len(fields) < 3 or len(fields) % 2 == 0:
                raise MpsParseError("malformed COLUMNS line", line_no)
            cname = fields[0]
            if cname not in doc.col_entries:
                doc.col_entries[cname] = []
                doc.col_order.append(cname)
            if in_integer_block:
                doc.integer_cols.add(cname)
            for rname, vtok in zip(fields[1::2], fields[2::2]):
                if rname not in doc.row_types:
                    raise MpsParseError(f"undeclared row {rname!r}", line_no)
                doc.col_entries[cname].append((rname, _number(vtok, line_no)))
        elif section == "RHS":
            _parse_value_pairs(fields, doc, line_no, target="rhs")
        elif section == "RANGES":
            _parse_value_pairs(fields, doc, line_no, target="ranges")
        elif section == "BOUNDS":
            if len(fields) < 3:
                raise MpsParseError("malformed BOUNDS line", line_no)
            btype = fields[0].upper()
            cname = fields[2]
            if cname not in doc.col_entries:
                # bound on an otherwise-empty column: declare it
                doc.col_entries[cname] = []
                doc.col_order.append(cname)
            val = _number(fields[3], line_no) if len(fields) > 3 else None
            if btype in ("UP", "LO", "FX", "UI", "LI") and val is None:
                raise MpsParseError(f"bound {btype} needs a value", line_no)
            doc.bounds.setdefault(cname, []).append((btype, val))
        elif section == "OBJSENSE":
            word = fields[0].upper()
            if word in ("MAX", "MAXIMIZE"):
                doc.objective_sense = "MAX"
            elif word in ("MIN", "MINIMIZE"):
                doc.objective_sense = "MIN"
            else:
                raise MpsParseError(f"unknown objective sense {word!r}", line_no)
        else:
            raise MpsParseError("data line outside any section", line_no)

    if not saw_endata:
        warnings.warn("missing ENDATA; accepting input anyway")
    return doc


def _parse_value_pairs(fields, doc: MpsDocument, line_no: int, target: str):
    # First field is the (ignored) set name when the line has an even count.
    pairs = fields[1:] if len(fields) % 2 == 1 else fields
    if len(pairs) < 2:
        raise MpsParseError(f"malformed {target.upper()} line", line_no)
    store = doc.rhs if target == "rhs" else doc.ranges
    for rname, vtok in zip(pairs[0::2], pairs[1::2]):
        val = _number(vtok, line_no)
        if rname == doc.objective_row and target == "rhs":
            # RHS on the objective row encodes a constant; the standard
            # convention negates it.
            doc.objective_constant = -val
            continue
        if rname not in doc.row_types:
            raise MpsParseError(f"undeclared row {rname!r}", line_no)
        store[rname] = val


def to_lp(doc: MpsDocument) -> LinearProgram:
    """Lower an MPS document into a LinearProgram (minimize, default [0, inf))."""
    row_pos = {r: i for i, r in enumerate(doc.row_order)}
    col_pos = {c: j for j, c in enumerate(doc.col_order)}
    m, n = len(doc.row_order), len(doc.col_order)

    c = np.zeros(n)
    entries = []
    for cname, items in doc.col_entries.items():
        j = col_pos[cname]
        for rname, val in items:
            if rname == doc.objective_row:
                c[j] += val
            elif doc.row_types.get(rname) == "N":
                continue  # non-objective free rows are dropped
            else:
                entries.append((row_pos[rname], j, val))

    b = np.zeros(m)
    for rname, val in doc.rhs.items():
        if rname in row_pos:
            b[row_pos[rname]] = val
    ranges = np.full(m, np.nan)
    for rname, val in doc.ranges.items():
        if rname in row_pos:
            ranges[row_pos[rname]] = val

    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    for cname, bnds in doc.bounds.items():
        j = col_pos[cname]
        for btype, val in bnds:
            if btype in ("UP", "UI"):
                hi[j] = val
                if val is not None and val < 0 and lo[j] == 0.0:
                    lo[j] = -math.inf  # classic MPS quirk: negative UP frees lo
            elif btype in ("LO", "LI"):
                lo[j] = val
            elif btype == "FX":
                lo[j] = hi[j] = val
            elif btype == "FR":
                lo[j], hi[j] = -math.inf, math.inf
            elif btype == "MI":
                lo[j] = -math.inf
            elif btype == "PL":
                hi[j] = math.inf
            elif btype == "BV":
                lo[j], hi[j] = 0.0, 1.0  # binary relaxed to [0, 1]
            else:
                raise MpsParseError(f"unknown bound type {btype!r}")

    row_types = [_ROW_TYPE_MAP[doc.row_types[r]] for r in doc.row_order]
    return LinearProgram(
        c=c,
        A=SparseMatrix.from_triplets(m, n, entries),
        b=b,
        sense=MAXIMIZE if doc.objective_sense == "MAX" else MINIMIZE,
        row_types=row_types,
        lo=lo,
        hi=hi,
        ranges=ranges,
        obj_constant=doc.objective_constant,
        name=doc.name,
    )


def read_mps(path: str | Path) -> LinearProgram:
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as f:
        data = f.read()
    return to_lp(parse_mps(data))


_INV_ROW_TYPE = {ROW_EQ: "E", ROW_LE: "L", ROW_GE: "G"}


def write_mps(lp: LinearProgram, name: str | None = None) -> str:
    """Minimal free-format MPS serializer (round-trip support).

    Always writes a minimization objective; callers should standardize the
    sense first or accept the stored coefficients as-is.
    """
    out = io.StringIO()
    out.write(f"NAME {name or lp.name or 'LP'}\n")
    if lp.sense == MAXIMIZE:
        out.write("OBJSENSE\n MAX\n")
    out.write("ROWS\n N  OBJ\n")
    rownames = [f"R{i}" for i in range(lp.num_rows)]
    for i, rt in enumerate(lp.row_types):
        out.write(f" {_INV_ROW_TYPE[rt]}  {rownames[i]}\n")
    out.write("COLUMNS\n")
    for j in range(lp.num_cols):
        cname = f"C{j}"
        if lp.c[j] != 0.0:
            out.write(f"    {cname}  OBJ  {float(lp.c[j])!r}\n")
        ridx, vals = lp.A.column(j)
        for i, v in zip(ridx, vals):
            out.write(f"    {cname}  {rownames[i]}  {float(v)!r}\n")
    out.write("RHS\n")
    for i in range(lp.num_rows):
        if lp.b[i] != 0.0:
            out.write(f"    RHS1  {rownames[i]}  {float(lp.b[i])!r}\n")
    if lp.obj_constant != 0.0:
        out.write(f"    RHS1  OBJ  {float(-lp.obj_constant)!r}\n")
    if np.any(~np.isnan(lp.ranges)):
        out.write("RANGES\n")
        for i in range(lp.num_rows):
            if not math.isnan(lp.ranges[i]):
                out.write(f"    RNG1  {rownames[i]}  {float(lp.ranges[i])!r}\n")
    has_bounds = np.any(lp.lo != 0.0) or np.any(np.isfinite(lp.hi))
    if has_bounds:
        out.write("BOUNDS\n")
        for j in range(lp.num_cols):
            cname = f"C{j}"
            if math.isinf(lp.lo[j]):
                out.write(f" MI BND1  {cname}\n")
            elif lp.lo[j] != 0.0:
                out.write(f" LO BND1  {cname}  {float(lp.lo[j])!r}\n")
            if math.isfinite(lp.hi[j]):
                out.write(f" UP BND1  {cname}  {float(lp.hi[j])!r}\n")
    out.write("ENDATA\n")
    return out.getvalue()
