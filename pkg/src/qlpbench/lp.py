"""Core LP data model: sparse matrices and standard-form conversion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class LpError(Exception):
    """Raised on structurally invalid LP data."""


@dataclass(frozen=True)
class SparseMatrix:
    """Column-compressed sparse matrix.

    Simplex pricing and FTRAN are column driven, so columns are the unit of
    access: ``col_ptr[j]:col_ptr[j+1]`` slices the (sorted) row indices and
    values of column ``j``.
    """

    rows: int
    cols: int
    col_ptr: np.ndarray  # int64, len cols+1
    row_idx: np.ndarray  # int64, len nnz
    values: np.ndarray   # float64, len nnz

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise LpError("negative dimensions")
        if len(self.col_ptr) != self.cols + 1:
            raise LpError("col_ptr length mismatch")
        if self.col_ptr[0] != 0 or self.col_ptr[-1] != len(self.row_idx):
            raise LpError("col_ptr endpoints inconsistent with nnz")
        if len(self.row_idx) != len(self.values):
            raise LpError("row_idx/values length mismatch")
        if not np.all(np.isfinite(self.values)):
            raise LpError("nonfinite value in matrix")
        if np.any(self.values == 0.0):
            raise LpError("explicit zero stored in matrix")
        for j in range(self.cols):
            lo, hi = self.col_ptr[j], self.col_ptr[j + 1]
            col = self.row_idx[lo:hi]
            if len(col) and (col[0] < 0 or col[-1] >= self.rows):
                raise LpError(f"row index out of range in column {j}")
            if np.any(np.diff(col) <= 0):
                raise LpError(f"row indices not strictly increasing in column {j}")

    @classmethod
    def from_triplets(cls, rows, cols, entries) -> "SparseMatrix":
        """Build from (row, col, value) triplets; duplicates are summed."""
        acc: dict[tuple[int, int], float] = {}
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise LpError(f"entry ({i},{j}) outside {rows}x{cols}")
            acc[(j, i)] = acc.get((j, i), 0.0) + float(v)
        items = sorted((jk, ik, v) for (jk, ik), v in acc.items() if v != 0.0)
        col_ptr = np.zeros(cols + 1, dtype=np.int64)
        row_idx = np.empty(len(items), dtype=np.int64)
        values = np.empty(len(items), dtype=np.float64)
        for pos, (j, i, v) in enumerate(items):
            col_ptr[j + 1] += 1
            row_idx[pos] = i
            values[pos] = v
        np.cumsum(col_ptr, out=col_ptr)
        return cls(rows, cols, col_ptr, row_idx, values)

    @classmethod
    def from_scipy(cls, m) -> "SparseMatrix":
        csc = sp.csc_matrix(m)
        csc.sum_duplicates()
        csc.eliminate_zeros()
        csc.sort_indices()
        return cls(csc.shape[0], csc.shape[1],
                   csc.indptr.astype(np.int64),
                   csc.indices.astype(np.int64),
                   csc.data.astype(np.float64))

    @property
    def nnz(self) -> int:
        return len(self.values)

    def to_scipy(self) -> sp.csc_matrix:
        return sp.csc_matrix((self.values, self.row_idx, self.col_ptr),
                             shape=(self.rows, self.cols))

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    def column(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.col_ptr[j], self.col_ptr[j + 1]
        return self.row_idx[lo:hi], self.values[lo:hi]

    def column_count(self, j: int) -> int:
        return int(self.col_ptr[j + 1] - self.col_ptr[j])


def column_norms(m: SparseMatrix) -> np.ndarray:
    """Per-column Euclidean norms."""
    out = np.zeros(m.cols)
    for j in range(m.cols):
        _, vals = m.column(j)
        out[j] = math.sqrt(float(np.dot(vals, vals)))
    return out


def matrix_norm_1(m: SparseMatrix) -> float:
    """Max absolute column sum; 0 for an empty matrix."""
    best = 0.0
    for j in range(m.cols):
        _, vals = m.column(j)
        best = max(best, float(np.abs(vals).sum()))
    return best


def matrix_max_abs(m: SparseMatrix) -> float:
    return float(np.abs(m.values).max()) if m.nnz else 0.0


def sparsity(m: SparseMatrix) -> tuple[int, int, int]:
    """(d_c, d_r, d): max nonzeros per column, per row, and their max."""
    if m.nnz == 0:
        return 0, 0, 0
    d_c = int(max(m.column_count(j) for j in range(m.cols)))
    d_r = int(np.bincount(m.row_idx, minlength=m.rows).max())
    return d_c, d_r, max(d_c, d_r)


MINIMIZE = "min"
MAXIMIZE = "max"

ROW_EQ = "="
ROW_LE = "<="
ROW_GE = ">="


@dataclass
class LinearProgram:
    """General-form LP before standardization.

    Rows carry a type in {=, <=, >=} and an optional range (two-sided rows);
    variables carry [lo, hi] bounds with lo possibly -inf (free) and hi
    possibly +inf.
    """

    c: np.ndarray
    A: SparseMatrix
    b: np.ndarray
    sense: str = MINIMIZE
    row_types: list[str] = field(default_factory=list)
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None
    ranges: np.ndarray | None = None  # nan = no range
    obj_constant: float = 0.0
    name: str = ""

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        m, n = self.A.rows, self.A.cols
        if len(self.c) != n or len(self.b) != m:
            raise LpError(f"dimension mismatch: |c|={len(self.c)}, |b|={len(self.b)}, A is {m}x{n}")
        if self.sense not in (MINIMIZE, MAXIMIZE):
            raise LpError(f"bad sense {self.sense!r}")
        if not self.row_types:
            self.row_types = [ROW_EQ] * m
        if len(self.row_types) != m:
            raise LpError("row_types length mismatch")
        for t in self.row_types:
            if t not in (ROW_EQ, ROW_LE, ROW_GE):
                raise LpError(f"bad row type {t!r}")
        if self.lo is None:
            self.lo = np.zeros(n)
        if self.hi is None:
            self.hi = np.full(n, np.inf)
        self.lo = np.asarray(self.lo, dtype=float)
        self.hi = np.asarray(self.hi, dtype=float)
        if len(self.lo) != n or len(self.hi) != n:
            raise LpError("bounds length mismatch")
        if self.ranges is None:
            self.ranges = np.full(m, np.nan)
        self.ranges = np.asarray(self.ranges, dtype=float)

    @property
    def num_rows(self) -> int:
        return self.A.rows

    @property
    def num_cols(self) -> int:
        return self.A.cols


@dataclass
class StandardFormLP:
    """min c'x s.t. Ax = b, x >= 0, plus bookkeeping to map back.

    ``var_map`` holds, per original variable, how it appears in the standard
    form: ("direct", j, shift), or ("split", j_pos, j_neg) for free variables
    (x = x+ - x-).
    """

    c: np.ndarray
    A: SparseMatrix
    b: np.ndarray
    n_original: int
    n_slack: int
    var_map: list[tuple]
    obj_constant: float = 0.0
    negated_objective: bool = False
    name: str = ""

    @property
    def num_rows(self) -> int:
        return self.A.rows

    @property
    def num_cols(self) -> int:
        return self.A.cols

    def original_solution(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n_original)
        for i, entry in enumerate(self.var_map):
            if entry[0] == "direct":
                _, j, shift = entry
                out[i] = x[j] + shift
            else:
                _, jp, jn = entry
                out[i] = x[jp] - x[jn]
        return out

    def original_objective(self, std_objective: float) -> float:
        val = -std_objective if self.negated_objective else std_objective
        return val + self.obj_constant


def standardize(lp: LinearProgram) -> StandardFormLP:
    """Convert a general LP into equality standard form with x >= 0.

    Maximize objectives are negated. Ranged rows expand into two one-sided
    rows (range r on a <= row with rhs b covers [b - |r|, b]; the MPS
    convention, see README). Finite nonzero lower bounds are shifted out;
    free variables are split; finite upper bounds become extra <= rows.
    """
    m, n = lp.num_rows, lp.num_cols
    entries: list[tuple[int, int, float]] = []
    rhs: list[float] = []
    row_kinds: list[str] = []

    for i in range(m):
        rt = lp.row_types[i]
        r = lp.ranges[i]
        if not math.isnan(r):
            lo_r, hi_r = _ranged_row_interval(rt, lp.b[i], r)
            row_kinds.append(ROW_GE)
            rhs.append(lo_r)
            row_kinds.append(ROW_LE)
            rhs.append(hi_r)
        else:
            row_kinds.append(rt)
            rhs.append(float(lp.b[i]))

    # original row -> standardized row indices (1 or 2 per row)
    out_rows_of: list[list[int]] = []
    pos = 0
    for i in range(m):
        k = 2 if not math.isnan(lp.ranges[i]) else 1
        out_rows_of.append(list(range(pos, pos + k)))
        pos += k

    c_std: list[float] = []
    var_map: list[tuple] = []
    obj_shift = 0.0
    col = 0
    sign = -1.0 if lp.sense == MAXIMIZE else 1.0

    upper_rows: list[tuple[list[tuple[int, float]], float]] = []
    for jv in range(n):
        lo_v, hi_v = float(lp.lo[jv]), float(lp.hi[jv])
        ridx, vals = lp.A.column(jv)
        if math.isinf(lo_v):  # free: split
            jp, jn = col, col + 1
            for rr, vv in zip(ridx, vals):
                for orow in out_rows_of[rr]:
                    entries.append((orow, jp, vv))
                    entries.append((orow, jn, -vv))
            c_std.extend([sign * lp.c[jv], -sign * lp.c[jv]])
            var_map.append(("split", jp, jn))
            col += 2
            if math.isfinite(hi_v):
                upper_rows.append(([(jp, 1.0), (jn, -1.0)], hi_v))
        else:
            shift = lo_v
            for rr, vv in zip(ridx, vals):
                for orow in out_rows_of[rr]:
                    entries.append((orow, col, vv))
            if shift != 0.0:
                for rr, vv in zip(ridx, vals):
                    for orow in out_rows_of[rr]:
                        rhs[orow] -= vv * shift
                obj_shift += lp.c[jv] * shift
            c_std.append(sign * lp.c[jv])
            var_map.append(("direct", col, shift))
            if math.isfinite(hi_v):
                upper_rows.append(([(col, 1.0)], hi_v - shift))
            col += 1

    for coefs, ub in upper_rows:
        row_kinds.append(ROW_LE)
        rhs.append(ub)
        for jcol, coef in coefs:
            entries.append((len(row_kinds) - 1, jcol, coef))

    n_struct = col
    n_slack = 0
    for i, kind in enumerate(row_kinds):
        if kind == ROW_LE:
            entries.append((i, n_struct + n_slack, 1.0))
            c_std.append(0.0)
            n_slack += 1
        elif kind == ROW_GE:
            entries.append((i, n_struct + n_slack, -1.0))
            c_std.append(0.0)
            n_slack += 1

    A_std = SparseMatrix.from_triplets(len(row_kinds), n_struct + n_slack, entries)
    return StandardFormLP(
        c=np.asarray(c_std),
        A=A_std,
        b=np.asarray(rhs),
        n_original=n,
        n_slack=n_slack,
        var_map=var_map,
        obj_constant=lp.obj_constant + obj_shift,
        negated_objective=(lp.sense == MAXIMIZE),
        name=lp.name,
    )


def _ranged_row_interval(row_type: str, b: float, r: float) -> tuple[float, float]:
    if row_type == ROW_LE:
        return b - abs(r), b
    if row_type == ROW_GE:
        return b, b + abs(r)
    # equality row: sign of r picks the side
    return (b, b + r) if r >= 0 else (b + r, b)


def evaluate(lp: LinearProgram, x: np.ndarray) -> float:
    """Objective value of x under the original (pre-standardization) LP."""
    return float(np.dot(lp.c, x)) + lp.obj_constant


def is_feasible(lp: LinearProgram, x: np.ndarray, tol: float = 1e-8) -> bool:
    ax = lp.A.to_scipy() @ x
    for i, rt in enumerate(lp.row_types):
        r = lp.ranges[i]
        if not math.isnan(r):
            lo_r, hi_r = _ranged_row_interval(rt, lp.b[i], r)
            if not (lo_r - tol <= ax[i] <= hi_r + tol):
                return False
        elif rt == ROW_EQ and abs(ax[i] - lp.b[i]) > tol:
            return False
        elif rt == ROW_LE and ax[i] > lp.b[i] + tol:
            return False
        elif rt == ROW_GE and ax[i] < lp.b[i] - tol:
            return False
    return bool(np.all(x >= lp.lo - tol) and np.all(x <= lp.hi + tol))
