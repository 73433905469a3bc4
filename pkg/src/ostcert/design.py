"""Design matrices: construction, validation, Gram deviation, file I/O."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ostcert._seeding import rng_for
from ostcert.errors import DegenerateColumnError, DimensionError, ValidationError

UNIT_NORM_RTOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """An N x C complex matrix whose columns have unit Euclidean norm.

    Construct through :func:`from_dense` or the generators; the constructor
    validates but does not normalize.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2:
            raise DimensionError(f"design matrix must be 2-D, got shape {a.shape}")
        n, c = a.shape
        if n < 1:
            raise DimensionError("design matrix needs at least one row")
        if c < 2:
            raise DimensionError(f"design matrix needs at least 2 columns, got {c}")
        a = _frozen(a)
        norms = np.linalg.norm(a, axis=0)
        if np.any(norms == 0):
            bad = int(np.flatnonzero(norms == 0)[0])
            raise DegenerateColumnError(f"column {bad} has zero norm")
        off = np.abs(norms - 1.0)
        if np.any(off > UNIT_NORM_RTOL):
            bad = int(np.argmax(off))
            raise ValidationError(
                f"column {bad} has norm {norms[bad]!r}, not 1 within {UNIT_NORM_RTOL}"
            )
        object.__setattr__(self, "entries", a)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def column(self, i: int) -> np.ndarray:
        return self.entries[:, i]

    def is_real(self) -> bool:
        return not np.any(self.entries.imag)

    def __eq__(self, other):
        if not isinstance(other, DesignMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class GramDeviation:
    """Phi^H Phi - I as a Hermitian C x C matrix."""

    values: np.ndarray

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def row_sums(self) -> np.ndarray:
        """(Phi^H Phi - I) times the all-ones vector."""
        return self.values @ np.ones(self.values.shape[1])


def _check_dims(N, C):
    if int(N) != N or N < 1:
        raise DimensionError(f"N must be a positive integer, got {N!r}")
    if int(C) != C or C < 2:
        raise DimensionError(f"C must be an integer >= 2, got {C!r}")


def gen_gaussian(N: int, C: int, seed: int) -> DesignMatrix:
    """i.i.d. real standard normal entries, columns rescaled to unit norm."""
    _check_dims(N, C)
    rng = rng_for(seed)
    a = rng.standard_normal((int(N), int(C)))
    norms = np.linalg.norm(a, axis=0)
    # a column of exact zeros has probability zero; redraw just in case
    while np.any(norms == 0):
        z = norms == 0
        a[:, z] = rng.standard_normal((int(N), int(z.sum())))
        norms = np.linalg.norm(a, axis=0)
    return DesignMatrix(a / norms)


def gen_rademacher(N: int, C: int, seed: int) -> DesignMatrix:
    """Equiprobable +-1/sqrt(N) entries."""
    _check_dims(N, C)
    rng = rng_for(seed)
    signs = rng.integers(0, 2, size=(int(N), int(C))) * 2 - 1
    return DesignMatrix(signs / np.sqrt(N))


def from_dense(entries, normalize: bool = False) -> DesignMatrix:
    a = np.array(entries, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D array, got shape {a.shape}")
    norms = np.linalg.norm(a, axis=0)
    if np.any(norms == 0):
        bad = int(np.flatnonzero(norms == 0)[0])
        raise DegenerateColumnError(f"column {bad} has zero norm")
    if normalize:
        a = a / norms
    return DesignMatrix(a)


def gram_deviation(phi: DesignMatrix) -> GramDeviation:
    """Phi^H Phi - I, built from the strict upper triangle and mirrored.

    The diagonal holds the (real) squared-norm residue, which is within
    rounding of zero for a valid design matrix.
    """
    a = phi.entries
    g = a.conj().T @ a
    upper = np.triu(g, 1)
    dev = upper + upper.conj().T
    dev[np.diag_indices_from(dev)] = g.diagonal().real - 1.0
    dev.flags.writeable = False
    return GramDeviation(dev)


# --- matrix file format -----------------------------------------------------
# header "N C field", field in {real, complex}; then N rows of C entries.
# Complex entries are written a+bi with no spaces.

def parse_complex(tok: str) -> complex:
    """Parse ``a``, ``a+bi``, ``a-bi``, ``bi`` (``j`` also accepted)."""
    t = tok.strip()
    if not t:
        raise ValidationError("empty numeric token")
    try:
        if t[-1] in "ij":
            body = t[:-1]
            if body in ("", "+", "-") or body[-1] in "+-":
                body += "1"
            return complex(body + "j")
        return complex(float(t), 0.0)
    except ValueError:
        raise ValidationError(f"cannot parse number {tok!r}") from None


def format_complex(z: complex, field: str) -> str:
    if field == "real":
        return repr(float(z.real))
    re_s = repr(float(z.real))
    im = float(z.imag)
    im_s = repr(im) if math.copysign(1.0, im) < 0 else "+" + repr(im)
    return f"{re_s}{im_s}i"


def matrix_to_text(phi: DesignMatrix) -> str:
    field = "real" if phi.is_real() else "complex"
    lines = [f"{phi.rows} {phi.cols} {field}"]
    for row in phi.entries:
        lines.append(" ".join(format_complex(z, field) for z in row))
    return "\n".join(lines) + "\n"


def write_matrix_file(phi: DesignMatrix, path) -> None:
    Path(path).write_text(matrix_to_text(phi))


def read_matrix_file(path, normalize: bool = False) -> DesignMatrix:
    return parse_matrix_text(Path(path).read_text(), normalize=normalize, source=str(path))


def parse_matrix_text(text: str, normalize: bool = False, source: str = "<matrix>") -> DesignMatrix:
    path = source
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty matrix file")
    head = lines[0].split()
    if len(head) != 3 or head[2] not in ("real", "complex"):
        raise ValidationError(f"{path}: bad header {lines[0]!r}, expected 'N C real|complex'")
    try:
        n, c = int(head[0]), int(head[1])
    except ValueError:
        raise ValidationError(f"{path}: bad header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != n:
        raise DimensionError(f"{path}: header says {n} rows, found {len(body)}")
    a = np.empty((n, c), dtype=np.complex128)
    for r, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != c:
            raise DimensionError(f"{path}: row {r} has {len(toks)} entries, expected {c}")
        a[r] = [parse_complex(t) for t in toks]
    if head[2] == "real" and np.any(a.imag):
        raise ValidationError(f"{path}: complex entries in a 'real' file")
    return from_dense(a, normalize=normalize)
