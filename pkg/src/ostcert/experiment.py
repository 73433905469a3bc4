"""Monte Carlo harness: single trials, grid sweeps, CSV persistence,
theorem-side predicates and an exhaustive-search baseline."""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from ostcert._seeding import derive_seed
from ostcert.coherence import check_coherence_property
from ostcert.design import DesignMatrix, gen_gaussian, gen_rademacher, read_matrix_file
from ostcert.errors import DimensionError, GuardError, ValidationError
from ostcert.ost import Measurement, measure, noise_radius, ost, threshold_lemma, threshold_theorem
from ostcert.signal import SparseSignal, alpha_min, gen_signal, mar, snr_min
from ostcert.stoc import stoc_check

MATRIX_FAMILIES = ("gaussian", "rademacher", "file")
ORACLE_MAX_C = 24
ORACLE_MAX_SUBSETS = 10**6


# --- statistics ---------------------------------------------------------------

def binomial_stderr(p: float, trials: int) -> float:
    p = min(max(p, 0.0), 1.0)
    return math.sqrt(p * (1.0 - p) / trials)


def within_bound(failures: int, trials: int, bound: float, z: float = 3.0) -> bool:
    """One-sided check: failures/trials <= bound + z standard errors.

    The standard error is evaluated at the (clamped) bound, i.e. under the
    null hypothesis that the true rate equals the bound.
    """
    p0 = min(max(bound, 0.0), 1.0)
    return failures / trials <= p0 + z * binomial_stderr(p0, trials)


# --- theorem-side quantities -----------------------------------------------

def theorem1_min_measurements(k, C, snr_min, mar, c1, beta) -> float:
    """Smallest N (exclusive) for which the measurement-count condition holds.

    max{2k ln C, 64 k ln C / SNR_min, (2 c2 k ln C / MAR)^(beta/2)} with
    c2 = (96 c1)^2. ``beta = math.inf`` makes the third term 1.
    """
    for name, v in (("k", k), ("C", C), ("snr_min", snr_min), ("mar", mar), ("c1", c1)):
        if not v > 0:
            raise ValidationError(f"{name} must be positive, got {v!r}")
    if not beta > 1:
        raise ValidationError(f"beta must lie in (1, inf], got {beta!r}")
    L = math.log(C)
    c2 = (96.0 * c1) ** 2
    t1 = 2.0 * k * L
    t2 = 64.0 * k * L / snr_min
    t3 = 1.0 if math.isinf(beta) else (2.0 * c2 * k * L / mar) ** (beta / 2.0)
    return max(t1, t2, t3)


@dataclass(frozen=True)
class Theorem2Check:
    passed: bool
    k_bound: float
    amin_bound: float


def theorem2_predicate(k, N, C, alpha_min, sigma2, mu) -> Theorem2Check:
    """k <= N / (2 ln C) and alpha_min > max{8 sqrt(sigma2 ln C), 96 mu sqrt(2 ln C)}."""
    L = math.log(C)
    k_bound = N / (2.0 * L)
    amin_bound = max(8.0 * math.sqrt(sigma2 * L), 96.0 * mu * math.sqrt(2.0 * L))
    return Theorem2Check(bool(k <= k_bound and alpha_min > amin_bound), k_bound, amin_bound)


def theorem_epsilon(mu: float, C: int) -> float:
    """24 mu sqrt(2 ln C), the StOC level behind the theorem threshold."""
    return 24.0 * mu * math.sqrt(2.0 * math.log(C))


# --- trials -------------------------------------------------------------------

@dataclass(frozen=True)
class TrialRecord:
    N: int
    C: int
    k: int
    sigma2: float
    mu: float
    nu: float
    lam: float
    alpha_min: float
    snr_min: float
    mar: float
    success: bool
    noise_event: bool
    stoc_event: Optional[bool]
    seed: int
    selected: tuple = field(default=(), compare=True)
    support: tuple = field(default=(), compare=True)


def run_trial(phi: DesignMatrix, s: SparseSignal, sigma2: float, lam: float, seed: int, *,
              mu: Optional[float] = None, nu: Optional[float] = None,
              epsilon: Optional[float] = None) -> TrialRecord:
    """One measure -> OST -> compare cycle.

    Pass ``mu``/``nu`` when already known to skip the O(N C^2) Gram pass.
    With ``epsilon`` set, ``stoc_event`` records whether both StOC
    inequalities hold for this draw's support and values.
    """
    if mu is None or nu is None:
        rep = check_coherence_property(phi)
        mu, nu = rep.mu, rep.nu
    meas = measure(phi, s, sigma2, seed)
    est = ost(phi, meas, lam)
    tilde = phi.entries.conj().T @ meas.noise
    noise_event = bool(np.abs(tilde).max() <= noise_radius(sigma2, phi.cols))
    stoc_event = None
    if epsilon is not None:
        stoc_event = stoc_check(phi, s.support, s.values, epsilon, allow_large_epsilon=True).passed
    return TrialRecord(
        N=phi.rows, C=phi.cols, k=s.k, sigma2=float(sigma2), mu=float(mu), nu=float(nu),
        lam=float(lam), alpha_min=alpha_min(s),
        snr_min=snr_min(s, sigma2, phi.rows) if sigma2 > 0 else math.inf,
        mar=mar(s), success=est.matches(s.support), noise_event=noise_event,
        stoc_event=stoc_event, seed=int(seed),
        selected=est.selected, support=tuple(sorted(s.support)),
    )


# --- sweeps -------------------------------------------------------------------

def _parse_list(v, typ):
    if isinstance(v, (list, tuple)):
        return [typ(x) for x in v]
    return [typ(x) for x in str(v).split(",") if x.strip()]


def _parse_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValidationError(f"not a boolean: {v!r}")


@dataclass(frozen=True)
class SweepConfig:
    matrix_family: str = "gaussian"
    N: tuple = (64,)
    C: int = 256
    k: tuple = (4,)
    sigma2: tuple = (0.0,)
    value_model: str = "equal"
    trials_per_cell: int = 100
    master_seed: int = 0
    lambda_rule: str = "theorem"
    record_stoc: bool = False
    matrix_file: Optional[str] = None
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.matrix_family not in MATRIX_FAMILIES:
            raise ValidationError(f"unknown matrix family {self.matrix_family!r}")
        if self.matrix_family == "file" and not self.matrix_file:
            raise ValidationError("matrix family 'file' needs matrix_file")
        if not (self.N and self.k and self.sigma2):
            raise ValidationError("sweep grid must be non-empty")
        if self.trials_per_cell < 1:
            raise ValidationError("trials_per_cell must be >= 1")
        if self.value_model not in ("equal", "equal-random-sign"):
            raise ValidationError(f"sweeps support value models equal, equal-random-sign; got {self.value_model!r}")
        parse_lambda_rule(self.lambda_rule)

    def cells(self):
        return list(itertools.product(self.N, self.k, self.sigma2))


_KEYS = {
    "family": ("matrix_family", str),
    "matrix_family": ("matrix_family", str),
    "N": ("N", lambda v: tuple(_parse_list(v, int))),
    "C": ("C", int),
    "k": ("k", lambda v: tuple(_parse_list(v, int))),
    "sigma2": ("sigma2", lambda v: tuple(_parse_list(v, float))),
    "value_model": ("value_model", str),
    "trials": ("trials_per_cell", int),
    "trials_per_cell": ("trials_per_cell", int),
    "seed": ("master_seed", int),
    "master_seed": ("master_seed", int),
    "lambda_rule": ("lambda_rule", str),
    "record_stoc": ("record_stoc", _parse_bool),
    "matrix_file": ("matrix_file", str),
    "epsilon": ("epsilon", float),
}


def parse_config(text: str, overrides: Optional[dict] = None) -> SweepConfig:
    """Flat ``key = value`` lines; ``#`` starts a comment. ``overrides`` win."""
    raw = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {n}: expected key=value, got {line!r}")
        key, val = (p.strip() for p in line.split("=", 1))
        raw[key] = val.strip("\"'")
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    kwargs = {}
    for key, val in raw.items():
        if key not in _KEYS:
            raise ValidationError(f"unknown config key {key!r}")
        name, conv = _KEYS[key]
        try:
            kwargs[name] = conv(val)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"config key {key!r}: bad value {val!r}") from None
    return SweepConfig(**kwargs)


def parse_lambda_rule(rule: str):
    """'theorem' -> ('theorem', None); 'lemma:eps' / 'fixed:lam' -> (kind, value)."""
    if rule == "theorem":
        return "theorem", None
    kind, _, val = rule.partition(":")
    if kind in ("lemma", "fixed") and val:
        try:
            x = float(val)
        except ValueError:
            raise ValidationError(f"bad lambda rule {rule!r}") from None
        if x < 0 or (kind == "fixed" and x == 0):
            raise ValidationError(f"bad lambda rule {rule!r}")
        return kind, x
    raise ValidationError(f"bad lambda rule {rule!r}; use theorem, lemma:EPS or fixed:LAMBDA")


@dataclass(frozen=True)
class CellResult:
    N: int
    C: int
    k: int
    sigma2: float
    mu: float
    nu: float
    lam: float
    trials: int
    successes: int
    success_rate: float
    stderr: float
    theorem2_pass: bool
    cp_pass: bool


@dataclass
class SweepResult:
    cells: list
    trials: list


@dataclass(frozen=True)
class _Cell:
    index: int
    phi: DesignMatrix
    k: int
    sigma2: float
    mu: float
    nu: float
    lam: float
    epsilon: Optional[float]
    theorem2_pass: bool
    cp_pass: bool


def matrix_seed(master_seed: int, cell_index: int) -> int:
    return derive_seed(master_seed, 0, cell_index)


def trial_seed(master_seed: int, cell_index: int, trial_index: int) -> int:
    return derive_seed(master_seed, 1, cell_index, trial_index)


def signal_seed(tseed: int) -> int:
    return derive_seed(tseed, 0)


def _cell_matrix(cfg: SweepConfig, index: int, N: int, loaded: Optional[DesignMatrix]) -> DesignMatrix:
    if cfg.matrix_family == "file":
        if loaded.rows != N:
            raise DimensionError(f"matrix file has N={loaded.rows}, grid asks for N={N}")
        return loaded
    gen = gen_gaussian if cfg.matrix_family == "gaussian" else gen_rademacher
    return gen(N, cfg.C, matrix_seed(cfg.master_seed, index))


def _model_alpha_min(k: int) -> float:
    # both sweep value models have all magnitudes 1/sqrt(k)
    return 1.0 / math.sqrt(k)


def _prepare_cell(cfg, index, N, k, sigma2, loaded) -> _Cell:
    phi = _cell_matrix(cfg, index, N, loaded)
    if k > phi.cols:
        raise ValidationError(f"k={k} exceeds C={phi.cols}")
    rep = check_coherence_property(phi)
    kind, val = parse_lambda_rule(cfg.lambda_rule)
    C = phi.cols
    if kind == "theorem":
        lam = threshold_theorem(rep.mu, sigma2, C)
        eps = theorem_epsilon(rep.mu, C)
    elif kind == "lemma":
        lam = threshold_lemma(val, sigma2, C)
        eps = val
    else:
        lam = val
        eps = cfg.epsilon
    if cfg.epsilon is not None:
        eps = cfg.epsilon
    t2 = theorem2_predicate(k, phi.rows, C, _model_alpha_min(k), sigma2, rep.mu)
    return _Cell(index, phi, k, sigma2, rep.mu, rep.nu, lam,
                 eps if cfg.record_stoc else None, t2.passed, rep.overall_pass)


def _run_cell_trial(cfg: SweepConfig, cell: _Cell, t: int) -> TrialRecord:
    tseed = trial_seed(cfg.master_seed, cell.index, t)
    s = gen_signal(cell.phi.cols, cell.k, cfg.value_model, signal_seed(tseed))
    return run_trial(cell.phi, s, cell.sigma2, cell.lam, tseed,
                     mu=cell.mu, nu=cell.nu, epsilon=cell.epsilon)


def run_sweep(cfg: SweepConfig, threads: int = 1) -> SweepResult:
    """Run every grid cell; one seeded matrix per cell, fresh signal and
    noise per trial. Output does not depend on ``threads``."""
    loaded = read_matrix_file(cfg.matrix_file) if cfg.matrix_family == "file" else None
    grid = cfg.cells()
    threads = max(1, int(threads))

    def prep(item):
        i, (N, k, s2) = item
        return _prepare_cell(cfg, i, N, k, s2, loaded)

    tasks_of = lambda cells: [(c, t) for c in cells for t in range(cfg.trials_per_cell)]
    if threads == 1:
        cells = list(map(prep, enumerate(grid)))
        records = [_run_cell_trial(cfg, c, t) for c, t in tasks_of(cells)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(prep, enumerate(grid)))
            records = list(pool.map(lambda ct: _run_cell_trial(cfg, *ct), tasks_of(cells)))

    rows = []
    T = cfg.trials_per_cell
    for ci, cell in enumerate(cells):
        recs = records[ci * T:(ci + 1) * T]
        succ = sum(r.success for r in recs)
        rate = succ / T
        rows.append(CellResult(
            N=cell.phi.rows, C=cell.phi.cols, k=cell.k, sigma2=cell.sigma2, mu=cell.mu,
            nu=cell.nu, lam=cell.lam, trials=T, successes=succ, success_rate=rate,
            stderr=binomial_stderr(rate, T), theorem2_pass=cell.theorem2_pass,
            cp_pass=cell.cp_pass,
        ))
    return SweepResult(rows, records)


# --- CSV ----------------------------------------------------------------------

CSV_COLUMNS = ("N", "C", "k", "sigma2", "mu", "nu", "lambda", "trials", "successes",
               "success_rate", "stderr", "theorem2_pass", "cp_pass")
TRIAL_COLUMNS = ("N", "C", "k", "sigma2", "mu", "nu", "lambda", "alpha_min", "snr_min", "mar",
                 "success", "noise_event", "stoc_event", "seed")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.10g}"


def _field_values(obj):
    return [getattr(obj, f.name) for f in fields(obj)]


def cells_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(v) for v in _field_values(r)])
    return buf.getvalue()


def trials_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRIAL_COLUMNS)
    for r in records:
        w.writerow([_fmt(v) for v in _field_values(r)[:len(TRIAL_COLUMNS)]])
    return buf.getvalue()


def write_csv(rows, path) -> None:
    Path(path).write_text(cells_to_csv(rows), encoding="utf-8")


def read_csv(path) -> list:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


def parse_csv(text: str) -> list:
    """Parse aggregate CSV text back into CellResult rows."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValidationError(f"unexpected CSV header {header!r}")
    out = []
    for row in reader:
        vals = []
        for f, raw in zip(fields(CellResult), row):
            if f.type in ("int", int):
                vals.append(int(raw))
            elif f.type in ("bool", bool):
                vals.append(raw == "true")
            else:
                vals.append(float(raw))
        out.append(CellResult(*vals))
    return out


def rounded(row: CellResult) -> CellResult:
    """The row as it reads back from CSV (floats at 10 significant digits)."""
    vals = [float(f"{v:.10g}") if isinstance(v, float) else v for v in _field_values(row)]
    return CellResult(*vals)


# --- exhaustive baseline ------------------------------------------------------

def oracle_exhaustive(phi: DesignMatrix, f, k: int) -> tuple:
    """k-subset with the smallest least-squares residual, by brute force.

    Ties go to the lexicographically first support. Needs the model order
    ``k``, so it is a diagnostic baseline only.
    """
    C = phi.cols
    if not 1 <= k <= C:
        raise ValidationError(f"k={k} outside [1, C={C}]")
    if C > ORACLE_MAX_C or math.comb(C, k) > ORACLE_MAX_SUBSETS:
        raise GuardError(f"exhaustive search over C={C}, k={k} exceeds the size guard")
    vec = f.f if isinstance(f, Measurement) else np.asarray(f, dtype=np.complex128).reshape(-1)
    if vec.shape[0] != phi.rows:
        raise DimensionError(f"measurement length {vec.shape[0]} != rows {phi.rows}")
    a = phi.entries
    best, best_res = None, math.inf
    for sub in itertools.combinations(range(C), k):
        cols = a[:, sub]
        x = np.linalg.lstsq(cols, vec, rcond=None)[0]
        res = float(np.linalg.norm(vec - cols @ x))
        if res < best_res:
            best, best_res = sub, res
    return tuple(best)
