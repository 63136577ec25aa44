"""Experiment runner: seeded trial batches, CSV / JSON-lines output, sweeps.

Config grammar (INI; ``#`` or ``;`` comments)::

    [experiment]
    algorithm = oea          # pea, pea_modified, aea, oea, eea, eea_stage1log,
                             # one_ancilla, direct_sample
    p = 0.05
    c = 0.9
    K = 3                    # eea only; default max(2, ceil(log2(1/p)))
    trials = 100
    seed = 1
    sweep = 0.2, 0.1, 0.05   # optional
    samples = 1000           # baselines; one_ancilla defaults to the OEA's U-uses
    workers = 1

    [instance]
    name = random-hermitian  # identity, bit-flip, rotation, random-hermitian,
                             # random-unitary; or give files instead:
    unitary = U.txt          # matrix files in the qexpect text format
    state = psi.txt
    hamiltonian = A.txt
    alpha = 0.5235987755982988   # rotation angle
    seed = 7                 # fixes random-* instances (else redrawn per trial)

    [tail]
    kind = bounded
    lambda_max = 2.0
    b = 1.0

Trial ``i`` of sweep point ``j`` uses ``numpy.random.default_rng`` seeded by
``SeedSequence(seed, spawn_key=(j, i))`` (``spawn_key=(i,)`` without a sweep),
so results do not depend on the worker count.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .amp_overlap import amp_estimate, hemisphere_distance, overlap_estimate
from .baseline import direct_sample_mean, one_ancilla_overlap
from .confidence import DEFAULT_R_CAP
from .eea import InfeasibleError, TailModel, eea_full
from .oracles import (
    EvolutionOracle,
    MatrixFormatError,
    StatePrep,
    exp_at,
    load_matrix,
    load_vector,
    random_hermitian,
)
from .pea import (
    TWO_PI,
    bits_for_precision,
    circular_distance,
    modified_pea_uses,
    original_pea_uses,
    pea_modified,
    pea_original,
    resolve_repetitions,
)
from .statevec import DenseUnitary, InvalidOperandError, StateVector, inner_product, pauli_x, pauli_z, ry

ALGORITHMS = ("pea", "pea_modified", "aea", "oea", "eea", "eea_stage1log", "one_ancilla", "direct_sample")
BUILTINS = ("identity", "bit-flip", "rotation", "random-hermitian", "random-unitary")
COLUMNS = (
    "trial", "seed", "estimate_re", "estimate_im", "exact_re", "exact_im", "error", "within_p",
    "n_preps", "m_evolutions", "total_time", "u_uses", "depth", "wall_ms",
)
EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE = 0, 2, 3
DEFAULT_SAMPLES = 1000
EIG_WEIGHT_TOL = 1e-12


class ConfigError(ValueError):
    """Invalid experiment configuration; ``line`` is set when known.

    ``key`` names the offending ``(section, key)`` so file loaders can
    attach a line number to semantic errors.
    """

    def __init__(self, message: str, path=None, line: int | None = None, key: tuple | None = None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line else f"{path}: "
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.key = key


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InstanceSpec:
    name: str | None = "identity"
    unitary: str | None = None
    state: str | None = None
    hamiltonian: str | None = None
    alpha: float = math.pi / 6
    seed: int | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str = "oea"
    p: float = 0.05
    c: float = 0.9
    K: int | None = None
    trials: int = 10
    seed: int = 0
    sweep: tuple | None = None
    samples: int | None = None
    workers: int = 1
    timing: bool = False
    instance: InstanceSpec = field(default_factory=InstanceSpec)
    tail: TailModel | None = None

    def validate(self) -> "ExperimentConfig":
        def fail(message, section, key):
            raise ConfigError(message, key=(section, key))

        if self.algorithm not in ALGORITHMS:
            fail(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}", "experiment", "algorithm")
        if not 0 < self.p <= 1:
            fail(f"p must lie in (0, 1], got {self.p}", "experiment", "p")
        for p in self.sweep or ():
            if not 0 < p <= 1:
                fail(f"sweep values must lie in (0, 1], got {p}", "experiment", "sweep")
        if not 0 < self.c < 1:
            fail(f"c must lie in (0, 1), got {self.c}", "experiment", "c")
        if self.K is not None and not 1 <= self.K <= 20:
            fail(f"K must lie in [1, 20], got {self.K}", "experiment", "k")
        if self.trials < 0:
            fail("trials must be >= 0", "experiment", "trials")
        if self.workers < 1:
            fail("workers must be >= 1", "experiment", "workers")
        if self.samples is not None and self.samples < 2:
            fail("samples must be >= 2", "experiment", "samples")
        if self.seed < 0:
            fail("seed must be >= 0", "experiment", "seed")
        inst = self.instance
        if inst.name is not None and inst.name not in BUILTINS:
            fail(f"unknown instance {inst.name!r}; expected one of {BUILTINS}", "instance", "name")
        if inst.name is None and inst.unitary is None and inst.hamiltonian is None:
            fail("instance needs a built-in name, a unitary file or a hamiltonian file", "instance", None)
        return self


_EXPERIMENT_KEYS = {
    "algorithm": str, "p": float, "c": float, "k": int, "trials": int, "seed": int,
    "sweep": str, "samples": int, "workers": int, "timing": str,
}
_INSTANCE_KEYS = {"name": str, "unitary": str, "state": str, "hamiltonian": str, "alpha": float, "seed": int}


def _key_lines(text: str) -> dict:
    """``(section, key) -> line number`` for error messages."""
    out, section = {}, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"^\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip().lower()
            out[(section, None)] = lineno
            continue
        m = re.match(r"^([^=:#;\s][^=:]*?)\s*[=:]", line)
        if m and section is not None:
            out[(section, m.group(1).strip().lower())] = lineno
    return out


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def parse_sweep(text: str) -> tuple:
    vals = tuple(float(x) for x in text.replace(";", ",").split(",") if x.strip())
    if not vals:
        raise ValueError("empty sweep")
    return vals


def load_config(path) -> ExperimentConfig:
    """Parse an INI config; errors carry the offending line number."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", path) from None
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ConfigError(str(exc).splitlines()[0], path, line) from None
    lines = _key_lines(text)
    base = path.parent

    def convert(section, key, conv, raw):
        try:
            if conv is str:
                return raw
            return conv(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {conv.__name__}",
                              path, lines.get((section, key))) from None

    for section in parser.sections():
        if section.lower() not in ("experiment", "instance", "tail"):
            raise ConfigError(f"unknown section [{section}]", path, lines.get((section.lower(), None)))

    kw = {}
    if parser.has_section("experiment"):
        for key, raw in parser.items("experiment"):
            if key not in _EXPERIMENT_KEYS:
                raise ConfigError(f"unknown key {key!r} in [experiment]", path, lines.get(("experiment", key)))
            conv = _EXPERIMENT_KEYS[key]
            if key == "sweep":
                conv = parse_sweep
            elif key == "timing":
                conv = _parse_bool
            kw["K" if key == "k" else key] = convert("experiment", key, conv, raw)
        if "algorithm" in kw:
            kw["algorithm"] = kw["algorithm"].strip().lower()

    inst_kw = {}
    if parser.has_section("instance"):
        for key, raw in parser.items("instance"):
            if key not in _INSTANCE_KEYS:
                raise ConfigError(f"unknown key {key!r} in [instance]", path, lines.get(("instance", key)))
            val = convert("instance", key, _INSTANCE_KEYS[key], raw)
            if key in ("unitary", "state", "hamiltonian"):
                val = str((base / val).resolve()) if not Path(val).is_absolute() else val
                if not Path(val).exists():
                    raise ConfigError(f"[instance] {key}: file {val} does not exist",
                                      path, lines.get(("instance", key)))
            inst_kw[key] = val
        if "name" not in inst_kw and ({"unitary", "hamiltonian"} & inst_kw.keys()):
            inst_kw["name"] = None
    kw["instance"] = InstanceSpec(**inst_kw)

    if parser.has_section("tail"):
        try:
            kw["tail"] = TailModel.from_config(dict(parser.items("tail")))
        except InvalidOperandError as exc:
            raise ConfigError(f"[tail] {exc}", path, lines.get(("tail", None))) from None
    try:
        return ExperimentConfig(**kw).validate()
    except ConfigError as exc:
        raise ConfigError(exc.message, path, lines.get(exc.key), exc.key) from None


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


@dataclass
class Instance:
    """Operands for one trial. ``hamiltonian`` is ``None`` for unitary-only instances."""

    unitary: DenseUnitary
    prep: StatePrep
    hamiltonian: np.ndarray | None
    tail: TailModel | None


def _random_hermitian_instance(rng) -> Instance:
    a = random_hermitian(4, rng, spectrum=(-1.0, 1.0))
    prep = StatePrep(DenseUnitary.random(2, rng))
    return Instance(exp_at(EvolutionOracle(a), 1.0), prep, a, TailModel.bounded(2.0, b=1.0))


def build_instance(spec: InstanceSpec, rng: np.random.Generator) -> Instance:
    """Materialize an instance; random built-ins use ``spec.seed`` if set, else ``rng``."""
    name = spec.name
    if name is not None:
        if name in ("random-hermitian", "random-unitary") and spec.seed is not None:
            rng = np.random.default_rng(spec.seed)
        zero = StatePrep(DenseUnitary.identity(1))
        if name == "identity":
            return Instance(DenseUnitary.identity(1), zero, pauli_z().matrix, TailModel.point(b=1.0))
        if name == "bit-flip":
            return Instance(pauli_x(), zero, pauli_x().matrix, TailModel.bounded(1.0, b=1.0))
        if name == "rotation":
            al = spec.alpha
            a = math.cos(al) * pauli_z().matrix + math.sin(al) * pauli_x().matrix
            return Instance(ry(2 * al), zero, a, TailModel.bounded(2.0, b=1.0))
        if name == "random-hermitian":
            return _random_hermitian_instance(rng)
        u = DenseUnitary.random(2, rng)
        return Instance(u, StatePrep(DenseUnitary.random(2, rng)), None, None)

    a = load_matrix(spec.hamiltonian) if spec.hamiltonian else None
    if spec.unitary:
        u = DenseUnitary(load_matrix(spec.unitary))
    else:
        u = exp_at(EvolutionOracle(a), 1.0)
    if spec.state:
        prep = StatePrep.from_state(StateVector.from_amplitudes(load_vector(spec.state), normalize=True))
    else:
        prep = StatePrep(DenseUnitary.identity(u.num_qubits))
    if prep.v.dim != u.dim or (a is not None and a.shape[0] != u.dim):
        raise ConfigError("instance files have mismatched dimensions")
    return Instance(u, prep, a, None)


# ---------------------------------------------------------------------------
# Trials
# ---------------------------------------------------------------------------


@dataclass
class TrialRecord:
    trial: int
    seed: int
    estimate_re: float
    estimate_im: float
    exact_re: float
    exact_im: float
    error: float
    within_p: bool
    n_preps: int
    m_evolutions: int
    total_time: float
    u_uses: int
    depth: int
    wall_ms: float | None = None

    @property
    def estimate(self) -> complex:
        return complex(self.estimate_re, self.estimate_im)

    @property
    def exact(self) -> complex:
        return complex(self.exact_re, self.exact_im)


def trial_seed(master: int, key: tuple) -> int:
    """Counter-based per-trial seed (63-bit) from the master seed."""
    ss = np.random.SeedSequence(master, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def oea_u_uses(p: float, c: float | None, r_cap: int = DEFAULT_R_CAP) -> int:
    """U-uses charged by ``overlap_estimate(p, c)`` (independent of outcomes)."""
    if c is None:
        return 4 * original_pea_uses(p / 8) + 2 * original_pea_uses(p / 2)
    c_sub = 1.0 - (1.0 - c) / 3.0

    def amp(q):
        n = bits_for_precision(2 * q)
        return 2 * modified_pea_uses(n, resolve_repetitions(n, c_sub, None, r_cap))

    return amp(p / 4) + 2 * amp(p / 16)


def _nearest_eigenphase(u: DenseUnitary, state: StateVector, phase: float) -> float:
    vals, vecs = np.linalg.eig(u.matrix)
    weights = np.abs(np.linalg.solve(vecs, state.amplitudes)) ** 2
    phases = np.mod(np.angle(vals), TWO_PI)[weights > EIG_WEIGHT_TOL]
    return float(min(phases, key=lambda ph: circular_distance(ph, phase)))


def _require_hamiltonian(inst: Instance, algorithm: str):
    if inst.hamiltonian is None:
        raise ConfigError(f"algorithm {algorithm} needs a Hamiltonian instance")
    return EvolutionOracle(inst.hamiltonian)


def run_trial(config: ExperimentConfig, p: float, index: int, key: tuple) -> TrialRecord:
    seed = trial_seed(config.seed, key)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    inst = build_instance(config.instance, rng)
    alg, c = config.algorithm, config.c
    psi = inst.prep.target_state
    if alg in ("pea", "pea_modified"):
        if alg == "pea":
            est = pea_original(inst.unitary, psi, p, rng)
        else:
            est = pea_modified(inst.unitary, psi, p, c, rng)
        exact_phase = _nearest_eigenphase(inst.unitary, psi, est.phase)
        value, exact = complex(est.phase), complex(exact_phase)
        error = circular_distance(est.phase, exact_phase) / TWO_PI
        ledger = est.ledger
    elif alg == "aea":
        est = amp_estimate(inst.unitary, inst.prep, min(p, 0.5), c, rng)
        exact_amp = abs(inner_product(psi, _applied(inst.unitary, psi)))
        value, exact = complex(est.amplitude), complex(exact_amp)
        error = abs(math.acos(min(1.0, est.amplitude)) - math.acos(min(1.0, exact_amp))) / TWO_PI
        ledger = est.ledger
    elif alg == "oea":
        est = overlap_estimate(inst.unitary, inst.prep, p, c, rng)
        exact = inner_product(psi, _applied(inst.unitary, psi))
        value = est.value
        error = hemisphere_distance(value, exact)
        ledger = est.ledger
    elif alg == "one_ancilla":
        samples = config.samples or oea_u_uses(p, c)
        est = one_ancilla_overlap(inst.unitary, inst.prep, samples, rng)
        exact = inner_product(psi, _applied(inst.unitary, psi))
        value = complex(est.value)
        error = abs(value - exact)
        ledger = est.ledger
    elif alg == "direct_sample":
        evo = _require_hamiltonian(inst, alg)
        est = direct_sample_mean(evo, inst.prep, config.samples or DEFAULT_SAMPLES, rng)
        exact = complex(evo.expectation(psi))
        value = complex(est.value)
        error = abs(value - exact)
        ledger = est.ledger
    else:
        evo = _require_hamiltonian(inst, alg)
        tail = config.tail or inst.tail
        if tail is None:
            raise ConfigError(f"algorithm {alg} needs a [tail] block for this instance")
        est = eea_full(evo, inst.prep, tail, p, c, rng, K=config.K,
                       use_stage1_log=(alg == "eea_stage1log"))
        exact = complex(evo.expectation(psi))
        value = complex(est.value)
        error = abs(value - exact)
        ledger = est.ledger
    wall = (time.perf_counter() - start) * 1e3 if config.timing else None
    return TrialRecord(
        trial=index, seed=seed,
        estimate_re=float(value.real), estimate_im=float(value.imag),
        exact_re=float(complex(exact).real), exact_im=float(complex(exact).imag),
        error=float(error), within_p=bool(error <= p),
        n_preps=int(ledger.state_preps), m_evolutions=int(ledger.evolution_uses),
        total_time=float(ledger.total_time), u_uses=int(ledger.u_uses), depth=int(ledger.depth),
        wall_ms=wall,
    )


def _applied(u: DenseUnitary, psi: StateVector) -> StateVector:
    return StateVector(u.matrix @ psi.amplitudes)


def _run_job(args):
    config, p, index, key = args
    return run_trial(config, p, index, key)


@dataclass
class RunSummary:
    p: float
    trials: int
    empirical_confidence: float
    median_error: float
    mean_ledger: dict

    def lines(self) -> list:
        led = ", ".join(f"{k}={v:.6g}" for k, v in self.mean_ledger.items())
        return [f"p={self.p:g} trials={self.trials} within_p={self.empirical_confidence:.4f} "
                f"median_error={self.median_error:.6g} mean[{led}]"]


@dataclass
class SweepSummary:
    points: list
    slope: float | None

    def lines(self) -> list:
        out = [ln for pt in self.points for ln in pt.lines()]
        if self.slope is not None:
            out.append(f"log-log slope of median error vs mean U-uses: {self.slope:.4f}")
        return out


def summarize(records, p: float) -> RunSummary:
    if not records:
        return RunSummary(p, 0, float("nan"), float("nan"), {})
    keys = ("n_preps", "m_evolutions", "total_time", "u_uses", "depth")
    return RunSummary(
        p=p, trials=len(records),
        empirical_confidence=float(np.mean([r.within_p for r in records])),
        median_error=float(np.median([r.error for r in records])),
        mean_ledger={k: float(np.mean([getattr(r, k) for r in records])) for k in keys},
    )


def loglog_slope(x, y) -> float:
    x, y = np.asarray(x, float), np.asarray(y, float)
    if len(x) < 2 or np.any(x <= 0) or np.any(y <= 0):
        return float("nan")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def run_batch(config: ExperimentConfig, p: float, key_prefix: tuple = ()) -> list:
    jobs = [(config, p, i, key_prefix + (i,)) for i in range(config.trials)]
    if config.workers <= 1 or len(jobs) <= 1:
        return [_run_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * config.workers))))


def run(config: ExperimentConfig):
    """Run the experiment; returns ``(records, summary)``.

    For a sweep ``records`` is a list of per-p record lists and the summary
    carries the log-log slope of median error against mean U-uses.
    """
    config.validate()
    if not config.sweep:
        records = run_batch(config, config.p)
        return records, summarize(records, config.p)
    batches, points = [], []
    for j, p in enumerate(config.sweep):
        recs = run_batch(config, p, (j,))
        batches.append(recs)
        points.append(summarize(recs, p))
    slope = loglog_slope([pt.mean_ledger.get("u_uses", 0) for pt in points],
                         [pt.median_error for pt in points])
    return batches, SweepSummary(points, slope)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _record_row(rec: TrialRecord) -> list:
    return [_fmt(getattr(rec, name)) for name in COLUMNS]


def format_records(records, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for rec in records:
            writer.writerow(_record_row(rec))
        return buf.getvalue()
    if fmt == "jsonl":
        lines = []
        for rec in records:
            lines.append(json.dumps({name: getattr(rec, name) for name in COLUMNS}))
        return "".join(line + "\n" for line in lines)
    raise ConfigError(f"unknown format {fmt!r}; expected csv or jsonl")


def emit(records, fmt: str, path) -> None:
    """Write records as CSV (header always present) or JSON lines."""
    text = format_records(records, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _from_text(name: str, raw: str):
    if name == "wall_ms":
        return None if raw == "" else float(raw)
    if name == "within_p":
        return _parse_bool(raw)
    if name in ("trial", "seed", "n_preps", "m_evolutions", "u_uses", "depth"):
        return int(raw)
    return float(raw)


def parse_records(text: str, fmt: str = "csv") -> list:
    """Inverse of :func:`format_records`."""
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != COLUMNS:
            raise ValueError("missing or unexpected CSV header")
        return [TrialRecord(**{n: _from_text(n, v) for n, v in zip(COLUMNS, row)}) for row in rows[1:]]
    if fmt == "jsonl":
        return [TrialRecord(**json.loads(line)) for line in text.splitlines() if line.strip()]
    raise ValueError(f"unknown format {fmt!r}")


def _sweep_path(path: Path, p: float) -> Path:
    return path.with_name(f"{path.stem}_p{p!r}{path.suffix}")


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qexpect", description="Run seeded estimation experiments.")
    ap.add_argument("--config", help="INI experiment config")
    ap.add_argument("--algorithm", choices=ALGORITHMS)
    ap.add_argument("--p", type=float)
    ap.add_argument("--c", type=float)
    ap.add_argument("--K", type=int)
    ap.add_argument("--trials", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--sweep", help='comma-separated precisions, e.g. "0.2,0.1,0.05"')
    ap.add_argument("--instance", choices=BUILTINS, help="built-in instance (overrides the config)")
    ap.add_argument("--samples", type=int)
    ap.add_argument("--out", help="output file (default stdout); sweeps write one file per p")
    ap.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    ap.add_argument("--workers", type=int)
    ap.add_argument("--timing", action="store_true", help="fill wall_ms (output is then not reproducible)")
    return ap


def config_from_args(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    for name in ("algorithm", "p", "c", "K", "trials", "seed", "samples", "workers"):
        val = getattr(args, name)
        if val is not None:
            overrides[name] = val
    if args.sweep is not None:
        try:
            overrides["sweep"] = parse_sweep(args.sweep)
        except ValueError:
            raise ConfigError(f"bad --sweep value {args.sweep!r}") from None
    if args.timing:
        overrides["timing"] = True
    if args.instance:
        overrides["instance"] = replace(config.instance, name=args.instance)
    return replace(config, **overrides).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        records, summary = run(config)
        if config.sweep:
            for p, recs in zip(config.sweep, records):
                emit(recs, args.format, _sweep_path(Path(args.out), p) if args.out else None)
        else:
            emit(records, args.format, args.out)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, InvalidOperandError, MatrixFormatError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for line in summary.lines():
        print(line, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
