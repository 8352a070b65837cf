"""Seeded Monte-Carlo benchmark harness: Eb/N0 sweeps, BLER and query
statistics, CSV output.

Every trial's randomness derives solely from (master_seed, trial_index),
so all decoders at a given trial see the identical message and received
sequence, and repeated runs are bit-identical.
"""

from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass, field, replace

import numpy as np

from .blocks import make_partition
from .channel import ChannelModel, ebn0_to_sigma, transmit
from .decoders import (DecodeStatus, decode_gp, decode_gt, decode_ml_oracle,
                       decode_orbgrand_ai)
from .gf2 import CodeError, LinearCode, build_crc_code, load_code

DECODER_NAMES = ("AI", "GP", "GT", "ML")

CSV_HEADER = ("decoder,ebn0_db,trials,block_errors,bler,avg_queries,avg_discarded,"
              "status_early,status_stopped,status_capped,status_parity_hit")


class ConfigError(ValueError):
    """Invalid experiment configuration or config file."""


@dataclass(frozen=True)
class ExperimentConfig:
    code_kind: str = "crc"            # "crc" or "file"
    crc_k: int = 48
    crc_poly: int = 0x3D65            # CRC-16/DNP
    code_file: str | None = None
    rho: float = 0.5
    b: int = 2
    ebn0_db_list: tuple = (4.0, 5.0, 6.0)
    decoders: tuple = ("AI", "GP", "GT")
    trials: int = 10_000
    min_block_errors: int = 100
    cap: int = 10 ** 6
    master_seed: int = 1
    gt_stop_metric: str = "bound"
    all_zero_tx: bool = False

    def validate(self):
        if self.code_kind not in ("crc", "file"):
            raise ConfigError(f"unknown code kind {self.code_kind!r}")
        if self.code_kind == "file" and not self.code_file:
            raise ConfigError("code_kind 'file' requires code_file")
        if self.trials < 1 or self.min_block_errors < 1 or self.cap < 1:
            raise ConfigError("trials, min_block_errors and cap must be >= 1")
        if self.b < 1:
            raise ConfigError("block size b must be >= 1")
        if not -1 < self.rho < 1:
            raise ConfigError(f"rho must be in (-1, 1), got {self.rho}")
        for d in self.decoders:
            if d not in DECODER_NAMES:
                raise ConfigError(f"unknown decoder {d!r}")
        if self.gt_stop_metric not in ("bound", "full"):
            raise ConfigError(f"unknown gt_stop_metric {self.gt_stop_metric!r}")
        if not self.ebn0_db_list:
            raise ConfigError("ebn0_db_list is empty")


@dataclass
class SweepRow:
    decoder: str
    ebn0_db: float
    trials_run: int
    block_errors: int
    bler: float
    avg_queries: float
    avg_discarded: float
    status_histogram: Counter = field(default_factory=Counter)
    avg_queries_ratio_vs_ai: float | None = None


def build_code(config: ExperimentConfig) -> LinearCode:
    if config.code_kind == "crc":
        return build_crc_code(config.crc_k, config.crc_poly)
    return load_code(config.code_file)


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial,)))


def _dispatch(decoder, y, code, part, model, config):
    if decoder == "AI":
        return decode_orbgrand_ai(y, code, part, model, config.cap)
    if decoder == "GP":
        return decode_gp(y, code, part, model, config.cap)
    if decoder == "GT":
        return decode_gt(y, code, part, model, config.cap, config.gt_stop_metric)
    if decoder == "ML":
        return decode_ml_oracle(y, code, model)
    raise ConfigError(f"unknown decoder {decoder!r}")


def run_trial(config: ExperimentConfig, code, part, model, trial: int, decoder: str):
    """One seeded trial: message, transmission, decode, error flag."""
    rng = trial_rng(config.master_seed, trial)
    if config.all_zero_tx:
        msg = np.zeros(code.k, dtype=np.uint8)
        rng.integers(0, 2, size=code.k)  # keep the noise stream aligned
    else:
        msg = rng.integers(0, 2, size=code.k).astype(np.uint8)
    x = code.encode(msg)
    y = transmit(x, model, rng)
    res = _dispatch(decoder, y, code, part, model, config)
    err = res.codeword is None or not np.array_equal(res.codeword, x)
    return res, err, x, y


def run_point(config: ExperimentConfig, decoder: str, ebn0_db: float,
              code: LinearCode | None = None) -> SweepRow:
    """Monte-Carlo estimate at one (decoder, Eb/N0) point.

    Runs trials 1..config.trials in order, stopping once
    config.min_block_errors block errors have accumulated.
    """
    config.validate()
    if code is None:
        code = build_code(config)
    part = make_partition(code.n, config.b, code.base_set)
    model = ChannelModel(sigma=ebn0_to_sigma(ebn0_db, code.rate), rho=config.rho)
    errors = 0
    queries = 0
    discarded = 0
    hist = Counter()
    trials_run = 0
    for trial in range(config.trials):
        res, err, _, _ = run_trial(config, code, part, model, trial, decoder)
        trials_run += 1
        errors += err
        queries += res.queries
        discarded += res.discarded
        hist[res.status] += 1
        if errors >= config.min_block_errors:
            break
    return SweepRow(decoder=decoder, ebn0_db=ebn0_db, trials_run=trials_run,
                    block_errors=errors, bler=errors / trials_run,
                    avg_queries=queries / trials_run,
                    avg_discarded=discarded / trials_run,
                    status_histogram=hist)


def run_sweep(config: ExperimentConfig, out_path=None, progress=None) -> str:
    """Full sweep over (decoder, Eb/N0) pairs; returns the CSV text.

    Trials are paired across decoders: trial t at any point uses the
    identical message and noise realization for every decoder.
    """
    config.validate()
    code = build_code(config)
    rows = []
    for decoder in config.decoders:
        for ebn0 in config.ebn0_db_list:
            row = run_point(config, decoder, ebn0, code)
            rows.append(row)
            if progress is not None:
                progress(row)
    ai = {r.ebn0_db: r.avg_queries for r in rows if r.decoder == "AI"}
    for r in rows:
        if r.ebn0_db in ai and ai[r.ebn0_db] > 0:
            r.avg_queries_ratio_vs_ai = r.avg_queries / ai[r.ebn0_db]
    csv_text = rows_to_csv(rows)
    if out_path is not None:
        try:
            with open(out_path, "w") as fh:
                fh.write(csv_text)
        except OSError as e:
            raise RuntimeError(f"cannot write CSV to {out_path}: {e}") from e
    return csv_text


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in rows:
        buf.write(",".join([
            r.decoder,
            f"{r.ebn0_db:.10g}",
            str(r.trials_run),
            str(r.block_errors),
            f"{r.bler:.10g}",
            f"{r.avg_queries:.10g}",
            f"{r.avg_discarded:.10g}",
            str(r.status_histogram.get(DecodeStatus.EARLY, 0)),
            str(r.status_histogram.get(DecodeStatus.STOPPED, 0)),
            str(r.status_histogram.get(DecodeStatus.CAPPED, 0)),
            str(r.status_histogram.get(DecodeStatus.PARITY_HIT, 0)),
        ]) + "\n")
    return buf.getvalue()


_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def parse_ebn0_spec(spec: str):
    """Either a comma list '3,4,5' or a range 'a:b:step' (inclusive ends)."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"bad ebn0 range {spec!r}, expected a:b:step")
        a, b, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigError("ebn0 step must be > 0")
        out = []
        v = a
        while v <= b + 1e-9:
            out.append(round(v, 10))
            v += step
        return tuple(out)
    try:
        return tuple(float(t) for t in spec.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"bad ebn0 list {spec!r}") from None


def parse_config_file(path) -> ExperimentConfig:
    """Flat key-value config: 'key = value' lines, '#' comments."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    kv = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        kv[key] = val
    return config_from_dict(kv, source=str(path))


def config_from_dict(kv: dict, source="<config>") -> ExperimentConfig:
    cfg = ExperimentConfig()
    updates = {}
    try:
        for key, val in kv.items():
            if key == "code":
                updates["code_kind"] = val
            elif key == "k":
                updates["crc_k"] = int(val)
            elif key == "poly":
                updates["crc_poly"] = int(val, 0)
            elif key == "code_file":
                updates["code_file"] = val
            elif key == "rho":
                updates["rho"] = float(val)
            elif key == "b":
                updates["b"] = int(val)
            elif key == "ebn0_db":
                updates["ebn0_db_list"] = parse_ebn0_spec(val)
            elif key == "decoders":
                updates["decoders"] = tuple(d.strip().upper() for d in val.split(",") if d.strip())
            elif key == "trials":
                updates["trials"] = int(val)
            elif key == "min_errors":
                updates["min_block_errors"] = int(val)
            elif key == "cap":
                updates["cap"] = int(val)
            elif key == "seed":
                updates["master_seed"] = int(val)
            elif key == "gt_stop_metric":
                updates["gt_stop_metric"] = val
            elif key == "all_zero_tx":
                if val.lower() not in _BOOL:
                    raise ConfigError(f"{source}: bad boolean {val!r}")
                updates["all_zero_tx"] = _BOOL[val.lower()]
            else:
                raise ConfigError(f"{source}: unknown config key {key!r}")
    except ValueError as e:
        raise ConfigError(f"{source}: {e}") from e
    cfg = replace(cfg, **updates)
    cfg.validate()
    return cfg
