"""Command-line front end: Monte-Carlo sweeps, single-shot decoding, and
the ML oracle baseline.

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .blocks import make_partition
from .channel import ChannelModel, ebn0_to_sigma
from .gf2 import CodeError
from .harness import (ConfigError, ExperimentConfig, build_code, parse_config_file,
                      parse_ebn0_spec, run_sweep, _dispatch)
from dataclasses import replace


def _load_config(args) -> ExperimentConfig:
    cfg = parse_config_file(args.config) if args.config else ExperimentConfig()
    updates = {}
    if getattr(args, "seed", None) is not None:
        updates["master_seed"] = args.seed
    if getattr(args, "decoders", None):
        updates["decoders"] = tuple(d.strip().upper() for d in args.decoders.split(","))
    if getattr(args, "ebn0", None):
        updates["ebn0_db_list"] = parse_ebn0_spec(args.ebn0)
    if getattr(args, "trials", None) is not None:
        updates["trials"] = args.trials
    if getattr(args, "min_errors", None) is not None:
        updates["min_block_errors"] = args.min_errors
    cfg = replace(cfg, **updates)
    cfg.validate()
    return cfg


def _read_soft_values(path) -> np.ndarray:
    with open(path) as fh:
        return np.array([float(t) for t in fh.read().split()], dtype=np.float64)


def cmd_sweep(args) -> int:
    cfg = _load_config(args)

    def progress(row):
        print(f"# {row.decoder} Eb/N0={row.ebn0_db:g} dB: trials={row.trials_run} "
              f"errors={row.block_errors} bler={row.bler:.3g} "
              f"avg_queries={row.avg_queries:.3g}", file=sys.stderr)

    csv_text = run_sweep(cfg, out_path=args.out, progress=progress if args.verbose else None)
    if args.out is None:
        sys.stdout.write(csv_text)
    return 0


def _single_shot(args, decoder_override=None) -> int:
    cfg = _load_config(args)
    code = build_code(cfg)
    y = _read_soft_values(args.y)
    if len(y) != code.n:
        raise ConfigError(f"received sequence has length {len(y)}, code n={code.n}")
    model = ChannelModel(sigma=ebn0_to_sigma(args.ebn0_db, code.rate), rho=cfg.rho)
    part = make_partition(code.n, cfg.b, code.base_set)
    decoder = decoder_override or args.decoder.upper()
    res = _dispatch(decoder, y, code, part, model, cfg)
    cw = "ABSENT" if res.codeword is None else "".join(str(int(v)) for v in res.codeword)
    print(f"decoder={decoder}")
    print(f"codeword={cw}")
    print(f"status={res.status.value}")
    print(f"queries={res.queries}")
    print(f"discarded={res.discarded}")
    print(f"loglik_full={res.loglik_full:.10g}")
    print(f"loglik_block_product={res.loglik_block_product:.10g}")
    return 0


def cmd_decode_one(args) -> int:
    return _single_shot(args)


def cmd_oracle(args) -> int:
    return _single_shot(args, decoder_override="ML")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corrgcd",
                                description="Soft-decision GRAND/GCD decoding benchmark "
                                            "for correlated Gaussian channels")
    sub = p.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="Monte-Carlo Eb/N0 sweep, CSV output")
    sweep.add_argument("--config", help="flat key-value config file")
    sweep.add_argument("--out", help="output CSV path (default: stdout)")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--decoders", help="comma list, e.g. AI,GP,GT")
    sweep.add_argument("--ebn0", help="comma list or a:b:step range in dB")
    sweep.add_argument("--trials", type=int)
    sweep.add_argument("--min-errors", dest="min_errors", type=int)
    sweep.add_argument("--verbose", action="store_true", help="per-point progress on stderr")
    sweep.set_defaults(func=cmd_sweep)

    one = sub.add_parser("decode-one", help="decode a single received sequence")
    one.add_argument("--config", help="flat key-value config file")
    one.add_argument("--y", required=True, help="file of whitespace-separated soft values")
    one.add_argument("--ebn0-db", type=float, required=True)
    one.add_argument("--decoder", default="GT", choices=["AI", "GP", "GT", "ML",
                                                         "ai", "gp", "gt", "ml"])
    one.set_defaults(func=cmd_decode_one)

    orc = sub.add_parser("oracle", help="run the exhaustive ML baseline on one sequence")
    orc.add_argument("--config", help="flat key-value config file")
    orc.add_argument("--y", required=True, help="file of whitespace-separated soft values")
    orc.add_argument("--ebn0-db", type=float, required=True)
    orc.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CodeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
