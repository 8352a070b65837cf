"""Acceptance gate: one test (and one printed PASS/FAIL line) per criterion.

The trend-reproduction tests run full Monte-Carlo sweeps and dominate the
suite's runtime (tens of minutes single-threaded).
"""

import csv
import io
import itertools
import math
import time

import numpy as np

from corrgcd.blocks import make_partition
from corrgcd.channel import ChannelModel, ebn0_to_sigma, loglik_chain, sample_noise
from corrgcd.decoders import (DecodeStatus, decode_gp, decode_gt,
                              decode_ml_oracle)
from corrgcd.gf2 import build_crc_code, gf2_row_reduce, load_code, make_code_from_H
from corrgcd.harness import ExperimentConfig, run_sweep, trial_rng
from corrgcd.patterns import EXHAUSTED, PatternState
from corrgcd import data_path

SEED = 7


def criterion(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'}: {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def parse_rows(csv_text):
    return list(csv.DictReader(io.StringIO(csv_text)))


def series(rows, decoder, field="bler"):
    pts = [(float(r["ebn0_db"]), float(r[field])) for r in rows
           if r["decoder"] == decoder]
    return sorted(pts)


def crossing_db(pts, target=1e-3):
    """Eb/N0 where the BLER curve crosses `target`, log-linear in BLER."""
    for (x0, p0), (x1, p1) in zip(pts, pts[1:]):
        if p0 >= target >= p1 and p1 > 0:
            if p0 == p1:
                return x0
            t = (math.log(target) - math.log(p0)) / (math.log(p1) - math.log(p0))
            return x0 + t * (x1 - x0)
    raise AssertionError(f"BLER {target} not bracketed by {pts}")


def random_code_16_8():
    rng = np.random.default_rng(5)
    while True:
        H = rng.integers(0, 2, size=(8, 16)).astype(np.uint8)
        if len(gf2_row_reduce(H)[1]) == 8:
            return make_code_from_H(H)


def paired_trial(code, model, t, master=99):
    rng = np.random.default_rng(np.random.SeedSequence(master, spawn_key=(t,)))
    msg = rng.integers(0, 2, size=code.k).astype(np.uint8)
    x = code.encode(msg)
    n = sample_noise(code.n, model, rng)
    return x, (1.0 - 2.0 * x.astype(np.float64)) + n


def test_likelihood_correctness():
    rng = np.random.default_rng(0)
    t0 = time.perf_counter()
    worst = 0.0
    for case in range(100):
        rho = (0.0, 0.5, -0.5, 0.9)[case % 4]
        m = int(rng.integers(1, 9))
        sigma = float(rng.uniform(0.3, 2.0))
        model = ChannelModel(sigma=sigma, rho=rho)
        y = rng.normal(size=m)
        x = rng.integers(0, 2, size=m)
        z = y - (1.0 - 2.0 * x)
        idx = np.arange(m)
        cov = sigma ** 2 * rho ** np.abs(idx[:, None] - idx[None, :])
        _, logdet = np.linalg.slogdet(cov)
        want = -0.5 * (m * math.log(2 * math.pi) + logdet
                       + float(z @ np.linalg.solve(cov, z)))
        worst = max(worst, abs(loglik_chain(y, x, model) - want))
    dt = time.perf_counter() - t0
    criterion("likelihood correctness", worst < 1e-9 and dt < 1.0,
              f"max abs err {worst:.2e}, {dt:.2f}s")


def test_noise_statistics():
    sigma, rho = 1.0, 0.5
    t0 = time.perf_counter()
    n = sample_noise(10 ** 6, ChannelModel(sigma=sigma, rho=rho), 123)
    errs = []
    for lag in range(4):
        emp = float(np.mean(n[:len(n) - lag] * n[lag:]))
        errs.append(abs(emp - sigma ** 2 * rho ** lag))
    dt = time.perf_counter() - t0
    criterion("noise statistics", max(errs) < 0.01 * sigma ** 2 and dt < 5.0,
              f"max lag-cov err {max(errs):.4f}, {dt:.2f}s")


def test_degeneration_rho0_b1():
    code = build_crc_code(48, 0x3D65)
    part = make_partition(code.n, 1, code.base_set)
    model = ChannelModel(sigma=ebn0_to_sigma(4.0, code.rate), rho=0.0)
    mismatches = 0
    for t in range(1000):
        rng = trial_rng(SEED, t)
        msg = rng.integers(0, 2, size=code.k).astype(np.uint8)
        x = code.encode(msg)
        y = (1.0 - 2.0 * x.astype(np.float64)) + sample_noise(code.n, model, rng)
        a = decode_gp(y, code, part, model, cap=32768)
        b = decode_gt(y, code, part, model, cap=32768)
        same = (a.status == b.status and a.queries == b.queries
                and np.array_equal(a.codeword, b.codeword))
        mismatches += not same
    criterion("degeneration (rho=0, b=1: GP == GT)", mismatches == 0,
              f"{mismatches}/1000 mismatching trials")


def test_oracle_equivalence():
    code = random_code_16_8()
    part = make_partition(code.n, 2, code.base_set)
    model = ChannelModel(sigma=ebn0_to_sigma(4.0, code.rate), rho=0.5)
    t0 = time.perf_counter()
    gt_err = ml_err = 0
    for t in range(10 ** 4):
        x, y = paired_trial(code, model, t)
        r = decode_gt(y, code, part, model, gt_stop_metric="full")
        gt_err += not np.array_equal(r.codeword, x)
        m = decode_ml_oracle(y, code, model)
        ml_err += not np.array_equal(m.codeword, x)
    dt = time.perf_counter() - t0
    ok = ml_err > 0 and gt_err <= 1.1 * ml_err and dt < 120.0
    criterion("oracle equivalence (GT within 1.1x of ML)", ok,
              f"GT {gt_err} vs ML {ml_err} block errors, {dt:.0f}s")


def test_gp_stopping_soundness():
    code = random_code_16_8()
    part = make_partition(code.n, 2, code.base_set)
    model = ChannelModel(sigma=ebn0_to_sigma(4.0, code.rate), rho=0.5)
    # all 2^8 codewords and their block-product log-likelihood evaluator
    msgs = ((np.arange(256)[:, None] >> np.arange(7, -1, -1)) & 1).astype(np.uint8)
    cws = code.encode(msgs)
    violations = stopped = 0
    for t in range(1000):
        x, y = paired_trial(code, model, t)
        r = decode_gp(y, code, part, model)
        if r.status is not DecodeStatus.STOPPED:
            continue
        stopped += 1
        from corrgcd.blocks import block_loglik_tables
        tables = block_loglik_tables(y, part, model)
        best = -math.inf
        for cw in cws:
            l_gp = 0.0
            for i in range(part.n_b):
                s, w = part.starts[i], part.widths[i]
                pat = 0
                for tt in range(w):
                    pat = (pat << 1) | int(cw[s + tt])
                l_gp += float(tables[i][pat])
            best = max(best, l_gp)
        if best > r.loglik_block_product + 1e-7:
            violations += 1
    criterion("GP stopping soundness", violations == 0 and stopped > 0,
              f"{violations} violations over {stopped} stopped trials")


def _sweep_b2():
    cfg_aigp = ExperimentConfig(rho=0.5, b=2, decoders=("AI", "GP"),
                                ebn0_db_list=(2.75, 3.25, 3.75, 4.25),
                                trials=400_000, min_block_errors=100,
                                master_seed=SEED)
    cfg_gt = ExperimentConfig(rho=0.5, b=2, decoders=("GT",),
                              ebn0_db_list=(2.75, 3.5), trials=250_000,
                              min_block_errors=100, cap=32768,
                              gt_stop_metric="full", master_seed=SEED)
    return parse_rows(run_sweep(cfg_aigp)) + parse_rows(run_sweep(cfg_gt))


def test_bler_trend_b2():
    rows = _sweep_b2()
    ai = series(rows, "AI")
    gp = series(rows, "GP")
    gt = series(rows, "GT")
    gain = crossing_db(ai) - crossing_db(gt)
    ok_gain = 0.45 <= gain <= 1.05

    ai_q = dict(series(rows, "AI", "avg_queries"))
    gp_q = dict(series(rows, "GP", "avg_queries"))
    lowest = min(ai_q)
    ratio = gp_q[lowest] / ai_q[lowest]
    ok_ratio = ratio <= 0.35

    ai_n = dict(series(rows, "AI", "trials"))
    gp_n = dict(series(rows, "GP", "trials"))
    ok_bler = True
    for (e, pa), (_, pg) in zip(ai, gp):
        se = math.sqrt(pa * (1 - pa) / ai_n[e] + pg * (1 - pg) / gp_n[e])
        if pa > pg + 3 * se:
            ok_bler = False
    criterion("BLER/query trend b=2 (gain, query ratio, AI<=GP)",
              ok_gain and ok_ratio and ok_bler,
              f"gain {gain:.2f} dB, GP/AI queries {ratio:.2f} at {lowest} dB, "
              f"AI<=GP within 3 SE: {ok_bler}")


def test_bler_trend_b4():
    cfg_ai = ExperimentConfig(rho=0.5, b=4, decoders=("AI",),
                              ebn0_db_list=(3.0, 3.5), trials=400_000,
                              min_block_errors=100, master_seed=SEED)
    cfg_gt = ExperimentConfig(rho=0.5, b=4, decoders=("GT",),
                              ebn0_db_list=(3.0, 3.5), trials=300_000,
                              min_block_errors=100, cap=16384,
                              gt_stop_metric="full", master_seed=SEED)
    rows = parse_rows(run_sweep(cfg_ai)) + parse_rows(run_sweep(cfg_gt))
    gain = crossing_db(series(rows, "AI")) - crossing_db(series(rows, "GT"))
    criterion("BLER trend b=4 (GT gain over AI)",
              0.1 <= gain <= 0.7, f"gain {gain:.2f} dB")


def test_capolar_partition():
    code = load_code(data_path("capolar_128_110_H.txt"))
    want_comp = tuple(range(1, 18)) + (33,)
    want_base = tuple(range(18, 33)) + tuple(range(34, 129))
    part = make_partition(code.n, 2, code.base_set)
    # positions 17 and 33 (1-based) must be singleton blocks
    sing17 = any(part.starts[i] == 16 and part.widths[i] == 1
                 for i in range(part.n_b))
    sing33 = any(part.starts[i] == 32 and part.widths[i] == 1
                 for i in range(part.n_b))
    ok = (code.comp_set == want_comp and code.base_set == want_base
          and sing17 and sing33)
    criterion("CA-Polar [128,110] partition", ok,
              f"comp head {code.comp_set[:5]}..., singletons {sing17}/{sing33}")


def test_pattern_generator_oracle():
    from corrgcd.blocks import ReliabilityTable, Scope, TableEntry
    rng = np.random.default_rng(1)
    bad = 0
    for m in range(1, 13):
        blocks = [int(v) for v in rng.integers(0, max(1, m - 2), size=m)]
        deltas = np.sort(rng.uniform(0.01, 1.0, size=m))
        entries = tuple(TableEntry(block=b, alt=1, delta=float(d))
                        for b, d in zip(blocks, deltas))
        table = ReliabilityTable(entries=entries,
                                 hard=np.zeros(max(blocks) + 1, dtype=np.int64),
                                 scope=Scope.ALL, part=None, block_logliks=())
        state = PatternState(table, cap=1 << 13)
        got = []
        while True:
            p = state.next_pattern()
            if p is EXHAUSTED:
                break
            got.append(tuple(p.ranks))
        subs = []
        for card in range(m + 1):
            subs.extend(itertools.combinations(range(1, m + 1), card))
        subs.sort(key=lambda s: (sum(s), len(s), s))
        want = [s for s in subs
                if len({blocks[r - 1] for r in s}) == len(s)]
        bad += got != want
    criterion("pattern generator oracle (M <= 12)", bad == 0,
              f"{bad} mismatching table sizes")
