"""Decoders: block-level ORBGRAND over correlated noise, its two GCD
integrations (block-product and full-CSI maximum update), and a
brute-force ML oracle.

All decoders count queries as patterns drawn from the generator,
including conflict-discarded ones.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import channel
from .blocks import (BlockClass, BlockPartition, Scope, block_loglik_tables,
                     build_reliability_table)
from .channel import ChannelModel, loglik_chain
from .gf2 import LinearCode, is_codeword
from .patterns import (CAPPED, DEFAULT_CAP, EXHAUSTED, PatternState,
                       future_delta_floor)


class DecodeStatus(enum.Enum):
    STOPPED = "stopped"          # likelihood bound certified the running maximum
    EARLY = "early"              # first query equalled the full hard demodulation
    PARITY_HIT = "parity_hit"    # first parity-satisfying decision returned
    CAPPED = "capped"            # pattern budget exhausted
    EXHAUSTED = "exhausted"      # every subset consumed (tiny instances / ML oracle)


@dataclass
class DecodeResult:
    codeword: np.ndarray | None
    queries: int
    discarded: int
    status: DecodeStatus
    loglik_full: float
    loglik_block_product: float


def _decision_bits(part: BlockPartition, patterns) -> np.ndarray:
    """Expand per-block pattern integers into an n-bit sequence."""
    x = np.zeros(part.n, dtype=np.uint8)
    for i in range(part.n_b):
        s, w = part.starts[i], part.widths[i]
        p = int(patterns[i])
        for t in range(w):
            x[s + t] = (p >> (w - 1 - t)) & 1
    return x


def _block_flips(part, block, hard_pat, alt):
    """Global 0-based positions where alt differs from the hard pattern."""
    w = part.widths[block]
    s = part.starts[block]
    diff = hard_pat ^ alt
    return [s + t for t in range(w) if (diff >> (w - 1 - t)) & 1]


def decode_orbgrand_ai(y, code: LinearCode, part: BlockPartition,
                       model: ChannelModel, cap: int = DEFAULT_CAP) -> DecodeResult:
    """Plain block-level rank-ordered decoding: return the first pattern
    whose full decision satisfies the parity check."""
    y = np.asarray(y, dtype=np.float64)
    tables = block_loglik_tables(y, part, model)
    table = build_reliability_table(y, part, model, Scope.ALL, tables)
    hard = table.hard
    nk = code.n - code.k
    H = code.H
    col_syn = [int.from_bytes(np.packbits(H[:, j], bitorder="little").tobytes(), "little")
               for j in range(code.n)]
    hard_bits = _decision_bits(part, hard)
    s0 = 0
    for j in range(code.n):
        if hard_bits[j]:
            s0 ^= col_syn[j]
    entry_syn = []
    for e in table.entries:
        s = 0
        for pos in _block_flips(part, e.block, int(hard[e.block]), e.alt):
            s ^= col_syn[pos]
        entry_syn.append(s)

    state = PatternState(table, cap)
    while True:
        p = state.next_pattern()
        if p is CAPPED or p is EXHAUSTED:
            status = DecodeStatus.CAPPED if p is CAPPED else DecodeStatus.EXHAUSTED
            return DecodeResult(codeword=None, queries=state.total_count,
                                discarded=state.discarded_count, status=status,
                                loglik_full=math.nan, loglik_block_product=math.nan)
        s = s0
        for r in p.ranks:
            s ^= entry_syn[r - 1]
        if s == 0:
            pats = list(hard)
            for blk, alt in p.swaps:
                pats[blk] = alt
            bits = _decision_bits(part, pats)
            lbp = float(sum(tables[i][pats[i]] for i in range(part.n_b)))
            return DecodeResult(codeword=bits, queries=state.total_count,
                                discarded=state.discarded_count,
                                status=DecodeStatus.PARITY_HIT,
                                loglik_full=loglik_chain(y, bits, model),
                                loglik_block_product=lbp)


_GT_LAMBDA_GRID = (0.0, 0.15, 0.3, 0.45, 0.6, 0.7, 0.8, 0.86, 0.9, 0.93,
                   0.95, 0.97, 0.98, 0.99, 0.995)

# Relative slack for stopping comparisons. The bound and p_star can be
# mathematically equal (e.g. the best codeword is the current flip with no
# complement-side delta), and they are accumulated along different float
# paths, so a strict comparison would resolve such ties by rounding noise.
# Stopping later is always sound; require a clear margin.
_STOP_TOL = 1e-9


def _clearly_above(a: float, b: float) -> bool:
    return a > b + _STOP_TOL * (1.0 + abs(b))


def _gt_stop_profile(y, part, model, tables, hard):
    """Certified stopping thresholds for the full-CSI maximum update rule.

    The full-sequence log-likelihood of a decision differs from its
    block-product log-likelihood by a sum of per-boundary corrections that
    depend only on the two bits adjacent to each block boundary. For every
    weight lam in the grid this computes

        S(lam) = max over all bit decisions of
                 (boundary corrections) - lam * (base-block delta)
                                        - (comp-block delta)

    by one forward pass over the block chain (state: last bit of the
    previous block). Any codeword whose base-block delta sum is at least d
    then satisfies

        loglik_full <= const_bound - (1 - lam) * d + S(lam),

    so the enumeration can stop once d exceeds
    (const_bound + S(lam) - p_star) / (1 - lam) for some lam. lam = 0
    reproduces the plain block-product bound and keeps the rho = 0
    behaviour identical to the block-product decoder.
    """
    y = np.asarray(y, dtype=np.float64)
    s2 = model.sigma ** 2
    rho = model.rho
    v = s2 * (1.0 - rho ** 2)
    lams = np.array(_GT_LAMBDA_GRID, dtype=np.float64)
    n_lam = len(lams)
    vstate = None
    for i in range(part.n_b):
        w = part.widths[i]
        pats = np.arange(1 << w)
        first = pats >> (w - 1)
        last = pats & 1
        delta = float(tables[i][hard[i]]) - tables[i]
        if part.classes[i] is BlockClass.BASE:
            score = -lams[:, None] * delta[None, :]
        else:
            score = np.broadcast_to(-delta[None, :], (n_lam, 1 << w))
        if vstate is None:
            incoming = np.zeros((n_lam, 1 << w))
        else:
            s = part.starts[i]
            zc = y[s] - 1.0 + 2.0 * np.array([0.0, 1.0])
            zp = y[s - 1] - 1.0 + 2.0 * np.array([0.0, 1.0])
            corr = (0.5 * math.log(s2 / v) + zc[None, :] ** 2 / (2.0 * s2)
                    - (zc[None, :] - rho * zp[:, None]) ** 2 / (2.0 * v))
            best_in = np.maximum(vstate[:, :1] + corr[0][None, :],
                                 vstate[:, 1:] + corr[1][None, :])
            incoming = best_in[:, first]
        total = incoming + score
        vstate = np.stack([total[:, last == 0].max(axis=1),
                           total[:, last == 1].max(axis=1)], axis=1)
    svals = vstate.max(axis=1)
    return svals, 1.0 / (1.0 - lams)


def _decode_gcd(y, code, part, model, cap, total_csi, gt_stop_metric="bound"):
    """Shared GCD loop. total_csi=False is the block-product update rule,
    total_csi=True evaluates candidates with the full-sequence likelihood."""
    y = np.asarray(y, dtype=np.float64)
    n, k, nk = code.n, code.k, code.n - code.k
    tables = block_loglik_tables(y, part, model)
    table = build_reliability_table(y, part, model, Scope.BASE_ONLY, tables)
    hard = table.hard

    base_blocks = [i for i in range(part.n_b) if part.classes[i] is BlockClass.BASE]
    comp_blocks = [i for i in range(part.n_b) if part.classes[i] is BlockClass.COMP]
    pos2base = {int(p): i for i, p in enumerate(code.base_idx)}
    pos2comp = {int(p): i for i, p in enumerate(code.comp_idx)}

    # Column masks of B_sub, with comp-order index 0 at the top bit so a
    # comp block's pattern is a contiguous bit field of the extension int.
    colmask = [0] * k
    for i in range(k):
        m = 0
        for r in range(nk):
            if code.B_sub[r, i]:
                m |= 1 << (nk - 1 - r)
        colmask[i] = m

    hard_base_bits = np.zeros(k, dtype=np.uint8)
    for blk in base_blocks:
        s, w = part.starts[blk], part.widths[blk]
        p = int(hard[blk])
        for t in range(w):
            hard_base_bits[pos2base[s + t]] = (p >> (w - 1 - t)) & 1
    hard_ext_int = 0
    for i in range(k):
        if hard_base_bits[i]:
            hard_ext_int ^= colmask[i]

    # Comp-block extraction parameters and hard-demod comp reference.
    comp_params = []
    hard_demod_int = 0
    comp_hard_ll = 0.0
    for blk in comp_blocks:
        s, w = part.starts[blk], part.widths[blk]
        ci0 = pos2comp[s]
        shift = nk - ci0 - w
        comp_params.append((shift, (1 << w) - 1, tables[blk]))
        hard_demod_int |= int(hard[blk]) << shift
        comp_hard_ll += float(tables[blk][hard[blk]])
    hard_base_ll = float(sum(tables[blk][hard[blk]] for blk in base_blocks))
    const_bound = hard_base_ll + comp_hard_ll   # stopping bound at delta_sum = 0

    # Per-entry extension deltas and flipped base positions.
    ext_mask = []
    base_flips = []
    for e in table.entries:
        flips = _block_flips(part, e.block, int(hard[e.block]), e.alt)
        m = 0
        for pos in flips:
            m ^= colmask[pos2base[pos]]
        ext_mask.append(m)
        base_flips.append(flips)

    comp_pos = [int(p) for p in code.comp_idx]

    # Full-CSI incrementals around the hard-extension baseline.
    hard_ext_bits = np.empty(n, dtype=np.uint8)
    hard_ext_bits[code.base_idx] = hard_base_bits
    for ci in range(nk):
        hard_ext_bits[comp_pos[ci]] = (hard_ext_int >> (nk - 1 - ci)) & 1
    z = (y - (1.0 - 2.0 * hard_ext_bits.astype(np.float64))).tolist()
    s2 = model.sigma ** 2
    v = s2 * (1.0 - model.rho ** 2)
    inv2s2 = 1.0 / (2.0 * s2)
    inv2v = 1.0 / (2.0 * v) if nk + k > 1 else 0.0
    rho = model.rho
    loglik_hard_ext = loglik_chain(y, hard_ext_bits, model)

    def comp_flip_positions(xor_int):
        out = []
        m = xor_int
        while m:
            low = m & -m
            out.append(comp_pos[nk - 1 - (low.bit_length() - 1)])
            m ^= low
        return out

    # The full-CSI metric of a candidate is l_gp plus per-boundary
    # corrections depending only on the two bits adjacent to each block
    # boundary, so it can be evaluated by table lookups driven by a flip
    # bitmask. An additional per-entry "gain" (the most an entry's flips
    # can raise the corrections above their hard-extension values, summed
    # over touched boundaries) yields a cheap upper bound used to skip
    # candidates that cannot beat p_star; gains are nonnegative, so
    # over-counting shared boundaries or XOR-cancelled comp flips keeps
    # the bound valid.
    if total_csi:
        starts = part.starts
        bnd_of_pos = {}
        for i in range(1, part.n_b):
            bnd_of_pos.setdefault(starts[i], []).append(i)
            bnd_of_pos.setdefault(starts[i] - 1, []).append(i)
        yl = y.tolist()
        half_log = 0.5 * math.log(s2 / v) if v > 0 else 0.0
        gap = [0.0] * part.n_b
        # (boundary start, 4-entry correction table, pair at hard ext,
        # correction at hard ext); pair index is bit(s-1)*2 + bit(s).
        bnd_info = [None] * part.n_b
        corr_hard_total = 0.0
        for i in range(1, part.n_b):
            s = starts[i]
            tab = []
            for bp in (0.0, 2.0):
                zp = yl[s - 1] - 1.0 + bp
                for bc in (0.0, 2.0):
                    zc = yl[s] - 1.0 + bc
                    tab.append(half_log + zc * zc * inv2s2
                               - (zc - rho * zp) ** 2 * inv2v)
            hp = int(hard_ext_bits[s - 1]) * 2 + int(hard_ext_bits[s])
            at_hard = tab[hp]
            bnd_info[i] = (s, tab, hp, at_hard)
            gap[i] = max(tab) - at_hard
            corr_hard_total += at_hard
        ent_gain = []
        entry_flip_mask = []
        for r in range(len(table.entries)):
            touched = set()
            fmask = 0
            for pos in base_flips[r]:
                fmask |= 1 << pos
                touched.update(bnd_of_pos.get(pos, ()))
            for pos in comp_flip_positions(ext_mask[r]):
                fmask |= 1 << pos
                touched.update(bnd_of_pos.get(pos, ()))
            entry_flip_mask.append(fmask)
            ent_gain.append(sum(gap[i] for i in touched))

    def build_codeword(ranks, ext_int):
        pats = list(hard)
        for r in ranks:
            e = table.entries[r - 1]
            pats[e.block] = e.alt
        bits = np.empty(n, dtype=np.uint8)
        for blk in base_blocks:
            s, w = part.starts[blk], part.widths[blk]
            p = pats[blk]
            for t in range(w):
                bits[s + t] = (p >> (w - 1 - t)) & 1
        for ci in range(nk):
            bits[comp_pos[ci]] = (ext_int >> (nk - 1 - ci)) & 1
        return bits

    full_mode = total_csi and gt_stop_metric == "full"
    if full_mode:
        svals, gap_scale = _gt_stop_profile(y, part, model, tables, hard)
        # Certified floor on the delta sum of every not-yet-emitted
        # pattern; logistic-weight emission is only approximately
        # delta-ordered, so the current query's own delta is not a valid
        # bound on future patterns.
        delta_floor = future_delta_floor([e.delta for e in table.entries])

    state = PatternState(table, cap)
    best_ranks = None
    best_ext = 0
    p_star = -math.inf
    best_gp = -math.inf
    delta_stop = math.inf
    status = None
    first = True
    while True:
        p = state.next_pattern()
        if p is CAPPED:
            status = DecodeStatus.CAPPED
            break
        if p is EXHAUSTED:
            status = DecodeStatus.EXHAUSTED
            break
        ext_xor = 0
        for r in p.ranks:
            ext_xor ^= ext_mask[r - 1]
        ext_int = hard_ext_int ^ ext_xor
        comp_ll = 0.0
        for sh, mask, tab in comp_params:
            comp_ll += tab[(ext_int >> sh) & mask]
        l_gp = hard_base_ll - p.delta_sum + float(comp_ll)
        if total_csi:
            ub = l_gp + corr_hard_total
            fm = 0
            for r in p.ranks:
                ub += ent_gain[r - 1]
                fm ^= entry_flip_mask[r - 1]
            if ub > p_star:
                metric = l_gp + corr_hard_total
                mbits = fm
                last_b = 0
                while mbits:
                    low = mbits & -mbits
                    pos = low.bit_length() - 1
                    mbits ^= low
                    for i in bnd_of_pos.get(pos, ()):
                        if i == last_b:
                            continue
                        last_b = i
                        s, tab, hp, at_hard = bnd_info[i]
                        xp = (((fm >> (s - 1)) & 1) << 1) | ((fm >> s) & 1)
                        metric += tab[hp ^ xp] - at_hard
            else:
                metric = -math.inf
        else:
            metric = l_gp
        if first:
            first = False
            early = ext_int == hard_demod_int
            if early and full_mode:
                # Under the full-CSI rule the hard demodulation being a
                # codeword does not make it the maximum-likelihood one, so
                # the shortcut additionally requires the certificate that
                # no other decision can beat it. At rho = 0 the lam = 0
                # entry makes the certificate hold whenever the plain rule
                # fires, so the block-product behaviour is recovered.
                cert = float(np.min((const_bound + svals - loglik_hard_ext)
                                    * gap_scale))
                early = not _clearly_above(cert, 0.0)
            if early:
                bits = build_codeword((), ext_int)
                return DecodeResult(codeword=bits, queries=state.total_count,
                                    discarded=state.discarded_count,
                                    status=DecodeStatus.EARLY,
                                    loglik_full=loglik_hard_ext,
                                    loglik_block_product=l_gp)
        if metric > p_star:
            p_star = metric
            best_gp = l_gp
            best_ranks = p.ranks
            best_ext = ext_int
            if full_mode:
                delta_stop = float(np.min((const_bound + svals - p_star) * gap_scale))
        if full_mode:
            # Certified full-CSI stop: no later candidate can beat p_star.
            stop = _clearly_above(float(delta_floor[p.weight]), delta_stop)
        elif total_csi:
            # Commensurable block-product comparison for the current best.
            stop = _clearly_above(p.delta_sum, const_bound - best_gp)
        else:
            stop = _clearly_above(p.delta_sum, const_bound - p_star)
        if stop:
            status = DecodeStatus.STOPPED
            break

    if best_ranks is None:
        return DecodeResult(codeword=None, queries=state.total_count,
                            discarded=state.discarded_count, status=status,
                            loglik_full=math.nan, loglik_block_product=math.nan)
    bits = build_codeword(best_ranks, best_ext)
    return DecodeResult(codeword=bits, queries=state.total_count,
                        discarded=state.discarded_count, status=status,
                        loglik_full=loglik_chain(y, bits, model),
                        loglik_block_product=best_gp)


def decode_gp(y, code, part, model, cap: int = DEFAULT_CAP) -> DecodeResult:
    """GCD with block-product likelihood in the maximum update rule."""
    return _decode_gcd(y, code, part, model, cap, total_csi=False)


def decode_gt(y, code, part, model, cap: int = DEFAULT_CAP,
              gt_stop_metric: str = "bound") -> DecodeResult:
    """GCD with the full-CSI likelihood in the maximum update rule.

    gt_stop_metric selects the stopping rule. "bound" (default) keeps the
    plain block-product stopping comparison, with the bound compared
    against the block-product likelihood of the current best-by-full-CSI
    codeword so both sides stay in the same metric. "full" stops only on
    a certificate that no remaining candidate can beat the full-CSI
    running maximum (a family of Lagrangian bounds tying the block-product
    delta to the cross-block corrections, plus a knapsack floor on future
    deltas), which makes the returned codeword maximum-likelihood whenever
    the search is not capped, at the price of more queries.
    """
    if gt_stop_metric not in ("bound", "full"):
        raise ValueError(f"unknown gt_stop_metric {gt_stop_metric!r}")
    return _decode_gcd(y, code, part, model, cap, total_csi=True,
                       gt_stop_metric=gt_stop_metric)


ML_ENUM_LIMIT = 20


def decode_ml_oracle(y, code: LinearCode, model: ChannelModel) -> DecodeResult:
    """Exhaustive maximum-likelihood decoding over all 2^k codewords.

    Ties resolve to the lexicographically smallest codeword.
    """
    if code.k > ML_ENUM_LIMIT:
        raise ValueError("oracle enumeration limit")
    y = np.asarray(y, dtype=np.float64)
    k = code.k
    s2 = model.sigma ** 2
    v = s2 * (1.0 - model.rho ** 2)
    best_ll = -math.inf
    best_cw = None
    chunk = 1 << 13
    for lo in range(0, 1 << k, chunk):
        ms = np.arange(lo, min(lo + chunk, 1 << k))
        msgs = ((ms[:, None] >> np.arange(k - 1, -1, -1)) & 1).astype(np.uint8)
        cws = code.encode(msgs)
        z = y[None, :] - (1.0 - 2.0 * cws.astype(np.float64))
        ll = -0.5 * (channel.LOG_2PI + math.log(s2)) - z[:, 0] ** 2 / (2.0 * s2)
        if code.n > 1:
            d = z[:, 1:] - model.rho * z[:, :-1]
            ll = ll - 0.5 * (code.n - 1) * (channel.LOG_2PI + math.log(v)) \
                 - (d ** 2).sum(axis=1) / (2.0 * v)
        top = float(ll.max())
        if top > best_ll or (top == best_ll and best_cw is not None):
            ties = [cws[i] for i in np.flatnonzero(ll == top)]
            if top > best_ll:
                cand = ties
            else:
                cand = ties + [best_cw]
            best_cw = min(cand, key=lambda c: tuple(c))
            best_ll = top
    return DecodeResult(codeword=best_cw, queries=1 << k, discarded=0,
                        status=DecodeStatus.EXHAUSTED,
                        loglik_full=best_ll,
                        loglik_block_product=math.nan)


def check_result(res: DecodeResult, code: LinearCode):
    """Sanity guard: any returned codeword must satisfy the parity check."""
    if res.codeword is not None and not is_codeword(res.codeword, code):
        raise AssertionError("decoder returned a non-codeword")
    return res
