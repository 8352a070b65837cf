#!/usr/bin/env python3
"""Generate the bundled parity-check matrix of the [128,110] CA-Polar code.

This is an offline data-provenance tool; the library only ever loads the
resulting dense-text file. Construction: 110 message bits are extended
with an 11-bit CRC (3GPP polynomial D^11+D^10+D^9+D^5+1, zero initial
register, MSB first), the 121 resulting bits are placed on the most
reliable positions of the length-128 polar transform per the 3GPP
reliability sequence, the remaining 7 positions are frozen to zero, and
the codeword is u * F^{x7} in natural (non-bit-reversed) order. H is a
basis of the dual of the resulting [128,110] linear code.

Usage: python scripts/make_capolar_h.py [out.txt]
"""

import sys

import numpy as np

# 3GPP TS 38.212 Table 5.3.1.2-1 universal reliability sequence, restricted
# to indices < 128 (ascending reliability).
RELIABILITY_128 = [
    0,   1,   2,   4,   8,  16,  32,   3,   5,  64,   9,   6,  17,  10,  18,  12,
    33,  65,  20,  34,  24,  36,   7,  66,  11,  40,  68,  19,  13,  48,  14,  72,
    21,  35,  26,  80,  37,  25,  22,  38,  96,  67,  41,  28,  69,  42,  49,  74,
    70,  44,  81,  50,  73,  15,  52,  23,  76,  82,  56,  27,  97,  39,  84,  29,
    43,  98,  88,  30,  71,  45, 100,  51,  46,  75, 104,  53,  77,  54,  83,  57,
    112,  78,  85,  58,  99,  86,  60,  89, 101,  31,  90, 102, 105,  92,  47, 106,
    55, 113,  79, 108,  59, 114,  87, 116,  61,  91, 120,  62, 103,  93, 107,  94,
    109, 115, 110, 117, 118, 121, 122,  63, 124,  95, 111, 119, 123, 125, 126, 127,
]

N = 128
K_MSG = 110
CRC_LEN = 11
CRC_POLY = [1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1]  # D^11+D^10+D^9+D^5+1, MSB first


def crc_bits(msg):
    reg = list(msg) + [0] * CRC_LEN
    for i in range(len(msg)):
        if reg[i]:
            for j, c in enumerate(CRC_POLY):
                reg[i + j] ^= c
    return reg[-CRC_LEN:]


def polar_transform_matrix(n):
    g = np.array([[1]], dtype=np.uint8)
    f = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    for _ in range(n):
        g = np.kron(g, f)
    return g


def gf2_nullspace(a):
    a = a.copy() % 2
    rows, cols = a.shape
    pivots = []
    row = 0
    for col in range(cols):
        hit = next((r for r in range(row, rows) if a[r, col]), None)
        if hit is None:
            continue
        if hit != row:
            a[[hit, row]] = a[[row, hit]]
        for r in range(rows):
            if r != row and a[r, col]:
                a[r] ^= a[row]
        pivots.append(col)
        row += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, fcol in enumerate(free):
        basis[i, fcol] = 1
        for j, p in enumerate(pivots):
            basis[i, p] = a[j, fcol]
    return basis


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "src/corrgcd/data/capolar_128_110_H.txt"
    info = np.sort(np.array(RELIABILITY_128[-(K_MSG + CRC_LEN):]))
    gn = polar_transform_matrix(7)
    G = np.zeros((K_MSG, N), dtype=np.uint8)
    for i in range(K_MSG):
        msg = [0] * K_MSG
        msg[i] = 1
        u = np.zeros(N, dtype=np.uint8)
        u[info] = msg + crc_bits(msg)
        G[i] = u @ gn % 2
    H = gf2_nullspace(G)
    assert H.shape == (N - K_MSG, N)
    assert not (G.astype(int) @ H.T.astype(int) % 2).any()
    with open(out, "w") as fh:
        fh.write("# H\n")
        fh.write(f"{H.shape[0]} {H.shape[1]}\n")
        for row in H:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")
    print(f"wrote {out}: {H.shape[0]}x{H.shape[1]}")


if __name__ == "__main__":
    main()
