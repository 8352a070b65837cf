"""GF(2) algebra and code-construction tests against independent oracles."""

import numpy as np
import pytest

from corrgcd.gf2 import (CodeError, build_crc_code, crc_remainder, extend_base,
                         gf2_matmul, gf2_nullspace, gf2_row_reduce, is_codeword,
                         load_code, make_code_from_H, semi_systematize)


def crc_oracle(msg_bits, poly, width=16):
    """Independent CRC oracle: polynomial long division on Python ints."""
    gen = (1 << width) | poly
    val = 0
    for b in msg_bits:
        val = (val << 1) | int(b)
    val <<= width
    deg = len(msg_bits) + width
    for i in range(deg - 1, width - 1, -1):
        if val >> i & 1:
            val ^= gen << (i - width)
    return np.array([(val >> (width - 1 - i)) & 1 for i in range(width)],
                    dtype=np.uint8)


def test_crc_remainder_against_int_division():
    rng = np.random.default_rng(0)
    for poly in (0x3D65, 0x8005, 0x1021):
        for _ in range(20):
            msg = rng.integers(0, 2, size=int(rng.integers(1, 60)))
            assert np.array_equal(crc_remainder(msg, poly), crc_oracle(msg, poly))


def test_crc_remainder_zero_message():
    assert not crc_remainder(np.zeros(10, dtype=np.uint8), 0x3D65).any()


def row_space(M):
    """All GF(2) combinations of the rows (small matrices only)."""
    rows = M.shape[0]
    out = set()
    for mask in range(1 << rows):
        v = np.zeros(M.shape[1], dtype=np.uint8)
        for i in range(rows):
            if mask >> i & 1:
                v ^= M[i]
        out.add(tuple(v))
    return out


def test_row_reduce_properties():
    rng = np.random.default_rng(1)
    for _ in range(30):
        M = rng.integers(0, 2, size=(int(rng.integers(1, 6)),
                                     int(rng.integers(1, 8)))).astype(np.uint8)
        R, pivots = gf2_row_reduce(M)
        # pivot columns strictly increasing, left to right
        assert pivots == sorted(pivots)
        # each pivot column is a unit vector
        for j, p in enumerate(pivots):
            col = R[:, p]
            assert col[j] == 1 and col.sum() == 1
        # row space preserved
        assert row_space(M) == row_space(R)
        # rank = number of pivots
        assert len(row_space(R)) == 1 << len(pivots)


def test_nullspace():
    rng = np.random.default_rng(2)
    for _ in range(30):
        M = rng.integers(0, 2, size=(3, 7)).astype(np.uint8)
        B = gf2_nullspace(M)
        assert not gf2_matmul(M, B.T).any()
        _, pivots = gf2_row_reduce(M)
        assert B.shape[0] == 7 - len(pivots)
        # basis rows independent
        assert len(row_space(B)) == 1 << B.shape[0]


def random_full_rank_H(rng, rows, cols):
    while True:
        H = rng.integers(0, 2, size=(rows, cols)).astype(np.uint8)
        if len(gf2_row_reduce(H)[1]) == rows:
            return H


def test_semi_systematize():
    rng = np.random.default_rng(3)
    for _ in range(10):
        H0 = random_full_rank_H(rng, 4, 10)
        H = H0.copy()
        base, comp, b_sub = semi_systematize(H)
        comp_idx = [c - 1 for c in comp]
        assert np.array_equal(H[:, comp_idx], np.eye(4, dtype=np.uint8))
        assert sorted(base + comp) == list(range(1, 11))
        # no column permutation: row space unchanged
        assert row_space(H0) == row_space(H)
    with pytest.raises(CodeError):
        semi_systematize(np.zeros((2, 4), dtype=np.uint8))


def test_make_code_from_H():
    rng = np.random.default_rng(4)
    H = random_full_rank_H(rng, 8, 16)
    code = make_code_from_H(H)
    assert (code.n, code.k) == (16, 8)
    assert not gf2_matmul(code.G, code.H.T).any()
    for _ in range(10):
        msg = rng.integers(0, 2, size=8).astype(np.uint8)
        cw = code.encode(msg)
        assert is_codeword(cw, code)
        # encode places the message on the base positions, so extending
        # the base bits reproduces the codeword
        assert np.array_equal(extend_base(msg, code), cw)


def test_extend_base_errors():
    code = build_crc_code(8)
    with pytest.raises(CodeError):
        extend_base(np.zeros(7, dtype=np.uint8), code)
    with pytest.raises(CodeError):
        is_codeword(np.zeros(3, dtype=np.uint8), code)
    with pytest.raises(CodeError):
        code.encode(np.zeros(5, dtype=np.uint8))


def test_build_crc_code():
    code = build_crc_code(48, 0x3D65)
    assert (code.n, code.k) == (64, 48)
    assert code.base_set == tuple(range(1, 49))
    assert code.comp_set == tuple(range(49, 65))
    rng = np.random.default_rng(5)
    for _ in range(10):
        msg = rng.integers(0, 2, size=48).astype(np.uint8)
        cw = code.encode(msg)
        assert np.array_equal(cw[:48], msg)
        assert np.array_equal(cw[48:], crc_oracle(msg, 0x3D65))
        assert is_codeword(cw, code)
    # ASCII "123456789" against the independent long-division oracle
    msg = np.unpackbits(np.frombuffer(b"123456789", dtype=np.uint8))
    assert np.array_equal(crc_remainder(msg, 0x3D65), crc_oracle(msg, 0x3D65))
    with pytest.raises(CodeError):
        build_crc_code(0)


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_code_h_only(tmp_path):
    p = _write(tmp_path, "h.txt", "# H\n3 6\n1 0 0 1 1 0\n0 1 0 1 0 1\n0 0 1 0 1 1\n")
    code = load_code(p)
    assert (code.n, code.k) == (6, 3)
    assert np.array_equal(code.H[:, code.comp_idx], np.eye(3, dtype=np.uint8))


def test_load_code_g_only(tmp_path):
    p = _write(tmp_path, "g.txt", "# G\n2 5\n1 0 1 1 0\n0 1 0 1 1\n")
    code = load_code(p)
    assert (code.n, code.k) == (5, 2)
    # the loaded G spans the same code: every row of the file G is a codeword
    assert is_codeword([1, 0, 1, 1, 0], code)
    assert is_codeword([0, 1, 0, 1, 1], code)


def test_load_code_default_header_is_h(tmp_path):
    p = _write(tmp_path, "noheader.txt", "2 4\n1 0 1 1\n0 1 0 1\n")
    code = load_code(p)
    assert (code.n, code.k) == (4, 2)


def test_load_code_errors(tmp_path):
    with pytest.raises(CodeError):
        load_code(tmp_path / "missing.txt")
    for text in ("",                                  # no matrix
                 "2 3\n1 0 1\n",                      # truncated
                 "1 3\n1 0\n",                        # wrong row length
                 "1 2\n1 x\n",                        # non-integer
                 "1 2\n1 2\n",                        # non-binary
                 "# H\n",                             # header without body
                 "# H\n1 3\n1 1 0\n# H\n1 3\n1 0 1\n",  # duplicate label
                 "# G\n2 4\n1 0 1 1\n1 0 1 1\n"):     # rank-deficient G
        p = _write(tmp_path, "bad.txt", text)
        with pytest.raises(CodeError):
            load_code(p)


def test_load_code_inconsistent_g_and_h(tmp_path):
    p = _write(tmp_path, "gh.txt",
               "# H\n2 4\n1 0 1 1\n0 1 0 1\n# G\n2 4\n1 1 1 1\n1 0 0 0\n")
    with pytest.raises(CodeError):
        load_code(p)
