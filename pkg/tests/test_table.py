"""Factor-table tests: payload correctness against the term-by-term
oracle, persistence round trips, and schedule independence."""

import numpy as np
import pytest

from oscillax.arith import omega_arrays
from oscillax.table import (
    RESIDUES,
    FactorTable,
    TableMode,
    build_table,
    entry_count,
    index_of,
)


def coprime_30(limit):
    n = np.arange(1, limit + 1, dtype=np.int64)
    return n[(n % 2 != 0) & (n % 3 != 0) & (n % 5 != 0)]


def test_entry_count_every_mode():
    # 8 residues coprime to 30 per wheel turn, whole turns only
    for limit in (1, 29, 30, 31, 10**6, 10**6 + 1):
        assert entry_count(limit) == 8 * ((limit + 29) // 30)
    for mode in TableMode:
        for limit in (30, 31, 95):
            tb = build_table(limit, mode)
            assert tb.vals.size == entry_count(limit)
    with pytest.raises(ValueError):
        build_table(29, TableMode.OMEGA)


def test_index_of_round_trip():
    ns = coprime_30(10**4)
    idx = index_of(ns)
    assert idx.tolist() == sorted(idx.tolist())
    # wheel layout: consecutive coprime n get consecutive slots
    assert np.array_equal(idx, np.arange(ns.size))


def test_single_wheel_block():
    tb = build_table(30, TableMode.OMEGA)
    ns = coprime_30(30)
    assert ns.tolist() == [1, 7, 11, 13, 17, 19, 23, 29]
    assert tb.gather(ns).tolist() == [0, 1, 1, 1, 1, 1, 1, 1]


def test_prime_power_entry():
    tb = build_table(10**6, TableMode.OMEGA)
    assert 7**7 == 823543
    assert tb.gather(np.array([823543])).tolist() == [7]


def test_parity_payload_matches_oracle(parity_table_1e6):
    big, _ = omega_arrays(10**6)
    ns = coprime_30(10**6)
    got = parity_table_1e6.gather(ns)
    want = (ns - big[ns].astype(np.int64)) & 1
    assert np.array_equal(got.astype(np.int64), want)


def test_omega_payload_matches_oracle(omega_table_1e6):
    big, _ = omega_arrays(10**6)
    ns = coprime_30(10**6)
    assert np.array_equal(
        omega_table_1e6.gather(ns).astype(np.int64), big[ns].astype(np.int64)
    )


def test_parity_omega_payload_matches_oracle(parity_omega_table_1e6):
    # distinct-prime-count parity, not the with-multiplicity count
    _, small = omega_arrays(10**6)
    ns = coprime_30(10**6)
    got = parity_omega_table_1e6.gather(ns).astype(np.int64)
    assert np.array_equal(got, small[ns].astype(np.int64) & 1)


def test_growth_schedule_irrelevant():
    base = build_table(10**5, TableMode.PARITY_NMO, growth=2.0)
    for growth in (1.2, 3.7, 7.0):
        other = build_table(10**5, TableMode.PARITY_NMO, growth=growth)
        assert np.array_equal(other.vals, base.vals)
        assert other.fingerprint == base.fingerprint


def test_save_load_round_trip(tmp_path):
    for mode in TableMode:
        tb = build_table(12345, mode)
        path = tmp_path / f"{mode.name}.tbl"
        tb.save(path)
        back = FactorTable.load(path)
        assert back.mode == tb.mode
        assert back.limit == tb.limit
        assert np.array_equal(back.vals, tb.vals)
        assert back.fingerprint == tb.fingerprint
        assert FactorTable.matches_file(path, mode, 12345)
        assert not FactorTable.matches_file(path, mode, 12346)


def test_matches_file_rejects_other_mode(tmp_path):
    tb = build_table(5000, TableMode.OMEGA)
    path = tmp_path / "t.tbl"
    tb.save(path)
    assert not FactorTable.matches_file(path, TableMode.PARITY_NMO, 5000)
    assert not FactorTable.matches_file(tmp_path / "missing.tbl", TableMode.OMEGA, 5000)


def test_load_rejects_corrupt_header(tmp_path):
    tb = build_table(5000, TableMode.OMEGA)
    path = tmp_path / "t.tbl"
    tb.save(path)
    raw = bytearray(path.read_bytes())
    raw[0] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(ValueError):
        FactorTable.load(path)


def test_residue_wheel_constant():
    assert RESIDUES.tolist() == [1, 7, 11, 13, 17, 19, 23, 29]
