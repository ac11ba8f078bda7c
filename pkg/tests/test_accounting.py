import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qbc.accounting import (B_E_MODES, EFRQI, SCMNEQR, BitRateReport, CostModel,
                            ProvenanceMismatch, address_bits, bit_rate, block_position_bits,
                            block_report, compare_report, plane_bit_rate, s_state_efrqi,
                            s_state_scmneqr)
from qbc.blocks import QuantumBlock, RegisterLayout, tile_quantum_blocks


def block_with(n, size=16, value=1):
    entries = [(i % size, i // size, value) for i in range(n)]
    return QuantumBlock.from_nonzeros(entries, size, size)


def test_s_state_examples():
    assert s_state_scmneqr(block_with(1)) == 10
    assert s_state_scmneqr(block_with(0)) == 0
    # (log2 4 + log2 4 + 1 + 1) * 3
    assert s_state_scmneqr(block_with(3, size=4)) == 18
    assert s_state_efrqi(block_with(1)) == 18
    assert s_state_efrqi(block_with(0)) == 0
    assert s_state_efrqi(block_with(100)) == 1800 > s_state_scmneqr(block_with(100)) == 1000


def test_rectangular_block_cost():
    b = QuantumBlock(0, 0, np.ones((2, 8), dtype=np.int64))
    assert s_state_scmneqr(b) == (3 + 1 + 2) * 16
    assert s_state_efrqi(b) == 2 * (3 + 1 + 1) * 16


def test_block_position_bits():
    nonempty, empty = block_with(1), block_with(0)
    assert block_position_bits(nonempty, 64, 64) == 12
    assert block_position_bits(empty, 64, 64) == 0
    assert block_position_bits(nonempty, 1, 1) == 0
    assert address_bits(3, 5) == 2 + 3
    with pytest.raises(ValueError):
        address_bits(0, 1)


def single_coeff_blocks():
    plane = np.zeros((1024, 1024), dtype=np.int64)
    plane[2, 3] = 5
    return plane, tile_quantum_blocks(plane)


def test_single_coefficient_report():
    plane, blocks = single_coeff_blocks()
    lay = RegisterLayout.for_block(16, 16, 8)
    r = bit_rate(blocks, "SCMNEQR", lay, (64, 64))
    assert (r.q_ones, r.s_state, r.s_bit, r.a_bit, r.b_e, r.br) == (2, 10, 1, 1, 12, 26)
    e = bit_rate(blocks, "EFRQI", lay, (64, 64))
    assert (e.q_ones, e.s_state, e.s_bit, e.a_bit, e.b_e, e.br) == (2, 18, 1, 1, 12, 34)
    assert plane_bit_rate(plane, "SCMNEQR") == r
    assert plane_bit_rate(plane, "EFRQI") == e


def test_all_zero_report():
    r = plane_bit_rate(np.zeros((64, 64), dtype=np.int64), "SCMNEQR")
    assert r.br == 0 and all(getattr(r, k) == 0 for k in ("q_ones", "s_state", "s_bit", "a_bit", "b_e"))


def test_report_identity_enforced():
    with pytest.raises(ValueError):
        BitRateReport(1, 1, 1, 1, 1, 6, 1, 0, "SCMNEQR")
    with pytest.raises(ValueError):
        BitRateReport.from_terms(q_ones=-1, s_state=0, s_bit=0, a_bit=0, b_e=0, n_tcn=0,
                                 clamped_count=0, scheme="X")


def test_record_round_trip():
    plane, _ = single_coeff_blocks()
    r = plane_bit_rate(plane, "EFRQI", source="img")
    assert BitRateReport.from_record(r.to_record()) == r
    assert "br=34\n" in r.to_record()
    assert r.csv_header() == "q_ones,s_state,s_bit,a_bit,b_e,br,n_tcn,clamped_count,scheme,source"
    assert r.to_csv_row() == "2,18,1,1,12,34,1,0,EFRQI,img"


def test_compare_report():
    plane, _ = single_coeff_blocks()
    s = plane_bit_rate(plane, "SCMNEQR")
    e = plane_bit_rate(plane, "EFRQI")
    c = compare_report(s, e)
    assert c.delta["br"] == -8
    assert c.percent["br"] == pytest.approx(-800 / 34)  # -23.53 %
    assert round(c.percent["br"], 1) == -23.5
    same = compare_report(s, s)
    assert all(v == 0 for v in same.delta.values())
    z = plane_bit_rate(np.zeros((16, 16), dtype=np.int64), "SCMNEQR")
    zc = compare_report(z, z)
    assert all(v == 0 for v in zc.delta.values()) and all(v is None for v in zc.percent.values())
    other = plane_bit_rate(plane, "EFRQI", source="elsewhere")
    with pytest.raises(ProvenanceMismatch):
        compare_report(s, other)
    assert "br" in str(c)


def test_custom_cost_model():
    triple = CostModel("TRIPLE", toffoli_passes=3, reset=False)
    assert triple.connection_bits(16, 16) == 27
    plane, _ = single_coeff_blocks()
    assert plane_bit_rate(plane, triple).s_state == 27


def test_unknown_mode_and_scheme():
    with pytest.raises(ValueError):
        plane_bit_rate(np.zeros((16, 16), np.int64), "NCQI")
    with pytest.raises(ValueError):
        plane_bit_rate(np.zeros((16, 16), np.int64), "SCMNEQR", b_e_mode="sometimes")


planes = st.tuples(st.sampled_from([2, 4, 8, 16]), st.integers(1, 4), st.integers(1, 4),
                   st.integers(1, 10)).flatmap(
    lambda t: st.tuples(st.just(t[0]), st.just(t[3]),
                        arrays(np.int64, (t[2] * t[0], t[1] * t[0]),
                               elements=st.integers(-2000, 2000) | st.just(0) | st.just(0))))


@settings(max_examples=60, deadline=None)
@given(planes, st.sampled_from(B_E_MODES))
def test_vectorized_matches_block_objects(case, mode):
    block, q, plane = case
    blocks = tile_quantum_blocks(plane, block, q)
    gy, gx = plane.shape[0] // block, plane.shape[1] // block
    for scheme in ("SCMNEQR", "EFRQI"):
        slow = bit_rate(blocks, scheme, RegisterLayout.for_block(block, block, q), (gx, gy), mode)
        fast = plane_bit_rate(plane, scheme, block, q, mode)
        assert slow == fast
        assert fast.br == fast.q_ones + fast.s_state + fast.s_bit + fast.a_bit + fast.b_e


@settings(max_examples=60, deadline=None)
@given(planes)
def test_scheme_ordering_and_additivity(case):
    block, q, plane = case
    blocks = tile_quantum_blocks(plane, block, q)
    gy, gx = plane.shape[0] // block, plane.shape[1] // block
    s = plane_bit_rate(plane, "SCMNEQR", block, q)
    e = plane_bit_rate(plane, "EFRQI", block, q)
    if s.n_tcn:
        assert s.br < e.br
    else:
        assert s.br == e.br == 0
    assert (s.q_ones, s.s_bit, s.a_bit, s.b_e) == (e.q_ones, e.s_bit, e.a_bit, e.b_e)
    per_block = sum(block_report(b, "SCMNEQR", gx, gy).br for b in blocks)
    assert per_block == s.br


def test_layout_mismatch_rejected():
    blocks = tile_quantum_blocks(np.ones((16, 16), np.int64))
    with pytest.raises(ValueError):
        bit_rate(blocks, SCMNEQR, RegisterLayout.for_block(8, 8), (1, 1))
    assert bit_rate(blocks, EFRQI).n_tcn == 256
