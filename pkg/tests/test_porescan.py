import itertools
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dnamemory.assembly import anneal
from dnamemory.digest import digest
from dnamemory.errors import AmbiguousError, UnreadableError
from dnamemory.layout import design_carrier, palindromize
from dnamemory.porescan import (Event, TraceParams, decode_trace, default_thresholds,
                                detect_events, stud, translocate)

from helpers import random_layout

P = TraceParams()


@pytest.fixture(scope="module")
def pal3():
    return palindromize(design_carrier(3, seed=21), seed=22)


def test_stud_counts(paper):
    assert len(stud(anneal(paper, "00")).stud_positions) == 2
    assert stud(anneal(paper, "11")).stud_positions == ()
    assert stud(anneal(paper, "01")).stud_positions == (51,)


@pytest.mark.parametrize("seed", range(8))
def test_stud_count_is_fragment_count_minus_one(seed):
    layout = random_layout(seed)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        bits = "".join(rng.choice(["0", "1"], layout.n_bits))
        asm = anneal(layout, bits)
        assert len(stud(asm).stud_positions) == len(digest(asm)) - 1


def test_params_validation():
    for bad in (dict(dna_block_fraction=0), dict(dna_block_fraction=1.2),
                dict(stud_extra_block_fraction=0), dict(stud_extra_block_fraction=0.8),
                dict(velocity=-1), dict(noise_sigma=-0.1)):
        with pytest.raises(ValueError):
            replace(P, **bad).validate()
    # 77 bases at 1e5 b/s and 1e4 samples/s is under 10 samples
    with pytest.raises(ValueError):
        replace(P, sample_rate=1e4).validate(77)


def test_trace_duration(paper):
    tr = translocate(stud(anneal(paper, "11")), P)
    assert tr.duration == pytest.approx(P.lead_in + 77 / P.velocity + P.lead_out, abs=1 / P.sample_rate)


def test_zero_studs_is_two_level(paper):
    tr = translocate(stud(anneal(paper, "11")), P)
    assert set(np.round(tr.samples, 12)) == {P.baseline_current, round(P.dna_level, 12)}
    assert detect_events(tr) == []


def _runs(mask):
    edges = np.diff(np.concatenate(([0], mask.astype(int), [0])))
    return list(zip(np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)))


def test_noiseless_excursions_are_rectangular(paper):
    tr = translocate(stud(anneal(paper, "00")), P)
    runs = _runs(np.isclose(tr.samples, P.stud_level))
    assert len(runs) == 2
    dt = 1 / P.sample_rate
    for (a, b), slot in zip(runs, paper.slots):
        center = slot.site_start + 3
        assert a * dt == pytest.approx(P.lead_in + (center - 10) / P.velocity, abs=dt)
        assert (b - a) * dt == pytest.approx(P.stud_footprint / P.velocity, abs=2 * dt)


def test_noiseless_detection_times(paper):
    tr = translocate(stud(anneal(paper, "00")), P)
    events = detect_events(tr)
    assert len(events) == 2
    dt = 1 / P.sample_rate
    for e, slot in zip(events, paper.slots):
        assert e.center_time == pytest.approx(P.lead_in + (slot.site_start + 3) / P.velocity, abs=1.5 * dt)
        assert e.duration == pytest.approx(P.stud_footprint / P.velocity, abs=2 * dt)


def test_detect_threshold_order_enforced(paper):
    tr = translocate(stud(anneal(paper, "00")), P)
    with pytest.raises(ValueError):
        detect_events(tr, enter_threshold=0.6, exit_threshold=0.5)


def test_hysteresis_bridges_a_chattering_dip():
    y = np.full(400, 0.7)
    y[100:200] = 0.3
    y[150] = 0.5                         # between enter (0.46) and exit (0.54)
    from dnamemory.porescan import BlockadeTrace
    events = detect_events(BlockadeTrace(y, P, "forward"))
    assert len(events) == 1
    assert events[0].start_time == pytest.approx(100 / P.sample_rate)


def test_min_duration_drops_spikes():
    from dnamemory.porescan import BlockadeTrace
    y = np.full(1000, 0.7)
    y[300:303] = 0.2
    assert detect_events(BlockadeTrace(y, P, "forward")) == []
    assert len(detect_events(BlockadeTrace(y, P, "forward"), min_duration=0)) == 1


def test_event_count_monte_carlo(pal3):
    noisy = replace(P, noise_sigma=0.1 * P.stud_amplitude)
    asm = anneal(pal3, "010")
    ok = sum(len(detect_events(translocate(stud(asm), noisy, seed=s))) == 4 for s in range(100))
    assert ok >= 99


def test_trace_is_deterministic_per_seed(pal3):
    noisy = replace(P, noise_sigma=0.05)
    c = stud(anneal(pal3, "001"))
    a, b = translocate(c, noisy, seed=3), translocate(c, noisy, seed=3)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, translocate(c, noisy, seed=4).samples)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 5), seed=st.integers(0, 100), data=st.data())
def test_orientations_mirror_each_other(n, seed, data):
    layout = palindromize(design_carrier(n, seed=seed), seed=seed)
    bits = data.draw(st.text(alphabet="01", min_size=n, max_size=n))
    c = stud(anneal(layout, bits))
    pos = lambda ev: sorted(round((e.center_time - P.lead_in) * P.velocity, 3) for e in ev)
    fwd = pos(detect_events(translocate(c, P, "forward")))
    rev = pos(detect_events(translocate(c, P, "reverse")))
    assert len(fwd) == len(rev) == 2 * bits.count("0")
    # reverse passage reads each stud at length - position
    mirrored = sorted(layout.length - x for x in rev)
    assert np.allclose(fwd, mirrored, atol=2 * P.velocity / P.sample_rate)


def test_decode_noiseless_paper(paper):
    events = detect_events(translocate(stud(anneal(paper, "00")), P))
    assert decode_trace(events, paper, P) == "00"
    for bits in ("01", "10", "11"):
        ev = detect_events(translocate(stud(anneal(paper, bits)), P))
        assert decode_trace(ev, paper, P, orientation="forward") == bits


def test_zero_events_reads_all_ones(pal3, paper):
    assert decode_trace([], pal3, P) == "111"
    assert decode_trace([], paper, P) == "11"


def test_non_palindromic_orientation_ambiguity(paper):
    ev = detect_events(translocate(stud(anneal(paper, "01")), P, "reverse"))
    with pytest.raises(AmbiguousError) as exc:
        decode_trace(ev, paper, P)
    assert set(exc.value.candidates) == {"01", "10"}
    assert decode_trace(ev, paper, P, orientation="reverse") == "01"


def test_decode_errors(pal3):
    t = lambda x: P.lead_in + x / P.velocity
    centers = [s.site_start + 3 for s in pal3.slots]
    too_many = [Event(t(c), 2e-4) for c in centers] + [Event(t(5), 2e-4)]
    with pytest.raises(UnreadableError, match="events"):
        decode_trace(too_many, pal3, P)
    with pytest.raises(UnreadableError):
        decode_trace([Event(t(centers[0] + 17) - 1e-4, 2e-4)], pal3, P)
    # only one of the two mirrored sites of digit 0 bound
    (a, b) = pal3.bit_order[0]
    with pytest.raises(UnreadableError, match="disagree"):
        decode_trace([Event(t(centers[a]) - 1e-4, 2e-4)], pal3, P)


def test_exhaustive_noiseless_roundtrip_both_orientations(pal3):
    for bits in map("".join, itertools.product("01", repeat=3)):
        for o in ("forward", "reverse"):
            ev = detect_events(translocate(stud(anneal(pal3, bits)), P, o))
            assert decode_trace(ev, pal3, P) == bits


def test_noisy_roundtrip_random_orientation(pal3):
    noisy = replace(P, noise_sigma=0.05 * P.stud_amplitude)
    rng = np.random.default_rng(99)
    ok = 0
    for s in range(100):
        bits = "".join(rng.choice(["0", "1"], 3))
        o = ("forward", "reverse")[int(rng.integers(2))]
        ev = detect_events(translocate(stud(anneal(pal3, bits)), noisy, o, seed=s))
        ok += decode_trace(ev, pal3, noisy) == bits
    assert ok >= 99


@pytest.mark.parametrize("velocity", [2e4, 1e5, 3e5])
def test_decoding_invariant_under_velocity(pal3, velocity):
    params = replace(P, velocity=velocity)
    tr = translocate(stud(anneal(pal3, "100")), params, "reverse")
    assert tr.duration == pytest.approx(params.lead_in + params.lead_out + pal3.length / velocity,
                                        abs=1 / params.sample_rate)
    assert decode_trace(detect_events(tr), pal3, params) == "100"


def test_default_thresholds_sit_between_levels():
    enter, exit_, min_dur = default_thresholds(P)
    assert P.stud_level < enter < exit_ < P.dna_level
    assert min_dur == pytest.approx(0.5 * P.stud_footprint / P.velocity)
