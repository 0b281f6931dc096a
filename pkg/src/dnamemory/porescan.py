"""Nanopore readout of stud-decorated memory molecules.

A binding-only EcoRI mutant sits on every intact site ("studs"). Pulling
the molecule through a pore gives a current trace: open-pore baseline,
a shallower DNA blockade while the strand is in the pore, and a deeper
blockade each time a stud passes. Current levels and speed are free
parameters; nothing here models pore physics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .assembly import DuplexAssembly
from .digest import ECORI, eligible_sites
from .errors import AmbiguousError, UnreadableError
from .layout import SITE_LEN, CarrierLayout

ORIENTATIONS = ("forward", "reverse")


@dataclass(frozen=True)
class TraceParams:
    baseline_current: float = 1.0
    dna_block_fraction: float = 0.30
    stud_extra_block_fraction: float = 0.40
    velocity: float = 1.0e5          # bases / s
    sample_rate: float = 1.0e6       # samples / s
    noise_sigma: float = 0.0
    stud_footprint: float = 20.0     # bases
    lead_in: float = 1.0e-4          # s of open pore before the molecule
    lead_out: float = 1.0e-4

    @property
    def dna_level(self) -> float:
        return self.baseline_current * (1.0 - self.dna_block_fraction)

    @property
    def stud_level(self) -> float:
        return self.dna_level - self.stud_amplitude

    @property
    def stud_amplitude(self) -> float:
        return self.baseline_current * self.stud_extra_block_fraction

    def validate(self, carrier_length: int | None = None) -> "TraceParams":
        if not 0 < self.dna_block_fraction < 1:
            raise ValueError("dna_block_fraction must lie in (0, 1)")
        if self.stud_extra_block_fraction <= 0:
            raise ValueError("stud level must be deeper than the DNA level")
        if self.dna_block_fraction + self.stud_extra_block_fraction > 1:
            raise ValueError("combined blockade exceeds the open-pore current")
        if self.velocity <= 0 or self.sample_rate <= 0 or self.stud_footprint <= 0:
            raise ValueError("velocity, sample_rate and stud_footprint must be positive")
        if self.noise_sigma < 0 or self.lead_in < 0 or self.lead_out < 0:
            raise ValueError("noise_sigma and lead times must be non-negative")
        if carrier_length is not None and self.sample_rate * carrier_length / self.velocity < 10:
            raise ValueError("fewer than 10 samples across the molecule")
        return self


@dataclass(frozen=True)
class StuddedComplex:
    layout: CarrierLayout
    bits: str
    stud_positions: tuple[int, ...]   # site starts of bound mutant enzymes


@dataclass(frozen=True, eq=False)
class BlockadeTrace:
    samples: np.ndarray
    params: TraceParams
    orientation: str

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / self.params.sample_rate

    @property
    def duration(self) -> float:
        return len(self.samples) / self.params.sample_rate


@dataclass(frozen=True)
class Event:
    start_time: float
    duration: float

    @property
    def center_time(self) -> float:
        return self.start_time + self.duration / 2


def stud(assembly: DuplexAssembly) -> StuddedComplex:
    """Bind the non-cutting mutant at every fully paired site."""
    return StuddedComplex(assembly.layout, assembly.bits, tuple(eligible_sites(assembly, ECORI)))


def _site_centers(layout: CarrierLayout) -> np.ndarray:
    return np.array([s.site_start + SITE_LEN / 2 for s in layout.slots], dtype=float)


def translocate(complex: StuddedComplex, params: TraceParams = TraceParams(),
                orientation: str = "forward", seed: int | None = 0) -> BlockadeTrace:
    """Synthesize the current trace of one passage through the pore.

    The ideal signal is piecewise constant; Gaussian noise of
    ``params.noise_sigma`` is added from a generator seeded with ``seed``.
    """
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    M = complex.layout.length
    params.validate(M)
    fs, v = params.sample_rate, params.velocity
    n = int(math.ceil((params.lead_in + M / v + params.lead_out) * fs))
    x = (np.arange(n) / fs - params.lead_in) * v   # base position in the pore

    signal = np.full(n, params.baseline_current, dtype=float)
    inside = (x >= 0) & (x < M)
    signal[inside] = params.dna_level
    half = params.stud_footprint / 2
    for g in complex.stud_positions:
        c = g + SITE_LEN / 2
        if orientation == "reverse":
            c = M - c
        signal[inside & (np.abs(x - c) < half)] = params.stud_level

    if params.noise_sigma > 0:
        signal = signal + np.random.default_rng(seed).normal(0.0, params.noise_sigma, n)
    return BlockadeTrace(signal, params, orientation)


def default_thresholds(params: TraceParams) -> tuple[float, float, float]:
    """``(enter, exit, min_duration)`` placed inside the DNA-to-stud step."""
    enter = params.dna_level - 0.6 * params.stud_amplitude
    exit_ = params.dna_level - 0.4 * params.stud_amplitude
    return enter, exit_, 0.5 * params.stud_footprint / params.velocity


def detect_events(trace: BlockadeTrace, enter_threshold: float | None = None,
                  exit_threshold: float | None = None,
                  min_duration: float | None = None) -> list[Event]:
    """Hysteresis detection of stud blockades.

    An event opens at the first sample below ``enter_threshold`` and closes
    at the first later sample back above ``exit_threshold``. Events shorter
    than ``min_duration`` seconds are dropped.
    """
    d_enter, d_exit, d_min = default_thresholds(trace.params)
    enter = d_enter if enter_threshold is None else enter_threshold
    exit_ = d_exit if exit_threshold is None else exit_threshold
    min_duration = d_min if min_duration is None else min_duration
    if not enter < exit_:
        raise ValueError("enter_threshold must be deeper (lower) than exit_threshold")

    y = trace.samples
    fs = trace.params.sample_rate
    below_exit = np.concatenate(([0], (y < exit_).astype(np.int8), [0]))
    edges = np.diff(below_exit)
    run_starts = np.flatnonzero(edges == 1)
    run_ends = np.flatnonzero(edges == -1)

    events = []
    for a, b in zip(run_starts, run_ends):
        deep = np.flatnonzero(y[a:b] < enter)
        if not len(deep):
            continue
        start = a + deep[0]
        duration = (b - start) / fs
        if duration >= min_duration:
            events.append(Event(start / fs, duration))
    return events


def _read_orientation(positions: np.ndarray, layout: CarrierLayout, centers: np.ndarray,
                      tol: float, orientation: str) -> str:
    expected = centers if orientation == "forward" else layout.length - centers
    hit = set()
    for x in positions:
        k = int(np.argmin(np.abs(expected - x)))
        if abs(expected[k] - x) > tol:
            raise UnreadableError(f"event at base {x:.1f} matches no site ({orientation})")
        if k in hit:
            raise UnreadableError(f"two events map to site {k} ({orientation})")
        hit.add(k)
    digits = []
    for d, phys in enumerate(layout.bit_order):
        bound = [p in hit for p in phys]
        if all(bound):
            digits.append("0")
        elif not any(bound):
            digits.append("1")
        else:
            raise UnreadableError(f"mirrored sites {phys} of digit {d} disagree ({orientation})")
    return "".join(digits)


def decode_trace(events, layout: CarrierLayout, params: TraceParams = TraceParams(),
                 orientation: str | None = None) -> str:
    """Map stud events back to bits.

    Each event's center is converted to a base position and assigned to the
    nearest site. Sites with an event read ``0``, empty sites ``1``. Unless
    ``orientation`` is given, both entry directions are tried: a palindromic
    layout reads the same either way, while a non-palindromic one whose two
    readings disagree raises :class:`AmbiguousError`.
    """
    centers = _site_centers(layout)
    if len(events) > len(centers):
        raise UnreadableError(f"{len(events)} events but only {len(centers)} sites")
    spacing = np.diff(np.sort(centers))
    tol = params.stud_footprint / 2
    if len(spacing):
        tol = min(tol, float(spacing.min()) / 2)
    positions = np.array([(e.center_time - params.lead_in) * params.velocity for e in events])

    tried = [orientation] if orientation else list(ORIENTATIONS)
    readings, errors = {}, []
    for o in tried:
        try:
            readings[o] = _read_orientation(positions, layout, centers, tol, o)
        except UnreadableError as exc:
            errors.append(exc)
    distinct = sorted(set(readings.values()))
    if not distinct:
        raise errors[0]
    if len(distinct) > 1:
        raise AmbiguousError(f"orientation unknown: reads {' or '.join(distinct)}",
                             candidates=distinct)
    return distinct[0]
