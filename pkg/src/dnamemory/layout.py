"""Carrier design and fragment-signature bookkeeping.

A carrier holds an ordered row of memory slots. Each slot is a left address,
a 6-base ``GAATTC`` data field and a right address, contiguous in that order.
Writing a ``0`` at a slot leaves its site cleavable; a ``1`` protects it.

Cut coordinates follow the top strand: a site starting at ``g`` is cut at
``g + 1`` (between G and AATTC). Overhangs are ignored, so fragment lengths
are gaps between consecutive cut coordinates and always sum to the carrier
length.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DesignError
from .seqcore import BASES, ECORI_SITE, MISMATCH_FIELD, find_sites, hamming

SITE_LEN = len(ECORI_SITE)
CUT_OFFSET = 1
DEFAULT_ADDRESS_LEN = 14
MAX_INFERRED_ADDRESS_LEN = 24
DEFAULT_MIN_DISTANCE = 8
DEFAULT_MAX_ATTEMPTS = 10_000
DEFAULT_ENUM_CAP = 20


@dataclass(frozen=True)
class MemorySlot:
    """One writable memory sequence on the carrier.

    ``index`` is the message digit driving this slot. ``left_addr`` and
    ``right_addr`` are ``(start, length)`` intervals.
    """

    index: int
    left_addr: tuple[int, int]
    site_start: int
    right_addr: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "left_addr", tuple(int(v) for v in self.left_addr))
        object.__setattr__(self, "right_addr", tuple(int(v) for v in self.right_addr))
        ls, ll = self.left_addr
        rs, rl = self.right_addr
        if ls + ll != self.site_start or self.site_start + SITE_LEN != rs:
            raise ValueError(f"slot {self.index}: address/data/address not contiguous")
        if ll < 1 or rl < 1:
            raise ValueError(f"slot {self.index}: empty address")

    @property
    def start(self) -> int:
        return self.left_addr[0]

    @property
    def end(self) -> int:
        return self.right_addr[0] + self.right_addr[1]

    @property
    def cut(self) -> int:
        return self.site_start + CUT_OFFSET

    @property
    def data_field(self) -> tuple[int, int]:
        return self.site_start, self.site_start + SITE_LEN


@dataclass(frozen=True)
class CarrierLayout:
    """Carrier strand plus its ordered memory slots (the codebook).

    ``slots`` are kept in physical (5'->3') order. In a palindromic layout
    each digit drives two slots mirrored about the molecule center.
    """

    carrier: str
    slots: tuple[MemorySlot, ...]
    address_len: int
    palindromic: bool = False
    min_address_distance: int = DEFAULT_MIN_DISTANCE

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(sorted(self.slots, key=lambda s: s.site_start)))

    @property
    def length(self) -> int:
        return len(self.carrier)

    @property
    def n_bits(self) -> int:
        return len({s.index for s in self.slots})

    @property
    def bit_order(self) -> tuple[tuple[int, ...], ...]:
        """Physical slot numbers driven by each message digit."""
        order = [[] for _ in range(self.n_bits)]
        for phys, slot in enumerate(self.slots):
            order[slot.index].append(phys)
        return tuple(tuple(p) for p in order)

    @property
    def cut_positions(self) -> tuple[int, ...]:
        return tuple(s.cut for s in self.slots)

    def addresses(self) -> list[tuple[int, str, str]]:
        """``(physical slot, 'left'|'right', sequence)`` for every address."""
        out = []
        for phys, s in enumerate(self.slots):
            for side, (start, n) in (("left", s.left_addr), ("right", s.right_addr)):
                out.append((phys, side, self.carrier[start:start + n]))
        return out

    def region(self, phys: int) -> str:
        s = self.slots[phys]
        return self.carrier[s.start:s.end]


@dataclass(frozen=True)
class FragmentSet:
    """Multiset of double-stranded fragment lengths, stored ascending."""

    lengths: tuple[int, ...]
    carrier_length: int

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(sorted(int(x) for x in self.lengths)))
        if sum(self.lengths) != self.carrier_length:
            raise ValueError(
                f"fragment lengths sum to {sum(self.lengths)}, carrier is {self.carrier_length}"
            )
        if any(x <= 0 for x in self.lengths):
            raise ValueError("fragment lengths must be positive")

    @classmethod
    def from_cuts(cls, cuts: Sequence[int], length: int) -> "FragmentSet":
        edges = [0, *sorted(cuts), length]
        return cls(tuple(b - a for a, b in zip(edges, edges[1:])), length)

    def __len__(self):
        return len(self.lengths)


@dataclass(frozen=True)
class DecodabilityReport:
    total_states: int
    distinct_signatures: int
    collisions: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    @property
    def decodable(self) -> bool:
        return not self.collisions


def parse_bits(bits: str, n_bits: int) -> str:
    bits = str(bits).strip()
    if len(bits) != n_bits or set(bits) - {"0", "1"}:
        raise ValueError(f"expected a {n_bits}-digit string of 0/1, got {bits!r}")
    return bits


def all_states(n_bits: int):
    return ("".join(p) for p in itertools.product("01", repeat=n_bits))


def expected_fragments(layout: CarrierLayout, bits: str) -> FragmentSet:
    """Predicted digest products: every slot whose digit is 0 is cut."""
    bits = parse_bits(bits, layout.n_bits)
    cuts = [s.cut for s in layout.slots if bits[s.index] == "0"]
    return FragmentSet.from_cuts(cuts, layout.length)


def verify_decodable(layout: CarrierLayout, resolution_bp: float | None = None,
                     max_bits: int = DEFAULT_ENUM_CAP) -> DecodabilityReport:
    """Enumerate all ``2**n`` states and report fragment-signature collisions.

    Without ``resolution_bp`` two states collide when their length multisets
    are identical. With it, signatures are rendered gel lanes and two states
    collide when their lanes have the same band counts and every band pair
    lies within ``resolution_bp`` of each other.
    """
    n = layout.n_bits
    if n > max_bits:
        raise ValueError(f"refusing exhaustive enumeration of 2**{n} states (cap is {max_bits} bits)")
    if resolution_bp is not None:
        from .digest import render_gel

    groups: dict[tuple, list[str]] = {}
    for state in all_states(n):
        frags = expected_fragments(layout, state)
        if resolution_bp is None:
            key = frags.lengths
        else:
            key = render_gel(frags, resolution_bp, ladder=()).signature
        groups.setdefault(key, []).append(state)

    clashing = [states for states in groups.values() if len(states) > 1]
    if resolution_bp is not None:
        by_counts: dict[tuple, list[tuple]] = {}
        for sig in groups:
            by_counts.setdefault(tuple(c for _, c in sig), []).append(sig)
        for sigs in by_counts.values():
            for a, b in itertools.combinations(sigs, 2):
                if all(abs(la - lb) <= resolution_bp for (la, _), (lb, _) in zip(a, b)):
                    clashing.append(groups[a] + groups[b])

    pairs = {tuple(sorted(p)) for states in clashing for p in itertools.combinations(states, 2)}
    return DecodabilityReport(2 ** n, len(groups), tuple(sorted(pairs)))


# validation ----------------------------------------------------------------

def layout_violations(layout: CarrierLayout) -> list[str]:
    """Re-check every layout invariant by direct scanning; empty means valid."""
    problems = []
    seq = layout.carrier
    if set(seq) - set(BASES):
        problems.append("carrier contains non-ACGT symbols")
    sites = [s.site_start for s in layout.slots]
    if find_sites(seq, ECORI_SITE) != sites:
        problems.append(f"GAATTC found at {find_sites(seq, ECORI_SITE)}, slots at {sites}")
    if find_sites(seq, MISMATCH_FIELD):
        problems.append(f"GTTAAC present at {find_sites(seq, MISMATCH_FIELD)}")
    for a, b in zip(layout.slots, layout.slots[1:]):
        if b.start < a.end:
            problems.append(f"slots at {a.site_start} and {b.site_start} overlap")
    if layout.slots and (layout.slots[0].start < 0 or layout.slots[-1].end > len(seq)):
        problems.append("slot extends past carrier ends")
    for s in layout.slots:
        if s.left_addr[1] != layout.address_len or s.right_addr[1] != layout.address_len:
            problems.append(f"slot at {s.site_start} has address length != {layout.address_len}")
    digits = sorted({s.index for s in layout.slots})
    if digits != list(range(len(digits))):
        problems.append(f"slot digit indices {digits} are not 0..n-1")

    addrs = layout.addresses()
    for (pa, sa, a), (pb, sb, b) in itertools.combinations(addrs, 2):
        if len(a) != len(b):
            continue
        d = hamming(a, b)
        if d < layout.min_address_distance:
            problems.append(f"addresses {pa}/{sa} and {pb}/{sb} at distance {d}")

    per_digit = Counter(s.index for s in layout.slots)
    if layout.palindromic:
        cuts = layout.cut_positions
        n = len(cuts)
        for k in range(n):
            mirror = n - 1 - k
            if cuts[k] + cuts[mirror] != len(seq):
                problems.append(f"cut {cuts[k]} has no mirror partner")
            if layout.slots[k].index != layout.slots[mirror].index:
                problems.append(f"mirrored slots {k} and {mirror} carry different digits")
    elif any(c != 1 for c in per_digit.values()):
        problems.append("non-palindromic layout must map one slot per digit")
    return problems


def check_layout(layout: CarrierLayout) -> CarrierLayout:
    problems = layout_violations(layout)
    if problems:
        raise ValueError("invalid layout: " + "; ".join(problems))
    return layout


# design --------------------------------------------------------------------

def _resolve_bit_order(bit_order, n: int) -> list[int]:
    """Digit for each physical slot."""
    if bit_order == "descending":
        return [n - 1 - p for p in range(n)]
    if bit_order == "ascending":
        return list(range(n))
    order = [int(p) for p in bit_order]
    if sorted(order) != list(range(n)):
        raise ValueError(f"bit_order must permute 0..{n - 1}")
    digit_of = [0] * n
    for digit, phys in enumerate(order):
        digit_of[phys] = digit
    return digit_of


def _infer_address_len(site_starts: list[int], length: int | None) -> int:
    best = MAX_INFERRED_ADDRESS_LEN
    for a, b in zip(site_starts, site_starts[1:]):
        best = min(best, (b - a - SITE_LEN) // 2)
    best = min(best, site_starts[0])
    if length is not None:
        best = min(best, length - site_starts[-1] - SITE_LEN)
    return best


class _Sampler:
    """Seeded left-to-right rejection sampler for the free carrier bases."""

    def __init__(self, template: list, addresses: list[str], min_distance: int,
                 rng: np.random.Generator, max_attempts: int):
        self.seq = template
        self.addresses = list(addresses)
        self.min_distance = min_distance
        self.rng = rng
        self.max_attempts = max_attempts

    def _window(self, start: int, end: int) -> str:
        lo, hi = max(0, start - SITE_LEN + 1), min(len(self.seq), end + SITE_LEN - 1)
        return "".join(c if c is not None else "N" for c in self.seq[lo:hi])

    def fill(self, start: int, n: int, is_address: bool) -> None:
        failures = Counter()
        for _ in range(self.max_attempts):
            draw = "".join(BASES[i] for i in self.rng.integers(0, 4, size=n))
            if is_address:
                close = [a for a in self.addresses if hamming(a, draw) < self.min_distance]
                if close:
                    failures[f"address Hamming distance >= {self.min_distance}"] += 1
                    continue
            self.seq[start:start + n] = list(draw)
            window = self._window(start, start + n)
            if ECORI_SITE in window or MISMATCH_FIELD in window:
                failures["no spurious GAATTC/GTTAAC"] += 1
                self.seq[start:start + n] = [None] * n
                continue
            if is_address:
                self.addresses.append(draw)
            return
        constraint = failures.most_common(1)[0][0] if failures else "unknown"
        raise DesignError(
            f"could not fill {n} bases at {start} after {self.max_attempts} attempts "
            f"(constraint: {constraint})",
            constraint=constraint,
        )

    def fill_free_runs(self) -> None:
        i = 0
        while i < len(self.seq):
            if self.seq[i] is None:
                j = i
                while j < len(self.seq) and self.seq[j] is None:
                    j += 1
                self.fill(i, j - i, is_address=False)
                i = j
            else:
                i += 1


def _build_slots(site_starts: list[int], digits: list[int], address_len: int) -> list[MemorySlot]:
    return [
        MemorySlot(d, (g - address_len, address_len), g, (g + SITE_LEN, address_len))
        for g, d in zip(site_starts, digits)
    ]


def _check_geometry(slots: list[MemorySlot], length: int) -> None:
    if slots[0].start < 0:
        raise DesignError(f"first slot starts at {slots[0].start} < 0", constraint="geometry")
    if slots[-1].end > length:
        raise DesignError(f"last slot ends at {slots[-1].end} > carrier length {length}",
                          constraint="geometry")
    for a, b in zip(slots, slots[1:]):
        if b.start < a.end:
            raise DesignError(f"slots with cuts {a.cut} and {b.cut} overlap", constraint="geometry")


def design_carrier(n_bits: int, address_len: int | None = None,
                   cut_positions: Sequence[int] | None = None, *,
                   length: int | None = None, spacing: int | None = None, flank: int = 0,
                   bit_order="descending", min_address_distance: int = DEFAULT_MIN_DISTANCE,
                   max_attempts: int = DEFAULT_MAX_ATTEMPTS, seed: int = 0) -> CarrierLayout:
    """Generate a carrier with ``n_bits`` memory slots.

    Geometry comes either from explicit ``cut_positions`` (``site_start + 1``
    values) or from equal ``spacing`` between cuts, starting after ``flank``
    free bases. ``spacing`` defaults to the slot length so that oligos abut.
    When cuts are given without ``address_len``, the longest address (up to
    24 bases) that keeps slots from overlapping is used.

    ``bit_order`` maps message digits to slots: ``"descending"`` puts digit 0
    on the right-most slot, which reproduces the published 2-bit signature
    assignment; ``"ascending"`` or an explicit list of physical slot numbers
    per digit are also accepted.

    Free bases are drawn by seeded rejection sampling; the result is
    re-verified by an independent scan before being returned.
    """
    if n_bits < 1:
        raise DesignError("need at least one bit", constraint="geometry")

    if cut_positions is not None:
        cuts = sorted(int(c) for c in cut_positions)
        if len(cuts) != n_bits or len(set(cuts)) != n_bits:
            raise DesignError(f"need {n_bits} distinct cut positions, got {list(cut_positions)}",
                              constraint="geometry")
        site_starts = [c - CUT_OFFSET for c in cuts]
        if address_len is None:
            address_len = _infer_address_len(site_starts, length)
    else:
        address_len = DEFAULT_ADDRESS_LEN if address_len is None else address_len
        slot_len = 2 * address_len + SITE_LEN
        spacing = slot_len if spacing is None else spacing
        if spacing < slot_len:
            raise DesignError(f"spacing {spacing} < slot length {slot_len}", constraint="geometry")
        site_starts = [flank + address_len + k * spacing for k in range(n_bits)]

    if address_len < 4:
        raise DesignError(f"address length {address_len} < 4 bases", constraint="address length")
    if length is None:
        length = site_starts[-1] + SITE_LEN + address_len + (flank if cut_positions is None else 0)

    digits = _resolve_bit_order(bit_order, n_bits)
    slots = _build_slots(site_starts, digits, address_len)
    _check_geometry(slots, length)

    template: list = [None] * length
    for s in slots:
        template[s.site_start:s.site_start + SITE_LEN] = list(ECORI_SITE)
    sampler = _Sampler(template, [], min_address_distance, np.random.default_rng(seed), max_attempts)
    for s in slots:
        for start, n in (s.left_addr, s.right_addr):
            sampler.fill(start, n, is_address=True)
    sampler.fill_free_runs()

    layout = CarrierLayout("".join(sampler.seq), tuple(slots), address_len,
                           palindromic=False, min_address_distance=min_address_distance)
    problems = layout_violations(layout)
    if problems:
        raise DesignError("; ".join(problems), constraint="post-design verification")
    return layout


def palindromize(layout: CarrierLayout, center_spacer: int | None = None, *,
                 seed: int = 0, max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> CarrierLayout:
    """Duplicate every slot as a mirror image about the molecule center.

    The original carrier (up to its last slot) is kept, followed by a spacer
    and a mirrored copy of the slot geometry with freshly drawn addresses.
    Mirrored cut coordinates are ``length - cut``, so the cut pattern of
    every state is symmetric. ``center_spacer`` is the distance between the
    two central cuts and defaults to the inter-site spacing, which keeps all
    ``2n`` sites equally spaced.

    The mirrored half needs 4 bases of left flank in the original (cut
    offset asymmetry); missing flank is prepended as fresh bases.
    """
    if layout.palindromic:
        raise ValueError("layout is already palindromic")
    slots = layout.slots
    A = layout.address_len
    slot_len = 2 * A + SITE_LEN
    cuts = [s.cut for s in slots]
    gaps = {b - a for a, b in zip(cuts, cuts[1:])}
    if len(gaps) > 1:
        raise ValueError(f"palindromize needs equally spaced sites, got spacings {sorted(gaps)}")
    spacing = gaps.pop() if gaps else slot_len
    center = spacing if center_spacer is None else int(center_spacer)
    if center < slot_len:
        raise ValueError(f"center spacer {center} would overlap the central slots (< {slot_len})")

    # mirrored slots sit SITE_LEN - 2*CUT_OFFSET bases right of the exact reflection
    pad = max(0, SITE_LEN - 2 * CUT_OFFSET - slots[0].start)
    kept = layout.carrier[:slots[-1].end]
    new_cuts = [c + pad for c in cuts]
    total = 2 * new_cuts[-1] + center

    originals = [
        MemorySlot(s.index, (s.left_addr[0] + pad, A), s.site_start + pad, (s.right_addr[0] + pad, A))
        for s in slots
    ]
    mirrored_starts = [total - c - 1 for c in reversed(new_cuts)]
    mirrored = _build_slots(mirrored_starts, [s.index for s in reversed(slots)], A)
    all_slots = originals + mirrored
    _check_geometry(all_slots, total)

    template: list = [None] * total
    template[pad:pad + len(kept)] = list(kept)
    for s in mirrored:
        template[s.site_start:s.site_start + SITE_LEN] = list(ECORI_SITE)
    existing = [a for _, _, a in layout.addresses()]
    sampler = _Sampler(template, existing, layout.min_address_distance,
                       np.random.default_rng(seed), max_attempts)
    for s in mirrored:
        for start, m in (s.left_addr, s.right_addr):
            sampler.fill(start, m, is_address=True)
    sampler.fill_free_runs()

    out = CarrierLayout("".join(sampler.seq), tuple(all_slots), A, palindromic=True,
                        min_address_distance=layout.min_address_distance)
    problems = layout_violations(out)
    if problems:
        raise DesignError("; ".join(problems), constraint="post-design verification")
    return out


def reversed_cut_positions(layout: CarrierLayout, bits: str) -> list[int]:
    """Cut coordinates of ``bits`` as seen from the other end of the molecule."""
    bits = parse_bits(bits, layout.n_bits)
    return [layout.length - s.cut for s in layout.slots if bits[s.index] == "0"]
