"""Writing bits: addressing oligos, idealised annealing, ligation.

Oligo sequences are stored aligned to the carrier, i.e. as the base-wise
complement of the slot region read left to right (3'->5' for the oligo).
``AddressingOligo.five_to_three`` gives the synthesis orientation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import LigationError
from .layout import SITE_LEN, CarrierLayout, parse_bits
from .seqcore import MISMATCH_FIELD, complement, format_fasta

PAIRED = "P"
MISMATCHED = "M"
UNPAIRED = "U"

# data field of a "1" oligo, aligned to the carrier (GTTAAC read 3'->5')
_ONE_FIELD_ALIGNED = MISMATCH_FIELD[::-1]


@dataclass(frozen=True)
class AddressingOligo:
    slot_index: int
    bit: int
    sequence: str
    digit: int = 0

    @property
    def five_to_three(self) -> str:
        return self.sequence[::-1]

    @property
    def name(self) -> str:
        return f"slot{self.slot_index}_digit{self.digit}_bit{self.bit}"


def make_oligo(layout: CarrierLayout, slot_index: int, bit: int) -> AddressingOligo:
    """Oligo writing ``bit`` at physical slot ``slot_index``.

    A ``0`` oligo is the exact complement of the slot region. A ``1`` oligo
    differs only in the data field, where it carries GTTAAC instead of the
    GAATTC complement, leaving the middle four bases mismatched.
    """
    if not 0 <= slot_index < len(layout.slots):
        raise IndexError(f"slot index {slot_index} out of range 0..{len(layout.slots) - 1}")
    bit = int(bit)
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    slot = layout.slots[slot_index]
    seq = complement(layout.region(slot_index))
    if bit == 1:
        off = slot.site_start - slot.start
        seq = seq[:off] + _ONE_FIELD_ALIGNED + seq[off + SITE_LEN:]
    return AddressingOligo(slot_index, bit, seq, digit=slot.index)


def oligo_fasta(oligos) -> str:
    return format_fasta((o.name, o.five_to_three) for o in oligos)


@dataclass(frozen=True)
class DuplexAssembly:
    """Carrier with one annealed oligo per slot.

    ``pairing`` has one character per carrier base: ``P`` paired,
    ``M`` mismatched, ``U`` not covered by any oligo. ``nicks`` are carrier
    coordinates where two oligos abut.
    """

    layout: CarrierLayout
    bits: str
    pairing: str
    nicks: tuple[int, ...]
    sealed: bool = False

    @property
    def oligos(self) -> list[AddressingOligo]:
        return [make_oligo(self.layout, p, int(self.bits[s.index]))
                for p, s in enumerate(self.layout.slots)]

    def mismatched_positions(self) -> list[int]:
        return [i for i, c in enumerate(self.pairing) if c == MISMATCHED]


def anneal(layout: CarrierLayout, bits: str) -> DuplexAssembly:
    bits = parse_bits(bits, layout.n_bits)
    pairing = [UNPAIRED] * layout.length
    for phys, slot in enumerate(layout.slots):
        oligo = make_oligo(layout, phys, int(bits[slot.index]))
        target = complement(layout.region(phys))
        for k, (o, t) in enumerate(zip(oligo.sequence, target)):
            pairing[slot.start + k] = PAIRED if o == t else MISMATCHED
    nicks = tuple(a.end for a, b in zip(layout.slots, layout.slots[1:]) if a.end == b.start)
    return DuplexAssembly(layout, bits, "".join(pairing), nicks, sealed=False)


def ligate(assembly: DuplexAssembly) -> DuplexAssembly:
    """Seal the nicks between abutting oligos."""
    slots = assembly.layout.slots
    for a, b in zip(slots, slots[1:]):
        if b.start > a.end:
            raise LigationError(f"gap of {b.start - a.end} bases between oligos at junction "
                                f"{a.end}..{b.start}", junction=(a.end, b.start))
        if b.start < a.end:
            raise LigationError(f"oligos overlap at junction {b.start}..{a.end}",
                                junction=(b.start, a.end))
    return replace(assembly, nicks=(), sealed=True)


@dataclass(frozen=True)
class HybridizationHit:
    slot_index: int
    bit: int
    window_start: int
    identity: float
    overlapping_slots: tuple[int, ...]


_CODES = {b: i for i, b in enumerate("ACGT")}


def _encode(s: str) -> np.ndarray:
    return np.fromiter((_CODES[c] for c in s), dtype=np.int8, count=len(s))


def cross_hybridization_check(layout: CarrierLayout, threshold: float = 0.75) -> list[HybridizationHit]:
    """Off-target windows that an oligo would pair with at ``>= threshold`` identity.

    Every oligo (both bit values) is slid along the carrier; its own slot
    window is skipped. An empty list means the design passes.
    """
    target = _encode(complement(layout.carrier))
    hits = []
    for phys, slot in enumerate(layout.slots):
        m = slot.end - slot.start
        if m > layout.length:
            continue
        windows = np.lib.stride_tricks.sliding_window_view(target, m)
        for bit in (0, 1):
            oligo = _encode(make_oligo(layout, phys, bit).sequence)
            identity = (windows == oligo).mean(axis=1)
            for w in np.flatnonzero(identity >= threshold - 1e-12):
                w = int(w)
                if w == slot.start:
                    continue
                overlapping = tuple(k for k, s in enumerate(layout.slots)
                                    if s.start < w + m and w < s.end and k != phys)
                hits.append(HybridizationHit(phys, bit, w, float(identity[w]), overlapping))
    return hits
