"""Restriction digest readout, virtual gel lanes and gel decoding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .assembly import PAIRED, DuplexAssembly
from .errors import AmbiguousError, UnreadableError
from .layout import CUT_OFFSET, CarrierLayout, FragmentSet, all_states, expected_fragments
from .seqcore import ECORI_SITE, find_sites, is_palindrome

DEFAULT_RESOLUTION_BP = 2


@dataclass(frozen=True)
class Enzyme:
    name: str
    recognition: str
    cut_offset: int = CUT_OFFSET
    requires_full_duplex: bool = True

    def __post_init__(self):
        if not is_palindrome(self.recognition):
            raise ValueError(f"{self.name}: recognition {self.recognition} is not palindromic")


ECORI = Enzyme("EcoRI", ECORI_SITE, CUT_OFFSET, True)


def eligible_sites(assembly: DuplexAssembly, enzyme: Enzyme = ECORI) -> list[int]:
    """Recognition sites (start coordinates) the enzyme can bind.

    The carrier is scanned for the motif; a site qualifies only if every
    position in it is paired. Mismatched or uncovered bases block it.
    """
    m = len(enzyme.recognition)
    sites = find_sites(assembly.layout.carrier, enzyme.recognition)
    if not enzyme.requires_full_duplex:
        return sites
    return [g for g in sites if assembly.pairing[g:g + m] == PAIRED * m]


def digest(assembly: DuplexAssembly, enzyme: Enzyme = ECORI) -> FragmentSet:
    """Complete digest: every eligible site is cut."""
    cuts = [g + enzyme.cut_offset for g in eligible_sites(assembly, enzyme)]
    return FragmentSet.from_cuts(cuts, assembly.layout.length)


# gel -----------------------------------------------------------------------

@dataclass(frozen=True)
class Band:
    length_bp: float
    merged_count: int


@dataclass(frozen=True)
class GelLane:
    """Bands ordered from the top of the gel (longest) downwards."""

    bands: tuple[Band, ...]
    resolution_bp: float
    ladder: tuple[int, ...] = ()

    @property
    def signature(self) -> tuple[tuple[float, int], ...]:
        return tuple((round(b.length_bp, 6), b.merged_count) for b in self.bands)


def default_ladder(max_len: int, step: int = 10) -> tuple[int, ...]:
    top = max(100, step * math.ceil(max_len / step))
    return tuple(range(step, top + 1, step))


def render_gel(fragments: FragmentSet, resolution_bp: float = DEFAULT_RESOLUTION_BP,
               ladder=None) -> GelLane:
    """Merge fragments closer than ``resolution_bp`` into single bands.

    Sorted lengths are chained: a fragment within ``resolution_bp`` of the
    previous one joins its band. A band is reported at the mean length of
    its members with their count.
    """
    if resolution_bp < 0:
        raise ValueError("resolution_bp must be >= 0")
    lengths = sorted(fragments.lengths, reverse=True)
    groups: list[list[int]] = []
    for x in lengths:
        if groups and groups[-1][-1] - x <= resolution_bp:
            groups[-1].append(x)
        else:
            groups.append([x])
    bands = tuple(Band(sum(g) / len(g), len(g)) for g in groups)
    if ladder is None:
        ladder = default_ladder(fragments.carrier_length)
    return GelLane(bands, resolution_bp, tuple(ladder))


@lru_cache(maxsize=64)
def _signature_table(layout: CarrierLayout, resolution_bp: float) -> dict:
    table: dict[tuple, list[str]] = {}
    for state in all_states(layout.n_bits):
        sig = render_gel(expected_fragments(layout, state), resolution_bp, ladder=()).signature
        table.setdefault(sig, []).append(state)
    return table


def _bands_match(a, b, tol: float) -> bool:
    return len(a) == len(b) and all(
        ca == cb and abs(la - lb) <= tol for (la, ca), (lb, cb) in zip(a, b)
    )


def decode_gel(lane: GelLane, layout: CarrierLayout, enzyme: Enzyme = ECORI,
               tolerance_bp: float = 0.0) -> str:
    """Recover the written bits from a band pattern.

    Every state's predicted lane (at the observed lane's resolution) is
    compared against ``lane``; exactly one must match.
    """
    if enzyme.recognition != ECORI_SITE or enzyme.cut_offset != CUT_OFFSET:
        raise ValueError(f"layout data fields are {ECORI_SITE} sites cut at +{CUT_OFFSET}; "
                         f"{enzyme.name} does not match")
    table = _signature_table(layout, lane.resolution_bp)
    observed = lane.signature
    if tolerance_bp == 0:
        matches = table.get(observed, [])
    else:
        matches = [s for sig, states in table.items() if _bands_match(sig, observed, tolerance_bp)
                   for s in states]
    if not matches:
        raise UnreadableError(f"no state produces bands {[b.length_bp for b in lane.bands]}")
    if len(matches) > 1:
        raise AmbiguousError(f"bands match {len(matches)} states: {', '.join(sorted(matches))}",
                             candidates=sorted(matches))
    return matches[0]


def gel_text(lane: GelLane, rows: int = 24, title: str = "sample") -> str:
    """Plain-text gel: ladder column on the left, sample lane on the right.

    Row position follows log(length), as in a real gel.
    """
    sizes = [b.length_bp for b in lane.bands] + list(lane.ladder)
    hi, lo = math.log(max(sizes)), math.log(max(1.0, min(sizes)))
    span = (hi - lo) or 1.0

    def row(length):
        return round((hi - math.log(length)) / span * (rows - 1))

    ladder_rows: dict[int, list[int]] = {}
    for x in lane.ladder:
        ladder_rows.setdefault(row(x), []).append(x)
    lane_rows: dict[int, list[Band]] = {}
    for b in lane.bands:
        lane_rows.setdefault(row(b.length_bp), []).append(b)

    lines = [f"{'ladder':>12}   {title}"]
    for r in range(rows):
        left = right = ""
        if r in ladder_rows:
            left = f"{max(ladder_rows[r]):>5} -----"
        if r in lane_rows:
            right = "  ".join(f"===== {b.length_bp:g} bp" + (f" (x{b.merged_count})" if b.merged_count > 1 else "")
                              for b in lane_rows[r])
        lines.append(f"{left:>12}   {right}".rstrip())
    return "\n".join(lines) + "\n"
