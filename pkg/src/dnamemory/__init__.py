"""In-silico workbench for restriction-site DNA memory.

Bits are written onto a carrier strand with addressing oligos: a fully
complementary oligo leaves an EcoRI site intact (``0``), a GTTAAC-bearing
oligo melts it (``1``). Readout is a simulated digest plus virtual gel, or
a simulated nanopore trace of mutant-EcoRI studs.
"""

from .assembly import (AddressingOligo, DuplexAssembly, anneal, cross_hybridization_check,
                       ligate, make_oligo)
from .digest import ECORI, Enzyme, GelLane, decode_gel, digest, eligible_sites, render_gel
from .errors import (AmbiguousError, DecodeError, DesignError, DNAMemoryError, LigationError,
                     UnreadableError)
from .layout import (CarrierLayout, DecodabilityReport, FragmentSet, MemorySlot, design_carrier,
                     expected_fragments, palindromize, verify_decodable)
from .porescan import (BlockadeTrace, Event, StuddedComplex, TraceParams, decode_trace,
                       detect_events, stud, translocate)
from .seqcore import complement, find_sites, hamming, reverse_complement


def paper_layout(seed: int = 0) -> CarrierLayout:
    """The published 2-bit geometry: 77 bases, cuts at 18 and 52."""
    return design_carrier(2, cut_positions=(18, 52), length=77, seed=seed)


__version__ = "0.1.0"
