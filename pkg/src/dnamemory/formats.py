"""Text serialisation: JSON documents, FASTA, two-column trace files."""

from __future__ import annotations

import hashlib
import io
import json
from itertools import groupby

import numpy as np

from .assembly import DuplexAssembly
from .digest import Band, GelLane
from .layout import CUT_OFFSET, CarrierLayout, FragmentSet, MemorySlot, check_layout
from .porescan import BlockadeTrace, Event, TraceParams
from .seqcore import ECORI_SITE, MISMATCH_FIELD, format_fasta, parse_fasta

LAYOUT_FORMAT = "dnamemory.layout/1"
ASSEMBLY_FORMAT = "dnamemory.assembly/1"


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def layout_to_dict(layout: CarrierLayout) -> dict:
    return {
        "format": LAYOUT_FORMAT,
        "carrier_fasta": format_fasta([(f"carrier length={layout.length}", layout.carrier)]),
        "length": layout.length,
        "n_bits": layout.n_bits,
        "address_len": layout.address_len,
        "min_address_distance": layout.min_address_distance,
        "palindromic": layout.palindromic,
        "bit_order": [list(p) for p in layout.bit_order],
        "slots": [
            {"index": s.index, "left_addr": list(s.left_addr), "site_start": s.site_start,
             "right_addr": list(s.right_addr)}
            for s in layout.slots
        ],
        "conventions": {
            "coordinates": "0-based, half-open",
            "cut_offset": CUT_OFFSET,
            "data_motif": ECORI_SITE,
            "mismatch_motif": MISMATCH_FIELD,
            "bits": "ASCII 0/1, digit 0 leftmost",
            "bit_order": "per digit, physical slot numbers (5'->3' order)",
        },
    }


def layout_from_dict(doc: dict) -> CarrierLayout:
    if doc.get("format") != LAYOUT_FORMAT:
        raise ValueError(f"not a layout document (format={doc.get('format')!r})")
    (_, carrier), = parse_fasta(doc["carrier_fasta"])
    slots = tuple(MemorySlot(s["index"], tuple(s["left_addr"]), s["site_start"], tuple(s["right_addr"]))
                  for s in doc["slots"])
    layout = CarrierLayout(carrier, slots, doc["address_len"], bool(doc["palindromic"]),
                           doc.get("min_address_distance", 8))
    return check_layout(layout)


def rle(s: str) -> list[list]:
    return [[ch, len(list(run))] for ch, run in groupby(s)]


def unrle(runs) -> str:
    return "".join(ch * n for ch, n in runs)


def assembly_to_dict(asm: DuplexAssembly) -> dict:
    layout_doc = layout_to_dict(asm.layout)
    return {
        "format": ASSEMBLY_FORMAT,
        "layout": layout_doc,
        "layout_sha256": sha256_text(dumps(layout_doc)),
        "bits": asm.bits,
        "pairing_rle": rle(asm.pairing),
        "nicks": list(asm.nicks),
        "sealed": asm.sealed,
    }


def assembly_from_dict(doc: dict) -> DuplexAssembly:
    if doc.get("format") != ASSEMBLY_FORMAT:
        raise ValueError(f"not an assembly document (format={doc.get('format')!r})")
    if sha256_text(dumps(doc["layout"])) != doc["layout_sha256"]:
        raise ValueError("embedded layout does not match its checksum")
    layout = layout_from_dict(doc["layout"])
    pairing = unrle(doc["pairing_rle"])
    if len(pairing) != layout.length:
        raise ValueError("pairing map length differs from carrier length")
    return DuplexAssembly(layout, doc["bits"], pairing, tuple(doc["nicks"]), bool(doc["sealed"]))


def fragments_to_dict(frags: FragmentSet) -> dict:
    return {"lengths": list(frags.lengths), "carrier_length": frags.carrier_length}


def fragments_from_dict(doc: dict) -> FragmentSet:
    return FragmentSet(tuple(doc["lengths"]), doc["carrier_length"])


def lane_to_dict(lane: GelLane) -> dict:
    return {
        "bands": [{"length_bp": b.length_bp, "merged_count": b.merged_count} for b in lane.bands],
        "resolution_bp": lane.resolution_bp,
        "ladder": list(lane.ladder),
    }


def lane_from_dict(doc: dict) -> GelLane:
    bands = tuple(Band(float(b["length_bp"]), int(b["merged_count"])) for b in doc["bands"])
    return GelLane(bands, doc["resolution_bp"], tuple(doc.get("ladder", ())))


def events_to_dict(events) -> dict:
    return {"events": [{"start_time": e.start_time, "duration": e.duration} for e in events]}


def events_from_dict(doc: dict) -> list[Event]:
    return [Event(e["start_time"], e["duration"]) for e in doc["events"]]


def params_to_dict(p: TraceParams) -> dict:
    return dict(p.__dict__)


def params_from_dict(doc: dict) -> TraceParams:
    return TraceParams(**doc)


def trace_to_text(trace: BlockadeTrace) -> str:
    """Two tab-separated columns with a ``#`` header carrying the parameters."""
    buf = io.StringIO()
    buf.write("# " + json.dumps({"orientation": trace.orientation,
                                 "params": params_to_dict(trace.params)}, sort_keys=True) + "\n")
    buf.write("# time_seconds\tcurrent_units\n")
    np.savetxt(buf, np.column_stack([trace.times, trace.samples]), fmt="%.9g", delimiter="\t")
    return buf.getvalue()


def trace_from_text(text: str) -> BlockadeTrace:
    lines = text.splitlines()
    meta = json.loads(lines[0].lstrip("#").strip())
    data = np.loadtxt(io.StringIO(text), comments="#", delimiter="\t", ndmin=2)
    params = params_from_dict(meta["params"])
    return BlockadeTrace(data[:, 1].copy(), params, meta["orientation"])
