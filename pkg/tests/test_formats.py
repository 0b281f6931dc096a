import json

import numpy as np
import pytest

from dnamemory import formats
from dnamemory.assembly import anneal, ligate
from dnamemory.digest import digest, render_gel
from dnamemory.layout import design_carrier, palindromize
from dnamemory.porescan import TraceParams, detect_events, stud, translocate
from dnamemory.seqcore import parse_fasta


def test_layout_document(paper):
    doc = formats.layout_to_dict(paper)
    assert doc["slots"][0] == {"index": 1, "left_addr": [3, 14], "site_start": 17, "right_addr": [23, 14]}
    assert doc["bit_order"] == [[1], [0]]
    assert doc["conventions"]["cut_offset"] == 1
    (name, seq), = parse_fasta(doc["carrier_fasta"])
    assert seq == paper.carrier
    back = formats.layout_from_dict(json.loads(formats.dumps(doc)))
    assert back == paper


def test_palindromic_layout_roundtrip():
    pal = palindromize(design_carrier(3, seed=1), seed=2)
    assert formats.layout_from_dict(formats.layout_to_dict(pal)) == pal


def test_layout_document_is_validated(paper):
    doc = formats.layout_to_dict(paper)
    doc["slots"][0]["site_start"] += 1
    doc["slots"][0]["left_addr"][1] += 1
    doc["slots"][0]["right_addr"][0] += 1
    with pytest.raises(ValueError):
        formats.layout_from_dict(doc)
    with pytest.raises(ValueError):
        formats.layout_from_dict({"format": "something else"})


def test_assembly_roundtrip(paper):
    for asm in (anneal(paper, "01"), ligate(anneal(paper, "10"))):
        doc = formats.assembly_to_dict(asm)
        assert formats.unrle(doc["pairing_rle"]) == asm.pairing
        assert formats.assembly_from_dict(json.loads(formats.dumps(doc))) == asm


def test_assembly_checksum_guard(paper):
    doc = formats.assembly_to_dict(anneal(paper, "01"))
    doc["layout"]["address_len"] = 13
    with pytest.raises(ValueError, match="checksum"):
        formats.assembly_from_dict(doc)


def test_rle():
    assert formats.rle("UUUPPM") == [["U", 3], ["P", 2], ["M", 1]]


def test_fragment_and_lane_docs(paper):
    frags = digest(anneal(paper, "00"))
    assert formats.fragments_to_dict(frags)["lengths"] == [18, 25, 34]
    assert formats.fragments_from_dict(formats.fragments_to_dict(frags)) == frags
    lane = render_gel(frags, 2)
    assert formats.lane_from_dict(json.loads(formats.dumps(formats.lane_to_dict(lane)))) == lane


def test_trace_text_roundtrip(paper):
    params = TraceParams(noise_sigma=0.02)
    tr = translocate(stud(anneal(paper, "00")), params, "reverse", seed=5)
    text = formats.trace_to_text(tr)
    rows = [l for l in text.splitlines() if not l.startswith("#")]
    assert len(rows) == len(tr.samples) and len(rows[0].split("\t")) == 2
    back = formats.trace_from_text(text)
    assert back.orientation == "reverse" and back.params == params
    assert np.allclose(back.samples, tr.samples, atol=1e-8)
    assert len(detect_events(back)) == 2


def test_events_doc():
    from dnamemory.porescan import Event
    ev = [Event(1e-4, 2e-4)]
    assert formats.events_from_dict(formats.events_to_dict(ev)) == ev
