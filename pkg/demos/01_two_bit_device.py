"""
A 2-bit restriction-site memory
===============================

Build the 77-base, two-slot carrier, write each of the four messages with
addressing oligos, digest with EcoRI and read the virtual gel back.
"""

from dnamemory import anneal, decode_gel, digest, paper_layout, render_gel, verify_decodable
from dnamemory.assembly import oligo_fasta
from dnamemory.digest import gel_text

# Cut coordinates 18 and 52 on a 77-base carrier; the addresses are drawn
# by seeded rejection sampling, so any seed gives a valid carrier.
layout = paper_layout(seed=0)
print("carrier:", layout.carrier)
for phys, slot in enumerate(layout.slots):
    print(f"slot {phys}: digit {slot.index}, region {slot.start}..{slot.end}, cut at {slot.cut}")

###############################################################################
# The four oligos for message "01": the second one carries GTTAAC.
print(oligo_fasta(anneal(layout, "01").oligos))

###############################################################################
# Digest every state and decode its gel lane.
for bits in ("00", "01", "10", "11"):
    fragments = digest(anneal(layout, bits))
    lane = render_gel(fragments, resolution_bp=2)
    print(bits, "->", fragments.lengths, "-> decoded", decode_gel(lane, layout))

print(gel_text(render_gel(digest(anneal(layout, "00")), 2), title="00"))

###############################################################################
# Exhaustive check that no two states share a band pattern.
print(verify_decodable(layout))
