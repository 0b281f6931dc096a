"""
Why the sites are spaced unevenly, and what palindromes buy
===========================================================

Symmetric cut positions make "01" and "10" indistinguishable on a gel.
Mirroring every slot about the molecule center fixes orientation, but
length-only signatures still collide once four or more bits are stored.
"""

from dnamemory import (AmbiguousError, anneal, decode_gel, design_carrier, digest, palindromize,
                       render_gel, verify_decodable)

mirror = design_carrier(2, cut_positions=(20, 57), length=77, seed=0)
print("mirror-symmetric 2-bit layout:", verify_decodable(mirror))
try:
    decode_gel(render_gel(digest(anneal(mirror, "01")), 2), mirror)
except AmbiguousError as exc:
    print("decode ->", exc)

###############################################################################
# Palindromized equal-spacing layouts, n = 1..10.
for n in range(1, 11):
    pal = palindromize(design_carrier(n, seed=n), seed=n)
    report = verify_decodable(pal)
    first = report.collisions[0] if report.collisions else "-"
    print(f"n={n:2d}  sites={len(pal.slots):2d}  distinct={report.distinct_signatures:4d}/{2 ** n:<4d}"
          f"  first collision: {first}")

###############################################################################
# The smallest collision: the fragment multiset forgets the order of gaps.
pal = palindromize(design_carrier(4, seed=4), seed=4)
a, b = verify_decodable(pal).collisions[0]
print(a, digest(anneal(pal, a)).lengths)
print(b, digest(anneal(pal, b)).lengths)
