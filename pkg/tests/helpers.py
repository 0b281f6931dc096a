"""Random geometries and brute-force oracles used across test modules."""

import itertools

import numpy as np

from dnamemory.layout import SITE_LEN, design_carrier, verify_decodable


def random_geometry(rng, n_bits=None, max_bits=8):
    n = int(rng.integers(1, max_bits + 1)) if n_bits is None else n_bits
    A = int(rng.integers(14, 19))
    pos = int(rng.integers(0, 9))
    cuts = []
    for _ in range(n):
        cuts.append(pos + A + 1)
        pos += 2 * A + SITE_LEN + int(rng.integers(0, 12))
    length = cuts[-1] - 1 + SITE_LEN + A + int(rng.integers(0, 9))
    order = [int(x) for x in rng.permutation(n)]
    return dict(n_bits=n, address_len=A, cut_positions=cuts, length=length, bit_order=order)


def random_layout(seed, n_bits=None, max_bits=8, decodable_at=None):
    rng = np.random.default_rng(seed)
    while True:
        g = random_geometry(rng, n_bits, max_bits)
        layout = design_carrier(g.pop("n_bits"), g.pop("address_len"), g.pop("cut_positions"),
                                seed=int(rng.integers(2**31)), **g)
        if decodable_at is None or verify_decodable(layout, decodable_at).decodable:
            return layout


def naive_sites(s, motif):
    return [i for i in range(len(s) - len(motif) + 1) if s[i:i + len(motif)] == motif]


def naive_fragments(layout, bits):
    """Direct geometric oracle: walk the carrier, cut after each 0-site's G."""
    cut_here = set()
    for slot in layout.slots:
        if bits[slot.index] == "0":
            cut_here.add(slot.site_start + 1)
    lengths, run = [], 0
    for i in range(layout.length):
        if i in cut_here:
            lengths.append(run)
            run = 0
        run += 1
    lengths.append(run)
    return sorted(lengths)


def naive_collisions(layout):
    n = layout.n_bits
    states = ["".join(p) for p in itertools.product("01", repeat=n)]
    sig = {s: tuple(naive_fragments(layout, s)) for s in states}
    return {tuple(sorted((a, b))) for a, b in itertools.combinations(states, 2) if sig[a] == sig[b]}
