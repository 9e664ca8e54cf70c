"""Quantized decay charges: amplitude route vs edge-counting route.

Summing log_t(|psi_node| / |psi_neighbor|) over a node's neighbors gives
a half-integer charge that equals (outgoing - incoming edges) / 2 and
sums to zero over the lattice.  Charges sit on the junction nodes where
opposite-orientation chains meet.

Run:  python3 demos/03_decay_charges.py
"""

import numpy as np

import decaygraph as dg

t = 1.5

# four-segment ring: +1 charges on the two drain junctions, -1 on the sources
ring = dg.SegmentedRing((("A", 6), ("B", 8), ("A", 7), ("B", 4)))
cm = dg.charge_map(ring, t)
nonzero = {i + 1: round(float(q), 9) for i, q in enumerate(cm.amplitude_charge) if abs(q) > 1e-6}
print(f"25-site ring charges (site: Q): {nonzero}")
print(f"total charge {cm.total:+.2e}, quantized: {cm.quantized}")
sigma, dev = dg.verify_charge_equality(ring, t)
print(f"amplitude vs combinatorial: sign {sigma:+d}, max deviation {dev:.2e}")

# charges add per axis on a 2D product lattice
ring_y = dg.SegmentedRing((("A", 5), ("B", 3), ("A", 2), ("B", 6)))
grid = dg.ProductLattice(((ring, t), (ring_y, t)))
cm2d = dg.charge_map(grid)
values = sorted(set(float(q) for q in np.round(cm2d.amplitude_charge, 9)))
print(f"\n2D lattice ({grid.length} nodes) charge values: {values}")

# integer charges on a 7-node graph with 4 neighbors per node
g7 = dg.validate_circulant(7, [1, 1, 0, 0, 1, 1])
cm7 = dg.charge_map(g7, t)
print(f"\n7-node graph charges: {np.round(cm7.amplitude_charge, 9)}")

# half-integer charges: synthesize a graph realizing a requested vector
target = np.array([2.5, 1.5, 0.5, 0.0, 0.0, -0.5, -1.5, -2.5])
g8 = dg.synthesize_charge_graph(target, t)
print(f"\n8-node synthesized graph ({len(g8.edges)} edges) for target {target}")
print("edges:", [(e.tail + 1, e.head + 1) for e in g8.edges])
sigma8, dev8 = dg.verify_charge_equality(g8)
print(f"charge verification on the synthesized profile: sign {sigma8:+d}, deviation {dev8:.2e}")

# reversing every bond negates all charges
ht = dg.transpose(dg.build(ring, t))
sys_t = dg.eigendecompose(ht)
q_t = dg.amplitude_charges(sys_t.profile(dg.least_damped_mode(sys_t)), ht.edges, t)
print(f"\ntransposed ring charges negate: {dict((i + 1, round(float(q), 6)) for i, q in enumerate(q_t) if abs(q) > 1e-6)}")
