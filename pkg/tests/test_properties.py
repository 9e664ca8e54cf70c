"""Randomized invariant sweeps (seeded, deterministic)."""

import numpy as np
import pytest

import decaygraph as dg

from oracle_helpers import match_deviation, symmetric_binary_vectors


def random_two_segment_rings(rng, count, max_len=31):
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_len))
        m = int(rng.integers(1, max_len))
        if n + m < 3:
            continue
        t = float(rng.uniform(1.1, 4.0))
        out.append((dg.SegmentedRing((("A", n), ("B", m))), t))
    return out


def random_alternating_rings(rng, count, max_pairs=4, max_len=12):
    out = []
    for _ in range(count):
        pairs = int(rng.integers(1, max_pairs + 1))
        segs = []
        for k in range(pairs):
            segs.append(("A", int(rng.integers(1, max_len + 1))))
            segs.append(("B", int(rng.integers(1, max_len + 1))))
        if sum(n for _, n in segs) < 3:
            continue
        t = float(rng.uniform(1.1, 4.0))
        out.append((dg.SegmentedRing(tuple(segs)), t))
    return out


def random_circulants(rng, count, max_n=16):
    out = []
    while len(out) < count:
        n = int(rng.integers(2, max_n + 1))
        options = symmetric_binary_vectors(n)
        a = options[int(rng.integers(0, len(options)))]
        t = float(rng.uniform(1.1, 4.0))
        out.append((dg.validate_circulant(n, a), t))
    return out


RNG = np.random.default_rng(20240831)
TWO_SEG = random_two_segment_rings(RNG, 12)
MULTI_SEG = random_alternating_rings(RNG, 12)
CIRCS = random_circulants(RNG, 12)


class TestAnalyticNumericEquivalence:
    @pytest.mark.parametrize("ring,t", TWO_SEG)
    def test_rings(self, ring, t):
        sys = dg.eigendecompose(dg.build(ring, t))
        analytic = [s.energy for s in dg.ring_analytic_spectrum(ring, t)]
        assert match_deviation(sys.values, analytic) <= 1e-8

    @pytest.mark.parametrize("g,t", CIRCS)
    def test_circulants(self, g, t):
        sys = dg.eigendecompose(dg.build(g, t))
        analytic = dg.circulant_analytic_spectrum(g, t)
        assert match_deviation(sys.values, analytic.values) <= 1e-8

    @pytest.mark.parametrize("ring,t", TWO_SEG[:6])
    def test_conjugate_pairing(self, ring, t):
        sys = dg.eigendecompose(dg.build(ring, t))
        assert match_deviation(sys.values, np.conj(sys.values)) <= 1e-10


class TestPurityAcrossFamilies:
    @pytest.mark.parametrize("ring,t", MULTI_SEG[:8])
    def test_rings_pass(self, ring, t):
        sys = dg.eigendecompose(dg.build(ring, t))
        assert dg.pure_decay_check(sys, ring, t).passed

    @pytest.mark.parametrize("g,t", CIRCS[:8])
    def test_circulants_pass(self, g, t):
        sys = dg.eigendecompose(dg.build(g, t))
        assert dg.pure_decay_check(sys, g, t).passed


class TestPowerPartition:
    @pytest.mark.parametrize("ring,t", MULTI_SEG)
    def test_partition_and_type_sharing(self, ring, t):
        sys = dg.eigendecompose(dg.build(ring, t))
        report = dg.pure_decay_check(sys, ring, t).report
        assert report.partition_sum == pytest.approx(1.0, abs=1e-9)
        for kind in ("A", "B"):
            ratios = [c.ratio for c in report.per_chain if c.chain_type == kind]
            assert max(ratios) / min(ratios) - 1.0 <= 1e-9

    def test_permuted_segments_share_ratios(self):
        # ratios depend only on the type totals, not the segment order
        t = 1.5
        a = dg.SegmentedRing((("A", 4), ("B", 11), ("A", 3), ("B", 12)))
        b = dg.SegmentedRing((("A", 3), ("B", 12), ("A", 4), ("B", 11)))
        reports = []
        for ring in (a, b):
            sys = dg.eigendecompose(dg.build(ring, t))
            reports.append(dg.pure_decay_check(sys, ring, t).report.ratios_by_type())
        assert reports[0]["A"] == pytest.approx(reports[1]["A"], rel=1e-9)
        assert reports[0]["B"] == pytest.approx(reports[1]["B"], rel=1e-9)


class TestChargeInvariants:
    @pytest.mark.parametrize("spec,t", (MULTI_SEG[:5] + CIRCS[:5]))
    def test_quantization_and_conservation(self, spec, t):
        cm = dg.charge_map(spec, t)
        assert cm.quantized
        assert abs(cm.total) <= 1e-9
        sigma, dev = dg.verify_charge_equality(spec, t)
        assert sigma == 1 and dev <= 1e-9

    @pytest.mark.parametrize("g,t", CIRCS[:5])
    def test_circulant_scaled_similarity(self, g, t):
        h = dg.build(g, t)
        n = g.n_nodes
        d = (t ** (-1.0 / n)) ** np.arange(n)
        sim = h.matrix * np.outer(1.0 / d, d)
        q = np.arange(1, n)
        first_row = np.concatenate([[0.0], np.array(g.a) * t ** ((n - q) / n)])
        for i in range(n):
            np.testing.assert_allclose(sim[i], np.roll(first_row, i), rtol=1e-12, atol=1e-12)


class TestEquivalenceAtSizeBoundary:
    def test_ring_n64(self):
        # largest size the 1e-8 equivalence bound is promised for
        ring = dg.SegmentedRing((("A", 34), ("B", 30)))
        t = 4.0
        sys = dg.eigendecompose(dg.build(ring, t))
        analytic = [s.energy for s in dg.ring_analytic_spectrum(ring, t)]
        assert match_deviation(sys.values, analytic) <= 1e-8

    def test_circulant_n64(self):
        a = [0] * 63
        for q in (1, 16):
            a[q - 1] = 1
            a[63 - q] = 1
        g = dg.validate_circulant(64, a)
        t = 4.0
        sys = dg.eigendecompose(dg.build(g, t))
        analytic = dg.circulant_analytic_spectrum(g, t)
        assert match_deviation(sys.values, analytic.values) <= 1e-8


class TestProductInvariants:
    def test_eigenvalue_additivity_random(self):
        rng = np.random.default_rng(5)
        for _ in range(4):
            ring = dg.SegmentedRing((("A", int(rng.integers(2, 6))), ("B", int(rng.integers(1, 5)))))
            circs = symmetric_binary_vectors(int(rng.integers(2, 5)))
            g = dg.validate_circulant(len(circs[0]) + 1, circs[int(rng.integers(0, len(circs)))])
            tx, ty = float(rng.uniform(1.2, 3.0)), float(rng.uniform(1.2, 3.0))
            p = dg.ProductLattice(((ring, tx), (g, ty)))
            h = dg.build_product_lattice(p)
            ex = dg.eigendecompose(dg.build(ring, tx)).values
            ey = dg.eigendecompose(dg.build(g, ty)).values
            sums = (ex[:, None] + ey[None, :]).ravel()
            assert match_deviation(dg.eigendecompose(h).values, sums) <= 1e-8
