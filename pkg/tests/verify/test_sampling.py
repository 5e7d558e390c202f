"""Unit tests for seeded instance sampling."""
import pytest

from dabruhat.bruhat import UP, edge
from dabruhat.length import ell
from dabruhat.utils import load_weyl
from dabruhat.verify.sampling import instance_rng, random_element, random_root, sample_edge, sample_triple


@pytest.fixture(params=[("A1", False), ("A2", False), ("A2", True)])
def dw(request):
    """Affine A1, affine A2 and finite A2."""
    label, finite = request.param
    return load_weyl(label, finite)


class TestInstanceRng:
    """Test the counter-based generator."""

    def test_deterministic(self):
        """The same (seed, index) gives the same stream."""
        a = instance_rng(7, 3).integers(0, 1000, size=8)
        b = instance_rng(7, 3).integers(0, 1000, size=8)
        assert list(a) == list(b)

    def test_indices_differ(self):
        """Neighbouring indices give different streams."""
        a = instance_rng(7, 3).integers(0, 1 << 30, size=8)
        b = instance_rng(7, 4).integers(0, 1 << 30, size=8)
        assert list(a) != list(b)


class TestSampling:
    """Test sampled elements, edges and triples."""

    def test_elements_in_w_t(self, dw):
        """Sampled elements always lie in W_T."""
        for index in range(20):
            assert dw.is_member(random_element(dw, instance_rng(1, index)))

    def test_roots_positive(self, dw):
        """Sampled roots pass the root check."""
        for index in range(20):
            root = random_root(dw, instance_rng(2, index))
            assert dw.check_root(root) == root

    def test_sample_edge(self, dw):
        """Sampled edges point up with a gap inside the bounds."""
        for index in range(5):
            pair = sample_edge(dw, instance_rng(3, index), min_gap=1, max_gap=6)
            if pair is None:
                continue
            x, gamma = pair
            e = edge(dw, x, gamma)
            assert e.direction == UP
            assert 1 <= ell(dw, e.target) - ell(dw, x) <= 6

    def test_sample_edge_reproducible(self, dw):
        """The same seed gives the same edge."""
        assert sample_edge(dw, instance_rng(5, 0)) == sample_edge(dw, instance_rng(5, 0))

    def test_sample_triple(self, dw):
        """x, y, z come in non-decreasing length within the gap."""
        x, y, z = sample_triple(dw, instance_rng(4, 0), max_gap=3)
        assert ell(dw, x) <= ell(dw, y) <= ell(dw, z) <= ell(dw, x) + 3
