"""
Tests for ideality, W-motifs, reduction and extremal networks
"""

from fractions import Fraction

import pytest

from infoloss.core.analysis import (
    equal_outdegree_components,
    has_w_motif,
    is_ideal,
    is_ideal_three_layer,
    is_reduced,
    iter_w_motifs,
    naive_variance,
    naive_weights,
    nonnegative_weights,
    reduce,
    ring_network,
    ring_variance,
)
from infoloss.core.ensembles import random_network
from infoloss.core.errors import ContractViolation, NoInformationError
from infoloss.core.estimation import FinalEstimate, final_estimate, weight_profiles
from infoloss.core.network import LayeredNetwork, PrecisionVector

F = Fraction

OVERLAP = LayeredNetwork.from_matrices([[1, 1, 0], [0, 1, 1]])
TRIANGLE = LayeredNetwork.from_matrices([[1, 1, 0], [1, 0, 1], [0, 1, 1]])
IDENTITY = LayeredNetwork.from_matrices([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


class TestIsIdeal:
    """Test the general ideality test"""

    def test_overlap_pair_not_ideal(self):
        """Test the overlapping pair loses information"""
        verdict = is_ideal(OVERLAP, PrecisionVector.ones(3))
        assert not verdict.ideal
        assert verdict.certificate is None
        assert verdict.to_dict() == {"ideal": False}

    def test_triangle_ideal_with_certificate(self):
        """Test the certificate reproduces the ideal weights"""
        precisions = PrecisionVector.ones(3)
        verdict = is_ideal(TRIANGLE, precisions)
        assert verdict.ideal
        rows = weight_profiles(TRIANGLE, precisions)[-1].rows
        assert verdict.ideal_weights(rows) == (F(1, 3),) * 3
        assert verdict.to_dict()["certificate"] == ["1", "1", "1"]

    def test_identity_stack_ideal(self):
        """Test identity connectivity keeps every measurement"""
        net = LayeredNetwork.from_matrices([[1, 0], [0, 1]], [[1, 0], [0, 1]])
        assert is_ideal(net, PrecisionVector((F(2), F(5)))).ideal

    def test_unheard_measurement_not_ideal(self):
        """Test a first-layer agent nobody listens to"""
        net = LayeredNetwork.from_matrices([[1, 0], [1, 0]])
        assert not is_ideal(net, PrecisionVector.ones(2)).ideal

    def test_without_certificate(self):
        """Test the membership-only route gives the same verdict"""
        for net in (OVERLAP, TRIANGLE, IDENTITY):
            precisions = PrecisionVector((F(1), F(2), F(3)))
            assert is_ideal(net, precisions, with_certificate=False).ideal == is_ideal(net, precisions).ideal

    def test_agrees_with_variance(self):
        """Test ideal exactly when the final variance is 1/sum(w)"""
        for seed in range(20):
            net = random_network((4, 4), 0.5, seed)
            precisions = PrecisionVector((F(1), F(2), F(1, 3), F(5, 4)))
            try:
                estimate = final_estimate(net, precisions)
            except NoInformationError:
                continue
            assert is_ideal(net, precisions).ideal == estimate.is_ideal_variance

    def test_certificate_reproduces_precisions(self):
        """Test certificate^T A equals w on a four-layer network"""
        net = LayeredNetwork.from_matrices(
            [[1, 1, 0], [1, 0, 1], [0, 1, 1]],
            [[1, 1, 0], [0, 1, 1], [1, 0, 1]],
        )
        precisions = PrecisionVector((F(1), F(2), F(3)))
        verdict = is_ideal(net, precisions)
        assert verdict.ideal
        rows = weight_profiles(net, precisions)[-1].rows
        combined = [sum(c * row[l] for c, row in zip(verdict.certificate, rows)) for l in range(3)]
        assert tuple(combined) == precisions.values


class TestThreeLayerTest:
    """Test the precision-free three-layer test"""

    def test_examples(self):
        """Test the overlapping pair, the triangle and the identity"""
        assert not is_ideal_three_layer(OVERLAP)
        assert is_ideal_three_layer(TRIANGLE)
        assert is_ideal_three_layer(IDENTITY)

    def test_wrong_layer_count(self):
        """Test deeper networks are refused"""
        net = LayeredNetwork.from_matrices([[1]], [[1]])
        with pytest.raises(ContractViolation):
            is_ideal_three_layer(net)

    def test_matches_general_test(self):
        """Test agreement with the general test under uneven precisions"""
        precisions = PrecisionVector((F(1), F(7, 2), F(1, 9), F(4)))
        for seed in range(30):
            net = random_network((4, 3), 0.5, seed)
            assert is_ideal_three_layer(net) == is_ideal(net, precisions).ideal


class TestWMotif:
    """Test W-motif detection"""

    def test_overlap_pair_witness(self):
        """Test the overlapping pair is itself a W-motif"""
        witness = has_w_motif(OVERLAP)
        assert witness is not None
        assert witness.to_layer == 2
        assert witness.agents == (1, 2)
        assert witness.sources == (1, 2, 3)
        assert len(list(iter_w_motifs(OVERLAP))) == 1

    def test_triangle_has_motifs(self):
        """Test an ideal network may still contain W-motifs"""
        assert has_w_motif(TRIANGLE) is not None

    def test_identity_has_none(self):
        """Test disjoint inputs form no W-motif"""
        assert has_w_motif(IDENTITY) is None

    def test_motif_across_layers(self):
        """Test a motif that only shows in the path matrix"""
        net = LayeredNetwork.from_matrices(
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            [[1, 1, 0], [0, 1, 1]],
        )
        witness = has_w_motif(net)
        assert witness.to_layer == 3
        assert witness.to_dict() == {"to_layer": 3, "agents": [1, 2], "sources": [1, 2, 3]}

    def test_nested_inputs_are_not_a_motif(self):
        """Test containment without a private source on both sides"""
        assert has_w_motif(LayeredNetwork.from_matrices([[1, 0], [1, 1]])) is None


class TestReduce:
    """Test removal of input-set containments"""

    def test_single_containment(self):
        """Test one subtraction"""
        reduced = reduce(LayeredNetwork.from_matrices([[1, 0], [1, 1]]))
        assert reduced.matrix(1) == ((1, 0), (0, 1))
        assert is_reduced(reduced)

    def test_partial_containment(self):
        """Test only the contained inputs are removed"""
        reduced = reduce(LayeredNetwork.from_matrices([[1, 1, 0], [1, 1, 1]]))
        assert reduced.matrix(1) == ((1, 1, 0), (0, 0, 1))

    def test_identical_inputs(self):
        """Test a duplicate listener ends up with no inputs"""
        reduced = reduce(LayeredNetwork.from_matrices([[1, 1], [1, 1]]))
        assert reduced.matrix(1) == ((1, 1), (0, 0))

    def test_already_reduced(self):
        """Test a reduced network is returned unchanged"""
        assert reduce(OVERLAP) == OVERLAP
        assert is_reduced(OVERLAP)

    def test_preserves_final_estimate(self):
        """Test reduction keeps alpha and never adds edges"""
        precisions = PrecisionVector((F(1), F(2), F(1, 2), F(3), F(5, 7)))
        for seed in range(25):
            net = random_network((5, 5), 0.6, seed)
            reduced = reduce(net)
            assert is_reduced(reduced)
            assert reduced.edge_count() <= net.edge_count()
            try:
                before = final_estimate(net, precisions)
            except NoInformationError:
                continue
            assert final_estimate(reduced, precisions) == before

    def test_wrong_layer_count(self):
        """Test deeper networks are refused"""
        with pytest.raises(ContractViolation):
            reduce(LayeredNetwork.from_matrices([[1]], [[1]]))


class TestOutdegreeComponents:
    """Test the equal out-degree condition"""

    def test_examples(self):
        """Test the triangle passes and the overlapping pair fails"""
        assert equal_outdegree_components(TRIANGLE)
        assert not equal_outdegree_components(OVERLAP)

    def test_separate_components(self):
        """Test degrees only need to match within a component"""
        net = LayeredNetwork.from_matrices(
            [[1, 0, 0, 0, 0], [0, 1, 1, 0, 0], [0, 1, 1, 0, 0], [0, 0, 0, 1, 1]]
        )
        assert equal_outdegree_components(net)
        assert is_ideal_three_layer(net)

    def test_unconnected_source(self):
        """Test a first-layer agent with no outputs"""
        assert not equal_outdegree_components(LayeredNetwork.from_matrices([[1, 0], [1, 0]]))

    def test_implies_ideal(self):
        """Test the condition is sufficient on random networks"""
        for seed in range(40):
            net = random_network((4, 4), 0.5, seed)
            if equal_outdegree_components(net):
                assert is_ideal_three_layer(net)


class TestRing:
    """Test the extremal ring network"""

    def test_structure(self):
        """Test the hub and private sources"""
        assert ring_network(1).matrix(1) == ((1, 1),)
        assert ring_network(3).matrix(1) == ((1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1))

    @pytest.mark.parametrize("n, expected", [(1, F(1, 2)), (4, F(5, 16)), (100, F(1, 4) + F(1, 400))])
    def test_variance(self, n, expected):
        """Test the closed form against the propagated variance"""
        assert ring_variance(n) == expected
        assert final_estimate(ring_network(n), PrecisionVector.ones(n + 1)).variance == expected

    def test_invalid_size(self):
        """Test n must be positive"""
        with pytest.raises(ContractViolation):
            ring_network(0)
        with pytest.raises(ContractViolation):
            ring_variance(0)


class TestNaiveEstimate:
    """Test the out-degree weighted estimate"""

    def test_ring_matches_final(self):
        """Test the naive weights are optimal on the ring"""
        net = ring_network(3)
        assert naive_weights(net) == (F(1, 2), F(1, 6), F(1, 6), F(1, 6))
        assert naive_weights(net) == final_estimate(net, PrecisionVector.ones(4)).alpha

    def test_equal_degrees_uniform(self):
        """Test equal out-degrees give uniform weights"""
        assert naive_weights(TRIANGLE) == (F(1, 3),) * 3

    def test_overlap_pair(self):
        """Test the naive weights coincide with the final ones here"""
        assert naive_weights(OVERLAP) == (F(1, 4), F(1, 2), F(1, 4))
        assert naive_variance(OVERLAP, PrecisionVector.ones(3)) == F(3, 8)

    def test_upper_bound(self):
        """Test the naive variance bounds the final variance"""
        for seed in range(20):
            net = random_network((4, 5), 0.6, seed)
            if 0 in [sum(col) for col in zip(*net.matrix(1))]:
                continue
            ones = PrecisionVector.ones(4)
            assert naive_variance(net, ones) >= final_estimate(net, ones).variance

    def test_unconnected_source(self):
        """Test a zero out-degree column is refused"""
        with pytest.raises(ContractViolation):
            naive_weights(LayeredNetwork.from_matrices([[1, 0], [1, 0]]))


class TestNonnegativeWeights:
    """Test the convexity check"""

    def test_examples(self):
        """Test nonnegative and negative weights"""
        assert nonnegative_weights(final_estimate(OVERLAP, PrecisionVector.ones(3)))
        negative = FinalEstimate((F(3, 2), F(-1, 2)), F(5, 2), F(1, 2))
        assert not nonnegative_weights(negative)
