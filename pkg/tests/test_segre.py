from fractions import Fraction

import pytest

from hibicone.conic import enumerate_conic
from hibicone.errors import (
    ConfigError,
    DimensionMismatchError,
    InfeasibleRequestError,
    NotGorensteinError,
)
from hibicone.segre import (
    SegreSpec,
    in_L_tilde,
    is_rank_one_mcm,
    l_tilde,
    nccr_set,
    segre_signature_closed_form,
    weight_system,
)

from tests.support import segre

GORENSTEIN_PAIRS = [(r, t) for r in (2, 3, 4) for t in (2, 3, 4)]


class TestSpec:
    @pytest.mark.parametrize("lengths", [(2,), (), (1, 0), (2, -1, 2)])
    def test_invalid(self, lengths):
        with pytest.raises(ConfigError):
            SegreSpec(lengths)

    def test_nccr(self):
        spec = SegreSpec.nccr(3, 4)
        assert spec.chain_lengths == (2, 2, 2, 2)
        assert (spec.r, spec.t) == (3, 4)
        assert spec.label() == "2,2,2,2"

    def test_nccr_needs_two_variables(self):
        with pytest.raises(ConfigError):
            SegreSpec.nccr(1, 3)

    def test_not_gorenstein(self):
        spec = SegreSpec((1, 2))
        assert not spec.is_gorenstein
        with pytest.raises(NotGorensteinError):
            _ = spec.r
        assert NotGorensteinError.exit_code == 3


class TestWeights:
    def test_three_factors(self):
        system = weight_system(SegreSpec.nccr(2, 3))
        assert system.weights == ((1, 0), (0, 1), (-1, -1))
        assert system.multiplicity == 2
        assert len(system.multiset()) == 6

    def test_sum_to_zero(self):
        system = weight_system(SegreSpec.nccr(3, 5))
        assert [sum(column) for column in zip(*system.weights, strict=True)] == [0] * 4


class TestNCCRSet:
    def test_two_by_three(self):
        assert nccr_set(SegreSpec.nccr(2, 3)) == ((0, 0), (0, 1), (1, 0), (1, 1))

    @pytest.mark.parametrize(("r", "t"), GORENSTEIN_PAIRS)
    def test_size(self, r, t):
        chars = nccr_set(SegreSpec.nccr(r, t))
        assert len(chars) == r ** (t - 1)
        assert all(0 <= c <= r - 1 for chi in chars for c in chi)

    def test_inside_conic_set(self):
        spec, tree = segre(2, 2, 2)
        conic = {cls.coords for cls in enumerate_conic(tree)}
        assert set(nccr_set(spec)) <= conic

    def test_not_gorenstein(self):
        with pytest.raises(NotGorensteinError):
            nccr_set(SegreSpec((1, 2, 2)))


class TestLTilde:
    def test_envelope(self):
        spec = SegreSpec.nccr(2, 3)
        envelope = l_tilde(spec)
        assert len(envelope) == 9
        assert envelope[0] == (-1, -1)
        assert set(nccr_set(spec)) <= set(envelope)

    @pytest.mark.parametrize(("r", "t"), GORENSTEIN_PAIRS)
    def test_differences_lie_in_envelope(self, r, t):
        spec = SegreSpec.nccr(r, t)
        chars = nccr_set(spec)
        for chi in chars:
            for other in chars:
                difference = tuple(a - b for a, b in zip(chi, other, strict=True))
                assert in_L_tilde(difference, spec), (chi, other)

    @pytest.mark.parametrize(("r", "t"), GORENSTEIN_PAIRS)
    def test_nccr_within_conic_within_envelope(self, r, t):
        spec, tree = segre(*[r - 1] * t)
        conic = {cls.coords for cls in enumerate_conic(tree)}
        assert set(nccr_set(spec)) <= conic
        assert all(in_L_tilde(chi, spec) for chi in conic)

    def test_membership(self):
        spec = SegreSpec.nccr(3, 3)
        assert in_L_tilde((2, -2), spec)
        assert not in_L_tilde((3, 0), spec)
        with pytest.raises(DimensionMismatchError):
            in_L_tilde((1,), spec)


class TestMCM:
    @pytest.mark.parametrize(
        ("chi", "expected"),
        [((1, 0), True), ((1, -1), True), ((2, 1), True), ((2, 0), False), ((-2, 0), False)],
    )
    def test_two_variables(self, chi, expected):
        assert is_rank_one_mcm(chi, SegreSpec.nccr(2, 3)) is expected

    @pytest.mark.parametrize(("r", "t"), GORENSTEIN_PAIRS)
    def test_conic_classes_are_mcm(self, r, t):
        spec, tree = segre(*[r - 1] * t)
        assert all(is_rank_one_mcm(cls.coords, spec) for cls in enumerate_conic(tree))

    @pytest.mark.parametrize(("r", "t"), GORENSTEIN_PAIRS)
    def test_envelope_is_mcm(self, r, t):
        spec = SegreSpec.nccr(r, t)
        envelope = l_tilde(spec)
        assert len(envelope) == (2 * r - 1) ** (t - 1)
        assert all(is_rank_one_mcm(chi, spec) for chi in envelope)

    def test_mcm_but_not_conic(self):
        spec, tree = segre(2, 2, 2)
        assert is_rank_one_mcm((2, -2), spec)
        assert (2, -2) not in {cls.coords for cls in enumerate_conic(tree)}


class TestClosedForms:
    def test_three_factors(self):
        spec = SegreSpec((1, 1, 1))
        assert segre_signature_closed_form(spec, (0, 0)) == Fraction(1, 2)
        assert segre_signature_closed_form(spec, (1, 0)) == Fraction(1, 12)
        assert segre_signature_closed_form(spec, (1, 1)) == Fraction(1, 12)

    def test_two_factors(self):
        spec = SegreSpec((2, 1))
        values = [segre_signature_closed_form(spec, (c,)) for c in range(-1, 3)]
        assert values == [Fraction(1, 24), Fraction(11, 24), Fraction(11, 24), Fraction(1, 24)]

    @pytest.mark.parametrize(
        ("lengths", "chi"), [((1, 1), (2,)), ((1, 1, 1), (1, -1)), ((2, 2, 2), (0, 0))]
    )
    def test_not_covered(self, lengths, chi):
        with pytest.raises(InfeasibleRequestError):
            segre_signature_closed_form(SegreSpec(lengths), chi)
