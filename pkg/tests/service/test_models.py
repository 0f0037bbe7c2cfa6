"""Tests for the shared command schemas."""

import pytest
from pydantic import ValidationError

from src.core.cover import HElement
from src.core.profinite import ZhatApprox
from src.core.rational_multiplicative import factor
from src.service.exceptions import NotACompatibleRootError
from src.service.models import (
    CommandRequest,
    LatticeModel,
    PresentationModel,
    RadicalTupleModel,
    TorusCoordinateModel,
    ZhatModel,
    h_element_dict,
)


class TestEnvelopes:
    """Tests for request and response envelopes."""

    def test_schema_version_required(self):
        """Test that only schema version 1 is accepted."""
        with pytest.raises(ValidationError):
            CommandRequest.model_validate({"schema_version": "2"})


class TestLatticeModel:
    """Tests for LatticeModel."""

    def test_round_trip(self):
        """Test conversion to and from the core lattice."""
        model = LatticeModel(support=[2, 3, "x"], rows=[[1, 0, 0], [0, 2, 1]])
        lattice = model.to_core()
        assert lattice.support == (2, 3, "x")
        assert LatticeModel.from_core(lattice) == model


class TestRadicalTupleModel:
    """Tests for RadicalTupleModel."""

    def test_canonical_twists(self):
        """Test that omitted twists become canonical."""
        r = RadicalTupleModel(bases=[2, "3/5"], m=4).to_core()
        assert r.twists == (0, 0)
        assert RadicalTupleModel.from_core(r).bases == ["2", "3/5"]


class TestTorusCoordinateModel:
    """Tests for TorusCoordinateModel."""

    def test_trivial_parts(self):
        """Test that absent parts are trivial."""
        coordinate = TorusCoordinateModel(rational="-2").to_core()
        assert coordinate == TorusCoordinateModel.model_validate(
            {"rational": -2, "twist": {"order": 1, "exp": 0}}
        ).to_core()


class TestPresentationModel:
    """Tests for PresentationModel."""

    def test_to_core(self):
        """Test that JSON keys become denominators."""
        model = PresentationModel.model_validate(
            {"generators": [{"name": "h", "base": 2, "root_choices": {"2": 1}}, {"name": "t", "symbol": "T"}]}
        )
        p = model.to_core()
        assert p.generator("h").base == factor(2)
        assert p.choices("h") == {1: 0, 2: 1}
        assert p.denominator_bound == 2

    def test_from_core(self):
        """Test that recorded choices are reported."""
        model = PresentationModel.model_validate(
            {"generators": [{"name": "h", "base": 2, "root_choices": {"2": 1}}]}
        )
        back = PresentationModel.from_core(model.to_core())
        assert back.generators[0].base == "2"
        assert back.generators[0].root_choices == {1: 0, 2: 1}

    def test_incoherent_choices(self):
        """Test that incoherent root choices are refused."""
        model = PresentationModel.model_validate(
            {"generators": [{"name": "h", "base": 2, "root_choices": {"2": 1, "4": 0}}]}
        )
        with pytest.raises(NotACompatibleRootError):
            model.to_core()


class TestHElementDict:
    """Tests for h_element_dict."""

    def test_kernel_named(self):
        """Test that the kernel coordinate uses the kernel generator's name."""
        v = HElement.create(3, {"h": "1/2"})
        assert h_element_dict(v, "z") == {"h": "1/2", "z": "3"}


class TestZhatModel:
    """Tests for ZhatModel."""

    def test_from_core(self):
        """Test the single-residue view."""
        assert ZhatModel.from_core(ZhatApprox.from_residue(12, 17)) == ZhatModel(mod=12, residue=5)
