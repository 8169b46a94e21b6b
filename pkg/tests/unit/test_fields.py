"""Unit tests for initial data, resource fields and field CSV files."""

from pathlib import Path

import numpy as np
import pytest

from lvadvect.exceptions import DomainError
from lvadvect.fields import read_field_csv, realize_initial, realize_resource, write_field_csv
from lvadvect.grid import ScalarField
from lvadvect.models import (
    BumpInitial,
    ConstantInitial,
    ConstantResource,
    CosineResource,
    FileResource,
    Grid,
    RandomUniformInitial,
)
from lvadvect.models.scenario import FileInitial


class TestRealizeInitial:
    """Tests for realize_initial."""

    def test_constant(self, line_grid: Grid) -> None:
        """Test constant initial data."""
        u, v = realize_initial(ConstantInitial(u0=2.0, v0=0.5), line_grid)
        assert u.min() == u.max() == 2.0
        assert v.min() == v.max() == 0.5

    def test_bump_peaks_at_center(self) -> None:
        """Test that the bump is largest near its center."""
        grid = Grid.line(21, 1.0)
        u, v = realize_initial(BumpInitial(center=(0.5,), amplitude=2.0, background=0.1), grid)

        assert int(np.argmax(u.values)) == 10
        assert u.max() == pytest.approx(2.1)
        assert u.min() >= 0.1
        assert v.max() == 0.5

    def test_bump_2d(self, square_grid: Grid) -> None:
        """Test a bump on a 2D grid."""
        u, _ = realize_initial(BumpInitial(center=(0.0, 0.0), width=0.2), square_grid)
        assert np.unravel_index(np.argmax(u.values), u.values.shape) == (0, 0)

    def test_bump_dimension_mismatch(self, square_grid: Grid) -> None:
        """Test that the center needs one coordinate per axis."""
        with pytest.raises(DomainError, match="bump center has 1 coordinates"):
            realize_initial(BumpInitial(center=(0.5,)), square_grid)

    def test_random_reproducible(self, line_grid: Grid) -> None:
        """Test that a fixed seed reproduces the draw."""
        initial = RandomUniformInitial(lo=0.2, hi=0.4, rng_seed=7)
        u1, v1 = realize_initial(initial, line_grid)
        u2, v2 = realize_initial(initial, line_grid)

        np.testing.assert_array_equal(u1.values, u2.values)
        np.testing.assert_array_equal(v1.values, v2.values)
        assert 0.2 <= u1.min() and u1.max() <= 0.4

    def test_seed_override(self, line_grid: Grid) -> None:
        """Test that the seed argument replaces rng_seed."""
        initial = RandomUniformInitial(rng_seed=7)
        base, _ = realize_initial(initial, line_grid)
        other, _ = realize_initial(initial, line_grid, seed=8)
        same, _ = realize_initial(initial.model_copy(update={"rng_seed": 8}), line_grid)

        assert not np.array_equal(base.values, other.values)
        np.testing.assert_array_equal(other.values, same.values)

    def test_from_file(self, tmp_path: Path, line_grid: Grid) -> None:
        """Test u from a file with constant v."""
        path = tmp_path / "u0.csv"
        field = ScalarField(line_grid, np.linspace(0.0, 1.0, line_grid.size))
        write_field_csv(field, path)

        u, v = realize_initial(FileInitial(u_path=path, v0=0.25), line_grid)

        np.testing.assert_array_equal(u.values, field.values)
        assert v.min() == v.max() == 0.25

    def test_from_file_with_v(self, tmp_path: Path, line_grid: Grid) -> None:
        """Test u and v both read from files."""
        write_field_csv(ScalarField.constant(line_grid, 1.0), tmp_path / "u.csv")
        write_field_csv(ScalarField.constant(line_grid, 3.0), tmp_path / "v.csv")

        _, v = realize_initial(
            FileInitial(u_path=tmp_path / "u.csv", v_path=tmp_path / "v.csv"), line_grid
        )

        assert v.max() == 3.0

    def test_negative_file_values(self, tmp_path: Path, line_grid: Grid) -> None:
        """Test that negative initial values are refused."""
        path = tmp_path / "u0.csv"
        write_field_csv(ScalarField(line_grid, np.linspace(-1.0, 1.0, line_grid.size)), path)

        with pytest.raises(DomainError, match="initial u has negative values"):
            realize_initial(FileInitial(u_path=path), line_grid)


class TestRealizeResource:
    """Tests for realize_resource."""

    def test_constant(self, line_grid: Grid) -> None:
        """Test a uniform resource."""
        field = realize_resource(ConstantResource(value=2.0), line_grid)
        assert field.min() == field.max() == 2.0

    def test_cosine(self, square_grid: Grid) -> None:
        """Test the modulated resource keeps its mean and stays positive."""
        field = realize_resource(CosineResource(mean=1.0, amplitude=0.5), square_grid)

        assert field.min() > 0.5 - 1e-12
        assert field.max() < 1.5 + 1e-12
        assert float(field.values.mean()) == pytest.approx(1.0, abs=1e-12)

    def test_file_must_be_positive(self, tmp_path: Path, line_grid: Grid) -> None:
        """Test that a resource file with zeros is refused."""
        path = tmp_path / "m.csv"
        write_field_csv(ScalarField.constant(line_grid, 0.0), path)

        with pytest.raises(DomainError, match="strictly positive"):
            realize_resource(FileResource(path=path), line_grid)


class TestFieldCsv:
    """Tests for read_field_csv and write_field_csv."""

    def test_round_trip_2d(self, tmp_path: Path, square_grid: Grid) -> None:
        """Test that the default format reproduces the values exactly."""
        rng = np.random.default_rng(3)
        field = ScalarField(square_grid, rng.uniform(0.0, 1.0, square_grid.shape))
        path = tmp_path / "field.csv"

        write_field_csv(field, path)
        loaded = read_field_csv(path)

        assert loaded.grid == square_grid
        np.testing.assert_array_equal(loaded.values, field.values)

    def test_layout(self, tmp_path: Path) -> None:
        """Test the header and row layout of a 1D file."""
        path = tmp_path / "line.csv"
        write_field_csv(ScalarField(Grid.line(3, 1.5), [0.0, 0.5, 1.0]), path, "%.3f")

        lines = path.read_text(encoding="utf-8").splitlines()

        assert lines[0] == "nx,ny,Lx,Ly"
        assert lines[1] == "3,1,1.5,0.0"
        assert lines[2] == "0.000,0.500,1.000"

    def test_bad_header(self, tmp_path: Path) -> None:
        """Test that a missing header is a domain error."""
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n3,4\n", encoding="utf-8")

        with pytest.raises(DomainError, match="expected header line"):
            read_field_csv(path)

    def test_grid_mismatch(self, tmp_path: Path, line_grid: Grid) -> None:
        """Test that a file for another grid is refused."""
        path = tmp_path / "field.csv"
        write_field_csv(ScalarField.constant(Grid.line(8), 1.0), path)

        with pytest.raises(DomainError, match="does not match"):
            read_field_csv(path, line_grid)

    def test_row_count(self, tmp_path: Path) -> None:
        """Test that the value rows must match the header."""
        path = tmp_path / "short.csv"
        path.write_text("nx,ny,Lx,Ly\n3,2,1.0,1.0\n1,2,3\n", encoding="utf-8")

        with pytest.raises(DomainError, match="expected 2 rows of 3 values"):
            read_field_csv(path)
