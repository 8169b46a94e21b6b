"""Unit tests for the SVG plot writer."""

from pathlib import Path

import numpy as np
import pytest

from lvadvect.svg import CATEGORY_COLORS, SvgCanvas, category_heatmap, field_heatmap, line_plot


class TestSvgCanvas:
    """Tests for SvgCanvas."""

    def test_document(self) -> None:
        """Test the header, background and closing tag."""
        canvas = SvgCanvas(200, 100)
        canvas.line(0, 0, 10, 10)

        text = canvas.render()

        assert text.startswith('<?xml version="1.0"')
        assert 'viewBox="0 0 200.00 100.00"' in text
        assert '<line x1="0.00" y1="0.00" x2="10.00" y2="10.00"' in text
        assert text.endswith("</svg>\n")

    def test_text_is_escaped(self) -> None:
        """Test that labels cannot break the markup."""
        canvas = SvgCanvas(100, 100)
        canvas.text(0, 0, "u < 2 & v > 1")
        assert "u &lt; 2 &amp; v &gt; 1" in canvas.render()

    def test_save_creates_parents(self, tmp_path: Path) -> None:
        """Test that save creates missing directories."""
        path = SvgCanvas(10, 10).save(tmp_path / "a" / "b.svg")
        assert path.read_text(encoding="utf-8").startswith("<?xml")


class TestPlots:
    """Tests for line_plot, field_heatmap and category_heatmap."""

    def test_line_plot_deterministic(self, tmp_path: Path) -> None:
        """Test that identical data gives identical bytes."""
        series = {"linf_u": ([0.0, 1.0, 2.0], [1.0, 1.5, 1.25])}

        first = line_plot(series, tmp_path / "a.svg", title="run", xlabel="t")
        second = line_plot(series, tmp_path / "b.svg", title="run", xlabel="t")

        assert first.read_bytes() == second.read_bytes()
        assert first.read_text(encoding="utf-8").count("<polyline") == 1

    def test_line_plot_flat_and_nan(self, tmp_path: Path) -> None:
        """Test that constant series and NaN values still plot."""
        series = {"mass_u": ([0.0, 1.0, 2.0], [1.0, float("nan"), 1.0])}
        text = line_plot(series, tmp_path / "flat.svg").read_text(encoding="utf-8")
        assert "nan" not in text
        assert "<polyline" in text

    def test_field_heatmap(self, tmp_path: Path) -> None:
        """Test one rectangle per cell."""
        values = np.arange(12.0).reshape(4, 3)
        text = field_heatmap(values, tmp_path / "u.svg", title="u").read_text(encoding="utf-8")
        assert text.count("<rect") >= 12

    def test_field_heatmap_needs_2d(self, tmp_path: Path) -> None:
        """Test that 1D input is refused."""
        with pytest.raises(ValueError, match="needs a 2D array"):
            field_heatmap(np.ones(5), tmp_path / "bad.svg")

    def test_category_heatmap(self, tmp_path: Path) -> None:
        """Test category colors and the legend."""
        cells = {("0.5", "1"): "agree", ("3", "1"): "anomaly"}

        text = category_heatmap(
            cells, ["0.5", "3"], ["1"], tmp_path / "agreement.svg", xlabel="m2", ylabel="alpha"
        ).read_text(encoding="utf-8")

        assert f'fill="{CATEGORY_COLORS["anomaly"]}"' in text
        for category in CATEGORY_COLORS:
            assert f">{category}</text>" in text
