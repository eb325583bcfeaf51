import json
import math

import numpy as np
import pytest

from zenopath.errors import ZenopathError
from zenopath.mmio import load_matrix, load_vector, save_matrix
from zenopath.serialize import fmt_float, read_csv, to_csv, to_json, write_csv, write_json
from zenopath.svg import Series, render_plot, write_svg


class TestJson:
    def test_floats_pinned_to_17_digits(self):
        assert fmt_float(1 / 3) == "0.33333333333333331"
        assert fmt_float(0.1) == "0.10000000000000001"

    def test_negative_zero_normalised(self):
        assert fmt_float(-0.0) == "0"
        assert to_json(-0.0) == to_json(0.0)

    def test_non_finite_rejected(self):
        for bad in (math.inf, -math.inf, math.nan):
            with pytest.raises(ValueError):
                fmt_float(bad)

    def test_output_parses_back(self):
        doc = {
            "name": "run",
            "values": [1, 2.5, None, True],
            "nested": {"empty_list": [], "empty_map": {}},
            "text": 'quote " backslash \\ newline \n tab \t',
        }
        text = to_json(doc)
        back = json.loads(text)
        assert back["name"] == "run"
        assert back["values"] == [1, 2.5, None, True]
        assert back["text"] == doc["text"]

    def test_key_order_preserved_and_lf_only(self):
        text = to_json({"b": 1, "a": 2})
        assert text.index('"b"') < text.index('"a"')
        assert "\r" not in text
        assert text.endswith("\n")

    def test_numpy_scalars_and_arrays(self):
        text = to_json({"x": np.float64(0.5), "n": np.int64(3), "v": np.array([1.0, 2.0])})
        back = json.loads(text)
        assert back == {"x": 0.5, "n": 3, "v": [1.0, 2.0]}

    def test_unserialisable_types_rejected(self):
        with pytest.raises(TypeError):
            to_json({"f": lambda: None})
        with pytest.raises(TypeError):
            to_json({1: "non-string key"})

    def test_byte_determinism(self, tmp_path):
        doc = {"seed": 7, "trace": [[0.0, 1.0], [0.5, 0.875]]}
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        write_json(p1, doc)
        write_json(p2, doc)
        assert p1.read_bytes() == p2.read_bytes()


class TestCsv:
    def test_roundtrip(self, tmp_path):
        header = ["x", "value", "status"]
        rows = [[1.0, 0.5, "ok"], [2.0, 0.25, "ok"]]
        path = tmp_path / "t.csv"
        write_csv(path, header, rows)
        h2, r2 = read_csv(path)
        assert h2 == header
        assert float(r2[1][1]) == 0.25

    def test_width_mismatch_rejected(self):
        with pytest.raises(ValueError):
            to_csv(["a", "b"], [[1.0]])

    def test_cells_needing_quotes_rejected(self):
        with pytest.raises(ValueError):
            to_csv(["a"], [["x,y"]])

    def test_lf_newlines(self):
        text = to_csv(["a"], [[1.0], [2.0]])
        assert "\r" not in text
        assert text == "a\n1\n2\n"

    def test_empty_file_rejected_on_read(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(ValueError):
            read_csv(p)


class TestSvg:
    def test_render_is_deterministic(self):
        series = [Series(xs=(1.0, 2.0, 3.0), ys=(1.0, 4.0, 9.0), label="sq", mode="both")]
        a = render_plot(series, title="t", xlabel="x", ylabel="y")
        b = render_plot(series, title="t", xlabel="x", ylabel="y")
        assert a == b
        assert a.startswith("<svg ")
        assert a.endswith("</svg>\n")

    def test_log_axes_and_guides(self):
        series = [Series(xs=(1.0, 10.0, 100.0), ys=(1e-4, 1e-2, 1.0))]
        out = render_plot(series, logx=True, logy=True, hlines=((1e-3, "target"),))
        assert "stroke-dasharray" in out
        assert "target" in out

    def test_text_is_escaped(self):
        series = [Series(xs=(0.0, 1.0), ys=(0.0, 1.0))]
        out = render_plot(series, title="a<b & c>d")
        assert "a&lt;b &amp; c&gt;d" in out

    def test_series_validation(self):
        with pytest.raises(ValueError):
            Series(xs=(1.0,), ys=(1.0, 2.0))
        with pytest.raises(ValueError):
            Series(xs=(1.0,), ys=(1.0,), mode="splatter")

    def test_log_axis_needs_positive_data(self):
        with pytest.raises(ValueError):
            render_plot([Series(xs=(-1.0, -2.0), ys=(1.0, 2.0))], logx=True)

    def test_write_svg_lf(self, tmp_path):
        p = tmp_path / "plot.svg"
        write_svg(p, render_plot([Series(xs=(0.0, 1.0), ys=(0.0, 1.0))]))
        assert b"\r" not in p.read_bytes()


class TestMatrixMarket:
    def test_matrix_roundtrip(self, tmp_path):
        mat = np.array([[1.0, 0.5j], [-0.5j, 2.0]])
        p = tmp_path / "h.mtx"
        save_matrix(p, mat)
        back = load_matrix(p)
        assert np.allclose(back, mat)

    def test_vector_roundtrip_column_and_row(self, tmp_path):
        v = np.array([1.0, 2.0, 3.0])
        pc = tmp_path / "col.mtx"
        save_matrix(pc, v.reshape(-1, 1))
        assert np.allclose(load_vector(pc), v)
        pr = tmp_path / "row.mtx"
        save_matrix(pr, v.reshape(1, -1))
        assert np.allclose(load_vector(pr), v)

    def test_missing_file_raises_package_error(self, tmp_path):
        with pytest.raises(ZenopathError):
            load_matrix(tmp_path / "absent.mtx")

    def test_matrix_rejected_as_vector(self, tmp_path):
        p = tmp_path / "sq.mtx"
        save_matrix(p, np.eye(2))
        with pytest.raises(ZenopathError):
            load_vector(p)
