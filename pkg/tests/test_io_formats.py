import numpy as np

from isolab import io_formats as iof


def test_format_value_repr_floats():
    assert iof.format_value(0.1) == "0.1"
    assert iof.format_value(1e-9) == "1e-09"
    assert iof.format_value(True) == "true"
    assert iof.format_value(np.float64(2.5)) == "2.5"
    assert iof.format_value(3 + 0.5j) == "3.0+0.5j"
    assert iof.format_value(1 - 2j) == "1.0-2.0j"


def test_render_parse_record_roundtrip():
    rec = {"gap": 1.25e-13, "passed": True, "name": "clip", "count": 7}
    text = iof.render_record(rec)
    # keys sorted, one per line
    assert text.splitlines() == sorted(text.splitlines())
    back = iof.parse_record(text)
    assert back == rec


def test_render_record_deterministic():
    rec = {"b": 2.0, "a": 1.0}
    assert iof.render_record(rec) == iof.render_record(dict(reversed(rec.items())))


def test_columns_roundtrip(tmp_path):
    p = tmp_path / "cols.txt"
    x = np.linspace(0, 1, 17)
    y = np.sin(x)
    iof.write_columns(p, x, y)
    rx, ry = iof.read_columns(p, 2)
    assert np.array_equal(rx, x)
    assert np.array_equal(ry, y)


def test_taylor_text_roundtrip():
    c = np.array([1.0, -0.5 + 0.25j, 0.0, 3e-17j])
    back = iof.taylor_from_text(iof.taylor_to_text(c))
    assert np.array_equal(back, c)


def test_write_csv(tmp_path):
    p = tmp_path / "curve.csv"
    iof.write_csv(p, ["t", "v"], [np.array([0.0, 1.0]), np.array([0.5, 0.25])])
    lines = p.read_text().splitlines()
    assert lines[0] == "t,v"
    assert lines[1] == "0.0,0.5"
    assert len(lines) == 3


def test_canonical_json_bit_exact():
    obj = {"z": 1e-09, "a": [1.5, "x"], "m": {"k": 0.1}}
    s = iof.canonical_json(obj)
    assert s == iof.canonical_json(__import__("json").loads(s))
    assert " " not in s
