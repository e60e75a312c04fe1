import json

import numpy as np

from chirpfab import report
from chirpfab.imaging import GridSpec, ImageGrid
from chirpfab.scene import ScatteringMatrix


def test_write_json_is_sorted_with_trailing_newline(tmp_path):
    path = tmp_path / "blob.json"
    report.write_json(path, {"b": 1, "a": [1, 2]})
    text = path.read_text(encoding="utf-8")
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"b": 1, "a": [1, 2]}


def test_write_csv_layout(tmp_path):
    path = tmp_path / "rows.csv"
    report.write_csv(path, ["a", "b"], [{"a": 1, "b": 2}, {"a": 3, "b": 4}])
    assert path.read_bytes() == b"a,b\r\n1,2\r\n3,4\r\n"


def test_write_image_csv_pixel_order(tmp_path):
    spec = GridSpec(0.0, 0.1, 0.1, 1.0, 1.2, 0.1)  # 2 x 3 grid
    hh = np.arange(6, dtype=complex).reshape(2, 3)
    image = ImageGrid(spec=spec, channels={"hh": hh})
    path = tmp_path / "image.csv"
    report.write_image_csv(path, image)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "x_m,z_m,abs_hh"
    assert len(lines) == 1 + 6
    # x-major, z varies fastest, magnitudes match the array layout
    assert lines[1].split(",") == ["0.0", "1.0", "0.0"]
    assert lines[2].split(",") == ["0.0", "1.1", "1.0"]
    assert lines[4].split(",") == ["0.1", "1.0", "3.0"]


def test_scattering_dict_pairs():
    d = report.scattering_dict(ScatteringMatrix(1, 2j, 0, -1))
    assert d == {"hh": [1.0, 0.0], "hv": [0.0, 2.0],
                 "vh": [0.0, 0.0], "vv": [-1.0, 0.0]}
