import json

import numpy as np
import pytest

from alpc import errors
from alpc.dataset_io import fingerprint, import_csv, load, read_manifest, save
from alpc.synth import SynthSpec, generate
from alpc.types import MultiViewDataset


@pytest.fixture
def small():
    return generate(SynthSpec(n=30, c=3, l=2, view_dims=[4, 5], seed=1))


def test_round_trip_bit_exact(tmp_path, small):
    save(small, tmp_path)
    back = load(tmp_path)
    assert back == small
    for a, b in zip(back.views, small.views):
        assert a.tobytes() == b.tobytes()


def test_round_trip_without_labels(tmp_path, small):
    small.labels = None
    save(small, tmp_path)
    assert load(tmp_path).labels is None


def test_view_file_size_and_layout(tmp_path):
    x = np.arange(6.0).reshape(3, 2)
    save(MultiViewDataset([x], 2, np.array([0, 1])), tmp_path)
    raw = (tmp_path / "view0.f64").read_bytes()
    assert len(raw) == 48
    # sample 0 (first column) is contiguous, little-endian
    assert np.frombuffer(raw, "<f8").tolist() == [0.0, 2.0, 4.0, 1.0, 3.0, 5.0]
    assert (tmp_path / "labels.u32").read_bytes() == np.array([0, 1], "<u4").tobytes()


def test_manifest_lists_views(tmp_path, small):
    save(small, tmp_path)
    manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["format_version"] == 1
    assert [v["dim"] for v in manifest["views"]] == [4, 5]
    assert (manifest["n"], manifest["c"]) == (30, 3)


def test_manifest_matches_schema(tmp_path, small, schema_dir):
    jsonschema = pytest.importorskip("jsonschema")
    save(small, tmp_path)
    schema = json.loads((schema_dir / "manifest.schema.json").read_text())
    jsonschema.validate(read_manifest(tmp_path), schema)


def test_truncated_view_names_view(tmp_path, small):
    save(small, tmp_path)
    path = tmp_path / "view1.f64"
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(errors.FileSizeError, match="view1") as info:
        load(tmp_path)
    assert info.value.expected - info.value.actual == 8


def test_oversized_labels(tmp_path, small):
    save(small, tmp_path)
    with open(tmp_path / "labels.u32", "ab") as fh:
        fh.write(b"\0\0\0\0")
    with pytest.raises(errors.FileSizeError, match="labels"):
        load(tmp_path)


def test_missing_view_file(tmp_path, small):
    save(small, tmp_path)
    (tmp_path / "view0.f64").unlink()
    with pytest.raises(errors.DataError, match="view0"):
        load(tmp_path)


def test_label_equal_to_c_rejected(tmp_path, small):
    save(small, tmp_path)
    labels = small.labels.copy()
    labels[5] = 3
    (tmp_path / "labels.u32").write_bytes(labels.astype("<u4").tobytes())
    with pytest.raises(errors.LabelRangeError):
        load(tmp_path)


def test_version_mismatch(tmp_path, small):
    save(small, tmp_path)
    path = tmp_path / "manifest.json"
    manifest = json.loads(path.read_text())
    manifest["format_version"] = 2
    path.write_text(json.dumps(manifest))
    with pytest.raises(errors.FormatVersionError):
        load(tmp_path)


def test_missing_manifest(tmp_path):
    with pytest.raises(errors.ManifestError):
        load(tmp_path)


def test_non_finite_not_saved(tmp_path, small):
    small.views[0][0, 0] = np.nan
    with pytest.raises(errors.DataError):
        save(small, tmp_path)


def test_fingerprint_tracks_content(tmp_path, small):
    a, b = tmp_path / "a", tmp_path / "b"
    save(small, a)
    save(small, b)
    assert fingerprint(a) == fingerprint(b)
    raw = bytearray((b / "view0.f64").read_bytes())
    raw[0] ^= 1
    (b / "view0.f64").write_bytes(bytes(raw))
    assert fingerprint(a) != fingerprint(b)


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestImportCsv:
    def test_orientation(self, tmp_path):
        view = _write(tmp_path / "v.csv", "1,2\n3,4\n5,6\n")
        data = import_csv([view], 2)
        assert data.views[0].shape == (2, 3)
        assert data.views[0][:, 1].tolist() == [3.0, 4.0]

    def test_sample_counts(self, tmp_path):
        a = _write(tmp_path / "a.csv", "1,2\n3,4\n5,6\n")
        b = _write(tmp_path / "b.csv", "1\n2\n3\n")
        c = _write(tmp_path / "c.csv", "1\n2\n3\n4\n")
        assert import_csv([a, b], 2).n_views == 2
        with pytest.raises(errors.SampleCountError):
            import_csv([a, c], 2)

    def test_label_header_needs_flag(self, tmp_path):
        view = _write(tmp_path / "v.csv", "f1,f2\n1,2\n3,4\n5,6\n")
        labels = _write(tmp_path / "y.csv", "label\n0\n1\n1\n")
        with pytest.raises(errors.CsvParseError) as info:
            import_csv([view], 2, labels=labels)
        assert (info.value.row, info.value.column) == (1, 1)
        data = import_csv([view], 2, labels=labels, skip_header=True)
        assert data.labels.tolist() == [0, 1, 1]

    def test_parse_error_location(self, tmp_path):
        view = _write(tmp_path / "v.csv", "1,2\n3,x\n")
        with pytest.raises(errors.CsvParseError, match="row 2, column 2"):
            import_csv([view], 2)

    def test_ragged_rows(self, tmp_path):
        view = _write(tmp_path / "v.csv", "1,2\n3\n")
        with pytest.raises(errors.CsvParseError):
            import_csv([view], 1)

    def test_save_load_identity_after_import(self, tmp_path):
        view = _write(tmp_path / "v.csv", "0.1,2.5e-3\n-7,1e10\n3,4\n")
        data = import_csv([view], 2, labels=_write(tmp_path / "y.csv", "0\n1\n0\n"))
        save(data, tmp_path / "ds")
        assert load(tmp_path / "ds") == data
        assert data.views[0][0, 0] == 0.1
