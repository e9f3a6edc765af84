import json
from fractions import Fraction

import pandas as pd
import pytest

from regnet_complexity import presets
from regnet_complexity.model import OffsetSequence
from regnet_complexity.network_io import load_network, network_to_dict, parse_network, save_frame, save_report


def _document():
    return {
        "dimension": 2,
        "a": 0.93,
        "K": [[0, 1], [1, 0]],
        "T": [[0, 0.5], [0.5, 0]],
        "s": [[0, 1], [-1, 0]],
    }


def test_decimal_literals_are_read_exactly(tmp_path):
    path = tmp_path / "fig2.json"
    path.write_text(json.dumps(_document()), encoding="utf-8")
    loaded = load_network(path)
    assert loaded.spec.a == Fraction(93, 100)
    assert loaded.spec.T[0][1] == Fraction(1, 2)
    assert loaded.offsets is None
    assert loaded.source == path.resolve()


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_network(tmp_path / "absent.json")


def test_missing_keys_and_dimension_mismatch():
    document = _document()
    del document["K"]
    with pytest.raises(ValueError):
        parse_network(document)
    document = _document()
    document["dimension"] = 3
    with pytest.raises(ValueError):
        parse_network(document)


def test_offsets_in_both_layouts():
    document = _document() | {"mode": "sequence", "offsets": {"rule": "periodic", "vectors": [[0, 0], ["1/4", 0]]}}
    loaded = parse_network(document)
    assert loaded.offsets.rule == "periodic"
    assert loaded.offsets.at(2) == (Fraction(1, 4), Fraction(0))
    flat = parse_network(_document() | {"offsets": [[0, 0]], "rule": "constant"})
    assert flat.offsets.rule == "constant"
    with pytest.raises(ValueError):
        parse_network(_document() | {"offsets": []})


def test_network_round_trip_through_json():
    spec = presets.p53()
    offsets = OffsetSequence.constant([0, 0, 0, 0])
    document = json.loads(json.dumps(network_to_dict(spec, offsets)))
    loaded = parse_network(document)
    assert loaded.spec == spec
    assert loaded.offsets == offsets


def test_artifacts_are_written(tmp_path):
    frame = pd.DataFrame({"t": [1, 2], "C": [2, 10**30]})
    target = save_frame(frame, tmp_path / "nested" / "trace.csv")
    assert target.read_text(encoding="utf-8").splitlines() == ["t,C", "1,2", f"2,{10**30}"]
    report = save_report({"a": "1/4"}, tmp_path / "report.json")
    assert json.loads(report.read_text(encoding="utf-8")) == {"a": "1/4"}
    assert sorted(p.name for p in tmp_path.iterdir()) == ["nested", "report.json"]
