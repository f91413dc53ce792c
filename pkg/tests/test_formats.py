import json
from fractions import Fraction

import pytest

from shallowlab import formats
from shallowlab.adversary import build_instance, instance_report
from shallowlab.errors import InvalidInput
from shallowlab.levels import k_level
from shallowlab.partition import baseline_partition, crossing_number
from shallowlab.treecolor import tree_from_instance


def test_rationals_are_strings():
    assert formats.point_to_json(formats.Point(Fraction(1, 3), 2)) == ["1/3", "2"]
    assert formats.rat("-7/4") == Fraction(-7, 4)
    with pytest.raises(InvalidInput):
        formats.rat("seven")


def test_instance_round_trip(tmp_path):
    inst, _ = instance_report(64, 8)
    path = tmp_path / "i.json"
    formats.dump(formats.instance_to_json(inst), path)
    back = formats.instance_from_json(formats.load(path))
    assert back.lines == inst.lines and back.padding == inst.padding
    assert back.provenance == inst.provenance and back.eps == inst.eps
    raw = json.loads(path.read_text())
    assert set(raw) >= {"m", "beta", "k", "k_prime", "n_target", "lines", "points", "padding", "checks"}
    assert set(raw["lines"][0]) == {"slope", "intercept", "j", "t", "c"}


def test_partition_and_tree_round_trip():
    inst = build_instance(4, 3)
    part = baseline_partition(inst.points, 3)
    back = formats.partition_from_json(json.loads(json.dumps(formats.partition_to_json(part))))
    assert back == part
    tree = tree_from_instance(inst)
    assert formats.tree_from_json(formats.tree_to_json(tree)).colors == tree.colors


def test_certificate_and_level_serialize():
    inst = build_instance(4, 3)
    cert = crossing_number(inst.points, baseline_partition(inst.points, 3), 3)
    out = formats.certificate_to_json(cert)
    assert out["value"] == cert.value and formats.line_from_json(out["witness"]) == cert.witness
    json.dumps(formats.level_to_json(k_level(inst.lines, 3)))


def test_malformed_files_raise(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InvalidInput):
        formats.load(bad)
    with pytest.raises(InvalidInput):
        formats.instance_from_json({"m": 2})
    with pytest.raises(InvalidInput):
        formats.partition_from_json({"parts": [[0]], "triangles": [[["0", "0"]]]})
