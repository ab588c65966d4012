import pytest
import yaml

from rtentropy.utils.general_utils import deep_merge, dump_configs, get_resource, load_yaml


def test_dump_configs(tmp_path):
    path = dump_configs(str(tmp_path / "out"), {"b": 1, "a": [1, 2]}, "configs.yaml")

    assert path == str(tmp_path / "out" / "configs.yaml")
    with open(path) as f:
        assert f.read().splitlines()[0] == "b: 1"
    assert load_yaml(path) == {"b": 1, "a": [1, 2]}


def test_load_yaml_empty_and_invalid(tmp_path):
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")

    assert load_yaml(str(empty)) == {}
    with pytest.raises(ValueError):
        load_yaml(str(listing))


def test_deep_merge_replaces_lists_and_keeps_base():
    base = {"a": {"x": 1, "y": 2}, "items": [1, 2], "keep": True}
    merged = deep_merge(base, {"a": {"y": 3}, "items": [9]})

    assert merged == {"a": {"x": 1, "y": 3}, "items": [9], "keep": True}
    assert base["a"]["y"] == 2


def test_get_resource_with_custom_file(tmp_path):
    custom = tmp_path / "custom.yaml"
    custom.write_text(yaml.safe_dump({"runs": {"faulty": 0}}))

    default = get_resource("synth_workload")
    merged = get_resource("synth_workload", custom_file=str(custom))

    assert merged["runs"] == {"normal": default["runs"]["normal"], "faulty": 0}
    assert merged["faults"] == default["faults"]


def test_get_resource_missing(tmp_path):
    with pytest.raises(OSError):
        get_resource("no_such_resource")
