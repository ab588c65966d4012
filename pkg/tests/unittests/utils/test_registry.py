import pytest

from rtentropy.utils.registry import Registry


def test_register_and_get():
    registry = Registry("demo")

    @registry.register()
    def first():
        return 1

    @registry.register("renamed")
    def second():
        return 2

    assert registry.list_keys() == ["first", "renamed"]
    assert registry.get("renamed")() == 2
    assert "first" in registry
    assert repr(registry) == "demo(keys=['first', 'renamed'])"


def test_duplicate_and_missing_names():
    registry = Registry("demo")
    registry.register("x")(len)

    with pytest.raises(ValueError, match="already registered"):
        registry.register("x")(len)
    with pytest.raises(KeyError):
        registry.get("y")
