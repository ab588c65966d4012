import copy
import logging
import os
from typing import Optional

import yaml

logger = logging.getLogger(__name__)

project_path = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def dump_configs(output_dir: str, configs: dict, file_name: str) -> str:
    os.makedirs(output_dir or ".", exist_ok=True)
    config_path = os.path.join(output_dir, file_name)
    with open(config_path, "w") as file:
        yaml.safe_dump(configs, file, sort_keys=False)
        logger.info(f"Configs have been saved to {config_path}")
    return config_path


def load_yaml(path: str) -> dict:
    with open(path, "r") as f:
        configs = yaml.safe_load(f)
    if configs is None:
        return {}
    if not isinstance(configs, dict):
        raise ValueError(f"{path}: top level of a config file must be a mapping")
    return configs


def deep_merge(base: dict, override: dict) -> dict:
    """Returns a copy of `base` with `override` merged in; nested mappings merge key by key."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def get_resource(resource_name: str, custom_file: Optional[str] = None) -> dict:
    """Loads the packaged default `resources/<resource_name>.yaml`, overlaid by `custom_file` if given."""
    default_resource_file = os.path.join(project_path, "resources", f"{resource_name}.yaml")
    resources = load_yaml(default_resource_file)
    if custom_file is not None:
        resources = deep_merge(resources, load_yaml(custom_file))
    return resources
