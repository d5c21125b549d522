import os
import json
import yaml
from typing import Any, Dict, Optional
from easydict import EasyDict
from importlib.util import spec_from_file_location, module_from_spec

from ding.utils import deep_merge_dicts

from semirank import DEFAULT_CONFIG_PATH
from semirank.utils.errors import ConfigError


def read_config(cfg_path: str) -> EasyDict:
    r"""
    Overview:
        Read a flat or nested config from a ``.json``, ``.yaml``/``.yml`` or ``.py`` file.
        Python config files must declare a ``main_config`` variable.
    """
    if not os.path.isfile(cfg_path):
        raise ConfigError("config file not found: {}".format(cfg_path))
    suffix = cfg_path.split('.')[-1].lower()
    try:
        if suffix == 'py':
            spec = spec_from_file_location('_semirank_user_config', cfg_path)
            module = module_from_spec(spec)
            spec.loader.exec_module(module)
            cfg_dict = {k: v for k, v in module.__dict__.items() if not k.startswith('_')}
            if 'main_config' not in cfg_dict:
                raise ConfigError("Please make sure a 'main_config' variable is declared in config python file!")
            cfg_dict = cfg_dict['main_config']
        elif suffix in ('yaml', 'yml'):
            with open(cfg_path, 'r') as f:
                cfg_dict = yaml.safe_load(f)
        elif suffix == 'json':
            with open(cfg_path, 'r') as f:
                cfg_dict = json.load(f)
        else:
            raise ConfigError("invalid config file suffix: {}".format(suffix))
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigError("cannot parse config file {}: {}".format(cfg_path, e))
    if cfg_dict is None:
        cfg_dict = {}
    if not isinstance(cfg_dict, dict):
        raise ConfigError("config file {} must hold a mapping, got {}".format(cfg_path, type(cfg_dict).__name__))
    return EasyDict(cfg_dict)


def load_default_config(section: Optional[str] = None) -> EasyDict:
    with open(DEFAULT_CONFIG_PATH, 'r') as f:
        cfg = EasyDict(yaml.safe_load(f))
    if section is not None:
        return EasyDict(cfg.get(section, {}))
    return cfg


def merge_config(base: Dict, *overrides: Optional[Dict]) -> EasyDict:
    r"""
    Overview:
        Merge config layers left to right with ``deep_merge_dicts``. Keys mapped to ``None`` in an
        override are ignored, so unset command line flags do not clobber file values.
    """
    merged = EasyDict(base or {})
    for override in overrides:
        if not override:
            continue
        merged = EasyDict(deep_merge_dicts(merged, _drop_none(override)))
    return merged


def check_unknown_keys(cfg: Dict, allowed: Dict, where: str) -> None:
    unknown = set(cfg.keys()) - set(allowed.keys())
    if unknown:
        raise ConfigError("unknown {} config keys: {}".format(where, ', '.join(sorted(unknown))))


def _drop_none(d: Dict) -> Dict[str, Any]:
    out = {}
    for k, v in d.items():
        if v is None:
            continue
        out[k] = _drop_none(v) if isinstance(v, dict) else v
    return out
