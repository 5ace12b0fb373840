import io
import json
import os
import logging
from inspect import isfunction

import numpy as np
import pandas as pd
import yaml
from munch import Munch

FORMAT_VERSION = 1
SEED_ENV = 'RANKEST_SEED'

# every RunConfig field and its default
DEFAULTS = {
    'command': None,
    'graph': None,
    'methods': ['pl', 'pl-ap', 'us', 'mh', 'rw'],
    'sample_fraction': 0.01,
    'trials': 20,
    'param_repeats': 10,
    'min_gap_fraction': 0.025,
    'network_kind': 'real',
    'smoothing_c': None,
    'smoothing_budget': 2000,
    'smoothing_pilots': 5,
    'neighbor_collisions': True,
    'seed': 42,
    'output': None,
    'round': False,
    'debug': False,
}


def exists(val):
    return val is not None


def default(val, d):
    if exists(val):
        return val
    return d() if isfunction(d) else d


def load_config(path):
    """Read a yaml settings file into a `Munch`.

    Args:
        path (str or file): path to the yaml file or an open file object

    Returns:
        Munch: raw parameters
    """
    if hasattr(path, 'read'):
        params = yaml.load(path, Loader=yaml.FullLoader)
    else:
        with open(path, 'r') as f:
            params = yaml.load(f, Loader=yaml.FullLoader)
    return Munch(params or {})


def parse_args(args, **kwargs):
    """Complete a configuration: fill defaults, apply the seed environment
    variable and finally the explicitly given overrides in `kwargs` (values that
    are None count as not given).

    Args:
        args (Munch): parameters read from a settings file

    Returns:
        Munch: the full run configuration
    """
    args = Munch(DEFAULTS, **args)
    if SEED_ENV in os.environ:
        args.seed = int(os.environ[SEED_ENV])
    for k, v in kwargs.items():
        if exists(v) or k not in args:
            args[k] = v
    if args.network_kind not in ('real', 'synthetic'):
        from utils.exceptions import ParameterError
        raise ParameterError('network_kind must be real or synthetic, got %r' % args.network_kind)
    args.seed = int(args.seed)
    return args


def get_rng(seed):
    """PCG64 generator for a 64 bit seed."""
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def spawn_seeds(seed, n):
    """Derive `n` independent 64 bit seeds from `seed`.

    The i-th child only depends on `seed` and `i`, so results computed from
    child seeds do not depend on the order in which they are consumed.
    """
    children = np.random.SeedSequence(int(seed)).spawn(n)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def metadata_json(metadata):
    meta = dict(format_version=FORMAT_VERSION, **metadata)
    return json.dumps(_jsonable(meta), sort_keys=True)


def metadata_line(metadata):
    return '# ' + metadata_json(metadata) + '\n'


def write_csv(df: pd.DataFrame, path, metadata=None):
    """Write a DataFrame as CSV headed by a single '#'-prefixed json line.

    Args:
        df (pandas.DataFrame): table to write
        path (str or file): destination
        metadata (dict, optional): run configuration, seeds and the like
    """
    text = metadata_line(metadata or {}) + df.to_csv(index=False, float_format='%.10g', lineterminator='\n')
    if hasattr(path, 'write'):
        path.write(text)
    else:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)


def read_csv(path):
    """Inverse of `write_csv`.

    Returns:
        tuple(pandas.DataFrame, dict): table and metadata
    """
    if hasattr(path, 'read'):
        text = path.read()
    else:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    first, _, body = text.partition('\n')
    metadata = {}
    if first.startswith('#'):
        metadata = json.loads(first[1:])
    else:
        body = text
    logging.debug('read %i bytes of csv' % len(body))
    return pd.read_csv(io.StringIO(body)), metadata


def write_json(obj, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(_jsonable(obj), f, indent=2, sort_keys=True)
        f.write('\n')
