"""Network parameter estimation from samples: size, average, maximum and minimum
degree, and the power law exponent with its normalization constant.
"""
import json
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd
from tqdm.auto import tqdm

from dataset.graph import Graph, largest_component
from samplers import SampleSet, sample_rw, sample_smoothed
from utils.exceptions import DegenerateStatisticsError, InsufficientSamplesError, ParameterError, SingularityError
from utils.utils import get_rng, spawn_seeds


@dataclass
class NetworkParams:
    """Estimated (or actual) network parameters.

    Attributes:
        est_size: n'
        est_min_degree: d'_min
        est_max_degree: d'_max
        est_avg_degree: d'_avg
        gamma: power law exponent, ``2 + d'_min / (d'_avg - d'_min)``
        norm_const: normalization constant c of the power law density
        provenance: sample sizes, seeds and settings the values come from
    """
    est_size: float
    est_min_degree: int
    est_max_degree: int
    est_avg_degree: float
    gamma: float = float('nan')
    norm_const: float = float('nan')
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.est_size > 0:
            raise ParameterError('estimated size must be positive, got %g' % self.est_size)

    @classmethod
    def from_estimates(cls, est_size, est_min_degree, est_max_degree, est_avg_degree, provenance=None):
        """Complete the estimates with gamma and c. Degenerate degree statistics
        (e.g. a regular graph) leave both as NaN."""
        gamma = c = float('nan')
        try:
            gamma = estimate_gamma(est_min_degree, est_avg_degree)
            c = norm_const(gamma, est_min_degree, est_max_degree)
        except (DegenerateStatisticsError, SingularityError) as e:
            logging.warning('power law parameters undefined: %s' % e)
        return cls(float(est_size), int(est_min_degree), int(est_max_degree), float(est_avg_degree), gamma, c,
                   dict(provenance or {}))

    @classmethod
    def actual(cls, g: Graph, min_degree=None):
        """True parameters of `g`. `min_degree` overrides d_min, e.g. with 1 for
        graphs containing isolated nodes."""
        d_min = g.min_degree if min_degree is None else min_degree
        return cls.from_estimates(g.node_count, d_min, g.max_degree, g.avg_degree, {'source': 'actual'})

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        def clean(x):
            return None if isinstance(x, float) and not math.isfinite(x) else x
        return json.dumps({k: clean(v) for k, v in self.to_dict().items()}, indent=2, sort_keys=True, default=str)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        for k in ('gamma', 'norm_const'):
            if d.get(k) is None:
                d[k] = float('nan')
        return cls(**d)

    def to_text(self):
        """Flat ``key = value`` block; provenance keys are prefixed with ``provenance.``."""
        lines = []
        for k, v in self.to_dict().items():
            if k == 'provenance':
                for pk, pv in sorted(v.items()):
                    lines.append('provenance.%s = %s' % (pk, pv))
            else:
                lines.append('%s = %s' % (k, v))
        return '\n'.join(lines) + '\n'


def _eligible_pairs(s, gap):
    # pairs (k, l) with l - k > gap, gap an integer
    span = s - gap - 1
    return span * (span + 1) // 2 if span > 0 else 0


def _late_matches(keys, node, after, s):
    """For every (node, after) count the trace entries of `node` at a position
    strictly greater than `after`, `keys` being the sorted ``node * (s + 1) + position``
    keys of the trace."""
    base = node * (s + 1)
    # positions run up to s - 1, so an offset of s matches nothing
    lo = np.searchsorted(keys, base + np.minimum(after, s), side='right')
    hi = np.searchsorted(keys, base + s, side='right')
    return hi - lo


def estimate_size(walk: SampleSet, min_gap_fraction=0.025, use_neighbors=False, g: Graph = None) -> float:
    """Network size from collisions of a random walk.

    Only pairs of steps (k, l) with ``l - k > min_gap_fraction * s`` count. With Φ the
    number of such pairs visiting the same node and I the set of such pairs,
    ``n' = (Σ d)(Σ 1/d) |I| / (s² Φ)``. With `use_neighbors`, a pair also counts
    when the later node is a neighbor of the earlier one, weighted by
    ``1 / d`` of the earlier node; both counts share the same expectation and are
    pooled.

    Args:
        walk (SampleSet): random walk sample, at least 100 steps
        min_gap_fraction (float, optional): minimal index gap as share of s. Defaults to 0.025.
        use_neighbors (bool, optional): add neighbor collisions. Needs `g`. Defaults to False.
        g (Graph, optional): graph the walk ran on

    Returns:
        float: estimated number of nodes
    """
    if walk.method != 'rw':
        raise ParameterError('size estimation needs a random walk sample, got %s' % walk.method)
    s = walk.size
    if s < 100:
        raise ParameterError('size estimation needs at least 100 steps, got %i' % s)
    if not 0 < min_gap_fraction < 0.5:
        raise ParameterError('min_gap_fraction must lie in (0, 0.5), got %g' % min_gap_fraction)
    if use_neighbors and g is None:
        raise ParameterError('neighbor collisions need the graph')
    gap = int(math.floor(min_gap_fraction * s))
    pos = np.arange(s, dtype=np.int64)
    keys = np.sort(walk.trace * (s + 1) + pos)
    phi = float(_late_matches(keys, walk.trace, pos + gap, s).sum())
    kinds = 1
    if use_neighbors:
        deg = walk.degrees
        nbrs = np.concatenate([g.neighbors(u) for u in walk.trace])
        origin = np.repeat(pos, deg)
        hits = _late_matches(keys, nbrs, origin + gap, s)
        phi += float(np.sum(hits / np.repeat(deg, deg)))
        kinds = 2
    if phi == 0:
        raise InsufficientSamplesError('no collisions among %i walk steps; run a longer walk' % s)
    d = walk.degrees.astype(np.float64)
    n_est = kinds * d.sum() * (1.0 / d).sum() * _eligible_pairs(s, gap) / (s * s * phi)
    logging.debug('size estimate %.1f from %.1f collisions over %i steps' % (n_est, phi, s))
    return float(n_est)


def estimate_avg_degree(walk: SampleSet, c: float) -> float:
    """Average degree from a smoothed walk, re-weighting every sample by ``1 / (d + c)``."""
    if walk.size == 0:
        raise ParameterError('empty walk')
    if c < 0:
        raise ParameterError('smoothing constant must be non-negative, got %g' % c)
    d = walk.degrees.astype(np.float64)
    w = 1.0 / (d + c)
    return float(np.sum(d * w) / np.sum(w))


def choose_smoothing_c(g: Graph, budget: int, seed: int, pilots=5, start=None) -> float:
    """Pick the smoothing constant with the smallest spread of average degree
    estimates.

    A first random walk (a fifth of the budget) gives the largest degree U seen;
    every c in ``1, 2, 4, ..., 2^ceil(log2 U)`` then gets `pilots` short smoothed walks
    sharing the rest of the budget. Ties go to the smallest c.

    Args:
        g (Graph): graph to walk on
        budget (int): total number of walk steps, at least 500
        seed (int): random seed
        pilots (int, optional): smoothed walks per grid value. Defaults to 5.
        start (int, optional): start node of all walks. Defaults to random nodes.

    Returns:
        float: chosen c
    """
    if budget < 500:
        raise ParameterError('smoothing search needs a budget of at least 500 steps, got %i' % budget)
    seeds = spawn_seeds(seed, 2)
    scout = sample_rw(g, budget // 5, seeds[0], start)
    top = max(scout.observed_max_degree, 1)
    grid = [float(2 ** i) for i in range(int(math.ceil(math.log2(top))) + 1)]
    length = max((budget - budget // 5) // (len(grid) * pilots), 2)
    variances = []
    pilot_seeds = spawn_seeds(seeds[1], len(grid) * pilots)
    for i, c in enumerate(grid):
        est = [estimate_avg_degree(sample_smoothed(g, length, c, pilot_seeds[i * pilots + j], start), c)
               for j in range(pilots)]
        variances.append(float(np.var(est)))
    variances = np.asarray(variances)
    best = grid[int(np.flatnonzero(variances <= variances.min() * (1 + 1e-9) + 1e-12)[0])]
    logging.info('smoothing constant %g chosen from %s' % (best, dict(zip(grid, variances.round(4)))))
    return best


def estimate_max_degree(sample: SampleSet) -> int:
    return sample.observed_max_degree


def estimate_min_degree(sample: SampleSet, network_kind='real') -> int:
    """Real world networks have minimum degree 1 or close to it; for synthetic
    networks the smallest degree seen in the sample is used."""
    if network_kind in ('real', 'real_world'):
        return 1
    if network_kind == 'synthetic':
        return sample.observed_min_degree
    raise ParameterError('unknown network kind %r' % network_kind)


def estimate_gamma(d_min: float, d_avg: float) -> float:
    """Power law exponent ``2 + d_min / (d_avg - d_min)``."""
    if d_min <= 0:
        raise DegenerateStatisticsError('minimum degree must be positive, got %g' % d_min)
    if d_avg <= d_min:
        raise DegenerateStatisticsError('average degree %g does not exceed minimum degree %g' % (d_avg, d_min))
    return 2 + d_min / (d_avg - d_min)


def norm_const(gamma: float, d_min: float, d_max: float) -> float:
    """Normalization c of the density ``c * j^-gamma`` on ``[d_min, d_max]``."""
    if gamma == 1:
        raise SingularityError('gamma = 1')
    if not 0 < d_min < d_max:
        raise SingularityError('need 0 < d_min < d_max, got d_min=%g, d_max=%g' % (d_min, d_max))
    return (1 - gamma) / (d_max ** (1 - gamma) - d_min ** (1 - gamma))


def estimate_params(g: Graph, budget: int, seed: int, repeats=10, network_kind='real', smoothing_c=None,
                    min_gap_fraction=0.025, neighbor_collisions=False, smoothing_budget=2000, smoothing_pilots=5,
                    progress=False) -> NetworkParams:
    """Full preprocessing pipeline, averaged over `repeats` runs.

    Every run walks `budget` steps from a random node of the largest component;
    that trace gives n', d'_max and d'_min. A smoothed walk of the same length
    gives d'_avg. The smoothing constant is chosen once by `choose_smoothing_c`
    unless given.

    Args:
        g (Graph): graph
        budget (int): steps per walk
        seed (int): random seed
        repeats (int, optional): runs to average. Defaults to 10.
        network_kind (str, optional): 'real' or 'synthetic', see `estimate_min_degree`.

    Returns:
        NetworkParams
    """
    if repeats < 1:
        raise ParameterError('repeats must be positive, got %i' % repeats)
    lcc = largest_component(g)
    seeds = spawn_seeds(seed, 3 * repeats + 1)
    if smoothing_c is None:
        smoothing_c = choose_smoothing_c(g, max(smoothing_budget, 500), seeds[-1], smoothing_pilots,
                                         start=int(lcc[0]) if len(lcc) < g.node_count else None)
    rows = []
    for r in tqdm(range(repeats), disable=not progress, desc='parameters'):
        start = int(lcc[get_rng(seeds[3 * r]).integers(len(lcc))])
        walk = sample_rw(g, budget, seeds[3 * r + 1], start)
        smooth = sample_smoothed(g, budget, smoothing_c, seeds[3 * r + 2], start)
        rows.append({
            'size': estimate_size(walk, min_gap_fraction, neighbor_collisions, g),
            'max': estimate_max_degree(walk),
            'min': estimate_min_degree(walk, network_kind),
            'avg': estimate_avg_degree(smooth, smoothing_c),
        })
    df = pd.DataFrame(rows)
    provenance = {
        'budget': budget,
        'repeats': repeats,
        'seed': seed,
        'run_seeds': seeds[:3 * repeats],
        'smoothing_c': smoothing_c,
        'min_gap_fraction': min_gap_fraction,
        'neighbor_collisions': neighbor_collisions,
        'network_kind': network_kind,
    }
    params = NetworkParams.from_estimates(df['size'].mean(), int(round(df['min'].mean())),
                                          int(round(df['max'].mean())), df['avg'].mean(), provenance)
    logging.info('estimated parameters: n=%.0f d_min=%i d_max=%i d_avg=%.2f gamma=%.3f' % (
        params.est_size, params.est_min_degree, params.est_max_degree, params.est_avg_degree, params.gamma))
    return params


def degree_distribution_profile(g: Graph, params: NetworkParams) -> pd.DataFrame:
    """Actual number of nodes per degree next to the power law prediction
    ``n' * c * j^-gamma`` for every degree present in `g`."""
    hist = g.degree_histogram()
    degrees = np.flatnonzero(hist)
    predicted = params.est_size * params.norm_const * degrees.astype(np.float64) ** (-params.gamma)
    return pd.DataFrame({'degree': degrees, 'actual_count': hist[degrees], 'estimated_count': predicted})
