import argparse
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
import pandas as pd
from munch import Munch
from tqdm.auto import tqdm

from dataset.generate import generate_ba
from dataset.graph import Graph, RankTable, exact_degree_ranks, largest_component
from params import NetworkParams, estimate_params
from ranks import METHODS, SAMPLER_OF, estimate_ranks
from samplers import sample_mhrw, sample_rw, sample_uniform
from utils.exceptions import GraphMismatchError, ParameterError
from utils.utils import get_rng, spawn_seeds, write_csv


def abs_error(est, act):
    """Absolute rank error ``|est - act|``."""
    return np.abs(np.asarray(est, dtype=np.float64) - np.asarray(act, dtype=np.float64))


def weighted_error(est, act, n):
    """Absolute error scaled by ``1/n`` and by the percentile ``(n - act + 1) / n`` of
    the node, in percent.

    Args:
        est (float or array): estimated rank(s)
        act (int or array): actual rank(s), in ``[1, n]``
        n (int): network size

    Returns:
        float or numpy.ndarray
    """
    act_arr = np.asarray(act, dtype=np.float64)
    if np.any(act_arr < 1) or np.any(act_arr > n):
        raise ParameterError('actual rank outside [1, %i]' % n)
    out = abs_error(est, act_arr) / n * (n - act_arr + 1) / n * 100
    return float(out) if np.ndim(out) == 0 else out


def paae(abs_errors_by_degree, n):
    """Percentage average absolute error: mean error over degrees, relative to n, in percent."""
    errors = np.asarray(abs_errors_by_degree, dtype=np.float64)
    if errors.size == 0:
        raise ParameterError('no errors to average')
    return float(errors.mean() / n * 100)


@dataclass
class ErrorReport:
    """Per-degree and aggregate errors of one method on one graph.

    ``per_degree`` has the columns degree, act_rank, mean_est_rank, mean_abs_err and
    mean_wtd_err, one row per distinct degree of the graph.
    """
    method: str
    per_degree: pd.DataFrame
    paae: float
    avg_wtd: float
    trials: int
    sample_fraction: float
    seeds: List[int]
    node_count: int
    params: dict = field(default_factory=dict)

    def check_consistency(self, tol=1e-9):
        assert (self.per_degree[['mean_abs_err', 'mean_wtd_err']] >= 0).all().all()
        assert abs(paae(self.per_degree['mean_abs_err'], self.node_count) - self.paae) <= tol * max(1, self.paae)
        assert abs(self.per_degree['mean_wtd_err'].mean() - self.avg_wtd) <= tol * max(1, self.avg_wtd)
        assert self.avg_wtd <= self.paae * (1 + tol) + tol
        assert self.avg_wtd <= 100

    def summary(self):
        return {'method': self.method, 'paae': self.paae, 'avg_wtd': self.avg_wtd, 'trials': self.trials,
                'sample_fraction': self.sample_fraction, 'node_count': self.node_count}

    def metadata(self):
        meta = self.summary()
        meta.update(seeds=self.seeds, params=self.params)
        return meta

    def to_csv(self, path, extra=None):
        meta = self.metadata()
        meta.update(extra or {})
        write_csv(self.per_degree, path, meta)


def _draw(g: Graph, method, s, seed, lcc, replace=True):
    sampler = SAMPLER_OF[method]
    if sampler == 'uniform':
        return sample_uniform(g, s, seed, replace=replace)
    seeds = spawn_seeds(seed, 2)
    start = int(lcc[get_rng(seeds[0]).integers(len(lcc))])
    if sampler == 'mhrw':
        return sample_mhrw(g, s, seeds[1], start)
    return sample_rw(g, s, seeds[1], start)


def prepare_params(g: Graph, method, args: Munch, params: NetworkParams = None):
    """Parameters a method evaluates with: the actual ones for the ``-ap`` methods,
    otherwise `params` or, if not given, the averaged estimation pipeline."""
    if method.endswith('-ap'):
        return NetworkParams.actual(g, min_degree=1 if g.min_degree == 0 else None)
    if params is not None:
        return params
    budget = max(int(round(args.sample_fraction * g.node_count)), 100)
    return estimate_params(g, budget, args.seed, repeats=args.param_repeats, network_kind=args.network_kind,
                           smoothing_c=args.smoothing_c, min_gap_fraction=args.min_gap_fraction,
                           neighbor_collisions=args.neighbor_collisions, smoothing_budget=args.smoothing_budget,
                           smoothing_pilots=args.smoothing_pilots)


def run_experiment(g: Graph, method, args: Munch, params: NetworkParams = None, ranks: RankTable = None,
                   progress=True) -> ErrorReport:
    """Evaluate one method on `g` following the per-degree protocol.

    Every trial draws a fresh sample of ``sample_fraction * n`` nodes with the
    method's sampler (walks start in the largest component), estimates the rank of
    every distinct degree of the graph and compares it with the exact rank. The
    errors are averaged over trials per degree and then over degrees.

    Args:
        g (Graph): graph to evaluate on
        method (str): one of ``ranks.METHODS``
        args (Munch): run configuration (sample_fraction, trials, seed, ...)
        params (NetworkParams, optional): estimated parameters shared by all methods
        ranks (RankTable, optional): exact ranks of `g`, computed if not given

    Returns:
        ErrorReport
    """
    if method not in METHODS:
        raise ParameterError('unknown method %r' % method)
    if not 0 < args.sample_fraction <= 1:
        raise ParameterError('sample_fraction must lie in (0, 1], got %g' % args.sample_fraction)
    ranks = ranks or exact_degree_ranks(g)
    if ranks.node_count != g.node_count:
        raise GraphMismatchError('rank table of %i nodes for a graph of %i' % (ranks.node_count, g.node_count))
    n = g.node_count
    degrees = np.flatnonzero(g.degree_histogram())
    act = ranks.rank_of_degree(degrees)
    params = prepare_params(g, method, args, params)
    s = max(int(round(args.sample_fraction * n)), 1)
    seeds = spawn_seeds(args.seed, args.trials)
    lcc = largest_component(g) if SAMPLER_OF[method] in ('rw', 'mhrw') else None
    # a full uniform sample is a census of the node set
    replace = args.sample_fraction < 1
    est = np.empty((args.trials, len(degrees)))
    pbar = tqdm(enumerate(seeds), total=len(seeds), disable=not progress, desc=method)
    for t, seed in pbar:
        if SAMPLER_OF[method] is None and t > 0:
            est[t] = est[0]
            continue
        sample = _draw(g, method, s, seed, lcc, replace) if SAMPLER_OF[method] else None
        est[t] = estimate_ranks(method, degrees, sample, params)
        pbar.set_description('%s paae: %.3f' % (method, paae(abs_error(est[:t + 1], act).mean(0), n)))
    abs_err = abs_error(est, act)
    wtd_err = weighted_error(est, np.broadcast_to(act, est.shape), n)
    per_degree = pd.DataFrame({
        'degree': degrees,
        'act_rank': act,
        'mean_est_rank': est.mean(0),
        'mean_abs_err': abs_err.mean(0),
        'mean_wtd_err': wtd_err.mean(0),
    })
    report = ErrorReport(method, per_degree, paae(per_degree['mean_abs_err'], n),
                         float(per_degree['mean_wtd_err'].mean()), args.trials, args.sample_fraction, seeds, n,
                         params.to_dict())
    report.check_consistency()
    logging.info('%s: paae=%.4f avg_wtd=%.4f' % (method, report.paae, report.avg_wtd))
    return report


def error_vs_rank_profile(report: ErrorReport, ranks: RankTable) -> pd.DataFrame:
    """Rows (act_rank, mean_abs_err) sorted by rank, for log-log plots."""
    if report.node_count != ranks.node_count:
        raise GraphMismatchError('report on %i nodes, rank table on %i' % (report.node_count, ranks.node_count))
    df = report.per_degree
    if not np.array_equal(ranks.rank_of_degree(df['degree'].to_numpy()), df['act_rank'].to_numpy()):
        raise GraphMismatchError('report ranks do not match the rank table')
    return df[['act_rank', 'mean_abs_err']].sort_values('act_rank', kind='stable').reset_index(drop=True)


def summary_frame(reports) -> pd.DataFrame:
    """Summary table with one row (method, paae, avg_wtd) per report."""
    return pd.DataFrame([{'method': r.method, 'paae': r.paae, 'avg_wtd': r.avg_wtd} for r in reports])


def size_sweep(specs, methods, args: Munch, progress=True) -> pd.DataFrame:
    """Error versus network size on BA graphs of equal density.

    Args:
        specs (list): ``(n, k)`` pairs, all with the same k
        methods (list): methods to evaluate
        args (Munch): run configuration

    Returns:
        pandas.DataFrame: rows (n, method, paae, avg_wtd)
    """
    specs = [tuple(int(x) for x in spec) for spec in specs]
    if len({k for _, k in specs}) > 1:
        raise ParameterError('size sweep needs BA specs of equal density (same k)')
    rows = []
    graph_seeds = spawn_seeds(args.seed, len(specs))
    for (n, k), gseed in zip(tqdm(specs, disable=not progress, desc='sizes'), graph_seeds):
        g = generate_ba(n, k, gseed)
        ranks = exact_degree_ranks(g)
        params = None
        if args.get('actual_params'):
            params = NetworkParams.actual(g)
        elif any(not m.endswith('-ap') for m in methods):
            params = prepare_params(g, 'rw', args)
        for method in methods:
            r = run_experiment(g, method, args, params, ranks, progress=False)
            rows.append({'n': n, 'method': method, 'paae': r.paae, 'avg_wtd': r.avg_wtd})
    return pd.DataFrame(rows)


def fraction_sweep(g: Graph, methods, fractions, args: Munch, params: NetworkParams = None,
                   progress=True) -> pd.DataFrame:
    """Error versus sample size on one graph: rows (sample_fraction, method, paae, avg_wtd)."""
    ranks = exact_degree_ranks(g)
    if params is None and any(not m.endswith('-ap') for m in methods):
        params = prepare_params(g, 'rw', args)
    rows = []
    for fraction in tqdm(fractions, disable=not progress, desc='fractions'):
        sub = args.copy()
        sub.sample_fraction = float(fraction)
        for method in methods:
            r = run_experiment(g, method, sub, params, ranks, progress=False)
            rows.append({'sample_fraction': fraction, 'method': method, 'paae': r.paae, 'avg_wtd': r.avg_wtd})
    return pd.DataFrame(rows)


if __name__ == '__main__':
    from dataset.edgelist import read_graph
    from utils.utils import load_config, parse_args

    parser = argparse.ArgumentParser(description='Evaluate rank estimators on a graph')
    parser.add_argument('graph', type=str, help='edge list or .npz graph cache')
    parser.add_argument('--config', default='settings/default.yaml', help='path to yaml config file', type=argparse.FileType('r'))
    parser.add_argument('-m', '--methods', nargs='+', default=None, choices=METHODS, help='methods to evaluate')
    parser.add_argument('-t', '--trials', type=int, default=None, help='trials per method')
    parser.add_argument('--debug', action='store_true', help='DEBUG')
    parsed_args = parser.parse_args()
    with parsed_args.config as f:
        args = parse_args(load_config(f), methods=parsed_args.methods, trials=parsed_args.trials)
    logging.getLogger().setLevel(logging.DEBUG if parsed_args.debug else logging.WARNING)
    g = read_graph(parsed_args.graph)
    params = prepare_params(g, 'rw', args)
    reports = [run_experiment(g, m, args, params) for m in args.methods]
    print(summary_frame(reports).to_string(index=False))
