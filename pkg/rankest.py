"""Command line front end.

    python rankest.py generate ba --n 100000 --k 10 -o ba1.txt
    python rankest.py estimate-params --graph ba1.npz -o params.json
    python rankest.py rank --graph ba1.npz --method rw --degree 25
    python rankest.py evaluate --graph ba1.npz --methods pl pl-ap us mh rw -o reports/
    python rankest.py sweep --sizes 100000 200000 300000 --k 10 --methods rw mh
"""
import argparse
import logging
import os
import sys

import numpy as np

from dataset.edgelist import read_graph, write_edge_list
from dataset.generate import generate_ba, generate_er
from dataset.graph import exact_degree_ranks, largest_component, save_cache
from eval import fraction_sweep, prepare_params, run_experiment, size_sweep, summary_frame
from params import NetworkParams, degree_distribution_profile, estimate_params
from ranks import METHODS, SAMPLER_OF, estimate_ranks, rank_table_frame
from samplers import SAMPLERS
from utils.exceptions import ParameterError, RankEstError
from utils.utils import default, get_rng, load_config, parse_args, spawn_seeds, write_csv, write_json

SETTINGS = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'settings')
GRAPH_HELP = 'edge list (.txt, .gz) or graph cache (.npz)'


def _stem(path):
    for suffix in ('.gz', '.txt', '.edges', '.npz'):
        if path.endswith(suffix):
            path = path[:-len(suffix)]
    return path


def _print_graph(g):
    print('n=%i m=%i d_avg=%.2f d_min=%i d_max=%i' % (g.node_count, g.edge_count, g.avg_degree, g.min_degree,
                                                      g.max_degree))


def _write_graph(g, output, meta):
    stem = _stem(output)
    with open(stem + '.txt', 'w') as f:
        write_edge_list(g, f, metadata=meta)
    save_cache(g, stem + '.npz', meta)
    logging.info('wrote %s.txt and %s.npz' % (stem, stem))


def _output(args, path):
    return default(args.output, path)


def _load_params(args, g, method='rw'):
    if method.endswith('-ap') or args.get('actual_params'):
        return NetworkParams.actual(g, min_degree=1 if g.min_degree == 0 else None)
    if args.get('params_file'):
        with open(args.params_file, 'r') as f:
            return NetworkParams.from_json(f.read())
    return prepare_params(g, 'rw', args)


def cmd_generate(args):
    """Generate a BA or ER graph (or a named network from settings/networks.yaml)
    and write it as edge list plus binary cache."""
    model, n, k, avg = args.model, args.n, args.k, args.avg_deg
    if args.name is not None:
        networks = load_config(os.path.join(SETTINGS, 'networks.yaml'))
        if args.name not in networks:
            raise ParameterError('unknown network %r, known: %s' % (args.name, ', '.join(networks)))
        entry = networks[args.name]
        model, n, k, avg = entry['model'], entry['n'], entry.get('k'), entry.get('avg_degree')
    if model == 'ba':
        if n is None or k is None:
            raise ParameterError('ba needs --n and --k')
        g = generate_ba(n, k, args.seed, progress=True)
    elif model == 'er':
        if n is None or avg is None:
            raise ParameterError('er needs --n and --avg-deg')
        g = generate_er(n, avg, args.seed)
    else:
        raise ParameterError('unknown model %r' % model)
    meta = {'config': dict(args), 'model': model, 'n': n, 'k': k, 'avg_degree': avg, 'seed': args.seed}
    _write_graph(g, _output(args, args.name or '%s_n%i' % (model, n)), meta)
    _print_graph(g)


def cmd_ingest(args):
    """Read an edge list and store it as binary cache."""
    g = read_graph(args.graph, progress=True)
    out = _output(args, _stem(args.graph) + '.npz')
    save_cache(g, out, {'config': dict(args), 'source': args.graph})
    _print_graph(g)


def cmd_estimate_params(args):
    """Run the averaged random walk pipeline and write the NetworkParams json."""
    g = read_graph(args.graph)
    budget = args.budget or max(int(round(args.sample_fraction * g.node_count)), 100)
    params = estimate_params(g, budget, args.seed, repeats=args.param_repeats, network_kind=args.network_kind,
                             smoothing_c=args.smoothing_c, min_gap_fraction=args.min_gap_fraction,
                             neighbor_collisions=args.neighbor_collisions, smoothing_budget=args.smoothing_budget,
                             smoothing_pilots=args.smoothing_pilots, progress=True)
    params.provenance['config'] = dict(args)
    out = _output(args, _stem(args.graph) + '.params.json')
    with open(out, 'w') as f:
        f.write(params.to_json())
    print(params.to_text(), end='')


def cmd_sample(args):
    """Draw one sample and write its trace as CSV."""
    g = read_graph(args.graph)
    s = args.size or max(int(round(args.sample_fraction * g.node_count)), 1)
    if args.sampler == 'uniform':
        sample = SAMPLERS['uniform'](g, s, args.seed)
    elif args.sampler == 'smoothed':
        sample = SAMPLERS['smoothed'](g, s, args.smoothing_c or 0.0, args.seed, args.start)
    else:
        sample = SAMPLERS[args.sampler](g, s, args.seed, args.start)
    sample.to_csv(_output(args, '%s.%s.csv' % (_stem(args.graph), args.sampler)), {'config': dict(args)})
    print('%s sample: s=%i d_min=%i d_max=%i' % (sample.method, sample.size, sample.observed_min_degree,
                                                  sample.observed_max_degree))


def cmd_rank(args):
    """Estimate ranks of one degree, one node or every degree present in the graph."""
    g = read_graph(args.graph)
    method = args.method
    if method not in METHODS:
        raise ParameterError('unknown method %r' % method)
    if args.node is not None:
        matches = np.flatnonzero(g.labels == args.node)
        if len(matches) == 0:
            raise ParameterError('unknown node id %i' % args.node)
        degrees = g.degrees[matches]
    elif args.degree is not None:
        degrees = np.asarray([args.degree])
    else:
        degrees = np.flatnonzero(g.degree_histogram())
    params = _load_params(args, g, method)
    sample = None
    sampler = SAMPLER_OF[method]
    if sampler is not None:
        s = max(int(round(args.sample_fraction * g.node_count)), 1)
        if sampler == 'uniform':
            sample = SAMPLERS['uniform'](g, s, args.seed, replace=args.sample_fraction < 1)
        else:
            lcc = largest_component(g)
            seeds = spawn_seeds(args.seed, 2)
            start = int(lcc[get_rng(seeds[0]).integers(len(lcc))])
            sample = SAMPLERS[sampler](g, s, seeds[1], start)
    est = estimate_ranks(method, degrees, sample, params)
    ranks = exact_degree_ranks(g) if args.with_truth else None
    df = rank_table_frame(method, degrees, est, ranks, round_ranks=args.round)
    if args.output:
        write_csv(df, args.output, {'config': dict(args), 'params': params.to_dict()})
    print(df.to_string(index=False))


def cmd_evaluate(args):
    """One ErrorReport per method plus a summary table (method, paae, avg_wtd)."""
    g = read_graph(args.graph)
    ranks = exact_degree_ranks(g)
    params = None
    if any(not m.endswith('-ap') for m in args.methods):
        params = _load_params(args, g)
    out = _output(args, _stem(args.graph) + '_reports')
    os.makedirs(out, exist_ok=True)
    reports = []
    meta = {'config': dict(args)}
    for method in args.methods:
        report = run_experiment(g, method, args, params, ranks)
        report.to_csv(os.path.join(out, 'report_%s.csv' % method), meta)
        reports.append(report)
    summary = summary_frame(reports)
    write_csv(summary, os.path.join(out, 'summary.csv'), meta)
    write_json({'config': dict(args), 'reports': [r.summary() for r in reports]}, os.path.join(out, 'summary.json'))
    if params is not None and np.isfinite(params.gamma):
        write_csv(degree_distribution_profile(g, params), os.path.join(out, 'degree_distribution.csv'), meta)
    print(summary.to_string(index=False))


def cmd_sweep(args):
    """Error versus network size (BA, same k) or, with --fractions, versus sample size."""
    meta = {'config': dict(args)}
    if args.fractions:
        if args.graph is None:
            raise ParameterError('a sample size sweep needs --graph')
        g = read_graph(args.graph)
        params = None
        if any(not m.endswith('-ap') for m in args.methods):
            params = _load_params(args, g)
        df = fraction_sweep(g, args.methods, args.fractions, args, params)
    else:
        if not args.sizes:
            raise ParameterError('sweep needs --sizes or --graph with --fractions')
        df = size_sweep([(n, args.k) for n in args.sizes], args.methods, args)
    write_csv(df, _output(args, 'sweep.csv'), meta)
    print(df.to_string(index=False))


COMMANDS = {
    'generate': cmd_generate,
    'ingest': cmd_ingest,
    'estimate-params': cmd_estimate_params,
    'sample': cmd_sample,
    'rank': cmd_rank,
    'evaluate': cmd_evaluate,
    'sweep': cmd_sweep,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', type=str, default=os.path.join(SETTINGS, 'default.yaml'),
                        help='path to yaml config file')
    common.add_argument('--seed', type=int, default=None, help='random seed (overrides $RANKEST_SEED)')
    common.add_argument('-o', '--output', type=str, default=None, help='output path')
    common.add_argument('--debug', action='store_true', default=None, help='DEBUG')
    common.add_argument('-v', '--verbose', action='store_true', help='log progress information')

    est = argparse.ArgumentParser(add_help=False)
    est.add_argument('--fraction', dest='sample_fraction', type=float, default=None,
                     help='sample size as share of the nodes (default 0.01)')
    est.add_argument('--trials', type=int, default=None, help='trials per method (default 20)')
    est.add_argument('--min-gap', dest='min_gap_fraction', type=float, default=None,
                     help='minimal collision gap as share of the walk (default 0.025)')
    est.add_argument('--network-kind', choices=['real', 'synthetic'], default=None,
                     help='real: d_min=1, synthetic: observed minimum (default real)')
    est.add_argument('--smoothing-c', type=float, default=None, help='smoothing constant (default: grid search)')
    est.add_argument('--param-repeats', type=int, default=None, help='parameter estimation runs (default 10)')
    est.add_argument('--params', dest='params_file', type=str, default=None, help='NetworkParams json to use')
    est.add_argument('--actual-params', action='store_true', default=None, help='use the true parameters')

    parser = argparse.ArgumentParser(description='Degree rank estimation from small samples')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('generate', parents=[common], help='generate a synthetic graph')
    p.add_argument('model', nargs='?', choices=['ba', 'er'], help='network model')
    p.add_argument('--name', type=str, default=None, help='named network from settings/networks.yaml, e.g. BA1')
    p.add_argument('--n', type=int, default=None, help='number of nodes')
    p.add_argument('--k', type=int, default=None, help='BA: edges per new node')
    p.add_argument('--avg-deg', type=float, default=None, help='ER: target average degree')

    p = sub.add_parser('ingest', parents=[common], help='convert an edge list to a graph cache')
    p.add_argument('--graph', type=str, required=True, help='edge list (.txt or .gz)')

    p = sub.add_parser('estimate-params', parents=[common, est], help='estimate network parameters')
    p.add_argument('--graph', type=str, required=True, help=GRAPH_HELP)
    p.add_argument('--budget', type=int, default=None, help='walk length (default: fraction * n)')

    p = sub.add_parser('sample', parents=[common, est], help='draw a sample')
    p.add_argument('--graph', type=str, required=True, help=GRAPH_HELP)
    p.add_argument('--sampler', choices=list(SAMPLERS), default='rw', help='sampling method')
    p.add_argument('--size', type=int, default=None, help='sample size (default: fraction * n)')
    p.add_argument('--start', type=int, default=None, help='start node of a walk')

    p = sub.add_parser('rank', parents=[common, est], help='estimate degree ranks')
    p.add_argument('--graph', type=str, required=True, help=GRAPH_HELP)
    p.add_argument('--method', choices=METHODS, required=True, help='rank estimation method')
    p.add_argument('--degree', type=int, default=None, help='degree to rank')
    p.add_argument('--node', type=int, default=None, help='node id (as in the input) to rank')
    p.add_argument('--with-truth', action='store_true', help='add actual rank and errors')
    p.add_argument('--round', action='store_true', default=None, help='round ranks half-up')

    p = sub.add_parser('evaluate', parents=[common, est], help='run the evaluation protocol')
    p.add_argument('--graph', type=str, required=True, help=GRAPH_HELP)
    p.add_argument('--methods', nargs='+', choices=METHODS, default=None, help='methods to evaluate')

    p = sub.add_parser('sweep', parents=[common, est], help='error versus network or sample size')
    p.add_argument('--graph', type=str, default=None, help='graph for a sample size sweep')
    p.add_argument('--sizes', type=int, nargs='+', default=None, help='BA network sizes')
    p.add_argument('--k', type=int, default=10, help='BA edges per new node')
    p.add_argument('--fractions', type=float, nargs='+', default=None, help='sample fractions (needs --graph)')
    p.add_argument('--methods', nargs='+', choices=METHODS, default=None, help='methods to evaluate')
    return parser


def main(argv=None):
    parsed = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(parsed).items() if k not in ('config', 'verbose')}
    logging.getLogger().setLevel(logging.DEBUG if parsed.debug else logging.INFO if parsed.verbose else logging.WARNING)
    try:
        args = parse_args(load_config(parsed.config), **overrides)
        COMMANDS[args.command](args)
    except (RankEstError, OSError) as e:
        logging.error('%s failed: %s' % (parsed.command, e))
        return 1
    return 0


if __name__ == '__main__':
    logging.basicConfig(format='%(asctime)-15s %(levelname)-8s %(message)s')
    sys.exit(main())
