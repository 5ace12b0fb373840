"""Edge list ingestion in the format of common public network dumps."""
import gzip
import io
import logging

import numpy as np
from tqdm.auto import tqdm

from dataset.graph import Graph, load_cache
from utils.exceptions import ParameterError, ParseError
from utils.utils import metadata_line

COMMENTS = (b'#', b'%')


def load_edge_list(source, progress=False) -> Graph:
    """Read an undirected simple graph from an edge list.

    Every line holds two whitespace separated integer ids; lines starting with
    '#' or '%' are comments. Duplicate edges and self-loops are dropped and the
    remaining ids are remapped to ``0..n-1`` in ascending order of the original
    id; the original ids stay available as ``Graph.labels``.

    Args:
        source (binary file): stream yielding the lines
        progress (bool, optional): show a progress bar. Defaults to False.

    Returns:
        Graph
    """
    u, v = [], []
    for i, line in enumerate(tqdm(source, disable=not progress, unit=' lines'), 1):
        if isinstance(line, str):
            line = line.encode()
        stripped = line.strip()
        if not stripped or stripped.startswith(COMMENTS):
            continue
        tokens = stripped.split()
        if len(tokens) < 2:
            raise ParseError(i, line.decode(errors='replace').rstrip())
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(i, line.decode(errors='replace').rstrip()) from None
        if a != b:
            u.append(a)
            v.append(b)
    if not u:
        raise ParameterError('empty graph: no edges in input')
    u, v = np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)
    labels, inverse = np.unique(np.concatenate([u, v]), return_inverse=True)
    g = Graph.from_edges(len(labels), inverse[:len(u)], inverse[len(u):], labels)
    logging.info('loaded %r from %i edge lines' % (g, len(u)))
    return g


def write_edge_list(g: Graph, sink, header=True, metadata=None):
    """Write `g` as an edge list using the original node labels, one edge per line.

    Args:
        g (Graph): graph to write
        sink (text file): destination stream
        header (bool, optional): start with a comment line carrying n and m. Defaults to True.
        metadata (dict, optional): run configuration and seeds, written as a json comment line
            ahead of the header.
    """
    if metadata is not None:
        sink.write(metadata_line(metadata))
    if header:
        sink.write('# nodes: %i edges: %i\n' % (g.node_count, g.edge_count))
    src, dst = g.edges()
    lab = g.labels
    buf = io.StringIO()
    np.savetxt(buf, np.column_stack([lab[src], lab[dst]]), fmt='%d')
    sink.write(buf.getvalue())


def read_graph(path, progress=False) -> Graph:
    """Load a graph from a binary cache (``.npz``), a gzipped or a plain edge list."""
    path = str(path)
    if path.endswith('.npz'):
        return load_cache(path)
    opener = gzip.open if path.endswith('.gz') else open
    with opener(path, 'rb') as f:
        return load_edge_list(f, progress=progress)
