from dataset.graph import Graph, RankTable, exact_degree_ranks, largest_component, load_cache, save_cache
from dataset.edgelist import load_edge_list, read_graph, write_edge_list
from dataset.generate import generate_ba, generate_er
