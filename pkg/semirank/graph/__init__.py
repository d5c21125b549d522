from .graph import Graph, WeightVector, build_laplacian, laplacian_operator, weighted_degrees, is_connected, \
    connected_components, smallest_component, volume, DEFAULT_TOL
from .graph_io import read_edge_list, write_edge_list, read_weights
