"""Graph files and result emission."""

from .graph_io import graph_paths, load_graph, save_graph
from .results_writer import ResultsWriter, save_plot_data, write_summary, write_trace

__all__ = [
    "ResultsWriter",
    "graph_paths",
    "load_graph",
    "save_graph",
    "save_plot_data",
    "write_summary",
    "write_trace",
]
