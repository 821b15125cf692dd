"""Synthetic clustered networks that keep the edge connectivity of a real
clustering (SBM sample + RECCS repair + outlier modelling)."""

__version__ = "0.1.0"

from .graph import Clustering, Graph, InputError, MultiGraph, ParameterError  # noqa: E402
from .params import NetworkParams, ParamSet, extract_params, split_real_network  # noqa: E402

__all__ = [
    "Clustering",
    "Graph",
    "InputError",
    "MultiGraph",
    "NetworkParams",
    "ParamSet",
    "ParameterError",
    "extract_params",
    "split_real_network",
]
