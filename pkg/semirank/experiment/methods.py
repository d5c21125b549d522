from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from ding.utils.registry import Registry

from semirank.graph import Graph, WeightVector
from semirank.sampling import ComparisonData, restrict_comparisons
from semirank.utils.errors import ConfigError, SolverError

METHOD_REGISTRY = Registry()

MLEProblem = Tuple[Graph, ComparisonData, WeightVector]


@dataclass
class TrialContext:
    r"""
    Overview:
        What a ranking method may look at in one trial: the semi-random graph, its comparison data and
        the reweighting of the graph, computed once per trial before any comparison was sampled.
    """
    graph: Graph
    data: ComparisonData
    weights: Optional[WeightVector] = None
    reweight_error: Optional[SolverError] = None


def get_method(name: str) -> Callable[[TrialContext], MLEProblem]:
    if name not in METHOD_REGISTRY:
        raise ConfigError("unknown method '{}', expected one of {}".format(name, sorted(METHOD_REGISTRY.keys())))
    return METHOD_REGISTRY.get(name)


@METHOD_REGISTRY.register('vanilla_er')
def vanilla_er(ctx: TrialContext) -> MLEProblem:
    r"""
    Overview:
        Unweighted MLE on the hidden Erdos-Renyi edges only, reading the same outcomes the other
        methods see on those edges. Needs ``er_mask`` and so only runs in simulation.
    """
    g = ctx.graph
    if g.er_mask is None:
        raise ConfigError("vanilla_er needs a graph with er_mask")
    g_er = g.er_subgraph()
    return g_er, restrict_comparisons(ctx.data, g, g.er_mask), WeightVector.ones(g_er)


@METHOD_REGISTRY.register('vanilla_sr')
def vanilla_sr(ctx: TrialContext) -> MLEProblem:
    return ctx.graph, ctx.data, WeightVector.ones(ctx.graph)


@METHOD_REGISTRY.register('weighted_sr')
def weighted_sr(ctx: TrialContext) -> MLEProblem:
    if ctx.reweight_error is not None:
        raise ctx.reweight_error
    assert ctx.weights is not None
    return ctx.graph, ctx.data, ctx.weights
