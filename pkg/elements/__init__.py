# Elements module

from elements.blending import (
    EdgeSegment, EdgeSpec, ShapeValue, TransitionShapeSet,
    build_transition, edge_trace, eval_shape, tensor_element
)
from elements.fixtures import FixtureVariant, fixture_transition, twelve_node_fixture

__all__ = [
    'EdgeSegment', 'EdgeSpec', 'ShapeValue', 'TransitionShapeSet',
    'build_transition', 'edge_trace', 'eval_shape', 'tensor_element',
    'FixtureVariant', 'fixture_transition', 'twelve_node_fixture'
]
