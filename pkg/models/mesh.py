"""Quadrilateral mesh model with x/y regions and element classes"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils.errors import ConfigError

MAX_NY = 4
MAX_NS = 8


class Region(str, Enum):
    """Region tag: family/order group an element belongs to"""
    X = "x"
    Y = "y"


class ElementClass(str, Enum):
    X = "X"
    Y = "Y"
    XNY = "XNY"
    YNY = "YNY"


@dataclass
class Mesh:
    """Straight-sided quadrilateral mesh

    Quads list four vertex ids counter-clockwise. level counts how many
    y-refinement passes produced an element; it drives banded refinement.
    """
    vertices: np.ndarray
    quads: np.ndarray
    region: List[Region]
    element_class: List[ElementClass] = None
    level: List[int] = None

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        self.quads = np.asarray(self.quads, dtype=np.int64).reshape(-1, 4)
        self.region = [Region(r) for r in self.region]
        if len(self.region) != len(self.quads):
            raise ConfigError("one region tag per quad is required")
        if self.element_class is None:
            self.element_class = [ElementClass.X if r == Region.X else ElementClass.Y
                                  for r in self.region]
        else:
            self.element_class = [ElementClass(c) for c in self.element_class]
        if self.level is None:
            self.level = [0] * len(self.quads)
        else:
            self.level = [int(v) for v in self.level]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_quads(self) -> int:
        return len(self.quads)

    @property
    def bbox_size(self) -> float:
        """Diagonal of the bounding box"""
        if not len(self.vertices):
            return 0.0
        span = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(np.hypot(span[0], span[1]))

    def element_coords(self, e: int) -> np.ndarray:
        return self.vertices[self.quads[e]]

    def census(self) -> Dict[str, int]:
        """Number of elements per class"""
        counts = Counter(c.value for c in self.element_class)
        return {c.value: counts.get(c.value, 0) for c in ElementClass}

    def region_elements(self, region: Region) -> List[int]:
        return [e for e, r in enumerate(self.region) if r == region]

    def copy(self) -> 'Mesh':
        return Mesh(self.vertices.copy(), self.quads.copy(), list(self.region),
                    list(self.element_class), list(self.level))

    def to_dict(self) -> dict:
        """Mesh file representation (floats kept at full precision)"""
        return {
            'vertices': [[float(x), float(y)] for x, y in self.vertices],
            'quads': [[int(v) for v in quad] for quad in self.quads],
            'region': [r.value for r in self.region]
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Mesh':
        return cls(
            vertices=np.array(data['vertices'], dtype=float),
            quads=np.array(data['quads'], dtype=np.int64),
            region=[Region(r) for r in data['region']]
        )


@dataclass
class RefineParams:
    """Parameters of the hierarchical y-region refinement

    n_y: number of y-elements coupled to an edge (split n_y x n_y per pass)
    n_s: number of successive passes
    focus: optional points; when given, each pass splits only the finest
        y-elements containing one of them
    """
    n_y: int = 2
    n_s: int = 1
    focus: List[Tuple[float, float]] = field(default_factory=list)

    def __post_init__(self):
        if not 1 <= int(self.n_y) <= MAX_NY:
            raise ConfigError(f"n_y must be in [1, {MAX_NY}], got {self.n_y}")
        if not 1 <= int(self.n_s) <= MAX_NS:
            raise ConfigError(f"n_s must be in [1, {MAX_NS}], got {self.n_s}")
        self.n_y = int(self.n_y)
        self.n_s = int(self.n_s)
        self.focus = [(float(x), float(y)) for x, y in (self.focus or [])]

    def to_dict(self) -> dict:
        return {
            'n_y': self.n_y,
            'n_s': self.n_s,
            'focus': [list(p) for p in self.focus]
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'RefineParams':
        return cls(
            n_y=data.get('n_y', 2),
            n_s=data.get('n_s', 1),
            focus=[tuple(p) for p in data.get('focus', [])]
        )
