"""Built-in instances: the five-vertex node-B example and the four-vertex
input whose chain is audited against a second-best tour.

Matrices are stored as nested lists with ``None`` on the diagonal; tours as
their 0/1 characteristic matrices.  Both are plain data so that audits can
be rerun on mutated copies.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .core import AffineForm

__all__ = ["Section4Fixture", "Section5Fixture", "section4_fixture", "section5_fixture",
           "node_b_conditions", "NODE_B_FORM"]

_ = None

C_X = [[_, 0, 6, 1, 6],
       [0, _, 6, 6, 1],
       [3, 2, _, 1, 0],
       [6, 0, 6, _, 6],
       [6, 6, 0, 6, _]]
C_Y = [[_, 0, 6, 6, 1],
       [0, _, 1, 6, 6],
       [3, 2, _, 1, 0],
       [6, 0, 6, _, 6],
       [6, 6, 6, 0, _]]
C_Z = [[_, 0, 1, 6, 6],
       [0, _, 6, 6, 1],
       [6, 3, _, 1, 0],
       [0, 6, 6, _, 6],
       [6, 6, 6, 0, _]]
C_W = [[_, 0, 6, 6, 1],
       [0, _, 6, 1, 6],
       [6, 3, _, 1, 0],
       [0, 6, 6, _, 6],
       [6, 6, 0, 6, _]]

CHI_5 = {
    "x": [[0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]],
    "y": [[0, 0, 0, 0, 1], [0, 0, 1, 0, 0], [1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 0, 1, 0]],
    "z": [[0, 0, 1, 0, 0], [0, 0, 0, 0, 1], [0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 0, 1, 0]],
    "w": [[0, 0, 0, 0, 1], [0, 0, 0, 1, 0], [0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 1, 0, 0]],
    "x'": [[0, 1, 0, 0, 0], [0, 0, 0, 0, 1], [0, 0, 0, 1, 0], [1, 0, 0, 0, 0], [0, 0, 1, 0, 0]],
    "y'": [[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, 1], [1, 0, 0, 0, 0], [0, 0, 0, 1, 0]],
    "z'": [[0, 0, 1, 0, 0], [1, 0, 0, 0, 0], [0, 0, 0, 0, 1], [0, 1, 0, 0, 0], [0, 0, 0, 1, 0]],
    "w'": [[0, 0, 0, 0, 1], [1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]],
}

# (smaller, larger, strict): c_smaller <= c_larger, or c_larger > ... when strict
_NODE_B_PATH = [
    ((1, 2), (1, 3), False), ((1, 2), (1, 4), False), ((1, 2), (1, 5), False),
    ((2, 1), (2, 3), False), ((2, 1), (2, 4), False), ((2, 1), (2, 5), False),
    ((3, 2), (3, 1), True), ((3, 4), (3, 2), True), ((3, 5), (3, 4), True),
]

# the comparison c41 > c42 reached right after the third row is reduced
NODE_B_FORM = AffineForm.parse("c41 - c42")


def node_b_conditions() -> list[tuple[AffineForm, str]]:
    """The path conditions to node B as ``(form, relation)`` with ``form rel 0``."""
    out = []
    for lo, hi, strict in _NODE_B_PATH:
        out.append((AffineForm.var(*hi) - AffineForm.var(*lo), ">" if strict else ">="))
    return out


C_STAR = [[_, 0, 2, 1],
          [2, _, 0, 2],
          [1, 2, _, 0],
          [0, 1, 2, _]]

CHI_4 = {
    "x": [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]],
    "y": [[0, 0, 0, 1], [0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0]],
}

# Matrices handed to calls 2, 3 and 4 of the procedure on C*, over their live
# rows and columns.
INSTANCE_INPUTS = {
    2: {"rows": [1, 3, 4], "cols": [1, 2, 4],
        "cells": [[_, 0, 1], [1, _, 0], [0, 1, _]]},
    3: {"rows": [1, 3, 4], "cols": [1, 2, 4],
        "cells": [[_, _, 1], [1, _, 0], [0, 1, _]]},
    4: {"rows": [1, 2, 3, 4], "cols": [1, 2, 3, 4],
        "cells": [[_, 0, 2, 1], [2, _, _, 2], [1, 2, _, 0], [0, 1, 2, _]]},
}


@dataclass
class Section4Fixture:
    matrices: dict = field(default_factory=lambda: {"x": C_X, "y": C_Y, "z": C_Z, "w": C_W})
    tours: dict = field(default_factory=lambda: CHI_5)
    value: int = 5

    def copy(self) -> "Section4Fixture":
        return copy.deepcopy(self)


@dataclass
class Section5Fixture:
    matrix: list = field(default_factory=lambda: C_STAR)
    tours: dict = field(default_factory=lambda: CHI_4)
    instance_inputs: dict = field(default_factory=lambda: INSTANCE_INPUTS)
    chosen_arcs: dict = field(default_factory=lambda: {1: (2, 3), 2: (1, 2)})
    y_value: int = 3

    def copy(self) -> "Section5Fixture":
        return copy.deepcopy(self)


def section4_fixture() -> Section4Fixture:
    return Section4Fixture().copy()


def section5_fixture() -> Section5Fixture:
    return Section5Fixture().copy()
