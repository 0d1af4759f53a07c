"""Index set of torus leaves of G/B and G/U: Bruhat pairs v <= u."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .rootsys import RootSystem, Word, format_word

SPACES = ("GB", "GU")


@dataclass(frozen=True)
class LeafIndex:
    u: Word
    v: Word
    space: str
    torus_rank: int

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"space must be one of {SPACES}, got {self.space!r}")

    def to_json(self) -> dict:
        return {"u": format_word(self.u), "v": format_word(self.v), "dim": leaf_dimension(self)}


def enumerate_leaves(rs: RootSystem, space: str = "GB") -> list[LeafIndex]:
    """All pairs (u, v) with v <= u, u and v given by their normal-form words."""
    space = space.upper().replace("/", "")
    W = rs.weyl
    out = []
    elements = W.elements()
    for u in elements:
        below = W.downset(u)
        for v in elements:
            if v in below:
                out.append(LeafIndex(W.normal_form(u), W.normal_form(v), space, rs.rank))
    return out


def leaf_dimension(leaf: LeafIndex) -> int:
    """l(u) - l(v), plus the torus rank on G/U (normal forms are reduced)."""
    dim = len(leaf.u) - len(leaf.v)
    return dim + leaf.torus_rank if leaf.space == "GU" else dim


def leaves_json(leaves: list[LeafIndex]) -> str:
    return json.dumps([leaf.to_json() for leaf in leaves], sort_keys=True)
