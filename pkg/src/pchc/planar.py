"""Rotation systems, face traversal and the Euler characteristic.

A planar map is given by, for every node, the counter-clockwise cyclic list
of half-edges leaving it.  A half-edge is any hashable key; ``twin`` maps it
to the half-edge at the other end of the same edge.  The face to the left of
half-edge h (leaving u, arriving at v) continues with the half-edge that
precedes twin(h) in the rotation at v.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

Half = Hashable
Node = Hashable


@dataclass
class PlanarMap:
    rotation: dict[Node, list[Half]]
    twin: dict[Half, Half]

    def __post_init__(self) -> None:
        self.node_of: dict[Half, Node] = {}
        self.index: dict[Half, int] = {}
        for node, halves in self.rotation.items():
            for i, h in enumerate(halves):
                self.node_of[h] = node
                self.index[h] = i

    @property
    def n_edges(self) -> int:
        return len(self.twin) // 2

    def next_in_face(self, h: Half) -> Half:
        t = self.twin[h]
        v = self.node_of[t]
        rot = self.rotation[v]
        return rot[self.index[t] - 1]

    def faces(self) -> list[list[Half]]:
        """Face boundaries as lists of half-edges, in a deterministic order."""
        seen: set[Half] = set()
        out = []
        for node in self.rotation:
            for start in self.rotation[node]:
                if start in seen:
                    continue
                face = []
                h = start
                while h not in seen:
                    seen.add(h)
                    face.append(h)
                    h = self.next_in_face(h)
                out.append(face)
        return out

    def components(self) -> int:
        parent = {n: n for n in self.rotation}

        def find(x: Node) -> Node:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for h, t in self.twin.items():
            a, b = find(self.node_of[h]), find(self.node_of[t])
            if a != b:
                parent[a] = b
        return len({find(n) for n in self.rotation})

    def euler_characteristic(self) -> int:
        return len(self.rotation) - self.n_edges + len(self.faces())


def check_consistency(rotation: dict[Node, list[Half]], twin: dict[Half, Half]) -> list[str]:
    """Every half-edge sits at exactly one node and has a twin that does too."""
    out = []
    seen: dict[Half, Node] = {}
    for node, halves in rotation.items():
        for h in halves:
            if h in seen:
                out.append(f"half-edge {h!r} appears at {seen[h]!r} and {node!r}")
            seen[h] = node
    for h in seen:
        if h not in twin:
            out.append(f"half-edge {h!r} has no twin")
        elif twin[h] not in seen:
            out.append(f"twin of {h!r} is not placed at any node")
    return out

