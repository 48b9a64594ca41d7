"""Colored unitrivalent forest diagrams and their signed canonical forms.

A component is a tree whose vertices have degree 1 (leaves, carrying a
color) or degree 3 (trivalent, carrying a cyclic orientation of the three
incident edges).  Reversing the orientation at a trivalent vertex negates
the diagram (antisymmetry), so equality of diagrams is only defined up to
sign; canonicalization returns an orientation-independent byte encoding
together with that sign.  A sign of 0 means the diagram is its own
negative, i.e. the zero vector of the diagram space.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import DomainError, StructuralError

# Colors fit in one byte well below the structural marker bytes.
MAX_COLORS = 62
# Reserved pseudo-color for a distinguished ("marked") leaf.
MARKED_COLOR = 63
# Byte introducing an internal node in encodings; above any color byte.
_NODE = 0x7E
_NODE_BYTE = bytes([_NODE])
# Separator between component encodings inside a diagram encoding.
_SEP = 0xFF
_SEP_BYTE = bytes([_SEP])


class Mode(enum.Enum):
    """Which diagram space a computation lives in.

    In homotopy mode a component with two leaves of the same color is
    zero; concordance mode keeps such components.
    """

    HOMOTOPY = "homotopy"
    CONCORDANCE = "concordance"

    def __str__(self) -> str:
        return self.value


def check_color(c: int) -> int:
    if not isinstance(c, int) or not 1 <= c <= MARKED_COLOR:
        raise DomainError(f"color must be an integer in 1..{MARKED_COLOR}, got {c!r}")
    return c


def check_num_colors(k: int) -> int:
    if not isinstance(k, int) or not 1 <= k <= MAX_COLORS:
        raise DomainError(f"color count k must be in 1..{MAX_COLORS}, got {k!r}")
    return k


@dataclass(frozen=True)
class TreeComponent:
    """One tree of a diagram.

    ``adj[v]`` lists the neighbors of vertex ``v``; for a trivalent vertex
    the tuple order *is* the cyclic orientation.  ``colors[v]`` is the leaf
    color, or 0 for trivalent vertices.
    """

    adj: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.adj)
        if n != len(self.colors):
            raise StructuralError("adjacency and color tables differ in length")
        if n < 2:
            raise StructuralError("a component has at least two vertices")
        edge_count = 0
        for v, nbrs in enumerate(self.adj):
            if len(nbrs) not in (1, 3):
                raise StructuralError(f"vertex {v} has degree {len(nbrs)}")
            if (self.colors[v] > 0) != (len(nbrs) == 1):
                raise StructuralError(f"vertex {v}: exactly the leaves are colored")
            if self.colors[v] > 0:
                check_color(self.colors[v])
            seen = set()
            for u in nbrs:
                if u == v or not 0 <= u < n or u in seen:
                    raise StructuralError(f"vertex {v} has a malformed neighbor list")
                seen.add(u)
                if v not in self.adj[u]:
                    raise StructuralError("adjacency is not symmetric")
            edge_count += len(nbrs)
        if edge_count != 2 * (n - 1):
            raise StructuralError("component is not a tree (wrong edge count)")
        # Connectivity: walk from vertex 0.
        stack, seen = [0], {0}
        while stack:
            for u in self.adj[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != n:
            raise StructuralError("component is not connected")

    def leaves(self) -> tuple[tuple[int, int], ...]:
        """(vertex id, color) for every leaf, in vertex order."""
        return tuple((v, c) for v, c in enumerate(self.colors) if c > 0)

    def leaf_colors(self) -> tuple[int, ...]:
        return tuple(sorted(c for c in self.colors if c > 0))

    @property
    def num_leaves(self) -> int:
        return sum(1 for c in self.colors if c > 0)

    @property
    def degree(self) -> int:
        return self.num_leaves - 1

    @property
    def trivalent_count(self) -> int:
        return len(self.adj) - self.num_leaves

    @property
    def is_strut(self) -> bool:
        return len(self.adj) == 2

    def strut_ends(self) -> tuple[int, int]:
        if not self.is_strut:
            raise DomainError("not a strut")
        a, b = self.colors
        return (a, b) if a <= b else (b, a)

    def internal_edges(self) -> tuple[tuple[int, int], ...]:
        """Edges joining two trivalent vertices, as (u, v) with u < v."""
        out = []
        for v, nbrs in enumerate(self.adj):
            if len(nbrs) == 3:
                for u in nbrs:
                    if u > v and len(self.adj[u]) == 3:
                        out.append((v, u))
        return tuple(out)

    def with_flip(self, v: int) -> "TreeComponent":
        """The same tree with the cyclic orientation at ``v`` reversed."""
        if len(self.adj[v]) != 3:
            raise DomainError(f"vertex {v} is not trivalent")
        new_adj = list(self.adj)
        new_adj[v] = tuple(reversed(self.adj[v]))
        return TreeComponent(tuple(new_adj), self.colors)

    def with_color(self, v: int, color: int) -> "TreeComponent":
        if len(self.adj[v]) != 1:
            raise DomainError(f"vertex {v} is not a leaf")
        new_colors = list(self.colors)
        new_colors[v] = check_color(color)
        return TreeComponent(self.adj, tuple(new_colors))

    def relabeled(self, perm: Sequence[int]) -> "TreeComponent":
        """The same tree with vertex ids permuted by ``perm`` (old -> new)."""
        n = len(self.adj)
        adj = [()] * n
        colors = [0] * n
        for v in range(n):
            adj[perm[v]] = tuple(perm[u] for u in self.adj[v])
            colors[perm[v]] = self.colors[v]
        return TreeComponent(tuple(adj), tuple(colors))


def strut(a: int, b: int) -> TreeComponent:
    """A single edge with ends colored ``a`` and ``b``."""
    check_color(a)
    check_color(b)
    return TreeComponent(((1,), (0,)), (a, b))


def y_tree(a: int, b: int, c: int) -> TreeComponent:
    """Three leaves on one trivalent vertex, cyclic orientation (a, b, c)."""
    for col in (a, b, c):
        check_color(col)
    return TreeComponent(((3,), (3,), (3,), (0, 1, 2)), (a, b, c, 0))


@dataclass(frozen=True)
class Diagram:
    """A multiset of tree components with a mode tag and a color bound.

    The zero diagram (the zero vector of the space) is represented
    explicitly by ``is_zero`` with an empty component tuple.
    """

    components: tuple[TreeComponent, ...]
    mode: Mode
    k: int
    is_zero: bool = False

    def __post_init__(self) -> None:
        check_num_colors(self.k)
        if self.is_zero:
            if self.components:
                raise StructuralError("the zero diagram carries no components")
            return
        for comp in self.components:
            for _, color in comp.leaves():
                if color > self.k:
                    raise DomainError(f"leaf color {color} exceeds k={self.k}")

    @classmethod
    def zero(cls, mode: Mode, k: int) -> "Diagram":
        return cls((), mode, k, is_zero=True)


def diagram(components: Iterable[TreeComponent], mode: Mode, k: int) -> Diagram:
    return Diagram(tuple(components), mode, k)


@dataclass(frozen=True, order=True)
class CanonicalDiagram:
    """Isomorphism-invariant encoding plus the antisymmetry sign.

    Encodings compare as raw bytes, giving the strict total order used for
    basis indexing.  ``sign`` is 0 exactly for diagrams equal to their own
    negative (or killed by the homotopy repeated-color rule); such
    diagrams encode as the empty byte string.
    """

    encoding: bytes
    sign: int

    @property
    def is_zero(self) -> bool:
        return self.sign == 0


ZERO_CANONICAL = CanonicalDiagram(b"", 0)


def _encode_rooted(comp: TreeComponent, v: int, parent: int) -> tuple[bytes, int]:
    """Encoding and swap sign of the subtree at ``v`` seen from ``parent``.

    Children of a trivalent vertex are taken in cyclic order after the
    parent edge and written in sorted order; each swap against the cyclic
    order costs a -1.  Equal child encodings mean the subtree equals its
    own negative, reported as sign 0.
    """
    nbrs = comp.adj[v]
    if len(nbrs) == 1:
        return bytes([comp.colors[v]]), 1
    i = nbrs.index(parent)
    a, b = nbrs[(i + 1) % 3], nbrs[(i + 2) % 3]
    enc_a, sign_a = _encode_rooted(comp, a, v)
    enc_b, sign_b = _encode_rooted(comp, b, v)
    if enc_a < enc_b:
        return _NODE_BYTE + enc_a + enc_b, sign_a * sign_b
    if enc_a > enc_b:
        return _NODE_BYTE + enc_b + enc_a, -sign_a * sign_b
    return _NODE_BYTE + enc_a + enc_b, 0


@lru_cache(maxsize=1 << 18)
def canonicalize_component(comp: TreeComponent, mode: Mode) -> tuple[bytes, int]:
    """Canonical (encoding, sign) of one component under antisymmetry.

    Roots the tree at every leaf, encodes each rooting, and keeps the
    lexicographically least.  Rootings that reach the minimum with both
    signs witness an orientation-reversing self-isomorphism: the component
    is zero.  In homotopy mode a repeated leaf color is zero outright.
    """
    if mode is Mode.HOMOTOPY:
        cols = [c for c in comp.colors if c > 0]
        if len(set(cols)) != len(cols):
            return b"", 0
    best: Optional[bytes] = None
    best_signs: set[int] = set()
    for v, color in comp.leaves():
        sub_enc, sub_sign = _encode_rooted(comp, comp.adj[v][0], v)
        if sub_sign == 0:
            return b"", 0
        enc = bytes([color]) + sub_enc
        if best is None or enc < best:
            best = enc
            best_signs = {sub_sign}
        elif enc == best:
            best_signs.add(sub_sign)
    assert best is not None
    if len(best_signs) == 2:
        return b"", 0
    return best, best_signs.pop()


def canonicalize(d: Diagram) -> CanonicalDiagram:
    """Canonical form of a whole diagram: sorted component encodings
    joined with a separator byte, sign the product of component signs."""
    if d.is_zero:
        return ZERO_CANONICAL
    encodings = []
    sign = 1
    for comp in d.components:
        enc, s = canonicalize_component(comp, d.mode)
        if s == 0:
            return ZERO_CANONICAL
        sign *= s
        encodings.append(enc)
    encodings.sort()
    return CanonicalDiagram(_SEP_BYTE.join(encodings), sign)


def degree(d: Diagram) -> int:
    """Half the vertex count: the sum of (leaf count - 1) per component."""
    if d.is_zero:
        return 0
    return sum(comp.degree for comp in d.components)


def strut_count(d: Diagram, i: int, j: int) -> int:
    """Multiplicity of the strut with ends colored {i, j} among components."""
    check_color(i)
    check_color(j)
    want = (i, j) if i <= j else (j, i)
    if d.is_zero:
        return 0
    return sum(1 for c in d.components if c.is_strut and c.strut_ends() == want)


def _decode_expr(enc: bytes, pos: int, parent: int,
                 adj: list[list[int]], colors: list[int]) -> tuple[int, int]:
    """Parse one subtree expression; returns (vertex id, next position)."""
    if pos >= len(enc):
        raise StructuralError("truncated component encoding")
    byte = enc[pos]
    if byte == _NODE:
        v = len(adj)
        adj.append([parent])
        colors.append(0)
        a, pos = _decode_expr(enc, pos + 1, v, adj, colors)
        b, pos = _decode_expr(enc, pos, v, adj, colors)
        adj[v] = [parent, a, b]
        return v, pos
    if 1 <= byte <= MARKED_COLOR:
        v = len(adj)
        adj.append([parent])
        colors.append(byte)
        return v, pos + 1
    raise StructuralError(f"bad byte {byte:#x} in component encoding")


def decode_component(enc: bytes) -> TreeComponent:
    """Rebuild the concrete sign +1 representative from its encoding."""
    if len(enc) < 2:
        raise StructuralError("component encoding too short")
    root_color = enc[0]
    if not 1 <= root_color <= MARKED_COLOR:
        raise StructuralError("component encoding must start with a color byte")
    adj: list[list[int]] = [[]]
    colors: list[int] = [root_color]
    child, pos = _decode_expr(enc, 1, 0, adj, colors)
    if pos != len(enc):
        raise StructuralError("trailing bytes in component encoding")
    adj[0] = [child]
    return TreeComponent(tuple(tuple(n) for n in adj), tuple(colors))


def decode_diagram(enc: bytes, mode: Mode, k: int) -> Diagram:
    """Rebuild a concrete diagram from a diagram encoding."""
    if enc == b"":
        return Diagram.zero(mode, k)
    comps = tuple(decode_component(part) for part in enc.split(_SEP_BYTE))
    return Diagram(comps, mode, k)


def _join_components(marked: TreeComponent, marked_leg: int,
                     host_comp: TreeComponent, host_leg: int) -> TreeComponent:
    """Splice ``marked`` onto ``host_comp`` just above ``host_leg``.

    The marked leaf disappears into a new trivalent vertex sitting on the
    host leaf's edge; the new vertex is oriented (edge from the marked
    component, edge to the surviving host leaf, edge into the rest of the
    host component).
    """
    h = len(host_comp.adj)
    m = len(marked.adj)
    # Host vertices keep ids; marked vertices shift by h; the marked leaf
    # is dropped and the new trivalent vertex takes the final id.
    w = h + m - 1

    def shift(u: int) -> int:
        return u if u < marked_leg else u - 1

    adj: list[list[int]] = [list(nbrs) for nbrs in host_comp.adj]
    colors: list[int] = list(host_comp.colors)
    for u in range(m):
        if u == marked_leg:
            continue
        adj.append([w if x == marked_leg else h + shift(x) for x in marked.adj[u]])
        colors.append(marked.colors[u])
    q = h + shift(marked.adj[marked_leg][0])  # stump of the marked leg's edge
    p = host_comp.adj[host_leg][0]            # host leaf's old neighbor
    adj.append([q, host_leg, p])
    colors.append(0)
    adj[host_leg] = [w]
    adj[p] = [w if x == host_leg else x for x in adj[p]]
    return TreeComponent(tuple(tuple(n) for n in adj), tuple(colors))


def graft(marked: TreeComponent, marked_leg: int, host: Diagram,
          host_leg: tuple[int, int], marked_index: Optional[int] = None) -> Diagram:
    """Attach the marked component's distinguished leg just above a host leg.

    ``host_leg`` is (component index, leaf vertex).  When the marked
    component is itself part of ``host``, pass its index as
    ``marked_index``; a graft onto a leg of that same component closes a
    loop and returns the zero diagram.  Otherwise the marked component is
    external and the result's degree is degree(host) + degree(marked).

    Raises DomainError when the two leg colors differ.
    """
    if host.is_zero:
        return host
    ci, v = host_leg
    if not 0 <= ci < len(host.components):
        raise DomainError(f"host has no component {ci}")
    if marked.colors[marked_leg] == 0:
        raise DomainError("marked leg is not a leaf")
    if marked_index is not None and host.components[marked_index] != marked:
        raise DomainError("marked_index does not point at the marked component")
    if marked_index is not None and ci == marked_index:
        return Diagram.zero(host.mode, host.k)
    host_comp = host.components[ci]
    if host_comp.colors[v] == 0:
        raise DomainError("host leg is not a leaf")
    if marked.colors[marked_leg] != host_comp.colors[v]:
        raise DomainError(
            f"leg colors differ: marked {marked.colors[marked_leg]}, "
            f"host {host_comp.colors[v]}")
    joined = _join_components(marked, marked_leg, host_comp, v)
    rest = [comp for idx, comp in enumerate(host.components)
            if idx != ci and idx != marked_index]
    return Diagram(tuple(rest) + (joined,), host.mode, host.k)


def encoding_trivalent_count(enc: bytes) -> int:
    """Trivalent vertices of the encoded diagram (one marker byte each)."""
    return enc.count(_NODE)


def encoding_leaf_colors(enc: bytes) -> tuple[int, ...]:
    """Sorted leaf color multiset of the encoded diagram."""
    return tuple(sorted(b for b in enc if 1 <= b <= MARKED_COLOR))


def render_component(comp: TreeComponent) -> str:
    """Short human-readable form, e.g. '1-2' for a strut, 'Y(1,2,3)'."""
    enc, sign = canonicalize_component(comp, Mode.CONCORDANCE)
    if sign == 0:
        return "0"
    if len(enc) == 2:
        return f"{enc[0]}-{enc[1]}"
    if len(enc) == 4 and enc[1] == _NODE:
        return f"Y({enc[0]},{enc[2]},{enc[3]})"

    def expr(pos: int) -> tuple[str, int]:
        if enc[pos] == _NODE:
            a, pos = expr(pos + 1)
            b, pos = expr(pos)
            return f"({a} {b})", pos
        return str(enc[pos]), pos + 1

    body, _ = expr(1)
    return f"{enc[0]}:{body}"
