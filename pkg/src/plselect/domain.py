"""Finite one-dimensional simplicial complexes over exact rationals.

A :class:`Complex1D` is a vertex list with rational coordinate labels plus a
set of edges between distinct vertices.  Interval-kind complexes are paths
whose coordinates strictly increase and whose edges join consecutive vertices;
graph-kind complexes are arbitrary (loops and duplicate edges are still
rejected: this is a simplicial complex, not a multigraph).

Closed subsets are represented combinatorially as subcomplexes: a
:class:`ClosedSet` holds vertex and edge indices, and every included edge must
bring both endpoints along.  This representation is exact as long as the
functions being discussed change sign only at vertices, which is what
:func:`subdivide` (and the refinement helpers built on it in ``plfun``)
guarantee.  Interiors follow the matching combinatorial rule: an edge's open
part is interior exactly when the edge itself is included, and a vertex is
interior exactly when it is included together with every incident edge.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InvalidDomainError, InvalidParameterError

# ---------------------------------------------------------------------------
# Rationals and cell ids
# ---------------------------------------------------------------------------

Cell = tuple[str, int]  # ("v", vertex_index) or ("e", edge_index)


def as_fraction(value) -> Fraction:
    """Coerce ``value`` to an exact rational; floats are rejected outright."""
    if isinstance(value, float):
        raise InvalidParameterError(
            f"float {value!r} rejected: supply an int, Fraction, or 'p/q' string"
        )
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParameterError(f"not a rational: {value!r}") from exc
    raise InvalidParameterError(f"not a rational: {value!r}")


def cell_id(cell: Cell) -> str:
    return f"{cell[0]}{cell[1]}"


def parse_cell_id(text: str) -> Cell:
    if not text or text[0] not in ("v", "e") or not text[1:].isdigit():
        raise InvalidParameterError(f"bad cell id {text!r}; expected e.g. 'v3' or 'e0'")
    return (text[0], int(text[1:]))


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Complex1D:
    """A finite 1-complex: rational vertex labels plus edges between them."""

    coords: tuple[Fraction, ...]
    edges: tuple[tuple[int, int], ...]
    kind: str = "graph"

    def __post_init__(self):
        if self.kind not in ("interval", "graph"):
            raise InvalidDomainError(f"unknown complex kind {self.kind!r}")
        n = len(self.coords)
        if n == 0:
            raise InvalidDomainError("a complex needs at least one vertex")
        seen: set[tuple[int, int]] = set()
        for a, b in self.edges:
            if not (0 <= a < n and 0 <= b < n):
                raise InvalidDomainError(f"edge ({a},{b}) references a missing vertex")
            if a == b:
                raise InvalidDomainError(f"loop edge at vertex {a} is not simplicial")
            if a > b:
                raise InvalidDomainError(f"edge ({a},{b}) must be stored as (min,max)")
            if (a, b) in seen:
                raise InvalidDomainError(f"duplicate edge ({a},{b})")
            seen.add((a, b))
        if self.kind == "interval":
            if n < 2:
                raise InvalidDomainError("an interval complex needs at least two vertices")
            for i in range(n - 1):
                if not self.coords[i] < self.coords[i + 1]:
                    raise InvalidDomainError(
                        f"interval breakpoints must strictly increase (index {i})"
                    )
            expected = tuple((i, i + 1) for i in range(n - 1))
            if self.edges != expected:
                raise InvalidDomainError(
                    "interval edges must join consecutive vertices in order"
                )

    # -- structure ---------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.coords)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_cells(self) -> int:
        return len(self.coords) + len(self.edges)

    @functools.cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices incident to each vertex."""
        table: list[list[int]] = [[] for _ in self.coords]
        for idx, (a, b) in enumerate(self.edges):
            table[a].append(idx)
            table[b].append(idx)
        return tuple(tuple(row) for row in table)

    @functools.cached_property
    def edge_index(self) -> Mapping[tuple[int, int], int]:
        return {pair: idx for idx, pair in enumerate(self.edges)}

    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components as sorted vertex tuples, ordered by least vertex."""
        seen = [False] * self.n_vertices
        out: list[tuple[int, ...]] = []
        for start in range(self.n_vertices):
            if seen[start]:
                continue
            queue = deque([start])
            seen[start] = True
            comp = []
            while queue:
                v = queue.popleft()
                comp.append(v)
                for e in self.incident[v]:
                    a, b = self.edges[e]
                    w = b if a == v else a
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            out.append(tuple(sorted(comp)))
        return tuple(out)

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def cells(self) -> Iterator[Cell]:
        for v in range(self.n_vertices):
            yield ("v", v)
        for e in range(self.n_edges):
            yield ("e", e)

    def other_end(self, edge: int, vertex: int) -> int:
        a, b = self.edges[edge]
        if vertex == a:
            return b
        if vertex == b:
            return a
        raise InvalidParameterError(f"vertex {vertex} is not an endpoint of edge {edge}")

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "interval":
            return {"kind": "interval", "breakpoints": [str(c) for c in self.coords]}
        return {
            "kind": "graph",
            "vertices": [str(c) for c in self.coords],
            "edges": [[a, b] for a, b in self.edges],
        }


def make_interval(breakpoints: Sequence) -> Complex1D:
    """Interval complex over strictly increasing rational breakpoints."""
    coords = tuple(as_fraction(x) for x in breakpoints)
    if len(coords) < 2:
        raise InvalidDomainError("need at least two breakpoints")
    edges = tuple((i, i + 1) for i in range(len(coords) - 1))
    return Complex1D(coords=coords, edges=edges, kind="interval")


def make_graph(
    coords: Sequence,
    edges: Iterable[Sequence[int]],
    *,
    allow_disconnected: bool = False,
) -> Complex1D:
    """Graph complex; disconnected inputs must be flagged explicitly."""
    cs = tuple(as_fraction(x) for x in coords)
    es = tuple(tuple(sorted((int(a), int(b)))) for a, b in edges)
    dom = Complex1D(coords=cs, edges=es, kind="graph")
    if not allow_disconnected and not dom.is_connected():
        raise InvalidDomainError(
            "complex is disconnected; pass allow_disconnected=True if intended"
        )
    return dom


def complex_from_json(obj) -> Complex1D:
    from .errors import ProblemFormatError

    if not isinstance(obj, dict) or "kind" not in obj:
        raise ProblemFormatError("domain", "expected an object with a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "interval":
            return make_interval([as_fraction(x) for x in obj["breakpoints"]])
        if kind == "graph":
            return make_graph(
                [as_fraction(x) for x in obj["vertices"]],
                obj["edges"],
                allow_disconnected=bool(obj.get("disconnected", False)),
            )
    except KeyError as exc:
        raise ProblemFormatError("domain", f"missing field {exc}") from exc
    raise ProblemFormatError("domain.kind", f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Cell sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellSet:
    """A plain set of cells; no closedness requirement."""

    domain: Complex1D
    vertices: frozenset[int]
    edges: frozenset[int]

    def __post_init__(self):
        for v in self.vertices:
            if not 0 <= v < self.domain.n_vertices:
                raise InvalidParameterError(f"vertex index {v} out of range")
        for e in self.edges:
            if not 0 <= e < self.domain.n_edges:
                raise InvalidParameterError(f"edge index {e} out of range")

    def _check_same_domain(self, other: "CellSet") -> None:
        if self.domain != other.domain:
            raise InvalidParameterError("cell sets live on different complexes")

    def union(self, other: "CellSet") -> "CellSet":
        self._check_same_domain(other)
        return type(self)(self.domain, self.vertices | other.vertices, self.edges | other.edges)

    def intersect(self, other: "CellSet") -> "CellSet":
        self._check_same_domain(other)
        # Intersections of closed sets are closed, so the subclass survives.
        return type(self)(self.domain, self.vertices & other.vertices, self.edges & other.edges)

    __or__ = union
    __and__ = intersect

    def issubset(self, other: "CellSet") -> bool:
        self._check_same_domain(other)
        return self.vertices <= other.vertices and self.edges <= other.edges

    def is_empty(self) -> bool:
        return not self.vertices and not self.edges

    def is_whole(self) -> bool:
        return (
            len(self.vertices) == self.domain.n_vertices
            and len(self.edges) == self.domain.n_edges
        )

    def has_cell(self, cell: Cell) -> bool:
        kind, idx = cell
        return idx in (self.vertices if kind == "v" else self.edges)

    def cells(self) -> Iterator[Cell]:
        for v in sorted(self.vertices):
            yield ("v", v)
        for e in sorted(self.edges):
            yield ("e", e)

    def cell_ids(self) -> list[str]:
        return [cell_id(c) for c in self.cells()]

    def first_cell_outside(self, other: "CellSet") -> Cell | None:
        """Least cell of self not in other (vertices before edges)."""
        for cell in self.cells():
            if not other.has_cell(cell):
                return cell
        return None


class ClosedSet(CellSet):
    """A closed subcomplex: included edges carry both endpoints."""

    def __post_init__(self):
        super().__post_init__()
        for e in self.edges:
            a, b = self.domain.edges[e]
            if a not in self.vertices or b not in self.vertices:
                raise InvalidDomainError(
                    f"edge e{e} included without both endpoints; set is not closed"
                )


def closed_set(domain: Complex1D, vertices: Iterable[int], edges: Iterable[int]) -> ClosedSet:
    return ClosedSet(domain, frozenset(vertices), frozenset(edges))


def closed_from_cells(domain: Complex1D, ids: Iterable[str]) -> ClosedSet:
    vs, es = set(), set()
    for s in ids:
        kind, idx = parse_cell_id(s)
        (vs if kind == "v" else es).add(idx)
    return closed_set(domain, vs, es)


def whole_set(domain: Complex1D) -> ClosedSet:
    return closed_set(domain, range(domain.n_vertices), range(domain.n_edges))


def empty_set(domain: Complex1D) -> ClosedSet:
    return closed_set(domain, (), ())


def interior(s: CellSet) -> CellSet:
    """Combinatorial interior of a cell set.

    An included edge contributes its open part; an included vertex is interior
    only if every incident edge is also included (so isolated vertices of the
    complex are interior whenever they are included).
    """
    verts = {
        v
        for v in s.vertices
        if all(e in s.edges for e in s.domain.incident[v])
    }
    return CellSet(s.domain, frozenset(verts), frozenset(s.edges))


# ---------------------------------------------------------------------------
# Subdivision
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subdivision:
    """Maps objects from a complex onto its subdivision at given edge points.

    ``origin`` records, for each new vertex, either ``("v", old_vertex)`` or
    ``("e", old_edge, t)`` with ``t`` in (0,1) measured from the lower-indexed
    endpoint of the old edge.
    """

    old: Complex1D
    new: Complex1D
    vertex_map: tuple[int, ...]
    origin: tuple[tuple, ...]
    edge_vertices: tuple[tuple[int, ...], ...]  # interior new vertices per old edge
    edge_children: tuple[tuple[int, ...], ...]  # new edge indices per old edge

    def is_identity(self) -> bool:
        return self.new is self.old

    def relocate_values(self, values: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Push per-vertex values to the subdivision by linear interpolation."""
        if len(values) != self.old.n_vertices:
            raise InvalidParameterError("value count does not match the old complex")
        out: list[Fraction] = [Fraction(0)] * self.new.n_vertices
        for nv, org in enumerate(self.origin):
            if org[0] == "v":
                out[nv] = values[org[1]]
            else:
                _, e, t = org
                a, b = self.old.edges[e]
                out[nv] = values[a] + (values[b] - values[a]) * t
        return tuple(out)

    def relocate_set(self, s: CellSet) -> CellSet:
        """Push a cell set to the subdivision (subdividing preserves the points)."""
        if s.domain != self.old:
            raise InvalidParameterError("set lives on a different complex")
        verts = {self.vertex_map[v] for v in s.vertices}
        edges: set[int] = set()
        for e in s.edges:
            verts.update(self.edge_vertices[e])
            edges.update(self.edge_children[e])
        return type(s)(self.new, frozenset(verts), frozenset(edges))


def _identity_subdivision(dom: Complex1D) -> Subdivision:
    return Subdivision(
        old=dom,
        new=dom,
        vertex_map=tuple(range(dom.n_vertices)),
        origin=tuple(("v", i) for i in range(dom.n_vertices)),
        edge_vertices=tuple(() for _ in dom.edges),
        edge_children=tuple((i,) for i in range(dom.n_edges)),
    )


def subdivide(dom: Complex1D, cuts: Mapping[int, Sequence[Fraction]]) -> Subdivision:
    """Insert vertices at parameters ``t`` in (0,1) along the given edges.

    Interval complexes keep their sorted-coordinate invariant: coordinates of
    the new vertices are interpolated and the vertex list is rebuilt in order.
    For graph complexes new vertices are appended after the existing ones.
    """
    clean: dict[int, list[Fraction]] = {}
    for e, ts in cuts.items():
        if not 0 <= e < dom.n_edges:
            raise InvalidParameterError(f"edge index {e} out of range")
        uniq = sorted(set(Fraction(t) for t in ts))
        for t in uniq:
            if not (0 < t < 1):
                raise InvalidParameterError(f"cut parameter {t} not strictly inside (0,1)")
        if uniq:
            clean[e] = uniq
    if not clean:
        return _identity_subdivision(dom)

    # Build the new vertex list: old vertices first, then insertions.
    new_coords: list[Fraction] = list(dom.coords)
    origin: list[tuple] = [("v", i) for i in range(dom.n_vertices)]
    edge_new_vertices: dict[int, list[int]] = {}
    for e in sorted(clean):
        a, b = dom.edges[e]
        ids = []
        for t in clean[e]:
            coord = dom.coords[a] + (dom.coords[b] - dom.coords[a]) * t
            ids.append(len(new_coords))
            new_coords.append(coord)
            origin.append(("e", e, t))
        edge_new_vertices[e] = ids

    if dom.kind == "interval":
        order = sorted(range(len(new_coords)), key=lambda i: new_coords[i])
    else:
        order = list(range(len(new_coords)))
    position = [0] * len(new_coords)
    for pos, old_idx in enumerate(order):
        position[old_idx] = pos

    coords = tuple(new_coords[i] for i in order)
    origin_sorted = tuple(origin[i] for i in order)
    vertex_map = tuple(position[i] for i in range(dom.n_vertices))

    new_edges: list[tuple[int, int]] = []
    edge_children: list[tuple[int, ...]] = []
    edge_vertices: list[tuple[int, ...]] = []
    for e, (a, b) in enumerate(dom.edges):
        inserted = [position[i] for i in edge_new_vertices.get(e, [])]
        chain = [vertex_map[a]] + inserted + [vertex_map[b]]
        children = []
        for u, w in zip(chain, chain[1:]):
            children.append(len(new_edges))
            new_edges.append((min(u, w), max(u, w)))
        edge_children.append(tuple(children))
        edge_vertices.append(tuple(inserted))

    if dom.kind == "interval":
        # Rebuild edges in left-to-right order and remap the bookkeeping.
        sorted_edges = tuple((i, i + 1) for i in range(len(coords) - 1))
        lookup = {pair: idx for idx, pair in enumerate(sorted_edges)}
        remap = [lookup[pair] for pair in new_edges]
        edge_children = [tuple(remap[c] for c in ch) for ch in edge_children]
        new_domain = Complex1D(coords=coords, edges=sorted_edges, kind="interval")
    else:
        new_domain = Complex1D(coords=coords, edges=tuple(new_edges), kind="graph")

    return Subdivision(
        old=dom,
        new=new_domain,
        vertex_map=vertex_map,
        origin=origin_sorted,
        edge_vertices=tuple(edge_vertices),
        edge_children=tuple(edge_children),
    )


# ---------------------------------------------------------------------------
# Subcomplex extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubcomplexView:
    """A closed set realized as its own complex, with maps back to the parent."""

    parent: Complex1D
    complex: Complex1D
    vertex_to_parent: tuple[int, ...]
    edge_to_parent: tuple[int, ...]

    @functools.cached_property
    def parent_vertex_index(self) -> Mapping[int, int]:
        return {pv: i for i, pv in enumerate(self.vertex_to_parent)}

    def restrict_values(self, values: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(values[pv] for pv in self.vertex_to_parent)

    def lift_values(self, values: Sequence[Fraction]) -> dict[int, Fraction]:
        """Values on the subcomplex as a parent-vertex -> value mapping."""
        return {pv: values[i] for i, pv in enumerate(self.vertex_to_parent)}

    def restrict_set(self, s: CellSet) -> CellSet:
        verts = frozenset(
            self.parent_vertex_index[v] for v in s.vertices if v in self.parent_vertex_index
        )
        edge_lookup = {pe: i for i, pe in enumerate(self.edge_to_parent)}
        edges = frozenset(edge_lookup[e] for e in s.edges if e in edge_lookup)
        return type(s)(self.complex, verts, edges)


def extract(s: ClosedSet) -> SubcomplexView:
    """Realize a nonempty closed set as a standalone complex."""
    if s.is_empty():
        raise InvalidParameterError("cannot extract an empty set as a complex")
    verts = sorted(s.vertices)
    index = {v: i for i, v in enumerate(verts)}
    coords = tuple(s.domain.coords[v] for v in verts)
    edge_ids = sorted(s.edges)
    edges = []
    for e in edge_ids:
        a, b = s.domain.edges[e]
        ia, ib = index[a], index[b]
        edges.append((min(ia, ib), max(ia, ib)))
    sub = Complex1D(coords=coords, edges=tuple(edges), kind="graph")
    return SubcomplexView(
        parent=s.domain,
        complex=sub,
        vertex_to_parent=tuple(verts),
        edge_to_parent=tuple(edge_ids),
    )
