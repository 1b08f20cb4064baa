"""
Finite Simplicial Complexes
Abstract complexes with ordered vertices, subcomplexes, stars, skeleta,
barycentric subdivision and open polyhedral sets
"""

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

import log_manager
from errors import (InvariantError, MalformedSimplexError, MalformedSubcomplexError,
                    NotFoundError, PreconditionError)


Simplex = Tuple


class SimplicialComplex:
    """Finite abstract simplicial complex with a global vertex order"""

    def __init__(self, vertices, simplices):
        """
        Build from an ordered vertex list and a face-closed simplex set

        Args:
            vertices: Vertex identifiers in their global order
            simplices: Iterable of vertex tuples, each ascending in that order

        Use build_complex() for unchecked user input.
        """
        self.vertices = tuple(vertices)
        self._order = {v: i for i, v in enumerate(self.vertices)}

        by_dim = {}
        for s in simplices:
            by_dim.setdefault(len(s) - 1, []).append(tuple(s))
        top = max(by_dim) if by_dim else -1
        self._simplices = tuple(
            tuple(sorted(set(by_dim.get(k, ())), key=self.key)) for k in range(top + 1)
        )
        self._position = {}
        for layer in self._simplices:
            for i, s in enumerate(layer):
                self._position[s] = i
        self._cofacets = None
        self._hash = None

    # ----- basic queries -----

    @property
    def dimension(self):
        return len(self._simplices) - 1

    def key(self, simplex):
        """Sort key of a simplex: tuple of vertex positions"""
        return tuple(self._order[v] for v in simplex)

    def vertex_position(self, vertex):
        try:
            return self._order[vertex]
        except KeyError:
            raise NotFoundError(f"unknown vertex {vertex!r}")

    def simplices(self, k):
        """Basis of C_k: the k-simplices in canonical order"""
        if 0 <= k < len(self._simplices):
            return self._simplices[k]
        return ()

    def all_simplices(self):
        for layer in self._simplices:
            yield from layer

    def count(self, k):
        return len(self.simplices(k))

    def counts(self):
        return [len(layer) for layer in self._simplices]

    def __len__(self):
        return len(self._position)

    def __contains__(self, simplex):
        return tuple(simplex) in self._position

    def index(self, simplex):
        """Position of a simplex in the basis of its dimension"""
        try:
            return self._position[tuple(simplex)]
        except KeyError:
            raise NotFoundError(f"simplex {simplex!r} not in complex")

    def is_empty(self):
        return not self._position

    def sort_simplex(self, vertices):
        """Order a vertex collection by the global vertex order"""
        vertices = list(vertices)
        for v in vertices:
            if v not in self._order:
                raise NotFoundError(f"unknown vertex {v!r}")
        return tuple(sorted(set(vertices), key=self._order.__getitem__))

    # ----- faces and cofaces -----

    @staticmethod
    def facets(simplex):
        """Codimension-one faces, i-th face drops vertex i"""
        if len(simplex) <= 1:
            return []
        return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]

    @staticmethod
    def faces(simplex):
        """All nonempty faces of a simplex, itself included"""
        result = []
        for size in range(1, len(simplex) + 1):
            result.extend(combinations(simplex, size))
        return result

    def cofacets(self, simplex):
        """Simplices having this simplex as a codimension-one face"""
        if self._cofacets is None:
            table = {s: [] for s in self._position}
            for s in self.all_simplices():
                for f in self.facets(s):
                    table[f].append(s)
            self._cofacets = table
        try:
            return self._cofacets[tuple(simplex)]
        except KeyError:
            raise NotFoundError(f"simplex {simplex!r} not in complex")

    def cofaces(self, simplex):
        """All simplices strictly containing the given one"""
        found = set()
        frontier = list(self.cofacets(simplex))
        while frontier:
            s = frontier.pop()
            if s not in found:
                found.add(s)
                frontier.extend(self.cofacets(s))
        return sorted(found, key=lambda s: (len(s), self.key(s)))

    def is_face_closed(self, simplices):
        simplices = set(simplices)
        for s in simplices:
            if s not in self._position:
                return False
            for f in self.facets(s):
                if f not in simplices:
                    return False
        return True

    # ----- subcomplexes -----

    def closure(self, simplices):
        """Face closure of a collection of simplices, as a Subcomplex"""
        closed = set()
        for s in simplices:
            s = tuple(s)
            if s not in self._position:
                raise NotFoundError(f"simplex {s!r} not in complex")
            closed.update(self.faces(s))
        return Subcomplex(self, closed)

    def subcomplex(self, simplices):
        """Wrap a face-closed collection; raises MalformedSubcomplexError otherwise"""
        simplices = {tuple(s) for s in simplices}
        if not self.is_face_closed(simplices):
            raise MalformedSubcomplexError("simplex set is not face-closed in the ambient complex")
        return Subcomplex(self, simplices)

    def whole(self):
        return Subcomplex(self, set(self._position))

    def restricted(self, simplices):
        """SimplicialComplex on a face-closed subset, keeping this vertex order"""
        simplices = set(simplices)
        used = {v for s in simplices for v in s}
        return SimplicialComplex([v for v in self.vertices if v in used], simplices)

    def euler_characteristic(self):
        return sum((-1) ** k * len(layer) for k, layer in enumerate(self._simplices))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self._simplices == other._simplices

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vertices, self._simplices))
        return self._hash

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dimension}, counts={self.counts()})"


class Subcomplex:
    """Face-closed subset of a parent complex"""

    def __init__(self, parent, simplices):
        self.parent = parent
        self.simplices = frozenset(tuple(s) for s in simplices)
        self._complex = None

    def __contains__(self, simplex):
        return tuple(simplex) in self.simplices

    def __iter__(self):
        return iter(sorted(self.simplices, key=lambda s: (len(s), self.parent.key(s))))

    def __len__(self):
        return len(self.simplices)

    def __eq__(self, other):
        if not isinstance(other, Subcomplex):
            return NotImplemented
        return self.simplices == other.simplices and self.parent == other.parent

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        return f"Subcomplex({len(self.simplices)} simplices of {self.parent!r})"

    @property
    def dimension(self):
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def is_empty(self):
        return not self.simplices

    def vertices(self):
        return [v for v in self.parent.vertices if (v,) in self.simplices]

    def least_vertex(self):
        for v in self.parent.vertices:
            if (v,) in self.simplices:
                return v
        raise NotFoundError("empty subcomplex has no vertices")

    def greatest_vertex(self):
        for v in reversed(self.parent.vertices):
            if (v,) in self.simplices:
                return v
        raise NotFoundError("empty subcomplex has no vertices")

    def union(self, other):
        return Subcomplex(self.parent, self.simplices | other.simplices)

    def intersection(self, other):
        return Subcomplex(self.parent, self.simplices & other.simplices)

    def issubset(self, other):
        return self.simplices <= other.simplices

    def shares_simplex(self, other):
        return not self.simplices.isdisjoint(other.simplices)

    def as_complex(self):
        """Standalone complex with the parent's vertex order (cached)"""
        if self._complex is None:
            self._complex = self.parent.restricted(self.simplices)
        return self._complex


def build_complex(maximal_simplices, universe=None):
    """
    Face closure of a list of vertex tuples

    Args:
        maximal_simplices: Iterable of nonempty vertex tuples
        universe: Declared vertex order; default is order of first appearance

    Returns:
        SimplicialComplex
    """
    maximal_simplices = [tuple(s) for s in maximal_simplices]
    if universe is None:
        order = []
        seen = set()
        for s in maximal_simplices:
            for v in s:
                if v not in seen:
                    seen.add(v)
                    order.append(v)
    else:
        order = list(universe)
        if len(set(order)) != len(order):
            raise MalformedSimplexError("vertex universe lists a vertex twice")
    position = {v: i for i, v in enumerate(order)}

    simplices = set()
    for s in maximal_simplices:
        if not s:
            raise MalformedSimplexError("empty simplex")
        if len(set(s)) != len(s):
            raise MalformedSimplexError(f"duplicate vertex inside simplex {s!r}")
        for v in s:
            if v not in position:
                raise MalformedSimplexError(f"vertex {v!r} not in the declared universe")
        ordered = tuple(sorted(s, key=position.__getitem__))
        for size in range(1, len(ordered) + 1):
            simplices.update(combinations(ordered, size))

    used = {v for s in simplices for v in s}
    return SimplicialComplex([v for v in order if v in used], simplices)


def open_star(c, v):
    """All simplices having v as a vertex"""
    if (v,) not in c:
        raise NotFoundError(f"unknown vertex {v!r}")
    return {(v,)} | {s for s in c.cofaces((v,))}


def closed_star(c, s):
    """Face closure of all simplices containing s"""
    s = tuple(s)
    if s not in c:
        raise NotFoundError(f"simplex {s!r} not in complex")
    return c.closure([s] + c.cofaces(s))


def skeleton(c, n):
    """Simplices of dimension <= n"""
    if n < 0:
        raise PreconditionError("skeleton dimension must be nonnegative")
    return SimplicialComplex(c.vertices, [s for s in c.all_simplices() if len(s) - 1 <= n])


def neighborhood(c, sub, radius):
    """Grow a subcomplex by closed stars, radius times"""
    current = sub
    for _ in range(radius):
        touched = set()
        for v in current.vertices():
            touched.update(open_star(c, v))
        current = c.closure(touched | set(current.simplices))
    return current


# ===== OPEN POLYHEDRAL SETS =====

class OpenPolyhedralSet:
    """Open set U recorded through its closure and boundary"""

    def __init__(self, ambient, closure, record=None):
        """
        Args:
            ambient: SimplicialComplex (tau^k)
            closure: Subcomplex of ambient
            record: SubdivisionRecord whose complex is ambient (optional)
        """
        self.ambient = ambient
        self.closure = closure
        self.record = record
        frontier = [s for s in closure.simplices
                    if any(t not in closure for t in ambient.cofacets(s))]
        self.boundary = ambient.closure(frontier)

    @property
    def level(self):
        return self.record.level if self.record is not None else None

    def is_empty(self):
        return self.closure.is_empty()

    def is_whole(self):
        return len(self.closure) == len(self.ambient)

    def interior_simplices(self):
        return self.closure.simplices - self.boundary.simplices

    def __repr__(self):
        return (f"OpenPolyhedralSet(closure={len(self.closure)} simplices, "
                f"boundary={len(self.boundary)} simplices)")


def open_set_from_closure(ambient, closure_simplices, record=None):
    """
    Open polyhedral set from its closure

    Raises MalformedSubcomplexError when the simplices are not face-closed.
    An empty closure is allowed here; index problems reject it downstream.
    """
    closure = ambient.subcomplex(closure_simplices)
    return OpenPolyhedralSet(ambient, closure, record)


def whole_space(record):
    """U = K at the record's level"""
    return OpenPolyhedralSet(record.complex, record.complex.whole(), record)


# ===== BARYCENTRIC SUBDIVISION =====

class SubdivisionRecord:
    """The k-th barycentric subdivision of a base complex with exact geometry"""

    def __init__(self, base, level, complex_, geometry, parent=None):
        """
        Args:
            base: Level 0 SimplicialComplex
            level: Subdivision level k
            complex_: tau^k
            geometry: vertex of tau^k -> numpy object array of Fractions
                      (barycentric coordinates over base.vertices)
            parent: Record at level k-1 (None at level 0)
        """
        self.base = base
        self.level = level
        self.complex = complex_
        self.geometry = geometry
        self.parent = parent
        self._finer = None

    def __repr__(self):
        return f"SubdivisionRecord(level={self.level}, {self.complex!r})"

    def at_level(self, j):
        """Record of a coarser level"""
        if j > self.level or j < 0:
            raise PreconditionError(f"level {j} not available below {self.level}")
        rec = self
        while rec.level > j:
            rec = rec.parent
        return rec

    def refined(self, j):
        """Record of a finer (or equal) level, subdividing as needed; cached"""
        if j < self.level:
            return self.at_level(j)
        rec = self
        while rec.level < j:
            if rec._finer is None:
                rec._finer = barycentric_subdivide(rec)
            rec = rec._finer
        return rec

    def coordinates(self, vertex):
        """Nonzero barycentric coordinates of a tau^k vertex over base vertices"""
        vector = self.geometry[vertex]
        return {self.base.vertices[i]: x for i, x in enumerate(vector) if x != 0}

    def carrier_cell(self, simplex, j):
        """Simplex of tau^j whose open cell contains the open cell of simplex"""
        if j > self.level:
            raise PreconditionError(f"cannot carry level {self.level} cells to finer level {j}")
        cell = tuple(simplex)
        for _ in range(self.level - j):
            cell = cell[-1]
        return cell

    def mesh(self):
        """Largest l1 distance between adjacent vertices, exact"""
        largest = Fraction(0)
        for a, b in self.complex.simplices(1):
            d = np.abs(self.geometry[a] - self.geometry[b]).sum()
            largest = max(largest, Fraction(d))
        return largest


def subdivision_record(base):
    """Level 0 record: identity geometry"""
    n = len(base.vertices)
    geometry = {}
    for i, v in enumerate(base.vertices):
        vector = np.array([Fraction(0)] * n, dtype=object)
        vector[i] = Fraction(1)
        geometry[v] = vector
    return SubdivisionRecord(base, 0, base, geometry)


def barycentric_subdivide(rec):
    """
    One barycentric subdivision step

    Vertices of the new complex are the simplices of the old one (ordered by
    dimension, then basis position); simplices are flags of faces.
    """
    old = rec.complex
    new_vertices = list(old.all_simplices())

    flags_ending = {}
    for s in new_vertices:
        flags = [(s,)]
        for face in SimplicialComplex.faces(s):
            if face != s:
                flags.extend(f + (s,) for f in flags_ending[face])
        flags_ending[s] = flags

    new_simplices = [f for s in new_vertices for f in flags_ending[s]]
    complex_ = SimplicialComplex(new_vertices, new_simplices)

    geometry = {}
    for s in new_vertices:
        total = sum((rec.geometry[v] for v in s[1:]), rec.geometry[s[0]].copy())
        geometry[s] = total * Fraction(1, len(s))

    if complex_.euler_characteristic() != old.euler_characteristic():
        raise InvariantError("subdivision changed the Euler characteristic")

    log_manager.log(f"subdivided to level {rec.level + 1}: counts {complex_.counts()}")
    return SubdivisionRecord(rec.base, rec.level + 1, complex_, geometry, parent=rec)


def subdivide_subcomplex(rec, sub, from_level):
    """
    Subdivision of a level-from_level subcomplex inside rec.complex

    Returns the Subcomplex of all simplices whose carrier cell lies in sub.
    """
    members = [s for s in rec.complex.all_simplices()
               if rec.carrier_cell(s, from_level) in sub]
    return Subcomplex(rec.complex, members)


def refine_open_set(open_set, level):
    """The same open set seen at a finer subdivision level"""
    if open_set.record is None:
        raise PreconditionError("open set has no subdivision record")
    rec = open_set.record.refined(level)
    closure = subdivide_subcomplex(rec, open_set.closure, open_set.record.level)
    return OpenPolyhedralSet(rec.complex, closure, rec)


# ===== SIMPLICIAL MAPS =====

class SimplicialMap:
    """Vertex map between complexes sending simplices to simplices"""

    def __init__(self, source, target, vertex_map):
        """
        Args:
            source: SimplicialComplex
            target: SimplicialComplex
            vertex_map: dict source vertex -> target vertex
        """
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        for v in source.vertices:
            if v not in self.vertex_map:
                raise NotFoundError(f"vertex {v!r} has no image")
            if (self.vertex_map[v],) not in target:
                raise NotFoundError(f"image {self.vertex_map[v]!r} of {v!r} not in target")
        for s in source.all_simplices():
            image = target.sort_simplex(self.vertex_map[v] for v in s)
            if image not in target:
                raise MalformedSimplexError(f"image of {s!r} is not a simplex of the target")

    def __call__(self, vertex):
        return self.vertex_map[vertex]

    def image(self, simplex):
        """
        Image simplex with orientation sign

        Returns:
            (ordered target simplex, sign) with sign 0 for degenerate images
        """
        images = [self.vertex_map[v] for v in simplex]
        ordered = self.target.sort_simplex(images)
        if len(ordered) < len(images):
            return ordered, 0
        return ordered, permutation_sign([self.target.vertex_position(v) for v in images])

    def compose(self, first):
        """self after first"""
        return SimplicialMap(first.source, self.target,
                             {v: self.vertex_map[first.vertex_map[v]] for v in first.source.vertices})

    def image_subcomplex(self, sub):
        return self.target.closure(self.image(s)[0] for s in sub.simplices)

    def preimage_subcomplex(self, sub):
        """Simplices whose image lies in sub (face-closed)"""
        return Subcomplex(self.source,
                          [s for s in self.source.all_simplices() if self.image(s)[0] in sub])


def identity_map(c):
    return SimplicialMap(c, c, {v: v for v in c.vertices})


def permutation_sign(values):
    """Sign of the permutation sorting distinct values"""
    sign = 1
    values = list(values)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i] > values[j]:
                sign = -sign
    return sign


# ===== VERTEX LABELS =====

def vertex_label(vertex):
    """Text form: base vertices print as themselves, subdivision vertices as [a,b]"""
    if isinstance(vertex, tuple):
        return '[' + ','.join(vertex_label(v) for v in vertex) + ']'
    return str(vertex)


def simplex_labels(simplex):
    return [vertex_label(v) for v in simplex]


def parse_vertex_label(text):
    """Inverse of vertex_label for string base vertices"""
    value, rest = _parse_label(text.strip())
    if rest:
        raise MalformedSimplexError(f"trailing text in vertex label {text!r}")
    return value


def _parse_label(text):
    if not text.startswith('['):
        end = min((i for i in (text.find(','), text.find(']')) if i >= 0), default=len(text))
        if end == 0:
            raise MalformedSimplexError("empty vertex label")
        return text[:end], text[end:]
    items = []
    rest = text[1:]
    while True:
        item, rest = _parse_label(rest)
        items.append(item)
        if rest.startswith(','):
            rest = rest[1:]
        elif rest.startswith(']'):
            return tuple(items), rest[1:]
        else:
            raise MalformedSimplexError(f"unbalanced vertex label {text!r}")
