"""
Bundle Input/Output
Text formats for complexes, open sets, covers, carrier tables and
retractions, plus the JSON manifest tying them into an index problem
"""

import json
import os
from dataclasses import dataclass, field
from typing import List, Optional

import config
import log_manager
from carrier import AcyclicCarrier, CompositionCarrier
from cover import FiniteCover
from errors import InputError, ParseError
from fixed_point_index import (AdditivityInstance, CommutativityInstance, DominationData, HomotopyInstance,
                               NormalizationInstance, index_problem)
from simplicial import (OpenPolyhedralSet, SimplicialMap, build_complex, parse_vertex_label,
                        subdivision_record, vertex_label, whole_space)


# ===== LINE READING =====

def _lines(path):
    """(line number, content) for every non-blank line, comments removed"""
    try:
        with open(path) as f:
            raw = f.readlines()
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", path)
    for number, line in enumerate(raw, start=1):
        content = line.split(config.COMMENT_PREFIX, 1)[0].strip()
        if content:
            yield number, content


def _vertices(text, path, line):
    try:
        return [parse_vertex_label(token) for token in text.split()]
    except InputError as e:
        raise ParseError(e.message, path, line)


def _simplex(text, complex_, path, line):
    """Vertex labels of one simplex, ordered by the complex"""
    vertices = _vertices(text, path, line)
    if not vertices:
        raise ParseError("empty simplex", path, line)
    if len(set(vertices)) != len(vertices):
        raise ParseError("duplicate vertex inside simplex", path, line)
    try:
        simplex = complex_.sort_simplex(vertices)
    except InputError as e:
        raise ParseError(e.message, path, line)
    if simplex not in complex_:
        raise ParseError(f"{text!r} is not a simplex of the complex", path, line)
    return simplex


# ===== COMPLEXES AND SUBCOMPLEXES =====

def read_complex(path):
    """
    One maximal simplex per line, vertices separated by whitespace

    An optional first line 'vertices: v1 v2 ...' fixes the vertex order;
    otherwise vertices are ordered by first appearance.
    """
    universe = None
    maximal = []
    for number, content in _lines(path):
        if content.startswith(config.VERTICES_DIRECTIVE):
            if universe is not None or maximal:
                raise ParseError(f"'{config.VERTICES_DIRECTIVE}' must be the first line", path, number)
            universe = _vertices(content[len(config.VERTICES_DIRECTIVE):], path, number)
            continue
        vertices = _vertices(content, path, number)
        if len(set(vertices)) != len(vertices):
            raise ParseError("duplicate vertex inside simplex", path, number)
        maximal.append(tuple(vertices))
    if not maximal:
        raise ParseError("complex file lists no simplices", path)
    try:
        return build_complex(maximal, universe)
    except InputError as e:
        raise ParseError(e.message, path)


def write_complex(c, path):
    """Inverse of read_complex: vertex order, then maximal simplices in basis order"""
    with open(path, 'w') as f:
        f.write(' '.join([config.VERTICES_DIRECTIVE] + [vertex_label(v) for v in c.vertices]) + '\n')
        for s in c.all_simplices():
            if not c.cofacets(s):
                f.write(' '.join(vertex_label(v) for v in s) + '\n')


def read_subcomplex(path, complex_):
    """Closure of the simplices listed one per line"""
    simplices = [_simplex(content, complex_, path, number) for number, content in _lines(path)]
    return complex_.closure(simplices)


def read_open_set(path, record):
    """Open set given by the maximal simplices of its closure"""
    return OpenPolyhedralSet(record.complex, read_subcomplex(path, record.complex), record)


# ===== COVERS, CARRIERS, RETRACTIONS =====

def read_cover(path, record):
    """Lines 'name: v1 v2 ...'; each element is the union of the listed open stars"""
    elements = []
    for number, content in _lines(path):
        name, sep, rest = content.partition(config.COVER_SEPARATOR)
        if not sep or not name.strip():
            raise ParseError(f"expected 'name{config.COVER_SEPARATOR} vertices'", path, number)
        centers = []
        for v in _vertices(rest, path, number):
            if (v,) not in record.complex:
                raise ParseError(f"unknown vertex {vertex_label(v)!r}", path, number)
            centers.append(v)
        if not centers:
            raise ParseError(f"cover element {name.strip()!r} has no vertices", path, number)
        elements.append((name.strip(), centers))
    return FiniteCover(record, elements)


def write_cover(cov, path):
    """Inverse of read_cover: one 'name: centers' line per element in cover order"""
    with open(path, 'w') as f:
        for element in cov.elements:
            centers = ' '.join(vertex_label(v) for v in element.centers)
            f.write(f"{element.name}{config.COVER_SEPARATOR} {centers}\n")


def read_carrier_table(path, source, target):
    """Lines 'simplex -> s1 | s2 ...'; the value is the closure of the right-hand simplices"""
    table = {}
    for number, content in _lines(path):
        left, sep, right = content.partition(config.CARRIER_ARROW)
        if not sep:
            raise ParseError(f"expected '{config.CARRIER_ARROW}'", path, number)
        simplex = _simplex(left, source, path, number)
        if simplex in table:
            raise ParseError(f"simplex {left.strip()!r} listed twice", path, number)
        generators = [_simplex(part, target, path, number)
                      for part in right.split(config.CARRIER_SEPARATOR) if part.strip()]
        if not generators:
            raise ParseError(f"empty value for {left.strip()!r}", path, number)
        table[simplex] = generators
    return table


def read_retraction(path, source, target):
    """Lines 'v -> w' giving a vertex map"""
    vertex_map = {}
    for number, content in _lines(path):
        left, sep, right = content.partition(config.CARRIER_ARROW)
        if not sep:
            raise ParseError(f"expected '{config.CARRIER_ARROW}'", path, number)
        v = _simplex(left, source, path, number)
        w = _simplex(right, target, path, number)
        if len(v) != 1 or len(w) != 1:
            raise ParseError("retraction lines map one vertex to one vertex", path, number)
        vertex_map[v[0]] = w[0]
    return vertex_map


# ===== BUNDLES =====

def _level(value, key, path):
    """Nonnegative integer manifest entry"""
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParseError(f"'{key}' must be a nonnegative integer, got {value!r}", path)
    return value


@dataclass
class Bundle:
    """
    An index problem read from a JSON manifest

    Under domination the record, open set and carrier live on the
    dominated subcomplex X.
    """
    path: str
    record: object
    open_set: OpenPolyhedralSet
    carrier: object
    carriers: List[object]
    carrier_level: Optional[int] = None
    domination: Optional[DominationData] = None
    parts: List[OpenPolyhedralSet] = field(default_factory=list)
    end: object = None
    join: object = None
    axiom: Optional[str] = None

    @property
    def name(self):
        return os.path.splitext(os.path.basename(self.path))[0]

    def problem(self):
        return index_problem(self.carrier, self.open_set, self.carrier_level, name=self.name)

    def instance(self):
        """Axiom instance named by the manifest's 'axiom' key"""
        if self.axiom == 'add':
            return AdditivityInstance(self.name, self.carrier, self.open_set, self.parts)
        if self.axiom == 'hom':
            return HomotopyInstance(self.name, self.carrier, self.open_set, end=self.end, join=self.join)
        if self.axiom == 'comm':
            if len(self.carriers) != 2:
                raise ParseError("a commutativity bundle lists exactly two carriers", self.path)
            return CommutativityInstance(self.name, self.carriers[0], self.carriers[1], self.open_set)
        if self.axiom == 'norm':
            return NormalizationInstance(self.name, self.carrier, whole_space(self.open_set.record))
        raise ParseError(f"unknown axiom {self.axiom!r}", self.path)


class _Loader:
    """Resolves manifest paths and shares one subdivision record per complex file"""

    def __init__(self, manifest_path):
        self.path = manifest_path
        self.root = os.path.dirname(os.path.abspath(manifest_path))
        self.records = {}

    def file(self, name):
        return os.path.join(self.root, name)

    def record(self, name):
        key = self.file(name)
        if key not in self.records:
            self.records[key] = subdivision_record(read_complex(key))
        return self.records[key]

    def carrier(self, entry, default_record, monotone_complete):
        if not isinstance(entry, dict) or 'file' not in entry:
            raise ParseError("carrier entries need a 'file' key", self.path)
        source_base = self.record(entry['source_complex']) if 'source_complex' in entry else default_record
        target_base = self.record(entry['target_complex']) if 'target_complex' in entry else default_record
        source = source_base.refined(_level(entry.get('source_level', 0), 'source_level', self.path))
        target = target_base.refined(_level(entry.get('target_level', 0), 'target_level', self.path))
        table = read_carrier_table(self.file(entry['file']), source.complex, target.complex)
        name = os.path.splitext(os.path.basename(entry['file']))[0]
        return AcyclicCarrier.from_table(source.complex, target.complex, table, monotone_complete, name,
                                         source_record=source, target_record=target)


def load_bundle(path, monotone_complete=False):
    """
    Read a JSON manifest

    Keys: complex, level, open_set, carriers (list of {file, source_level,
    target_level, source_complex, target_complex} in application order),
    carrier_level, parts, end, join, axiom, domination {subcomplex, retraction}.
    File names are relative to the manifest.
    """
    try:
        with open(path) as f:
            manifest = json.load(f)
    except OSError as e:
        raise ParseError(f"cannot read manifest: {e.strerror}", path)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path, e.lineno)
    if not isinstance(manifest, dict) or 'complex' not in manifest:
        raise ParseError("manifest needs a 'complex' key", path)

    loader = _Loader(path)
    monotone_complete = monotone_complete or bool(manifest.get('monotone_complete', False))
    base = loader.record(manifest['complex'])

    domination = None
    if 'domination' in manifest:
        entry = manifest['domination']
        if not isinstance(entry, dict) or not {'subcomplex', 'retraction'} <= set(entry):
            raise ParseError("domination needs 'subcomplex' and 'retraction' keys", path)
        subspace = read_subcomplex(loader.file(entry['subcomplex']), base.complex)
        x = subspace.as_complex()
        vertex_map = read_retraction(loader.file(entry['retraction']), base.complex, x)
        domination = DominationData(base, subspace, SimplicialMap(base.complex, x, vertex_map))
        base = domination.x_record

    record = base.refined(_level(manifest.get('level', config.DEFAULT_LEVEL), 'level', path))
    if 'open_set' in manifest:
        open_set = read_open_set(loader.file(manifest['open_set']), record)
    else:
        open_set = whole_space(record)

    entries = manifest.get('carriers') or []
    if not entries:
        raise ParseError("manifest lists no carriers", path)
    carriers = [loader.carrier(e, base, monotone_complete) for e in entries]
    axiom = manifest.get('axiom')
    if axiom == 'comm' or len(carriers) == 1:
        carrier = carriers[0]
    else:
        carrier = CompositionCarrier(carriers)

    parts = [read_open_set(loader.file(p), record) for p in manifest.get('parts', [])]
    end = loader.carrier(manifest['end'], base, monotone_complete) if 'end' in manifest else None
    join = None
    if 'join' in manifest:
        join = read_subcomplex(loader.file(manifest['join']), carrier.target)

    log_manager.log(f"loaded bundle {path}: {len(carriers)} carrier(s), open set {open_set!r}")
    carrier_level = manifest.get('carrier_level')
    if carrier_level is not None:
        carrier_level = _level(carrier_level, 'carrier_level', path)
    return Bundle(path, record, open_set, carrier, carriers, carrier_level,
                  domination, parts, end, join, axiom)
