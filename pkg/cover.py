"""
Finite Star Covers
Covers of a subdivided polyhedron by unions of open vertex stars, their
nerves and refinement projections between nerves
"""

from dataclasses import dataclass
from typing import Tuple

import log_manager
from carrier import AcyclicCarrier, ChainApproximation, homotopy_between
from chain import chain_support, simplicial_chain_map
from errors import InvariantError, NotARefinementError, NotFoundError, PreconditionError
from simplicial import SimplicialComplex, SimplicialMap, open_star, vertex_label


class CoverElement:
    """Named open set: the union of the open stars of some vertices"""

    def __init__(self, name, complex_, centers):
        self.name = name
        self.centers = tuple(centers)
        cells = set()
        for v in self.centers:
            cells.update(open_star(complex_, v))
        self.cells = frozenset(cells)

    def __repr__(self):
        return f"CoverElement({self.name!r}, {len(self.cells)} cells)"


class FiniteCover:
    """Ordered finite cover of tau^k by star unions"""

    def __init__(self, record, elements):
        """
        Initialize cover

        Args:
            record: SubdivisionRecord whose complex is covered
            elements: List of (name, vertex list) pairs in their fixed order
        """
        self.record = record
        self.complex = record.complex
        self.elements = []
        names = set()
        for name, centers in elements:
            if name in names:
                raise PreconditionError(f"cover element {name!r} listed twice")
            names.add(name)
            self.elements.append(CoverElement(name, self.complex, centers))

        covered = set()
        for element in self.elements:
            covered |= element.cells
        missing = [s for s in self.complex.all_simplices() if s not in covered]
        if missing:
            raise PreconditionError(f"cover misses simplex {missing[0]!r}")
        self._by_name = {e.name: e for e in self.elements}

    @property
    def level(self):
        return self.record.level

    def __len__(self):
        return len(self.elements)

    def element(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise NotFoundError(f"no cover element named {name!r}")

    def names(self):
        return [e.name for e in self.elements]


def star_cover(rec):
    """One element per vertex of tau^k: its open star"""
    return FiniteCover(rec, [(vertex_label(v), [v]) for v in rec.complex.vertices])


def element_contains(coarse_cover, coarse, fine_cover, fine):
    """
    True when the open set of fine lies inside the open set of coarse

    Open cells partition the polyhedron; a fine cell lies in the open cell
    of its carrier cell at the coarse level.
    """
    if fine_cover.record.base != coarse_cover.record.base:
        raise PreconditionError("covers of different base complexes")
    if fine_cover.level < coarse_cover.level:
        return False
    rec = fine_cover.record
    return all(rec.carrier_cell(s, coarse_cover.level) in coarse.cells for s in fine.cells)


@dataclass
class NerveComplex:
    cover: FiniteCover
    complex: SimplicialComplex

    def support(self, simplex):
        """Union of the cover elements spanning a nerve simplex"""
        cells = set()
        for name in simplex:
            cells |= self.cover.element(name).cells
        return frozenset(cells)


def nerve(cov):
    """
    Nerve of a cover: one simplex per family of elements with a common cell

    For star covers the nerve is asserted isomorphic to tau^k via
    star <-> vertex.
    """
    elements = cov.elements
    simplices = []
    frontier = [((i,), elements[i].cells) for i in range(len(elements))]
    while frontier:
        simplices.extend(idx for idx, _ in frontier)
        grown = []
        for idx, common in frontier:
            for j in range(idx[-1] + 1, len(elements)):
                meet = common & elements[j].cells
                if meet:
                    grown.append((idx + (j,), meet))
        frontier = grown

    names = [e.name for e in elements]
    complex_ = SimplicialComplex(names, [tuple(names[i] for i in idx) for idx in simplices])
    result = NerveComplex(cov, complex_)

    if _is_star_cover(cov):
        expected = {tuple(vertex_label(v) for v in s) for s in cov.complex.all_simplices()}
        if set(complex_.all_simplices()) != expected:
            raise InvariantError("nerve of a star cover is not isomorphic to the subdivision")
    log_manager.log(f"nerve of {len(cov)} elements: counts {complex_.counts()}")
    return result


def _is_star_cover(cov):
    vertices = cov.complex.vertices
    return (len(cov.elements) == len(vertices)
            and all(e.centers == (v,) and e.name == vertex_label(v)
                    for e, v in zip(cov.elements, vertices)))


def refinement_projection(fine, coarse, fine_nerve=None, coarse_nerve=None):
    """
    pi(fine, coarse): each fine element goes to the first coarse element containing it

    Returns:
        (SimplicialMap between nerves, its GradedIntegerMap)
    """
    fine_nerve = fine_nerve or nerve(fine)
    coarse_nerve = coarse_nerve or nerve(coarse)
    vertex_map = {}
    for element in fine.elements:
        target = next((c for c in coarse.elements
                       if element_contains(coarse, c, fine, element)), None)
        if target is None:
            raise NotARefinementError(f"cover element {element.name!r} lies in no coarser element",
                                      {'element': element.name})
        vertex_map[element.name] = target.name
    smap = SimplicialMap(fine_nerve.complex, coarse_nerve.complex, vertex_map)
    return smap, simplicial_chain_map(smap)


def support(chain, nerve_complex):
    """Union of the supports of the simplices with nonzero coefficient"""
    cells = set()
    for s in chain_support(chain):
        cells |= nerve_complex.support(s)
    return frozenset(cells)


@dataclass
class ProjectionHomotopy:
    direct: Tuple
    composite: Tuple
    homotopy: object


def projection_homotopy(fine, mid, coarse):
    """
    Carried homotopy between pi(fine, coarse) and pi(mid, coarse) after pi(fine, mid)

    Both projections are contiguous: on each nerve simplex their images
    span one simplex of the coarse nerve, whose closure carries both.
    """
    fine_nerve, mid_nerve, coarse_nerve = nerve(fine), nerve(mid), nerve(coarse)
    direct, direct_chain = refinement_projection(fine, coarse, fine_nerve, coarse_nerve)
    first, _ = refinement_projection(fine, mid, fine_nerve, mid_nerve)
    second, _ = refinement_projection(mid, coarse, mid_nerve, coarse_nerve)
    composite = second.compose(first)
    composite_chain = simplicial_chain_map(composite)

    target = coarse_nerve.complex
    assignment = {}
    for s in fine_nerve.complex.all_simplices():
        joined = target.sort_simplex([direct(v) for v in s] + [composite(v) for v in s])
        if joined not in target:
            raise InvariantError(f"projections are not contiguous on {s!r}")
        assignment[s] = target.closure([joined])
    carrier = AcyclicCarrier(fine_nerve.complex, target, assignment, name='contiguity')

    a1 = ChainApproximation(carrier, direct_chain)
    a2 = ChainApproximation(carrier, composite_chain)
    homotopy = homotopy_between(a1, a2)
    return ProjectionHomotopy((direct, direct_chain), (composite, composite_chain), homotopy)
