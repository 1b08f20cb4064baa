"""
Tests for star covers, nerves and refinement projections
"""

import pytest

import corpus
from chain import is_chain_map
from cover import (FiniteCover, element_contains, nerve, projection_homotopy, refinement_projection,
                   star_cover, support)
from errors import NotARefinementError, NotFoundError, PreconditionError


def test_nerve_of_a_star_cover_is_the_complex():
    rec = corpus.record('triangle')
    n = nerve(star_cover(rec))
    assert n.complex.counts() == rec.complex.counts()


def test_nerve_of_a_subdivided_circle():
    rec = corpus.record('circle').refined(1)
    assert nerve(star_cover(rec)).complex.counts() == [12, 12]


def test_cover_must_cover_every_simplex():
    rec = corpus.record('circle')
    with pytest.raises(PreconditionError):
        FiniteCover(rec, [('a', ['0']), ('b', ['3'])])


def test_cover_names_are_unique():
    rec = corpus.record('triangle')
    with pytest.raises(PreconditionError):
        FiniteCover(rec, [('a', ['0', '1']), ('a', ['2'])])


def test_two_element_cover_of_the_circle():
    rec = corpus.record('circle')
    cov = FiniteCover(rec, [('left', ['0', '1', '2']), ('right', ['3', '4', '5'])])
    n = nerve(cov)
    assert n.complex.counts() == [2, 1]
    assert cov.names() == ['left', 'right']
    assert n.support(('left', 'right')) == cov.element('left').cells | cov.element('right').cells
    with pytest.raises(NotFoundError):
        cov.element('middle')


def test_fine_stars_lie_in_coarse_stars():
    rec = corpus.record('triangle')
    coarse, fine = star_cover(rec), star_cover(rec.refined(1))
    assert element_contains(coarse, coarse.element('0'), fine, fine.element('[0]'))
    assert not element_contains(coarse, coarse.element('1'), fine, fine.element('[0]'))
    assert not element_contains(fine, fine.element('[0]'), coarse, coarse.element('0'))


def test_refinement_projection_is_a_chain_map():
    rec = corpus.record('circle')
    smap, chain_map = refinement_projection(star_cover(rec.refined(1)), star_cover(rec))
    assert smap('[0]') == '0'
    assert smap('[0,1]') == '0'
    assert is_chain_map(chain_map).ok


def test_projection_needs_a_refinement():
    rec = corpus.record('circle')
    with pytest.raises(NotARefinementError):
        refinement_projection(star_cover(rec), star_cover(rec.refined(1)))


def test_projections_are_homotopic():
    rec = corpus.record('circle')
    result = projection_homotopy(star_cover(rec.refined(2)), star_cover(rec.refined(1)), star_cover(rec))
    assert result.homotopy.degree == 1


def test_support_of_a_nerve_chain():
    rec = corpus.record('circle')
    n = nerve(star_cover(rec))
    cells = support({('0', '1'): 1, ('1',): 0}, n)
    assert cells == n.support(('0', '1'))
