"""
Tests for complexes, subdivision and open polyhedral sets
"""

from fractions import Fraction

import pytest

import corpus
from errors import MalformedSimplexError, MalformedSubcomplexError, NotFoundError, PreconditionError
from simplicial import (SimplicialMap, build_complex, closed_star, identity_map, neighborhood,
                        open_set_from_closure, open_star, parse_vertex_label, refine_open_set, skeleton,
                        subdivide_subcomplex, subdivision_record, vertex_label, whole_space)


def test_build_complex_takes_face_closure():
    c = build_complex([('a', 'b', 'c')])
    assert c.counts() == [3, 3, 1]
    assert ('a', 'c') in c
    assert c.euler_characteristic() == 1


def test_build_complex_orders_simplices_by_universe():
    c = build_complex([('c', 'a')], universe=['a', 'b', 'c'])
    assert c.simplices(1) == (('a', 'c'),)
    assert c.vertices == ('a', 'c')


def test_duplicate_vertex_is_rejected():
    with pytest.raises(MalformedSimplexError):
        build_complex([('a', 'a', 'b')])


def test_vertex_outside_universe_is_rejected():
    with pytest.raises(MalformedSimplexError):
        build_complex([('a', 'z')], universe=['a', 'b'])


def test_subcomplex_must_be_face_closed():
    c = corpus.triangle()
    with pytest.raises(MalformedSubcomplexError):
        open_set_from_closure(c, [('0', '1')])


def test_stars_on_the_hexagon():
    c = corpus.hexagon()
    assert open_star(c, '0') == {('0',), ('0', '1'), ('0', '5')}
    star = closed_star(c, ('0',))
    assert star.vertices() == ['0', '1', '5']
    with pytest.raises(NotFoundError):
        open_star(c, '9')


def test_skeleton_drops_higher_simplices():
    assert skeleton(corpus.disk(), 1).counts() == [7, 12]
    with pytest.raises(PreconditionError):
        skeleton(corpus.disk(), -1)


def test_neighborhood_grows_by_closed_stars():
    c = corpus.interval()
    point = c.closure([('6',)])
    assert neighborhood(c, point, 0) == point
    assert neighborhood(c, point, 2).vertices() == ['4', '5', '6', '7', '8']


def test_open_set_boundary_is_the_frontier():
    u = corpus.interval_open_set(4, 8)
    assert u.boundary.simplices == {('4',), ('8',)}
    assert ('5', '6') in u.interior_simplices()
    assert not whole_space(corpus.record('disk')).boundary.simplices


@pytest.mark.parametrize('name', ['triangle', 'circle', 'disk', 'projective_plane', 'torus', 'klein_bottle'])
def test_subdivision_preserves_euler_characteristic(name):
    rec = corpus.record(name)
    assert rec.refined(1).complex.euler_characteristic() == rec.complex.euler_characteristic()


def test_triangle_subdivision_counts():
    rec = subdivision_record(corpus.triangle())
    assert rec.refined(1).complex.counts() == [7, 12, 6]
    assert rec.refined(2).complex.count(0) == 25
    assert rec.refined(2).at_level(1) is rec.refined(1)


def test_barycentric_geometry_is_exact():
    rec = subdivision_record(corpus.triangle()).refined(1)
    center = rec.coordinates(('0', '1', '2'))
    assert center == {'0': Fraction(1, 3), '1': Fraction(1, 3), '2': Fraction(1, 3)}
    assert rec.at_level(0).mesh() == 2
    assert rec.mesh() == Fraction(4, 3)


def test_carrier_cell_is_the_last_flag_element():
    rec = subdivision_record(corpus.triangle()).refined(2)
    fine_vertex = ((('0',), ('0', '1')),)
    assert rec.carrier_cell(fine_vertex, 1) == (('0',), ('0', '1'))
    assert rec.carrier_cell(fine_vertex, 0) == ('0', '1')
    with pytest.raises(PreconditionError):
        rec.at_level(0).carrier_cell(('0',), 1)


def test_refined_open_set_covers_the_same_region():
    u = corpus.interval_open_set(0, 4)
    fine = refine_open_set(u, 1)
    assert fine.level == 1
    assert fine.closure.as_complex().counts() == [9, 8]
    assert fine.boundary.simplices == {(('4',),)}


def test_subdivide_subcomplex_of_an_edge():
    rec = corpus.record('circle').refined(1)
    edge = corpus.record('circle').complex.closure([('0', '1')])
    sub = subdivide_subcomplex(rec, edge, 0)
    assert sub.as_complex().counts() == [3, 2]


def test_simplicial_map_orientation_sign():
    c = corpus.triangle()
    swap = SimplicialMap(c, c, {'0': '1', '1': '0', '2': '2'})
    assert swap.image(('0', '1', '2')) == (('0', '1', '2'), -1)
    collapse = SimplicialMap(c, c, {'0': '0', '1': '0', '2': '2'})
    assert collapse.image(('0', '1')) == (('0',), 0)


def test_non_simplicial_vertex_map_is_rejected():
    c = corpus.hexagon()
    with pytest.raises(MalformedSimplexError):
        SimplicialMap(c, c, {v: ('3' if v == '1' else v) for v in c.vertices})


def test_composition_of_rotations():
    r = corpus.rotation_map(1)
    assert r.compose(r).vertex_map == corpus.rotation_map(2).vertex_map


def test_images_and_preimages_of_subcomplexes():
    r = corpus.rotation_map(1)
    c = r.source
    assert r.image_subcomplex(c.closure([('0', '1')])).simplices == {('1',), ('2',), ('1', '2')}
    assert r.preimage_subcomplex(c.closure([('1', '2')])).simplices == {('0',), ('1',), ('0', '1')}


def test_vertex_labels_parse_back():
    vertex = (('a',), ('a', 'b'))
    assert vertex_label(vertex) == '[[a],[a,b]]'
    assert parse_vertex_label('[[a],[a,b]]') == vertex
    assert parse_vertex_label('a') == 'a'
    with pytest.raises(MalformedSimplexError):
        parse_vertex_label('[a,b')


def test_sort_simplex_accepts_any_iterable():
    c = corpus.hexagon()
    assert c.sort_simplex(v for v in ('1', '0')) == ('0', '1')
    assert c.sort_simplex(['1', '0']) == ('0', '1')


@pytest.mark.parametrize('make', [corpus.doubling_map, corpus.rotation_map, corpus.three_clusters_map,
                                  lambda: identity_map(corpus.disk())])
def test_corpus_simplicial_maps_build(make):
    f = make()
    assert all(f.image(s)[0] in f.target for s in f.source.all_simplices())


def test_annulus_retraction_fixes_the_inner_circle():
    d = corpus.annulus_domination()
    assert all(d.retraction(v) == v for v in d.subspace.as_complex().vertices)
    assert d.x_record.complex.counts() == [4, 4]
