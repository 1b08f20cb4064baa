"""
Tests for the integer chain algebra
"""

from itertools import combinations

import pytest

import corpus
from chain import (GradedIntegerMap, SparseIntegerMatrix, boundary_matrices, chain_add, chain_boundary,
                   cohomology, homology, homology_class, induced_map_on_cohomology, induced_map_on_homology,
                   is_chain_map, lefschetz_number, simplicial_chain_map, smith_normal_form, solve_boundary,
                   subdivision_chain_map, verify_chain_homotopy, verify_uct)
from errors import InvariantError, LevelMismatchError, PreconditionError, ShapeError
from simplicial import SimplicialMap, identity_map

HEXAGON_RIM = {('0', '1'): 1, ('1', '2'): 1, ('2', '3'): 1, ('3', '4'): 1, ('4', '5'): 1, ('0', '5'): -1}


def test_sparse_matrix_arithmetic():
    a = SparseIntegerMatrix.from_dense([[1, 2], [0, 3]])
    b = SparseIntegerMatrix.identity(2)
    assert a @ b == a
    assert (a - a).is_zero()
    assert a.transpose().to_dense() == [[1, 0], [2, 3]]
    assert a.trace() == 4
    with pytest.raises(ShapeError):
        a @ SparseIntegerMatrix.zeros(3, 1)


def test_smith_normal_form_of_small_matrix():
    m = SparseIntegerMatrix.from_dense([[2, 4], [6, 8]])
    snf = smith_normal_form(m)
    assert snf.diagonal == [2, 4]
    assert snf.check(m)


def test_smith_normal_form_of_rank_deficient_matrix():
    m = SparseIntegerMatrix.from_dense([[2, 4, 6], [1, 2, 3]])
    snf = smith_normal_form(m)
    assert snf.diagonal == [1]
    assert snf.rank == 1
    snf.check(m)


def test_smith_check_detects_tampering():
    m = SparseIntegerMatrix.from_dense([[2, 4], [6, 8]])
    snf = smith_normal_form(m)
    snf.D = SparseIntegerMatrix.from_dense([[2, 0], [0, 8]])
    with pytest.raises(InvariantError):
        snf.check(m)


@pytest.mark.parametrize('name', sorted(corpus.EXPECTED_HOMOLOGY))
def test_homology_of_corpus(name):
    profile = homology(boundary_matrices(corpus.record(name).complex))
    for k, (rank, torsion) in corpus.EXPECTED_HOMOLOGY[name].items():
        assert profile.rank(k) == rank
        assert profile.torsion(k) == torsion


def test_reduced_homology():
    assert homology(boundary_matrices(corpus.disk()), reduced=True).is_zero()
    two = homology(boundary_matrices(corpus.two_disks()), reduced=True)
    assert two.rank(0) == 1
    assert two.nonzero_degrees() == [0]


def test_projective_plane_cohomology_torsion_moves_up():
    coh = cohomology(boundary_matrices(corpus.projective_plane()))
    assert coh.rank(1) == 0
    assert coh.torsion(1) == []
    assert coh.torsion(2) == [2]


@pytest.mark.parametrize('name', ['projective_plane', 'torus', 'klein_bottle', 'annulus'])
def test_universal_coefficients(name):
    report = verify_uct(boundary_matrices(corpus.record(name).complex))
    assert report.passed
    assert report.to_dict()['passed'] is True


def test_profile_serialization():
    profile = homology(boundary_matrices(corpus.klein_bottle()))
    assert profile.to_dict()['1'] == {'rank': 1, 'torsion': [2]}
    assert profile.betti() == [1, 1, 0]


def test_fill_disk_rim():
    solution = solve_boundary(HEXAGON_RIM, corpus.disk())
    assert solution.solved
    assert chain_boundary(solution.chain) == HEXAGON_RIM


def test_rim_is_obstructed_on_the_circle():
    solution = solve_boundary(HEXAGON_RIM, corpus.hexagon())
    assert not solution.solved
    assert solution.obstruction['degree'] == 1
    assert [abs(x) for x in solution.obstruction['free']] == [1]


def test_both_filling_rules_fill():
    for rule in ('snf', 'reversed'):
        solution = solve_boundary(HEXAGON_RIM, corpus.disk(), rule)
        assert chain_boundary(solution.chain) == HEXAGON_RIM


def test_reduced_zero_cycles():
    within = corpus.hexagon()
    assert solve_boundary({('0',): 1, ('3',): -1}, within).solved
    assert solve_boundary({}, within).chain == {}
    with pytest.raises(PreconditionError):
        solve_boundary({('0',): 1}, within)


def test_non_cycles_are_rejected():
    with pytest.raises(PreconditionError):
        solve_boundary({('0', '1'): 1}, corpus.hexagon())
    with pytest.raises(PreconditionError):
        solve_boundary({('0', '6'): 1}, corpus.hexagon())


def test_hopf_trace_on_generated_maps():
    for name, f in corpus.generated_self_maps():
        assert lefschetz_number(f) == induced_map_on_homology(f).lefschetz, name
        assert lefschetz_number(f) == induced_map_on_cohomology(f).lefschetz, name


def test_reflection_of_the_circle():
    f = dict(corpus.generated_self_maps())['circle reflection 0']
    induced = induced_map_on_homology(f)
    assert induced.free[1] == [[-1]]
    assert lefschetz_number(f) == 2


def test_projective_plane_identity_on_torsion():
    f = GradedIntegerMap.identity(boundary_matrices(corpus.projective_plane()))
    induced = induced_map_on_homology(f)
    assert induced.torsion[1] == [[1]]
    assert induced.lefschetz == 1


def test_simplicial_chain_map_is_a_chain_map():
    assert is_chain_map(simplicial_chain_map(corpus.doubling_map())).ok
    f = simplicial_chain_map(identity_map(corpus.triangle()))
    assert f == GradedIntegerMap.identity(boundary_matrices(corpus.triangle()))


def test_zero_homotopy_between_equal_maps():
    cc = boundary_matrices(corpus.disk())
    f = GradedIntegerMap.identity(cc)
    assert verify_chain_homotopy(f, f, GradedIntegerMap.zero(cc, cc, degree=1)).ok


def test_subdivision_chain_map():
    rec = corpus.record('triangle')
    b = subdivision_chain_map(rec, 0, 2)
    assert is_chain_map(b).ok
    assert len(b.image(('0', '1', '2'))) == 36
    assert all(abs(v) == 1 for v in b.image(('0', '1', '2')).values())
    with pytest.raises(LevelMismatchError):
        subdivision_chain_map(rec, 2, 1)


def test_homology_of_a_disjoint_union_is_a_direct_sum():
    disk = homology(boundary_matrices(corpus.triangle()))
    two = homology(boundary_matrices(corpus.record('two_disks').complex))
    assert disk.direct_sum(disk) == two
    rp2 = homology(boundary_matrices(corpus.projective_plane()))
    assert rp2.direct_sum(rp2).torsion(1) == [2, 2]


def _projective_loops():
    """Boundaries of the vertex triples that are not faces of the projective plane"""
    rp2 = corpus.projective_plane()
    return [chain_boundary({t: 1}) for t in combinations('123456', 3) if t not in rp2]


def test_projective_loop_is_obstructed_but_its_double_fills():
    rp2 = corpus.projective_plane()
    loops = _projective_loops()
    assert len(loops) == 10
    z = loops[0]
    once = solve_boundary(z, rp2)
    assert not once.solved
    assert once.obstruction['torsion'] == [[1, 2]]
    twice = solve_boundary(chain_add({}, z, 2), rp2)
    assert twice.solved
    assert chain_boundary(twice.chain) == chain_add({}, z, 2)


@pytest.mark.parametrize('complex_name, cycle', [
    ('circle', HEXAGON_RIM),
    ('disk', HEXAGON_RIM),
    ('torus', None),
    ('projective_plane', None),
])
def test_cycle_fills_exactly_when_its_class_vanishes(complex_name, cycle):
    c = corpus.COMPLEXES[complex_name]()
    cc = boundary_matrices(c)
    if cycle is not None:
        cycles = [cycle]
    elif complex_name == 'projective_plane':
        cycles = _projective_loops() + [chain_add({}, z, 2) for z in _projective_loops()]
    else:
        meridian = {('00', '10'): 1, ('10', '20'): 1, ('00', '20'): -1}
        cycles = [chain_boundary({t: 1}) for t in c.simplices(2)] + [meridian]
    for z in cycles:
        cls = homology_class(cc, z, 1)
        vanishes = all(x == 0 for x in cls['free']) and all(r == 0 for r, _ in cls['torsion'])
        assert solve_boundary(z, c).solved == vanishes


def test_doubling_edges_is_not_a_chain_map():
    cc = boundary_matrices(corpus.hexagon())
    n0, n1 = cc.size(0), cc.size(1)
    f = GradedIntegerMap(cc, cc, 0, {0: SparseIntegerMatrix.identity(n0),
                                     1: SparseIntegerMatrix(n1, n1, {(i, i): 2 for i in range(n1)})})
    check = is_chain_map(f)
    assert not check.ok
    assert check.witness == corpus.hexagon().simplices(1)[0]
    assert check.reason == 'does not commute with the boundary'


def _disk_homotopy(cc):
    return GradedIntegerMap.from_images(cc, cc, {('0',): {('0', '1'): 1},
                                                 ('0', '1'): {('0', '1', '6'): 1}}, degree=1)


def test_wrong_homotopy_is_rejected():
    cc = boundary_matrices(corpus.disk())
    f = GradedIntegerMap.identity(cc)
    check = verify_chain_homotopy(f, f, _disk_homotopy(cc))
    assert not check.ok
    assert check.witness == ('0',)


def test_homotopic_maps_have_equal_lefschetz_numbers():
    c = corpus.disk()
    cc = boundary_matrices(c)
    f = GradedIntegerMap.identity(cc)
    d = _disk_homotopy(cc)
    images = {}
    for s in c.all_simplices():
        moved = chain_add(chain_boundary(d.image(s)), d.apply(chain_boundary({s: 1})))
        images[s] = chain_add(f.image(s), moved)
    g = GradedIntegerMap.from_images(cc, cc, images)
    assert g != f
    assert is_chain_map(g).ok
    assert verify_chain_homotopy(g, f, d).ok
    assert lefschetz_number(g) == lefschetz_number(f) == 1


def test_componentwise_constant_map_counts_components():
    c = corpus.record('two_disks').complex
    collapse = SimplicialMap(c, c, {v: v[0] + '0' for v in c.vertices})
    assert lefschetz_number(simplicial_chain_map(collapse)) == 2
    to_one = SimplicialMap(c, c, {v: 'a0' for v in c.vertices})
    assert lefschetz_number(simplicial_chain_map(to_one)) == 1
