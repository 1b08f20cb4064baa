"""
Tests for acyclic carriers, chain approximations, composition and prisms
"""

import pytest

import corpus
from carrier import (AcyclicCarrier, ChainApproximation, CompositionCarrier, approximate,
                     build_approximation_system, build_chain_approximation, check_acyclic, compose_carriers,
                     homotopy_between, prism_complex, prism_homotopy_carrier, restricted_subdivision_map,
                     straight_line_prism, swept_carrier, verify_approximation)
from chain import (GradedIntegerMap, boundary_matrices, chain_boundary, lefschetz_number, simplicial_chain_map,
                   subdivision_chain_map, verify_chain_homotopy)
from errors import AcyclicityError, LevelMismatchError, PreconditionError


def _rim_carrier():
    """Triangle onto the hexagon: edges to arcs, the face to the whole rim"""
    source, target = corpus.triangle(), corpus.hexagon()
    table = {
        ('0',): [('0',)], ('1',): [('2',)], ('2',): [('4',)],
        ('0', '1'): [('0', '1'), ('1', '2')],
        ('1', '2'): [('2', '3'), ('3', '4')],
        ('0', '2'): [('4', '5'), ('0', '5')],
        ('0', '1', '2'): list(target.simplices(1)),
    }
    return AcyclicCarrier.from_table(source, target, table, name='rim')


def test_identity_approximation_is_the_identity():
    rec = corpus.record('disk')
    a = build_chain_approximation(AcyclicCarrier.identity(rec))
    assert a.map == GradedIntegerMap.identity(boundary_matrices(rec.complex))
    assert verify_approximation(a).ok


def test_values_must_be_monotone():
    c = corpus.triangle()
    assignment = {s: c.closure([s]) for s in c.all_simplices()}
    assignment[('0',)] = c.closure([('2',)])
    with pytest.raises(PreconditionError):
        AcyclicCarrier(c, c, assignment)


def test_every_simplex_needs_a_value():
    c = corpus.triangle()
    assignment = {s: c.closure([s]) for s in c.all_simplices() if len(s) < 3}
    with pytest.raises(PreconditionError):
        AcyclicCarrier(c, c, assignment)


def test_table_with_omissions_needs_completion():
    c = corpus.triangle()
    table = {('0', '1', '2'): [('0', '1', '2')]}
    with pytest.raises(PreconditionError):
        AcyclicCarrier.from_table(c, c, table)
    completed = AcyclicCarrier.from_table(c, c, table, monotone_complete=True)
    assert completed.value(('0',)) == c.whole()


def test_integer_acyclicity_check():
    assert check_acyclic(corpus.full_disk()).acyclic
    report = check_acyclic(_rim_carrier())
    assert not report.acyclic
    assert [e['simplex'] for e in report.failures()] == [('0', '1', '2')]
    assert report.to_dict()['failures'][0]['profile']['1'] == {'rank': 1, 'torsion': []}


def test_projective_value_is_rationally_but_not_integrally_acyclic():
    pytest.importorskip('sympy')
    carrier = corpus.projective_value()
    assert not check_acyclic(carrier).acyclic
    assert check_acyclic(carrier, oracle='rational').acyclic


def test_unfillable_value_raises_with_obstruction():
    with pytest.raises(AcyclicityError) as excinfo:
        build_chain_approximation(_rim_carrier())
    assert excinfo.value.simplex == ['0', '1', '2']
    assert excinfo.value.obstruction['degree'] == 1


def test_unknown_rule_is_rejected():
    with pytest.raises(PreconditionError):
        build_chain_approximation(corpus.full_disk(), vertex_rule='middle')


def test_vertex_rules_pick_extreme_vertices():
    carrier = corpus.full_disk()
    assert approximate(carrier, 'least').image(('3',)) == {('0',): 1}
    assert approximate(carrier, 'greatest').image(('3',)) == {('6',): 1}


def test_verify_reports_uncarried_images():
    rec = corpus.record('circle')
    wrong = ChainApproximation(AcyclicCarrier.identity(rec), simplicial_chain_map(corpus.rotation_map()))
    check = verify_approximation(wrong)
    assert not check.ok
    assert {f['check'] for f in check.failures} == {'carried'}


def test_simplicial_carrier_reproduces_its_chain_map():
    rec = corpus.record('circle')
    carrier = AcyclicCarrier.from_simplicial_map(corpus.doubling_map(), rec.refined(1), rec)
    assert build_chain_approximation(carrier).map == simplicial_chain_map(corpus.doubling_map())


CHOICE_CARRIERS = [(name, carrier) for name, carrier, _, _ in corpus.index_examples()[:8]] + [
    ('rotation by two', corpus.rotation(2)),
    ('hexagon to square', corpus.hexagon_to_square()),
    ('square to hexagon', corpus.square_to_hexagon()),
]


@pytest.mark.parametrize('name, carrier', CHOICE_CARRIERS)
def test_homotopy_between_choice_rules(name, carrier):
    a1 = approximate(carrier, 'least', 'snf')
    a2 = approximate(carrier, 'greatest', 'reversed')
    d = homotopy_between(a1, a2)
    assert d.degree == 1
    assert verify_chain_homotopy(a1.map, a2.map, d).ok


def test_cone_carrier_needs_a_nonzero_homotopy():
    carrier = corpus.full_disk()
    a1 = approximate(carrier, 'least')
    a2 = approximate(carrier, 'greatest')
    assert a1.map.image(('0',)) == {('0',): 1}
    assert a2.map.image(('0',)) == {('6',): 1}
    d = homotopy_between(a1, a2)
    assert d.matrices
    assert chain_boundary(d.image(('0',))) == {('0',): 1, ('6',): -1}


def test_refine_source_keeps_values():
    carrier = corpus.three_clusters()
    finer = carrier.refine_source(2)
    assert finer.source_level == 2
    for s in finer.source.all_simplices():
        assert finer.value(s) == carrier.value(finer.source_record.carrier_cell(s, 1))
    with pytest.raises(LevelMismatchError):
        carrier.refine_source(0)


def test_refine_target_subdivides_values():
    rec = corpus.record('disk')
    finer = AcyclicCarrier.constant(rec, rec, '6').refine_target(1)
    assert finer.target_level == 1
    assert finer.value(('0',)).simplices == {(('6',),)}


def test_composition_of_doublings():
    double = CompositionCarrier([corpus.doubling(), corpus.doubling()])
    a = approximate(double)
    assert verify_approximation(a).ok
    assert not a.flagged
    assert a.carrier.source == corpus.record('circle').refined(1).complex


def test_composite_values_may_be_flagged():
    rec = corpus.record('circle')
    arc = AcyclicCarrier.constant_value(rec, rec, [('0', '1'), ('1', '2'), ('2', '3')], name='arc')
    a = approximate(CompositionCarrier([arc, corpus.doubling()]))
    assert len(a.flagged) == len(rec.complex)
    assert not check_acyclic(a.carrier).acyclic
    assert verify_approximation(a).ok


def test_levels_must_chain_in_a_composition():
    fine = AcyclicCarrier.identity(corpus.record('circle').refined(1))
    with pytest.raises(LevelMismatchError):
        compose_carriers(corpus.rotation(), fine)


def test_approximation_system_is_compatible():
    carrier = corpus.three_clusters()
    system = build_approximation_system(carrier, [2, 1])
    assert system.levels == [1, 2]
    assert set(system.homotopies) == {1}
    coarse, fine = system.approximations[1], system.approximations[2]
    assert (coarse.carrier.source_level, fine.carrier.source_level) == (1, 2)
    assert verify_approximation(coarse).ok and verify_approximation(fine).ok
    b = restricted_subdivision_map(carrier.source_record, 1, 2, coarse.carrier.source, fine.carrier.source)
    assert verify_chain_homotopy(fine.map.compose(b), coarse.map, system.homotopies[1]).ok
    rec = corpus.record('interval')
    for level, a in system.approximations.items():
        assert lefschetz_number(a.map.compose(subdivision_chain_map(rec, 0, level))) == 1


def test_prism_complex_of_a_triangle():
    prism = prism_complex(corpus.triangle())
    assert prism.counts()[0] == 6
    assert prism.count(3) == 3
    assert prism.euler_characteristic() == 1


def test_prism_homotopy_between_identity_and_constant():
    rec = corpus.record('disk')
    start = AcyclicCarrier.identity(rec)
    end = AcyclicCarrier.constant(rec, rec, '6')
    h = straight_line_prism(start, end, rec.complex.whole())
    result = prism_homotopy_carrier(start, end, h)
    assert result.check.ok
    assert swept_carrier(h, start.source, rec).value(('0',)) == rec.complex.whole()


def test_prism_with_the_wrong_end_is_rejected():
    rec = corpus.record('disk')
    start = AcyclicCarrier.identity(rec)
    h = straight_line_prism(start, AcyclicCarrier.constant(rec, rec, '6'), rec.complex.whole())
    with pytest.raises(PreconditionError):
        prism_homotopy_carrier(start, AcyclicCarrier.constant(rec, rec, '0'), h)


def test_doubling_twice_has_lefschetz_number_minus_three():
    double = CompositionCarrier([corpus.doubling(), corpus.doubling()])
    a = approximate(double)
    rec = corpus.record('circle')
    psi = a.map.compose(subdivision_chain_map(rec, 0, 1))
    assert lefschetz_number(psi) == -3
