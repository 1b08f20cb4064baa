"""
Tests for index problems, admissibility, index values and the axiom harness
"""

import pytest

import config
import corpus
from carrier import AcyclicCarrier, CompositionCarrier, approximate
from errors import (InadmissibleError, LevelMismatchError, PreconditionError, ResolutionExhaustedError,
                    RetractionError, ShapeError)
from fixed_point_index import (AxiomReport, DominationData, HomotopyInstance, check_admissible,
                               fixed_point_index, fixed_point_index_by_homology, hit_simplices,
                               index_on_general_open_set, index_problem, index_stability, index_via_domination,
                               preimage_open_set, projection, verify_axioms)
from simplicial import SimplicialMap, open_set_from_closure, refine_open_set, whole_space


@pytest.mark.parametrize('name, carrier, open_set, expected', corpus.index_examples())
def test_index_values(name, carrier, open_set, expected):
    result = fixed_point_index(index_problem(carrier, open_set))
    assert result.value == expected
    assert result.admissibility.admissible


@pytest.mark.parametrize('name, carrier, open_set, expected', corpus.index_examples())
def test_index_is_stable_one_level_finer(name, carrier, open_set, expected):
    first, second = index_stability(index_problem(carrier, open_set))
    assert second.level == first.level + 1
    assert first.value == second.value == expected


@pytest.mark.parametrize('name, carrier, open_set, expected', corpus.index_examples())
def test_index_does_not_depend_on_choice_rules(name, carrier, open_set, expected):
    p = index_problem(carrier, open_set)
    assert fixed_point_index(p, 'greatest', 'reversed').value == expected


def test_problem_levels():
    p = index_problem(corpus.three_clusters(), corpus.interval_open_set(4, 8))
    assert (p.level, p.carrier_level) == (0, 1)
    finer = p.at_level(1)
    assert (finer.level, finer.carrier_level) == (1, 2)
    with pytest.raises(LevelMismatchError):
        index_problem(corpus.three_clusters(), refine_open_set(corpus.interval_open_set(4, 8), 1),
                      carrier_level=0)


def test_open_set_must_be_nonempty():
    rec = corpus.record('circle')
    with pytest.raises(PreconditionError):
        index_problem(AcyclicCarrier.identity(rec), open_set_from_closure(rec.complex, [], rec))


def test_carrier_must_act_on_the_open_set_complex():
    with pytest.raises(ShapeError):
        index_problem(AcyclicCarrier.identity(corpus.record('disk')), whole_space(corpus.record('circle')))


def test_fixed_points_on_the_boundary_are_inadmissible():
    p = index_problem(AcyclicCarrier.identity(corpus.record('circle')), corpus.arc_open_set())
    report = check_admissible(p)
    assert not report.admissible
    assert ['0'] in report.to_dict()['suspicious']
    with pytest.raises(InadmissibleError) as excinfo:
        fixed_point_index(p)
    assert excinfo.value.exit_code == config.EXIT_INADMISSIBLE
    assert excinfo.value.details['admissible'] is False


def test_hit_simplices_find_the_repeller():
    p = index_problem(corpus.three_clusters(), corpus.interval_open_set(4, 8))
    cells = {p.record.refined(1).carrier_cell(s, 0) for s in hit_simplices(p)}
    assert ('6',) in cells
    assert all(int(v) in range(4, 9) for cell in cells for v in cell)


def test_projection_keeps_closure_chains():
    u = corpus.interval_open_set(0, 4)
    p = projection(u)
    assert p.image(('1', '2')) == {('1', '2'): 1}
    assert p.image(('5', '6')) == {}


def test_result_serialization():
    result = fixed_point_index(index_problem(corpus.three_clusters(), corpus.interval_open_set(4, 8)))
    payload = result.to_dict()
    assert payload['value'] == -1
    assert payload['route'] == 'direct'
    assert payload['canonical'] is True
    assert payload['flagged'] == []


def test_homology_route_agrees():
    p = index_problem(corpus.doubling(), whole_space(corpus.record('circle')))
    route = fixed_point_index_by_homology(p)
    assert route.homology.lefschetz == route.cohomology.lefschetz == -1
    assert route.homology.free[1] == [[2]]


def test_homology_route_needs_the_whole_space():
    p = index_problem(corpus.three_clusters(), corpus.interval_open_set(4, 8))
    with pytest.raises(PreconditionError):
        fixed_point_index_by_homology(p)


def test_supplied_approximation_is_not_canonical():
    carrier = corpus.doubling()
    supplied = approximate(carrier, 'greatest')
    p = index_problem(carrier, whole_space(corpus.record('circle')), approximation=supplied)
    result = fixed_point_index(p)
    assert result.value == -1
    assert result.canonical is False
    assert supplied.canonical is True


def test_composite_carrier_index():
    double = CompositionCarrier([corpus.doubling(), corpus.doubling()])
    assert fixed_point_index(index_problem(double, whole_space(corpus.record('circle')))).value == -3


@pytest.mark.parametrize('name, carrier, v, expected', corpus.general_open_set_examples())
def test_general_open_sets(name, carrier, v, expected):
    result = index_on_general_open_set(carrier, v)
    assert result.value == expected
    assert result.route == 'general'


def test_general_search_reports_where_it_stopped():
    empty = index_on_general_open_set(corpus.rotation(3), corpus.arc_open_set()).to_dict()
    assert (empty['value'], empty['level'], empty['radius']) == (0, 0, 0)
    assert empty['traces'] == [0, 0]
    assert empty['open_set'] == []
    found = index_on_general_open_set(corpus.three_clusters(), corpus.interval_open_set(3, 9)).to_dict()
    assert found['radius'] >= 0
    assert len(found['traces']) == 2


def test_general_open_set_search_can_be_exhausted():
    with pytest.raises(ResolutionExhaustedError):
        index_on_general_open_set(corpus.three_clusters(), corpus.interval_open_set(0, 2),
                                  level_cap=1, radius_cap=1)


def test_preimage_open_set():
    pre = preimage_open_set(corpus.three_clusters(), corpus.interval_open_set(0, 4))
    assert pre.level == 1
    assert all(corpus.three_clusters().value(s).issubset(corpus.interval_open_set(0, 4).closure)
               for s in pre.closure)


def test_domination_of_the_annulus():
    d = corpus.annulus_domination()
    result = index_via_domination(d, AcyclicCarrier.identity(d.x_record), whole_space(d.x_record))
    assert result.value == 0
    assert result.route == 'domination'


def test_retraction_must_fix_the_subcomplex():
    rec = corpus.record('annulus')
    k = rec.complex
    inner = k.closure([s for s in k.simplices(1) if all(v.startswith('a') for v in s)])
    shifted = {v: f"a{(int(v[1:]) + 1) % 4}" for v in k.vertices}
    with pytest.raises(RetractionError):
        DominationData(rec, inner, SimplicialMap(k, inner.as_complex(), shifted))


def test_axiom_suite_passes():
    report = verify_axioms(corpus.axiom_instances())
    assert report.passed
    counts = {}
    for r in report.results:
        if r['status'] == 'pass':
            counts[r['axiom']] = counts.get(r['axiom'], 0) + 1
    assert counts.get('add', 0) >= 3
    assert counts.get('hom', 0) >= 3
    assert counts.get('comm', 0) >= 2
    assert counts.get('norm', 0) == len(corpus.normalization_instances())


def test_axiom_selection():
    report = verify_axioms(corpus.axiom_instances(), axioms=['comm'])
    assert {r['axiom'] for r in report.results} == {'comm'}


def test_inadmissible_instance_is_skipped():
    rec = corpus.record('circle')
    instance = HomotopyInstance('identity on an arc', AcyclicCarrier.identity(rec), corpus.arc_open_set())
    report = verify_axioms([instance])
    assert report.results[0]['status'] == 'skipped'
    assert report.passed


def test_failed_result_fails_the_report():
    report = AxiomReport([{'axiom': 'add', 'instance': 'x', 'status': 'fail'}])
    assert not report.passed
    assert report.counts() == {'pass': 0, 'fail': 1, 'skipped': 0}


def test_threaded_harness_is_deterministic(monkeypatch):
    first = verify_axioms(corpus.axiom_instances()).to_dict()
    monkeypatch.setattr(config, 'HARNESS_WORKERS', 4)
    monkeypatch.setattr(config, 'FILL_WORKERS', 4)
    monkeypatch.setattr(config, 'HOMOLOGY_WORKERS', 4)
    assert verify_axioms(corpus.axiom_instances()).to_dict() == first


@pytest.mark.parametrize('name, make', [
    ('circle', lambda rec: AcyclicCarrier.identity(rec)),
    ('disk', lambda rec: AcyclicCarrier.identity(rec)),
    ('disk', lambda rec: AcyclicCarrier.constant(rec, rec, '6')),
    ('two_disks', lambda rec: AcyclicCarrier.identity(rec)),
])
def test_trivial_domination_matches_the_direct_index(name, make):
    rec = corpus.record(name)
    k = rec.complex
    d = DominationData(rec, k.whole(), SimplicialMap(k, k.whole().as_complex(), {v: v for v in k.vertices}))
    f = make(d.x_record)
    direct = fixed_point_index(index_problem(f, whole_space(d.x_record)))
    dominated = index_via_domination(d, f, whole_space(d.x_record))
    assert dominated.value == direct.value
