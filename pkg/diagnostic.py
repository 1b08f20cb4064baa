#!/usr/bin/env python3
"""
Fixed Point Index System Diagnostic Tool
Runs the acceptance checks over the built-in corpus and reports system health
"""

import sys
from datetime import datetime

import config
import corpus
import log_manager
from carrier import (AcyclicCarrier, approximate, build_chain_approximation, check_acyclic, homotopy_between,
                     verify_approximation)
from chain import (boundary_matrices, homology, induced_map_on_homology, lefschetz_number, simplicial_chain_map,
                   smith_normal_form, verify_uct)
from fixed_point_index import (fixed_point_index, index_on_general_open_set, index_problem, index_stability,
                               index_via_domination, verify_axioms)
from log_manager import LogManager
from rational_oracle import SYMPY_AVAILABLE, smith_invariants
from simplicial import whole_space
from topo_index import render

PASS = "\033[92m✓ PASS\033[0m"
FAIL = "\033[91m✗ FAIL\033[0m"
INFO = "\033[94mℹ INFO\033[0m"


def print_header(text):
    print("\n" + "=" * 60)
    print(f"  {text}")
    print("=" * 60)


def test_chain_algebra():
    """Boundary matrices, Smith decompositions and homology of the corpus"""
    print(f"\n{INFO} Testing chain algebra on {len(corpus.COMPLEXES)} complexes...")
    ok = True
    for name in corpus.COMPLEXES:
        cc = boundary_matrices(corpus.record(name).complex)
        for k in range(1, cc.dimension + 1):
            smith_normal_form(cc.boundary_matrix(k)).check(cc.boundary_matrix(k))
        profile = homology(cc)
        expected = corpus.EXPECTED_HOMOLOGY[name]
        got = {k: (profile.rank(k), profile.torsion(k)) for k in expected}
        if got != expected:
            print(f"{FAIL} {name}: homology {got}, expected {expected}")
            ok = False
    if ok:
        print(f"{PASS} Homology matches on every complex (torsion included)")
    return ok


def test_hopf_trace():
    """Chain-level and homology-level Lefschetz numbers agree"""
    maps = corpus.generated_self_maps()
    print(f"\n{INFO} Testing the Hopf trace property on {len(maps)} self-maps...")
    bad = [name for name, f in maps if lefschetz_number(f) != induced_map_on_homology(f).lefschetz]
    if bad:
        print(f"{FAIL} Traces disagree for: {', '.join(bad)}")
        return False
    print(f"{PASS} Traces agree on all {len(maps)} maps")
    return True


def test_approximations():
    """Approximations are carried chain maps; simplicial carriers give the simplicial chain map"""
    print(f"\n{INFO} Testing chain approximations...")
    for name, carrier, _, _ in corpus.index_examples():
        check = verify_approximation(approximate(carrier))
        if not check.ok:
            print(f"{FAIL} {name}: {check.to_dict()}")
            return False
    rec = corpus.record('circle')
    for smap, source_rec in ((corpus.doubling_map(), rec.refined(1)), (corpus.rotation_map(), rec)):
        carrier = AcyclicCarrier.from_simplicial_map(smap, source_rec, rec)
        if build_chain_approximation(carrier).map != simplicial_chain_map(smap):
            print(f"{FAIL} Approximation of a simplicial map differs from its chain map")
            return False
    print(f"{PASS} All approximations verify; simplicial maps reproduced exactly")
    return True


def test_choice_independence():
    """Two choice rules: carried homotopy between them and equal indices"""
    examples = corpus.index_examples()
    print(f"\n{INFO} Testing choice independence on {len(examples)} carriers...")
    for name, carrier, open_set, _ in examples:
        a1 = approximate(carrier, 'least', 'snf')
        a2 = approximate(carrier, 'greatest', 'reversed')
        homotopy_between(a1, a2)
        p = index_problem(carrier, open_set)
        first = fixed_point_index(p, 'least', 'snf').value
        second = fixed_point_index(p, 'greatest', 'reversed').value
        if first != second:
            print(f"{FAIL} {name}: index {first} vs {second}")
            return False
    print(f"{PASS} Homotopies verified and indices equal under both rules")
    return True


def test_axioms():
    """Additivity, homotopy invariance, commutativity and normalization"""
    print(f"\n{INFO} Testing the index axioms...")
    report = verify_axioms(corpus.axiom_instances())
    passed = {}
    for r in report.results:
        if r['status'] == 'pass':
            passed[r['axiom']] = passed.get(r['axiom'], 0) + 1
        print(f"    {r['axiom']:4} {r['status']:7} {r['instance']}: {r['left']} / {r['right']}")
    enough = passed.get('add', 0) >= 3 and passed.get('hom', 0) >= 3 and passed.get('comm', 0) >= 2
    if report.passed and enough:
        print(f"{PASS} Axiom suite: {report.counts()}")
        return True
    print(f"{FAIL} Axiom suite: {report.counts()}")
    return False


def test_index_values():
    """Known indices and stability one level finer"""
    print(f"\n{INFO} Testing index values and stability...")
    ok = True
    for name, carrier, open_set, expected in corpus.index_examples():
        first, second = index_stability(index_problem(carrier, open_set))
        if first.value != expected or second.value != expected:
            print(f"{FAIL} {name}: {first.value} then {second.value}, expected {expected}")
            ok = False
        else:
            print(f"    {name}: {expected}")
    for name, carrier, v, expected in corpus.general_open_set_examples():
        value = index_on_general_open_set(carrier, v).value
        if value != expected:
            print(f"{FAIL} {name}: {value}, expected {expected}")
            ok = False
    d = corpus.annulus_domination()
    value = index_via_domination(d, AcyclicCarrier.identity(d.x_record), whole_space(d.x_record)).value
    if value != 0:
        print(f"{FAIL} Domination of the annulus: {value}, expected 0")
        ok = False
    if ok:
        print(f"{PASS} Indices match and are stable")
    return ok


def test_uct():
    print(f"\n{INFO} Testing the universal coefficient check...")
    bad = [name for name in corpus.COMPLEXES
           if not verify_uct(boundary_matrices(corpus.record(name).complex)).passed]
    if bad:
        print(f"{FAIL} UCT fails on: {', '.join(bad)}")
        return False
    print(f"{PASS} UCT holds on every complex")
    return True


def test_integer_vs_rational():
    """A projective plane value is acyclic over Q but not over Z"""
    print(f"\n{INFO} Testing integer versus rational acyclicity...")
    if not SYMPY_AVAILABLE:
        print(f"{INFO} sympy not installed - rational oracle skipped")
        return True
    cc = boundary_matrices(corpus.record('projective_plane').complex)
    for k in range(1, cc.dimension + 1):
        ours = sorted(abs(d) for d in smith_normal_form(cc.boundary_matrix(k)).diagonal if d)
        if ours != smith_invariants(cc.boundary_matrix(k)):
            print(f"{FAIL} Smith invariants of boundary {k} disagree with sympy")
            return False
    carrier = corpus.projective_value()
    integer, rational = check_acyclic(carrier), check_acyclic(carrier, oracle='rational')
    if not integer.acyclic and rational.acyclic:
        print(f"{PASS} Rejected over Z, accepted over Q")
        return True
    print(f"{FAIL} integer acyclic={integer.acyclic}, rational acyclic={rational.acyclic}")
    return False


def test_determinism():
    """Byte-identical reports across runs and thread schedules"""
    print(f"\n{INFO} Testing determinism...")
    first = render(verify_axioms(corpus.axiom_instances()).to_dict())
    workers = config.HARNESS_WORKERS, config.FILL_WORKERS, config.HOMOLOGY_WORKERS
    config.HARNESS_WORKERS, config.FILL_WORKERS, config.HOMOLOGY_WORKERS = 4, 4, 4
    try:
        second = render(verify_axioms(corpus.axiom_instances()).to_dict())
    finally:
        config.HARNESS_WORKERS, config.FILL_WORKERS, config.HOMOLOGY_WORKERS = workers
    if first == second:
        print(f"{PASS} Reports identical ({len(first)} bytes)")
        return True
    print(f"{FAIL} Reports differ between sequential and threaded runs")
    return False


def run_all_tests():
    """Run complete diagnostic suite; returns True when everything passes"""
    print_header("FIXED POINT INDEX SYSTEM DIAGNOSTICS")
    print(f"Time: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")

    results = [
        ("Chain Algebra", test_chain_algebra()),
        ("Hopf Trace", test_hopf_trace()),
        ("Approximations", test_approximations()),
        ("Choice Independence", test_choice_independence()),
        ("Axioms", test_axioms()),
        ("Index Values and Stability", test_index_values()),
        ("Universal Coefficients", test_uct()),
        ("Integer vs Rational", test_integer_vs_rational()),
        ("Determinism", test_determinism()),
    ]

    print_header("TEST SUMMARY")
    passed = sum(1 for _, result in results if result)
    total = len(results)
    for test_name, result in results:
        status = PASS if result else FAIL
        print(f"{status} {test_name}")

    print(f"\n{'=' * 60}")
    if passed == total:
        print(f"{PASS} ALL TESTS PASSED ({passed}/{total})")
    else:
        print(f"{FAIL} SOME TESTS FAILED ({passed}/{total} passed)")
        print("\nCheck failed tests above for details")
    print('=' * 60 + "\n")
    return passed == total


if __name__ == "__main__":
    manager = LogManager()
    log_manager.install(manager)
    removed = manager.cleanup_old_logs()
    if removed:
        print(f"{INFO} Removed {removed} expired session log(s)")
    try:
        sys.exit(0 if run_all_tests() else 1)
    except KeyboardInterrupt:
        print("\n\nDiagnostics interrupted by user")
        sys.exit(1)
    except Exception as e:
        print(f"\n{FAIL} Unexpected error: {e}")
        sys.exit(1)
