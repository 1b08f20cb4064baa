#!/usr/bin/env python3
"""
Fixed Point Index Command Line
Batch front end: read complexes and bundles, run the computation, print a
JSON report (sorted keys, no timestamps) and exit with a structured code
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import List, Optional

import config
import corpus
import log_manager
from bundle_io import load_bundle, read_complex, read_cover
from carrier import approximate, check_acyclic, verify_approximation
from chain import (GradedIntegerMap, boundary_matrices, cohomology, homology, induced_map_on_cohomology,
                   induced_map_on_homology, lefschetz_number, verify_uct)
from cover import nerve, star_cover
from errors import InvariantError, PreconditionError, TopologyError
from fixed_point_index import (fixed_point_index, fixed_point_index_by_homology, index_on_general_open_set,
                               index_stability, index_via_domination, verify_axioms)
from log_manager import LogManager
from rational_oracle import rational_betti
from simplicial import simplex_labels, subdivision_record

COMMANDS = ('homology', 'uct-check', 'lefschetz', 'index', 'verify', 'approx', 'nerve')
AXIOMS = ('add', 'hom', 'comm', 'norm')


@dataclass
class RunConfig:
    """Parsed command line, with defaults from config"""
    command: str
    inputs: List[str]
    level: int = config.DEFAULT_LEVEL
    level_cap: int = config.LEVEL_CAP
    out: Optional[str] = None
    log_dir: Optional[str] = None
    verbose: bool = False
    monotone_complete: bool = False
    oracle_rational: bool = False
    stability: bool = False
    general: bool = False
    axioms: List[str] = field(default_factory=list)
    cover: Optional[str] = None
    vertex_rule: str = config.DEFAULT_VERTEX_RULE
    filling_rule: str = config.DEFAULT_FILLING_RULE

    @classmethod
    def from_args(cls, args):
        if args.level < 0 or args.level_cap < 0:
            raise PreconditionError("levels must be nonnegative")
        return cls(args.command, list(args.inputs), args.level, args.level_cap, args.out, args.log_dir,
                   args.verbose, args.monotone_complete, args.oracle_rational, args.stability, args.general,
                   list(args.axiom or []), args.cover, args.vertex_rule, args.filling_rule)


def build_parser():
    parser = argparse.ArgumentParser(prog='topo_index',
                                     description="Exact fixed point index of acyclic carriers on finite complexes")
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('inputs', nargs='*', help="complex file or JSON bundle manifest(s)")
    parser.add_argument('--level', type=int, default=config.DEFAULT_LEVEL, help="subdivision level")
    parser.add_argument('--level-cap', type=int, default=config.LEVEL_CAP,
                        help="highest level tried for general open sets")
    parser.add_argument('--monotone-complete', action='store_true',
                        help="complete carrier tables that omit simplices")
    parser.add_argument('--oracle-rational', action='store_true', help="cross-check over Q with sympy")
    parser.add_argument('--stability', action='store_true', help="also compute the index one level finer")
    parser.add_argument('--general', action='store_true',
                        help="treat the open set as general and search for a polyhedral one inside it")
    parser.add_argument('--axiom', action='append', choices=AXIOMS, help="restrict verify to these axioms")
    parser.add_argument('--cover', help="cover file for the nerve command (default: star cover)")
    parser.add_argument('--vertex-rule', choices=config.VERTEX_RULES, default=config.DEFAULT_VERTEX_RULE)
    parser.add_argument('--filling-rule', choices=config.FILLING_RULES, default=config.DEFAULT_FILLING_RULE)
    parser.add_argument('--out', help="write the JSON report here instead of stdout")
    parser.add_argument('--log-dir', help="write a session log to this directory")
    parser.add_argument('--verbose', action='store_true', help="echo log entries to stderr")
    return parser


# ===== COMMANDS =====

def _single_input(run, what):
    if len(run.inputs) != 1:
        raise PreconditionError(f"{run.command} takes exactly one {what}")
    return run.inputs[0]


def _record(run):
    return subdivision_record(read_complex(_single_input(run, 'complex file'))).refined(run.level)


def cmd_homology(run):
    rec = _record(run)
    cc = boundary_matrices(rec.complex)
    result = {
        'level': rec.level,
        'counts': rec.complex.counts(),
        'euler_characteristic': rec.complex.euler_characteristic(),
        'homology': homology(cc).to_dict(),
        'reduced_homology': homology(cc, reduced=True).to_dict(),
        'cohomology': cohomology(cc).to_dict(),
    }
    if run.oracle_rational:
        result['rational_betti'] = {str(k): b for k, b in sorted(rational_betti(cc).items())}
    return result, config.EXIT_OK


def cmd_uct(run):
    report = verify_uct(boundary_matrices(_record(run).complex))
    return report.to_dict(), config.EXIT_OK if report.passed else config.EXIT_INTERNAL


def cmd_lefschetz(run):
    """Identity of a complex file, or the carrier of a bundle on its whole space"""
    path = _single_input(run, 'complex file or bundle')
    if path.endswith('.json'):
        bundle = load_bundle(path, run.monotone_complete)
        problem = bundle.problem()
        chain_value = fixed_point_index(problem, run.vertex_rule, run.filling_rule).value
        route = fixed_point_index_by_homology(problem, run.vertex_rule, run.filling_rule)
        induced_h, induced_c = route.homology, route.cohomology
    else:
        cc = boundary_matrices(_record(run).complex)
        psi = GradedIntegerMap.identity(cc)
        chain_value = lefschetz_number(psi)
        induced_h, induced_c = induced_map_on_homology(psi), induced_map_on_cohomology(psi)
    result = {'chain': chain_value, 'homology': induced_h.lefschetz, 'cohomology': induced_c.lefschetz,
              'induced_homology': induced_h.to_dict(), 'induced_cohomology': induced_c.to_dict()}
    if len({chain_value, induced_h.lefschetz, induced_c.lefschetz}) != 1:
        raise InvariantError("chain and homology routes disagree", result)
    return result, config.EXIT_OK


def cmd_index(run):
    bundle = load_bundle(_single_input(run, 'bundle'), run.monotone_complete)
    if bundle.domination is not None:
        result = index_via_domination(bundle.domination, bundle.carrier, bundle.open_set,
                                      run.vertex_rule, run.filling_rule)
        return result.to_dict(), config.EXIT_OK
    if run.general:
        result = index_on_general_open_set(bundle.carrier, bundle.open_set, level_cap=run.level_cap,
                                           vertex_rule=run.vertex_rule, filling_rule=run.filling_rule)
        return result.to_dict(), config.EXIT_OK
    problem = bundle.problem()
    if run.stability:
        first, second = index_stability(problem, run.vertex_rule, run.filling_rule)
        return {'levels': [first.to_dict(), second.to_dict()], 'stable': first.value == second.value,
                'value': first.value}, config.EXIT_OK
    return fixed_point_index(problem, run.vertex_rule, run.filling_rule).to_dict(), config.EXIT_OK


def cmd_verify(run):
    if run.inputs:
        instances = [load_bundle(path, run.monotone_complete).instance() for path in run.inputs]
    else:
        instances = corpus.axiom_instances()
    report = verify_axioms(instances, run.axioms or None)
    return report.to_dict(), config.EXIT_OK if report.passed else config.EXIT_INTERNAL


def cmd_approx(run):
    bundle = load_bundle(_single_input(run, 'bundle'), run.monotone_complete)
    result = {}
    if run.oracle_rational:
        carrier = bundle.carrier.composite() if hasattr(bundle.carrier, 'composite') else bundle.carrier
        result['acyclicity'] = {
            'integer': check_acyclic(carrier).to_dict(),
            'rational': check_acyclic(carrier, oracle='rational').to_dict(),
        }
    a = approximate(bundle.carrier, run.vertex_rule, run.filling_rule)
    result['approximation'] = a.to_dict()
    result['verified'] = verify_approximation(a).to_dict()
    return result, config.EXIT_OK


def cmd_nerve(run):
    rec = _record(run)
    cov = read_cover(run.cover, rec) if run.cover else star_cover(rec)
    n = nerve(cov)
    profile = homology(boundary_matrices(n.complex))
    return {'elements': cov.names(), 'counts': n.complex.counts(),
            'simplices': [simplex_labels(s) for s in n.complex.all_simplices()],
            'homology': profile.to_dict()}, config.EXIT_OK


HANDLERS = {
    'homology': cmd_homology,
    'uct-check': cmd_uct,
    'lefschetz': cmd_lefschetz,
    'index': cmd_index,
    'verify': cmd_verify,
    'approx': cmd_approx,
    'nerve': cmd_nerve,
}


# ===== OUTPUT =====

def render(payload):
    return json.dumps(payload, sort_keys=config.JSON_SORT_KEYS, indent=config.JSON_INDENT) + '\n'


def emit(payload, out=None):
    text = render(payload)
    if out:
        with open(out, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    """Main entry point; returns the exit code"""
    args = build_parser().parse_args(argv)
    previous = None
    if args.log_dir or args.verbose:
        previous = log_manager.install(LogManager(args.log_dir, echo=args.verbose))
    try:
        run = RunConfig.from_args(args)
        log_manager.log(f"{run.command} {' '.join(run.inputs)}", 'command')
        payload, code = HANDLERS[run.command](run)
        emit(payload, run.out)
        log_manager.log(f"{run.command} finished with exit code {code}", 'success' if code == 0 else 'error')
        return code
    except TopologyError as e:
        log_manager.log(f"{type(e).__name__}: {e.message}", 'error')
        emit(e.to_dict())
        return e.exit_code
    except Exception as e:
        log_manager.log(f"unexpected {type(e).__name__}: {e}", 'error')
        emit({'error': type(e).__name__, 'message': str(e), 'code': config.EXIT_INTERNAL, 'details': {}})
        return config.EXIT_INTERNAL
    finally:
        if args.log_dir or args.verbose:
            log_manager.install(previous)


if __name__ == "__main__":
    sys.exit(main())
