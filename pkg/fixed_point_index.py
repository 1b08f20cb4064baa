"""
Fixed Point Index
Index problems, admissibility, psi = p(U,k) o phi o b(k,l) and its Lefschetz
number, stability across levels, general open sets, domination by polyhedral
retracts and the axiom harness
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional

import config
import log_manager
from carrier import (AcyclicCarrier, CompositionCarrier, approximate, prism_homotopy_carrier,
                     restricted_subdivision_map, straight_line_prism, swept_carrier, verify_approximation)
from chain import (GradedIntegerMap, boundary_matrices, induced_map_on_cohomology, induced_map_on_homology,
                   lefschetz_number, subdivision_chain_map)
from errors import (InadmissibleError, InvariantError, LevelMismatchError, PreconditionError,
                    ResolutionExhaustedError, RetractionError, ShapeError)
from simplicial import (OpenPolyhedralSet, SimplicialComplex, SimplicialMap, Subcomplex, closed_star,
                        neighborhood, refine_open_set, simplex_labels, subdivide_subcomplex,
                        subdivision_record)

__all__ = ['IndexProblem', 'AdmissibilityReport', 'DominationData', 'IndexResult', 'index_problem',
           'check_admissible', 'hit_simplices', 'projection', 'subdivision_chain_map', 'fixed_point_index',
           'fixed_point_index_by_homology', 'index_stability', 'index_on_general_open_set',
           'preimage_open_set', 'index_via_domination', 'verify_axioms']


# ===== PROBLEMS =====

@dataclass
class IndexProblem:
    """
    (K, F, U) at levels k (open set, target) and l (carrier source)

    carrier is prepared: its source is tau^l restricted to the closure of U
    and its target is tau^k. base_carrier keeps the carrier as given so the
    problem can be rebuilt at another level.
    """
    record: object
    open_set: OpenPolyhedralSet
    carrier: object
    carrier_level: int
    base_carrier: object = None
    approximation: object = None
    name: str = ''

    @property
    def level(self):
        return self.record.level

    def at_level(self, k):
        """Same problem with U at level k, keeping the gap between the two levels"""
        shift = self.carrier_level - self.level
        return index_problem(self.base_carrier, refine_open_set(self.open_set, k),
                             carrier_level=k + shift, name=self.name)


def index_problem(carrier, open_set, carrier_level=None, approximation=None, name=''):
    """
    Prepare an index problem from a carrier on the whole space

    Args:
        carrier: AcyclicCarrier or CompositionCarrier with subdivision records
        open_set: OpenPolyhedralSet with a record; refined when the carrier
                  target is finer
        carrier_level: Level l of the carrier source (default: the coarsest allowed)
        approximation: Supplied ChainApproximation (flagged non-canonical)
    """
    if open_set.record is None:
        raise PreconditionError("open set has no subdivision record")
    if open_set.is_empty():
        raise PreconditionError("open set of an index problem must be nonempty")
    if carrier.source_record is None or carrier.target_record is None:
        raise PreconditionError(f"carrier {carrier.name!r} has no subdivision records")
    base = open_set.record.base
    if carrier.source_record.base != base or carrier.target_record.base != base:
        raise ShapeError(f"carrier {carrier.name!r} is not a self-map of the open set's complex")

    if carrier.target_level > open_set.level:
        open_set = refine_open_set(open_set, carrier.target_level)
    k = open_set.level
    l = carrier_level if carrier_level is not None else max(k, carrier.source_level)
    if l < k:
        raise LevelMismatchError(f"carrier level {l} is coarser than the open set level {k}")

    refined = carrier.refine_source(l)
    rec_l = open_set.record.refined(l)
    closure_l = subdivide_subcomplex(rec_l, open_set.closure, k)
    outside = [s for s in closure_l.simplices if s not in refined.source]
    if outside:
        raise PreconditionError(f"carrier {carrier.name!r} is not defined on the closure of U",
                                {'simplex': simplex_labels(outside[0])})
    if len(closure_l) < len(refined.source):
        refined = refined.restrict_source(closure_l)
    prepared = refined.refine_target(k)
    return IndexProblem(open_set.record, open_set, prepared, l, carrier, approximation,
                        name or carrier.name)


# ===== ADMISSIBILITY =====

@dataclass
class AdmissibilityReport:
    admissible: bool
    suspicious: List[tuple]
    level: int
    carrier_level: int

    def to_dict(self):
        return {'admissible': self.admissible, 'level': self.level, 'carrier_level': self.carrier_level,
                'suspicious': [simplex_labels(s) for s in self.suspicious]}


def _hits(p, simplices):
    """Simplices whose level-k cell has a closed star meeting their value"""
    rec_l = p.record.refined(p.carrier_level)
    stars = {}
    found = []
    for s in simplices:
        cell = rec_l.carrier_cell(s, p.level)
        if cell not in stars:
            stars[cell] = closed_star(p.record.complex, cell)
        if stars[cell].shares_simplex(p.carrier.value(s)):
            found.append(s)
    return found


def hit_simplices(p):
    """Cells that may contain fixed points (sufficient-condition test)"""
    return _hits(p, list(p.carrier.source.all_simplices()))


def check_admissible(p):
    """
    Simplices meeting the subdivided boundary of U whose value meets the
    closed star of their cell; none means no fixed points on the boundary
    """
    rec_l = p.record.refined(p.carrier_level)
    boundary = subdivide_subcomplex(rec_l, p.open_set.boundary, p.level)
    near = [s for s in p.carrier.source.all_simplices()
            if any(f in boundary for f in SimplicialComplex.faces(s))]
    suspicious = _hits(p, near)
    report = AdmissibilityReport(not suspicious, suspicious, p.level, p.carrier_level)
    if suspicious:
        log_manager.log(f"problem {p.name!r}: {len(suspicious)} suspicious boundary simplices", 'warning')
    return report


# ===== INDEX =====

def projection(open_set):
    """p(U,k): basis simplices of the closure go to themselves, the rest to zero"""
    source = boundary_matrices(open_set.ambient)
    target = boundary_matrices(open_set.closure.as_complex())
    images = {s: ({s: 1} if s in open_set.closure else {}) for s in open_set.ambient.all_simplices()}
    return GradedIntegerMap.from_images(source, target, images)


@dataclass
class IndexResult:
    value: int
    level: int
    carrier_level: int
    traces: List[int]
    admissibility: AdmissibilityReport
    carrier_name: str = ''
    vertex_rule: str = config.DEFAULT_VERTEX_RULE
    filling_rule: str = config.DEFAULT_FILLING_RULE
    canonical: bool = True
    flagged: List[tuple] = field(default_factory=list)
    open_set: Optional[OpenPolyhedralSet] = None
    route: str = 'direct'
    radius: Optional[int] = None

    def to_dict(self):
        result = {
            'value': self.value,
            'level': self.level,
            'carrier_level': self.carrier_level,
            'traces': self.traces,
            'admissibility': self.admissibility.to_dict() if self.admissibility else None,
            'carrier': self.carrier_name,
            'vertex_rule': self.vertex_rule,
            'filling_rule': self.filling_rule,
            'canonical': self.canonical,
            'flagged': [simplex_labels(s) for s in self.flagged],
            'route': self.route,
        }
        if self.open_set is not None:
            closure, ambient = self.open_set.closure, self.open_set.ambient
            result['open_set'] = [simplex_labels(s) for s in closure
                                  if all(t not in closure for t in ambient.cofacets(s))]
        if self.radius is not None:
            result['radius'] = self.radius
        return result


def _approximation_for(p, vertex_rule, filling_rule):
    if p.approximation is not None:
        a = replace(p.approximation, canonical=False)
        log_manager.log(f"problem {p.name!r}: using a supplied, non-canonical approximation", 'warning')
        check = verify_approximation(a)
        if not check.ok:
            raise PreconditionError("supplied approximation does not verify", check.to_dict())
        return a
    a = approximate(p.carrier, vertex_rule, filling_rule)
    check = verify_approximation(a)
    if not check.ok:
        raise InvariantError(f"built approximation does not verify: {check.to_dict()}")
    return a


def psi_map(p, a):
    """psi = p(U,k) o phi o b(k,l) on C_*(tau^k | closure U)"""
    closure = p.open_set.closure.as_complex()
    b = restricted_subdivision_map(p.record, p.level, p.carrier_level, closure, p.carrier.source)
    return projection(p.open_set).compose(a.map.compose(b))


def fixed_point_index(p, vertex_rule=config.DEFAULT_VERTEX_RULE, filling_rule=config.DEFAULT_FILLING_RULE):
    """
    Index of an admissible problem: Lefschetz number of psi

    Raises:
        InadmissibleError: a simplex on the boundary may carry a fixed point
    """
    report = check_admissible(p)
    if not report.admissible:
        raise InadmissibleError(f"problem {p.name!r} is not admissible at level {p.level}", report)
    a = _approximation_for(p, vertex_rule, filling_rule)
    psi = psi_map(p, a)
    traces = psi.traces()
    value = lefschetz_number(psi)
    log_manager.log(f"index of {p.name!r} at levels ({p.level}, {p.carrier_level}) = {value}", 'success')
    return IndexResult(value, p.level, p.carrier_level, traces, report, p.name,
                       a.vertex_rule, a.filling_rule, a.canonical, list(a.flagged))


@dataclass
class HomologyRoute:
    homology: object
    cohomology: object

    def to_dict(self):
        return {'homology': self.homology.lefschetz, 'cohomology': self.cohomology.lefschetz,
                'induced_homology': self.homology.to_dict(), 'induced_cohomology': self.cohomology.to_dict()}


def fixed_point_index_by_homology(p, vertex_rule=config.DEFAULT_VERTEX_RULE,
                                  filling_rule=config.DEFAULT_FILLING_RULE):
    """lambda(F_*) and lambda(F^*) for U = K, through Smith normal form generators"""
    if not p.open_set.is_whole():
        raise PreconditionError("the homology route needs U = K")
    a = _approximation_for(p, vertex_rule, filling_rule)
    psi = psi_map(p, a)
    return HomologyRoute(induced_map_on_homology(psi), induced_map_on_cohomology(psi))


def index_stability(p, vertex_rule=config.DEFAULT_VERTEX_RULE, filling_rule=config.DEFAULT_FILLING_RULE):
    """Indices at levels k and k+1"""
    first = fixed_point_index(p, vertex_rule, filling_rule)
    second = fixed_point_index(p.at_level(p.level + 1), vertex_rule, filling_rule)
    if first.value != second.value:
        log_manager.log(f"index of {p.name!r} changed between levels {p.level} and {p.level + 1}", 'warning')
    return first, second


def index_on_general_open_set(carrier, v, level_cap=None, radius_cap=None, carrier_offset=0,
                              vertex_rule=config.DEFAULT_VERTEX_RULE, filling_rule=config.DEFAULT_FILLING_RULE):
    """
    Index on V through a polyhedral U inside V that keeps every fixed cell

    Levels from V's level up to level_cap and star neighbourhoods of the
    fixed cells up to radius_cap are tried in order.

    Raises:
        ResolutionExhaustedError: no admissible U was found
    """
    level_cap = config.LEVEL_CAP if level_cap is None else level_cap
    radius_cap = config.NEIGHBORHOOD_RADIUS_CAP if radius_cap is None else radius_cap
    for level in range(v.level, level_cap + 1):
        v_level = v if level == v.level else refine_open_set(v, level)
        pv = index_problem(carrier, v_level, carrier_level=max(level + carrier_offset, carrier.source_level))
        k = pv.level
        hits = hit_simplices(pv)
        if not hits:
            log_manager.log(f"{carrier.name!r}: no fixed cells in V at level {k}, index 0")
            report = AdmissibilityReport(True, [], k, pv.carrier_level)
            empty = OpenPolyhedralSet(pv.record.complex, pv.record.complex.closure([]), pv.record)
            return IndexResult(0, k, pv.carrier_level, [0] * (pv.record.complex.dimension + 1), report,
                               pv.name, open_set=empty, route='general', radius=0)
        rec_l = pv.record.refined(pv.carrier_level)
        cells = pv.record.complex.closure({rec_l.carrier_cell(s, k) for s in hits})
        for radius in range(radius_cap + 1):
            grown = neighborhood(pv.record.complex, cells, radius).intersection(pv.open_set.closure)
            u = OpenPolyhedralSet(pv.record.complex, grown, pv.record)
            pu = index_problem(carrier, u, carrier_level=pv.carrier_level)
            if not check_admissible(pu).admissible:
                continue
            result = fixed_point_index(pu, vertex_rule, filling_rule)
            result.open_set = u
            result.route = 'general'
            result.radius = radius
            return result
    raise ResolutionExhaustedError(
        f"no admissible polyhedral U inside V up to level {level_cap} and radius {radius_cap}",
        {'level_cap': level_cap, 'radius_cap': radius_cap})


def preimage_open_set(carrier, w):
    """
    F^{-1}(W) as an open polyhedral set in the carrier source

    Its closure is every source simplex whose value lies in the closure of W.
    """
    if carrier.target_level is not None and carrier.target_level < w.level:
        carrier = carrier.refine_target(w.level)
    if carrier.target != w.ambient:
        raise ShapeError("open set does not live in the carrier target")
    members = [s for s in carrier.source.all_simplices() if carrier.value(s).issubset(w.closure)]
    ambient = carrier.source
    return OpenPolyhedralSet(ambient, Subcomplex(ambient, members), carrier.source_record)


# ===== DOMINATION =====

@dataclass
class DominationData:
    """K dominates X: r: K -> X simplicial with r o s = id for the inclusion s"""
    record: object
    subspace: Subcomplex
    retraction: SimplicialMap
    x_record: object = None

    def __post_init__(self):
        x = self.subspace.as_complex()
        if self.retraction.source != self.record.complex:
            raise RetractionError("retraction is not defined on the dominating complex")
        if self.retraction.target != x:
            raise RetractionError("retraction does not land in the subcomplex")
        moved = [v for v in x.vertices if self.retraction(v) != v]
        if moved:
            raise RetractionError(f"retraction moves vertex {moved[0]!r} of the subcomplex",
                                  {'vertex': str(moved[0])})
        if self.x_record is None:
            self.x_record = subdivision_record(x)

    def inclusion(self, level):
        """s: X^level -> K^(m + level), the identity on vertices"""
        source = self.x_record.refined(level)
        target = self.record.refined(self.record.level + level)
        return SimplicialMap(source.complex, target.complex, {v: v for v in source.complex.vertices}), source, target

    def retraction_carrier(self):
        return AcyclicCarrier.from_simplicial_map(self.retraction, self.record, self.x_record, name='r')

    def inclusion_carrier(self, level):
        smap, source, target = self.inclusion(level)
        return AcyclicCarrier.from_simplicial_map(smap, source, target, name='s')


def index_via_domination(d, f, u, vertex_rule=config.DEFAULT_VERTEX_RULE,
                         filling_rule=config.DEFAULT_FILLING_RULE):
    """
    Index of F on U in X as the index of s F r on r^{-1}(U) in K

    Args:
        d: DominationData
        f: AcyclicCarrier on X (records from d.x_record)
        u: OpenPolyhedralSet in X (record from d.x_record)
    """
    if f.source_record is None or f.source_record.base != d.x_record.base:
        raise ShapeError("carrier is not defined on the dominated subcomplex")
    r = d.retraction_carrier()
    s = d.inclusion_carrier(f.target_level)
    composite = CompositionCarrier([r, f, s], name=f"s o {f.name} o r")
    pre = preimage_open_set(r, u)
    result = fixed_point_index(index_problem(composite, pre), vertex_rule, filling_rule)
    result.route = 'domination'
    return result


# ===== AXIOM HARNESS =====

@dataclass
class AdditivityInstance:
    name: str
    carrier: object
    whole: OpenPolyhedralSet
    parts: List[OpenPolyhedralSet]
    axiom: str = 'add'


@dataclass
class HomotopyInstance:
    """Either two carriers joined by a prism carrier, or one carrier under two choice rules"""
    name: str
    start: object
    open_set: OpenPolyhedralSet
    end: object = None
    prism: object = None
    join: object = None
    axiom: str = 'hom'


@dataclass
class CommutativityInstance:
    """forward: K -> L, backward: L -> K, open set W in K"""
    name: str
    forward: object
    backward: object
    open_set: OpenPolyhedralSet
    axiom: str = 'comm'


@dataclass
class NormalizationInstance:
    name: str
    carrier: object
    open_set: OpenPolyhedralSet
    axiom: str = 'norm'


def _outcome(instance, status, left=None, right=None, explanation='', details=None):
    return {'axiom': instance.axiom, 'instance': instance.name, 'status': status,
            'left': left, 'right': right, 'explanation': explanation, 'details': details or {}}


def _cells(p, simplices):
    rec_l = p.record.refined(p.carrier_level)
    return {rec_l.carrier_cell(s, p.level) for s in simplices}


def _check_additivity(inst):
    for i, a in enumerate(inst.parts):
        if not a.closure.issubset(inst.whole.closure):
            return _outcome(inst, 'skipped', explanation=f"part {i} is not inside U")
        for b in inst.parts[i + 1:]:
            if a.interior_simplices() & b.interior_simplices():
                return _outcome(inst, 'skipped', explanation="parts are not disjoint")
    whole = index_problem(inst.carrier, inst.whole)
    parts = [index_problem(inst.carrier, part) for part in inst.parts]
    inside = set()
    for part in inst.parts:
        inside |= part.interior_simplices()
    stray = [c for c in _cells(whole, hit_simplices(whole)) if c not in inside]
    if stray:
        return _outcome(inst, 'skipped', explanation="fixed cells outside the union of the parts",
                        details={'cell': simplex_labels(stray[0])})
    left = fixed_point_index(whole).value
    values = [fixed_point_index(p).value for p in parts]
    return _outcome(inst, 'pass' if left == sum(values) else 'fail', left, sum(values),
                    details={'parts': values})


def _check_homotopy(inst):
    if inst.end is None:
        p = index_problem(inst.start, inst.open_set)
        left = fixed_point_index(p).value
        right = fixed_point_index(p, 'greatest', 'reversed').value
        return _outcome(inst, 'pass' if left == right else 'fail', left, right,
                        explanation='two choice rules for one carrier')
    h = inst.prism or straight_line_prism(inst.start, inst.end, inst.join)
    swept = swept_carrier(h, inst.start.source, inst.start.source_record)
    if not check_admissible(index_problem(swept, inst.open_set)).admissible:
        return _outcome(inst, 'skipped', explanation="the homotopy has fixed cells on the boundary of U")
    prism = prism_homotopy_carrier(inst.start, inst.end, h)
    left = fixed_point_index(index_problem(inst.start, inst.open_set)).value
    right = fixed_point_index(index_problem(inst.end, inst.open_set)).value
    return _outcome(inst, 'pass' if left == right else 'fail', left, right,
                    details={'prism_homotopy_verified': prism.check.ok})


def _check_commutativity(inst):
    g, h = inst.forward, inst.backward
    on_k = CompositionCarrier([g, h])
    on_l = CompositionCarrier([h, g])
    pk = index_problem(on_k, inst.open_set)
    pre = preimage_open_set(h, pk.open_set)
    pl = index_problem(on_l, pre)
    if not check_admissible(pk).admissible or not check_admissible(pl).admissible:
        return _outcome(inst, 'skipped', explanation="a side is not admissible")
    fixed = pk.record.complex.closure(_cells(pk, hit_simplices(pk)))
    h_fine = h if h.target_level >= pk.level else h.refine_target(pk.level)
    for y in h_fine.source.all_simplices():
        if y not in pre.closure and h_fine.value(y).shares_simplex(fixed):
            return _outcome(inst, 'skipped', explanation="values outside the preimage meet fixed cells",
                            details={'simplex': simplex_labels(y)})
    left = fixed_point_index(pl).value
    right = fixed_point_index(pk).value
    return _outcome(inst, 'pass' if left == right else 'fail', left, right)


def _check_normalization(inst):
    p = index_problem(inst.carrier, inst.open_set)
    chain_value = fixed_point_index(p).value
    route = fixed_point_index_by_homology(p)
    values = {chain_value, route.homology.lefschetz, route.cohomology.lefschetz}
    return _outcome(inst, 'pass' if len(values) == 1 else 'fail', chain_value, route.homology.lefschetz,
                    details={'cohomology': route.cohomology.lefschetz})


_CHECKS = {'add': _check_additivity, 'hom': _check_homotopy,
           'comm': _check_commutativity, 'norm': _check_normalization}


@dataclass
class AxiomReport:
    results: List[dict]

    @property
    def passed(self):
        return all(r['status'] != 'fail' for r in self.results)

    def counts(self):
        counts = {'pass': 0, 'fail': 0, 'skipped': 0}
        for r in self.results:
            counts[r['status']] += 1
        return counts

    def to_dict(self):
        return {'passed': self.passed, 'counts': self.counts(), 'results': self.results}


def _run_instance(instance):
    try:
        return _CHECKS[instance.axiom](instance)
    except InadmissibleError as e:
        log_manager.log(f"axiom instance {instance.name!r} skipped: {e.message}", 'warning')
        return _outcome(instance, 'skipped', explanation=e.message)


def verify_axioms(instances, axioms=None):
    """
    Check each axiom instance; hypothesis violations are skipped, not failed

    Args:
        instances: Additivity/Homotopy/Commutativity/Normalization instances
        axioms: Optional subset of 'add', 'hom', 'comm', 'norm'
    """
    selected = [i for i in instances if axioms is None or i.axiom in axioms]
    if config.HARNESS_WORKERS > 1:
        with ThreadPoolExecutor(max_workers=config.HARNESS_WORKERS) as pool:
            results = list(pool.map(_run_instance, selected))
    else:
        results = [_run_instance(i) for i in selected]
    report = AxiomReport(results)
    counts = report.counts()
    log_manager.log(f"axiom check: {counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped",
                    'success' if report.passed else 'error')
    return report
