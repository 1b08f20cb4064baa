"""
Acyclic Carriers and Chain Approximations
Monotone assignments of acyclic subcomplexes, skeletal construction of
carried chain maps and homotopies, composition, approximation systems and
prism homotopies
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List

import config
import log_manager
from chain import (GradedIntegerMap, MapCheck, boundary_matrices, chain_add, chain_support,
                   chain_to_dict, homology, is_chain_map, simplex_boundary, solve_boundary,
                   subdivision_chain_map, verify_chain_homotopy)
from errors import (AcyclicityError, InvariantError, LevelMismatchError, NotFoundError,
                    PreconditionError, ShapeError)
from rational_oracle import is_rationally_acyclic
from simplicial import (SimplicialComplex, Subcomplex, build_complex, closed_star,
                        simplex_labels, subdivide_subcomplex)


class AcyclicCarrier:
    """Monotone assignment source simplex -> nonempty subcomplex of the target"""

    def __init__(self, source, target, assignment, name='carrier',
                 source_record=None, target_record=None):
        """
        Initialize carrier

        Args:
            source: SimplicialComplex (tau^l, possibly restricted to a closure)
            target: SimplicialComplex
            assignment: dict source simplex -> Subcomplex of target
            name: Label used in reports and logs
            source_record: SubdivisionRecord whose complex contains source
            target_record: SubdivisionRecord whose complex is target

        Acyclicity of the values is not checked here; see check_acyclic().
        """
        self.source = source
        self.target = target
        self.name = name
        self.source_record = source_record
        self.target_record = target_record
        self.assignment = {}
        for s in source.all_simplices():
            if s not in assignment:
                raise PreconditionError(f"carrier {name!r} has no value on {s!r}",
                                        {'simplex': simplex_labels(s)})
            value = assignment[s]
            if value.parent != target:
                raise ShapeError(f"value of {s!r} is not a subcomplex of the target")
            if value.is_empty():
                raise PreconditionError(f"carrier {name!r} has an empty value on {s!r}",
                                        {'simplex': simplex_labels(s)})
            self.assignment[s] = value
        for s in source.all_simplices():
            for f in SimplicialComplex.facets(s):
                if not self.assignment[f].issubset(self.assignment[s]):
                    raise PreconditionError(f"carrier {name!r} is not monotone at {s!r}",
                                            {'simplex': simplex_labels(s), 'face': simplex_labels(f)})

    def __repr__(self):
        return f"AcyclicCarrier({self.name!r}, source={self.source!r}, target={self.target!r})"

    @property
    def source_level(self):
        return self.source_record.level if self.source_record is not None else None

    @property
    def target_level(self):
        return self.target_record.level if self.target_record is not None else None

    def value(self, simplex):
        try:
            return self.assignment[tuple(simplex)]
        except KeyError:
            raise NotFoundError(f"simplex {simplex!r} not in the carrier source")

    __call__ = value

    def same_assignment(self, other):
        return (self.source == other.source and self.target == other.target
                and all(self.assignment[s].simplices == other.assignment[s].simplices
                        for s in self.assignment))

    # ----- constructors -----

    @classmethod
    def identity(cls, rec):
        c = rec.complex
        return cls(c, c, {s: c.closure([s]) for s in c.all_simplices()}, name='identity',
                   source_record=rec, target_record=rec)

    @classmethod
    def constant(cls, source_rec, target_rec, vertex, star=False):
        """Every simplex goes to one vertex (or its closed star)"""
        target = target_rec.complex
        value = closed_star(target, (vertex,)) if star else target.closure([(vertex,)])
        return cls(source_rec.complex, target, {s: value for s in source_rec.complex.all_simplices()},
                   name=f"constant {vertex}", source_record=source_rec, target_record=target_rec)

    @classmethod
    def constant_value(cls, source_rec, target_rec, simplices, name='constant value'):
        """Every simplex goes to the closure of the given target simplices"""
        value = target_rec.complex.closure(simplices)
        return cls(source_rec.complex, target_rec.complex,
                   {s: value for s in source_rec.complex.all_simplices()},
                   name=name, source_record=source_rec, target_record=target_rec)

    @classmethod
    def from_simplicial_map(cls, smap, source_record=None, target_record=None, name='simplicial map'):
        """Value of a simplex is the closed image simplex"""
        target = smap.target
        assignment = {s: target.closure([smap.image(s)[0]]) for s in smap.source.all_simplices()}
        return cls(smap.source, target, assignment, name=name,
                   source_record=source_record, target_record=target_record)

    @classmethod
    def from_table(cls, source, target, table, monotone_complete=False, name='table',
                   source_record=None, target_record=None):
        """
        Build from source simplex -> list of target simplices generating the value

        With monotone_complete, an omitted simplex takes the intersection of
        the values of its listed cofaces, or failing that the union of the
        values of its faces.
        """
        values = {}
        for s, generators in table.items():
            if s not in source:
                raise NotFoundError(f"carrier table names {s!r}, not a source simplex")
            values[s] = target.closure(generators)
        missing = [s for s in source.all_simplices() if s not in values]
        if missing and not monotone_complete:
            raise PreconditionError(f"carrier table omits {missing[0]!r} (use --monotone-complete)",
                                    {'simplex': simplex_labels(missing[0])})

        remaining = []
        for s in sorted(missing, key=lambda s: -len(s)):
            above = [values[t] for t in source.cofaces(s) if t in table]
            if above:
                values[s] = reduce(Subcomplex.intersection, above)
            else:
                remaining.append(s)
        for s in sorted(remaining, key=len):
            below = [values[f] for f in SimplicialComplex.facets(s) if f in values]
            if not below:
                raise PreconditionError(f"cannot complete the carrier at {s!r}",
                                        {'simplex': simplex_labels(s)})
            values[s] = reduce(Subcomplex.union, below)
        if missing:
            log_manager.log(f"carrier {name!r}: completed {len(missing)} omitted simplices")
        return cls(source, target, values, name=name,
                   source_record=source_record, target_record=target_record)

    # ----- changes of level and domain -----

    def restrict_source(self, sub):
        """Restriction to a subcomplex of the source"""
        complex_ = sub.as_complex() if isinstance(sub, Subcomplex) else sub
        return AcyclicCarrier(complex_, self.target, {s: self.assignment[s] for s in complex_.all_simplices()},
                              name=self.name, source_record=self.source_record,
                              target_record=self.target_record)

    def refine_source(self, level):
        """The same multivalued map seen from tau^level: a simplex takes the value of its carrier cell"""
        if self.source_record is None:
            raise PreconditionError(f"carrier {self.name!r} has no source subdivision record")
        if level == self.source_level:
            return self
        if level < self.source_level:
            raise LevelMismatchError(f"cannot coarsen the source of {self.name!r} to level {level}")
        rec = self.source_record.refined(level)
        base = self.source_level
        members = [s for s in rec.complex.all_simplices() if rec.carrier_cell(s, base) in self.source]
        complex_ = rec.complex.restricted(members) if len(members) < len(rec.complex) else rec.complex
        assignment = {s: self.assignment[rec.carrier_cell(s, base)] for s in members}
        return AcyclicCarrier(complex_, self.target, assignment, name=self.name,
                              source_record=rec, target_record=self.target_record)

    def refine_target(self, level):
        """Values replaced by their subdivisions at a finer target level"""
        if self.target_record is None:
            raise PreconditionError(f"carrier {self.name!r} has no target subdivision record")
        if level == self.target_level:
            return self
        if level < self.target_level:
            raise LevelMismatchError(f"cannot coarsen the target of {self.name!r} to level {level}")
        rec = self.target_record.refined(level)
        cache = {}
        assignment = {}
        for s, value in self.assignment.items():
            if value.simplices not in cache:
                cache[value.simplices] = subdivide_subcomplex(rec, value, self.target_level)
            assignment[s] = cache[value.simplices]
        return AcyclicCarrier(self.source, rec.complex, assignment, name=self.name,
                              source_record=self.source_record, target_record=rec)


# ===== ACYCLICITY =====

@dataclass
class AcyclicityReport:
    carrier_name: str
    entries: List[dict]
    oracle: str = 'integer'

    @property
    def acyclic(self):
        return all(e['acyclic'] for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e['acyclic']]

    def to_dict(self):
        return {
            'carrier': self.carrier_name,
            'oracle': self.oracle,
            'acyclic': self.acyclic,
            'simplices': len(self.entries),
            'failures': [{'simplex': simplex_labels(e['simplex']),
                          'profile': e['profile'].to_dict() if e['profile'] is not None else None}
                         for e in self.failures()],
        }


def check_acyclic(c, oracle='integer'):
    """
    Verdict per source simplex: is the value nonempty with zero reduced homology

    Args:
        c: AcyclicCarrier
        oracle: 'integer' (Smith normal form over Z) or 'rational' (rank over Q)
    """
    verdicts = {}
    entries = []
    for s in c.source.all_simplices():
        value = c.assignment[s]
        if value.simplices not in verdicts:
            if oracle == 'rational':
                verdicts[value.simplices] = (is_rationally_acyclic(value), None)
            else:
                profile = homology(boundary_matrices(value.as_complex()), reduced=True)
                verdicts[value.simplices] = (profile.is_zero(), profile)
        acyclic, profile = verdicts[value.simplices]
        entries.append({'simplex': s, 'acyclic': acyclic, 'profile': None if acyclic else profile})
    report = AcyclicityReport(c.name, entries, oracle)
    if not report.acyclic:
        log_manager.log(f"carrier {c.name!r}: {len(report.failures())} non-acyclic values ({oracle})",
                        'warning')
    return report


# ===== CHAIN APPROXIMATIONS =====

@dataclass
class ChainApproximation:
    """Augmentation preserving chain map carried by a carrier"""
    carrier: object
    map: GradedIntegerMap
    vertex_rule: str = config.DEFAULT_VERTEX_RULE
    filling_rule: str = config.DEFAULT_FILLING_RULE
    canonical: bool = True
    flagged: List[tuple] = field(default_factory=list)

    @property
    def levels(self):
        return (self.carrier.source_level, self.carrier.target_level)

    def image(self, simplex):
        return self.map.image(simplex)

    def to_dict(self):
        source = self.map.source.complex
        return {
            'carrier': self.carrier.name,
            'levels': list(self.levels),
            'vertex_rule': self.vertex_rule,
            'filling_rule': self.filling_rule,
            'canonical': self.canonical,
            'flagged': [simplex_labels(s) for s in self.flagged],
            'images': [{'simplex': simplex_labels(s), 'chain': chain_to_dict(self.image(s))}
                       for s in source.all_simplices()],
        }


def _check_rules(vertex_rule, filling_rule):
    if vertex_rule not in config.VERTEX_RULES:
        raise PreconditionError(f"unknown vertex rule {vertex_rule!r}")
    if filling_rule not in config.FILLING_RULES:
        raise PreconditionError(f"unknown filling rule {filling_rule!r}")


def _fill(simplex, z, value, filling_rule, what):
    solution = solve_boundary(z, value, filling_rule)
    if not solution.solved:
        log_manager.log(f"{what}: no filling at {simplex_labels(simplex)}", 'error')
        raise AcyclicityError(f"{what}: cycle cannot be filled at {simplex_labels(simplex)}",
                              simplex_labels(simplex), solution.obstruction)
    return solution.chain


def _by_dimension(complex_, fill_one):
    """Run fill_one over each dimension in order; simplices of one dimension may run in parallel"""
    images = {}
    for k in range(complex_.dimension + 1):
        layer = complex_.simplices(k)
        if config.FILL_WORKERS > 1 and len(layer) > 1:
            with ThreadPoolExecutor(max_workers=config.FILL_WORKERS) as pool:
                results = list(pool.map(lambda s: fill_one(s, images), layer))
        else:
            results = [fill_one(s, images) for s in layer]
        images.update(zip(layer, results))
    return images


def build_chain_approximation(c, vertex_rule=config.DEFAULT_VERTEX_RULE,
                              filling_rule=config.DEFAULT_FILLING_RULE):
    """
    Carried chain map by skeletal induction

    A vertex goes to the least (or greatest) vertex of its value; a
    k-simplex goes to a filling of the image of its boundary inside its
    value, solved exactly over Z.

    Raises:
        AcyclicityError: a boundary image could not be filled
    """
    _check_rules(vertex_rule, filling_rule)
    what = f"approximation of {c.name!r}"

    def fill_one(s, images):
        value = c.assignment[s]
        if len(s) == 1:
            w = value.least_vertex() if vertex_rule == 'least' else value.greatest_vertex()
            return {(w,): 1}
        z = {}
        for face, sign in simplex_boundary(s).items():
            z = chain_add(z, images[face], sign)
        return _fill(s, z, value, filling_rule, what)

    images = _by_dimension(c.source, fill_one)
    phi = GradedIntegerMap.from_images(boundary_matrices(c.source), boundary_matrices(c.target), images)
    log_manager.log(f"built {what} ({vertex_rule}/{filling_rule})")
    return ChainApproximation(c, phi, vertex_rule, filling_rule)


@dataclass
class ApproximationCheck:
    ok: bool
    failures: List[dict]

    def to_dict(self):
        return {'ok': self.ok, 'failures': [
            {'check': f['check'], 'simplex': simplex_labels(f['simplex']), 'reason': f['reason']}
            for f in self.failures]}


def verify_approximation(a):
    """Chain map, augmentation and carried-ness, with failing simplices as witnesses"""
    c = a.carrier
    if a.map.degree != 0 or a.map.source.complex != c.source or a.map.target.complex != c.target:
        raise ShapeError("approximation and carrier disagree on source or target")
    failures = []
    check = is_chain_map(a.map)
    if not check.ok:
        kind = 'augmentation' if len(check.witness) == 1 else 'chain map'
        failures.append({'check': kind, 'simplex': check.witness, 'reason': check.reason})
    for s in c.source.all_simplices():
        outside = [t for t in chain_support(a.image(s)) if t not in c.value(s)]
        if outside:
            failures.append({'check': 'carried', 'simplex': s,
                             'reason': f"image leaves the value at {simplex_labels(outside[0])}"})
    return ApproximationCheck(not failures, failures)


# ===== HOMOTOPIES =====

def fill_homotopy(c, f, g, filling_rule=config.DEFAULT_FILLING_RULE):
    """
    Carried D with f - g = dD + Dd for two chain maps carried by c

    D(s) fills f(s) - g(s) - D(ds) inside the value of s.
    """
    what = f"homotopy over {c.name!r}"

    def fill_one(s, images):
        z = chain_add(f.image(s), g.image(s), -1)
        for face, sign in simplex_boundary(s).items():
            z = chain_add(z, images[face], -sign)
        return _fill(s, z, c.assignment[s], filling_rule, what)

    images = _by_dimension(c.source, fill_one)
    return GradedIntegerMap.from_images(f.source, f.target, images, degree=1)


def homotopy_between(a1, a2, filling_rule=config.DEFAULT_FILLING_RULE):
    """Carried chain homotopy D between two approximations of one carrier"""
    if a1.carrier is not a2.carrier and not a1.carrier.same_assignment(a2.carrier):
        raise PreconditionError("approximations have different carriers")
    for a in (a1, a2):
        if not verify_approximation(a).ok:
            raise PreconditionError(f"approximation of {a.carrier.name!r} does not verify")
    d = fill_homotopy(a1.carrier, a1.map, a2.map, filling_rule)
    check = verify_chain_homotopy(a1.map, a2.map, d)
    if not check.ok:
        raise InvariantError(f"filled homotopy fails at {check.witness!r}")
    return d


# ===== COMPOSITION =====

def _bridge(c1, c2):
    """
    Subdivision map from the target of c1 to the source of c2, or None

    Returns:
        (GradedIntegerMap or None, fine SubdivisionRecord or None)
    """
    if c1.target == c2.source:
        return None, None
    r1, r2 = c1.target_record, c2.source_record
    if r1 is None or r2 is None or r1.base != r2.base or r2.level < r1.level:
        raise LevelMismatchError(f"{c2.name!r} cannot follow {c1.name!r}: levels do not chain")
    b = subdivision_chain_map(r1, r1.level, r2.level)
    if b.target.complex != c2.source:
        b = b.project_target(boundary_matrices(c2.source))
    return b, r2


def compose_carriers(c2, c1):
    """
    Carrier of c2 after c1

    The value at a simplex is the union of the c2 values over the whole
    (subdivided) c1 value, which keeps the result monotone.
    """
    _, fine = _bridge(c1, c2)
    cache = {}
    assignment = {}
    for s, value in c1.assignment.items():
        if value.simplices not in cache:
            cells = subdivide_subcomplex(fine, value, c1.target_level) if fine is not None else value
            union = set()
            for t in cells.simplices:
                if t not in c2.source:
                    raise LevelMismatchError(f"value of {c1.name!r} leaves the source of {c2.name!r}")
                union |= c2.assignment[t].simplices
            cache[value.simplices] = Subcomplex(c2.target, union)
        assignment[s] = cache[value.simplices]
    return AcyclicCarrier(c1.source, c2.target, assignment, name=f"{c2.name} o {c1.name}",
                          source_record=c1.source_record, target_record=c2.target_record)


def compose(a2, a1):
    """
    Approximation of the composite: a2 after (subdivision after) a1

    Composite values need not be acyclic; non-acyclic ones are kept and
    listed in the result's flagged simplices.
    """
    b, _ = _bridge(a1.carrier, a2.carrier)
    first = a1.map if b is None else b.compose(a1.map)
    phi = a2.map.compose(first)
    carrier = compose_carriers(a2.carrier, a1.carrier)
    flagged = [e['simplex'] for e in check_acyclic(carrier).failures()]
    if flagged:
        log_manager.log(f"composite {carrier.name!r} has {len(flagged)} non-acyclic values", 'warning')
    return ChainApproximation(carrier, phi, a1.vertex_rule, a1.filling_rule,
                              canonical=a1.canonical and a2.canonical,
                              flagged=sorted(set(a1.flagged) | set(flagged),
                                            key=lambda s: (len(s), carrier.source.key(s))))


class CompositionCarrier:
    """F_n o ... o F_1 kept as its factors"""

    def __init__(self, factors, name=None):
        """
        Args:
            factors: AcyclicCarrier list in application order (F_1 first)
        """
        if not factors:
            raise PreconditionError("composition needs at least one factor")
        self.factors = list(factors)
        for c1, c2 in zip(self.factors, self.factors[1:]):
            _bridge(c1, c2)
        self.name = name or ' o '.join(f.name for f in reversed(self.factors))
        self._composite = None

    def __repr__(self):
        return f"CompositionCarrier({self.name!r}, {len(self.factors)} factors)"

    @property
    def source(self):
        return self.factors[0].source

    @property
    def target(self):
        return self.factors[-1].target

    @property
    def source_record(self):
        return self.factors[0].source_record

    @property
    def target_record(self):
        return self.factors[-1].target_record

    @property
    def source_level(self):
        return self.factors[0].source_level

    @property
    def target_level(self):
        return self.factors[-1].target_level

    def composite(self):
        """Single carrier of the whole composite (values may be non-acyclic)"""
        if self._composite is None:
            result = self.factors[0]
            for c in self.factors[1:]:
                result = compose_carriers(c, result)
            self._composite = result
        return self._composite

    def value(self, simplex):
        return self.composite().value(simplex)

    @property
    def assignment(self):
        return self.composite().assignment

    def _replace(self, first=None, last=None):
        factors = list(self.factors)
        if first is not None:
            factors[0] = first
        if last is not None:
            factors[-1] = last
        return CompositionCarrier(factors, self.name)

    def refine_source(self, level):
        return self._replace(first=self.factors[0].refine_source(level))

    def restrict_source(self, sub):
        return self._replace(first=self.factors[0].restrict_source(sub))

    def refine_target(self, level):
        return self._replace(last=self.factors[-1].refine_target(level))

    def build_approximation(self, vertex_rule=config.DEFAULT_VERTEX_RULE,
                            filling_rule=config.DEFAULT_FILLING_RULE):
        """Composite of the factor approximations"""
        result = build_chain_approximation(self.factors[0], vertex_rule, filling_rule)
        for c in self.factors[1:]:
            result = compose(build_chain_approximation(c, vertex_rule, filling_rule), result)
        return result


def approximate(c, vertex_rule=config.DEFAULT_VERTEX_RULE, filling_rule=config.DEFAULT_FILLING_RULE):
    """Approximation of an AcyclicCarrier or of a CompositionCarrier"""
    if isinstance(c, CompositionCarrier):
        return c.build_approximation(vertex_rule, filling_rule)
    return build_chain_approximation(c, vertex_rule, filling_rule)


def restricted_subdivision_map(rec, k, l, source, target):
    """b(k, l) from the chains of source (in tau^k) to the chains of target (in tau^l)"""
    b = subdivision_chain_map(rec, k, l)
    if b.source.complex != source:
        b = b.restrict_source(boundary_matrices(source))
    if b.target.complex != target:
        b = b.project_target(boundary_matrices(target))
    return b


# ===== APPROXIMATION SYSTEMS =====

@dataclass
class ApproximationSystem:
    """
    Approximations of one carrier at several source levels

    homotopies[l] is the carried D with phi_next o b - phi_l = dD + Dd,
    where next is the following listed level.
    """
    carrier: AcyclicCarrier
    approximations: Dict[int, ChainApproximation]
    homotopies: Dict[int, GradedIntegerMap]

    @property
    def levels(self):
        return sorted(self.approximations)


def build_approximation_system(c, levels, vertex_rule=config.DEFAULT_VERTEX_RULE,
                               filling_rule=config.DEFAULT_FILLING_RULE):
    """One approximation per source level plus compatibility homotopies between neighbours"""
    levels = sorted(set(levels))
    carriers = {l: c.refine_source(l) for l in levels}
    approximations = {l: build_chain_approximation(carriers[l], vertex_rule, filling_rule)
                      for l in levels}
    homotopies = {}
    for l, nxt in zip(levels, levels[1:]):
        b = restricted_subdivision_map(c.source_record, l, nxt, carriers[l].source, carriers[nxt].source)
        refined = approximations[nxt].map.compose(b)
        d = fill_homotopy(carriers[l], refined, approximations[l].map, filling_rule)
        check = verify_chain_homotopy(refined, approximations[l].map, d)
        if not check.ok:
            raise InvariantError(f"compatibility homotopy fails at {check.witness!r}")
        homotopies[l] = d
    log_manager.log(f"approximation system of {c.name!r} at levels {levels}")
    return ApproximationSystem(c, approximations, homotopies)


# ===== PRISMS =====

def _staircase(simplex, i):
    return tuple((v, 0) for v in simplex[:i + 1]) + tuple((v, 1) for v in simplex[i:])


def prism_complex(source):
    """Staircase triangulation of source x I with vertex order (v,0) < (v,1) per v"""
    vertices = [(v, t) for v in source.vertices for t in (0, 1)]
    maximal = [_staircase(s, i) for s in source.all_simplices() for i in range(len(s))]
    return build_complex(maximal, universe=vertices)


def prism_operator(source, prism):
    """P(s) = sum (-1)^i staircase_i(s); dP + Pd = top - bottom"""
    images = {s: {_staircase(s, i): (-1) ** i for i in range(len(s))} for s in source.all_simplices()}
    return GradedIntegerMap.from_images(boundary_matrices(source), boundary_matrices(prism), images, degree=1)


def _base_simplex(source, prism_simplex):
    return source.sort_simplex(v for v, _ in prism_simplex)


def straight_line_prism(c1, c2, join):
    """
    Carrier H on source x I: c1 on the bottom, c2 on the top, join in between

    Args:
        join: AcyclicCarrier on the same source, or a single Subcomplex used everywhere
    """
    if c1.source != c2.source or c1.target != c2.target:
        raise ShapeError("homotopy ends have different sources or targets")
    source = c1.source
    prism = prism_complex(source)
    assignment = {}
    for rho in prism.all_simplices():
        base = _base_simplex(source, rho)
        times = {t for _, t in rho}
        if times == {0}:
            assignment[rho] = c1.value(base)
        elif times == {1}:
            assignment[rho] = c2.value(base)
        else:
            assignment[rho] = join if isinstance(join, Subcomplex) else join.value(base)
    return AcyclicCarrier(prism, c1.target, assignment, name=f"{c1.name} ~ {c2.name}",
                          target_record=c1.target_record)


def constant_prism(c):
    """H(s x I) = c(s)"""
    return straight_line_prism(c, c, c)


def swept_carrier(h, source, source_record=None):
    """Carrier s -> H(s x I) on the base of a prism carrier"""
    assignment = {}
    for s in source.all_simplices():
        union = set()
        for i in range(len(s)):
            union |= h.value(_staircase(s, i)).simplices
        assignment[s] = Subcomplex(h.target, union)
    return AcyclicCarrier(source, h.target, assignment, name=f"swept {h.name}",
                          source_record=source_record, target_record=h.target_record)


@dataclass
class PrismHomotopy:
    prism: SimplicialComplex
    carrier: AcyclicCarrier
    bottom: ChainApproximation
    top: ChainApproximation
    prism_approximation: ChainApproximation
    homotopy: GradedIntegerMap
    check: MapCheck

    def to_dict(self):
        return {'carrier': self.carrier.name, 'verified': self.check.ok,
                'homotopy': self.homotopy.to_dict()}


def prism_homotopy_carrier(c1, c2, h, vertex_rule=config.DEFAULT_VERTEX_RULE,
                           filling_rule=config.DEFAULT_FILLING_RULE):
    """
    Validate a prism carrier between c1 and c2 and build the homotopy it carries

    With Phi an approximation of H, Phi restricted to the ends reproduces the
    approximations of c1 and c2, so D = -Phi o P satisfies
    phi1 - phi2 = dD + Dd.
    """
    prism = prism_complex(c1.source)
    if h.source != prism or h.target != c1.target or c2.target != c1.target:
        raise ShapeError("prism carrier is not defined on source x I with the common target")
    for s in c1.source.all_simplices():
        bottom, top = _staircase(s, len(s) - 1)[:-1], _staircase(s, 0)[1:]
        if h.value(bottom).simplices != c1.value(s).simplices:
            raise PreconditionError(f"prism carrier does not restrict to {c1.name!r} at {s!r}",
                                    {'simplex': simplex_labels(s)})
        if h.value(top).simplices != c2.value(s).simplices:
            raise PreconditionError(f"prism carrier does not restrict to {c2.name!r} at {s!r}",
                                    {'simplex': simplex_labels(s)})
    report = check_acyclic(h)
    if not report.acyclic:
        failure = report.failures()[0]
        raise AcyclicityError(f"prism carrier has a non-acyclic value at {simplex_labels(failure['simplex'])}",
                              simplex_labels(failure['simplex']), failure['profile'].to_dict())

    big_phi = build_chain_approximation(h, vertex_rule, filling_rule)
    phi1 = build_chain_approximation(c1, vertex_rule, filling_rule)
    phi2 = build_chain_approximation(c2, vertex_rule, filling_rule)
    d = -big_phi.map.compose(prism_operator(c1.source, prism))
    check = verify_chain_homotopy(phi1.map, phi2.map, d)
    if not check.ok:
        raise InvariantError(f"prism homotopy fails at {check.witness!r}")
    return PrismHomotopy(prism, h, phi1, phi2, big_phi, d, check)
