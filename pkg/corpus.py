"""
Standard Corpus
Small complexes with known homology, carriers with known indices and the
axiom instances checked by the harness
"""

from functools import lru_cache
from itertools import product

from carrier import AcyclicCarrier, constant_prism
from chain import boundary_matrices, simplicial_chain_map
from fixed_point_index import (AdditivityInstance, CommutativityInstance, DominationData, HomotopyInstance,
                               NormalizationInstance)
from simplicial import (SimplicialMap, build_complex, open_set_from_closure, subdivision_record,
                        whole_space)


# ===== COMPLEXES =====

def cycle(n):
    """Boundary of an n-gon, vertices '0'..'n-1'"""
    names = [str(i) for i in range(n)]
    return build_complex([(names[i], names[(i + 1) % n]) for i in range(n)], universe=names)


def hexagon():
    return cycle(6)


def square():
    return cycle(4)


def triangle():
    return build_complex([('0', '1', '2')])


def disk():
    """Cone over the hexagon with apex '6'"""
    names = [str(i) for i in range(7)]
    return build_complex([(names[i], names[(i + 1) % 6], '6') for i in range(6)], universe=names)


def projective_plane():
    """Six-vertex real projective plane"""
    faces = ['124', '126', '135', '136', '145', '234', '235', '256', '346', '456']
    return build_complex([tuple(f) for f in faces], universe=list('123456'))


def _grid(flip):
    def vertex(i, j):
        if j == 3:
            i, j = (-i if flip else i), 0
        return f"{i % 3}{j % 3}"

    triangles = []
    for i, j in product(range(3), range(3)):
        triangles.append((vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1)))
        triangles.append((vertex(i, j), vertex(i, j + 1), vertex(i + 1, j + 1)))
    return build_complex(triangles, universe=[f"{i}{j}" for i, j in product(range(3), range(3))])


def torus():
    return _grid(flip=False)


def klein_bottle():
    return _grid(flip=True)


def annulus(n=4):
    """Inner cycle a0..a(n-1), outer cycle b0..b(n-1)"""
    inner = [f"a{i}" for i in range(n)]
    outer = [f"b{i}" for i in range(n)]
    triangles = []
    for i in range(n):
        j = (i + 1) % n
        triangles.append((inner[i], outer[i], outer[j]))
        triangles.append((inner[i], inner[j], outer[j]))
    return build_complex(triangles, universe=inner + outer)


def interval(n=12):
    names = [str(i) for i in range(n + 1)]
    return build_complex([(names[i], names[i + 1]) for i in range(n)], universe=names)


def two_disks():
    return build_complex([('a0', 'a1', 'a2'), ('b0', 'b1', 'b2')])


COMPLEXES = {
    'circle': hexagon,
    'square': square,
    'triangle': triangle,
    'disk': disk,
    'projective_plane': projective_plane,
    'torus': torus,
    'klein_bottle': klein_bottle,
    'annulus': annulus,
    'interval': interval,
    'two_disks': two_disks,
}

# name -> {degree: (rank, torsion)}
EXPECTED_HOMOLOGY = {
    'circle': {0: (1, []), 1: (1, [])},
    'square': {0: (1, []), 1: (1, [])},
    'triangle': {0: (1, []), 1: (0, []), 2: (0, [])},
    'disk': {0: (1, []), 1: (0, []), 2: (0, [])},
    'projective_plane': {0: (1, []), 1: (0, [2]), 2: (0, [])},
    'torus': {0: (1, []), 1: (2, []), 2: (1, [])},
    'klein_bottle': {0: (1, []), 1: (1, [2]), 2: (0, [])},
    'annulus': {0: (1, []), 1: (1, []), 2: (0, [])},
    'interval': {0: (1, []), 1: (0, [])},
    'two_disks': {0: (2, []), 1: (0, []), 2: (0, [])},
}


@lru_cache(maxsize=None)
def record(name):
    """Shared level 0 record of a corpus complex"""
    return subdivision_record(COMPLEXES[name]())


# ===== CIRCLE MAPS =====

def cycle_position(vertex, n):
    """Position 0..2n-1 of a tau^1 vertex of an n-cycle, walking around once"""
    ends = [int(v) for v in vertex]
    if len(ends) == 1:
        return 2 * ends[0]
    a, b = ends
    return 2 * a + 1 if b - a == 1 else 2 * n - 1


def circle_simplicial_map(source_rec, n_source, target_rec, n_target, rule):
    """tau^1(n_source-cycle) -> n_target-cycle sending position p to vertex rule(p) mod n_target"""
    fine = source_rec.refined(1)
    vertex_map = {v: str(rule(cycle_position(v, n_source)) % n_target) for v in fine.complex.vertices}
    return SimplicialMap(fine.complex, target_rec.complex, vertex_map)


def circle_map(source_rec, n_source, target_rec, n_target, rule, name):
    smap = circle_simplicial_map(source_rec, n_source, target_rec, n_target, rule)
    return AcyclicCarrier.from_simplicial_map(smap, source_rec.refined(1), target_rec, name=name)


def doubling_map():
    rec = record('circle')
    return circle_simplicial_map(rec, 6, rec, 6, lambda p: p)


def doubling():
    """Degree 2 self-map of the hexagon"""
    rec = record('circle')
    return AcyclicCarrier.from_simplicial_map(doubling_map(), rec.refined(1), rec, name='doubling')


def rotation_map(shift=1):
    c = record('circle').complex
    return SimplicialMap(c, c, {v: str((int(v) + shift) % 6) for v in c.vertices})


def rotation(shift=1):
    rec = record('circle')
    return AcyclicCarrier.from_simplicial_map(rotation_map(shift), rec, rec, name=f"rotation {shift}")


def hexagon_to_square():
    """Degree 2"""
    return circle_map(record('circle'), 6, record('square'), 4, lambda p: 2 * p // 3, 'hexagon to square')


def square_to_hexagon():
    """Degree 1"""
    return circle_map(record('square'), 4, record('circle'), 6, lambda p: 3 * p // 4, 'square to hexagon')


# ===== INTERVAL =====

def three_clusters_map():
    """x -> min(max(2x - 6, 2), 10) from tau^1 of [0, 12] to [0, 12]"""
    rec = record('interval')
    fine = rec.refined(1)

    def position(vertex):
        ends = [int(v) for v in vertex]
        return 2 * ends[0] + len(ends) - 1

    vertex_map = {v: str(min(max(position(v) - 6, 2), 10)) for v in fine.complex.vertices}
    return SimplicialMap(fine.complex, rec.complex, vertex_map)


def three_clusters():
    """Fixed points 2 (attracting), 6 (repelling) and 10 (attracting)"""
    rec = record('interval')
    return AcyclicCarrier.from_simplicial_map(three_clusters_map(), rec.refined(1), rec, name='three clusters')


def interval_open_set(lo, hi):
    """Open set whose closure is [lo, hi] at level 0"""
    rec = record('interval')
    edges = [(str(i), str(i + 1)) for i in range(lo, hi)]
    return open_set_from_closure(rec.complex, rec.complex.closure(edges).simplices, rec)


def component_open_set(name, vertices):
    """Open set whose closure is one maximal simplex (a component)"""
    rec = record(name)
    return open_set_from_closure(rec.complex, rec.complex.closure([tuple(vertices)]).simplices, rec)


def arc_open_set():
    """Closure 0-1-2 on the hexagon; its boundary vertices are fixed by the identity"""
    rec = record('circle')
    return open_set_from_closure(rec.complex, rec.complex.closure([('0', '1'), ('1', '2')]).simplices, rec)


# ===== CARRIERS WITH KNOWN INDICES =====

def full_disk():
    rec = record('disk')
    return AcyclicCarrier.constant_value(rec, rec, rec.complex.simplices(2), name='full disk')


def projective_value():
    """Carrier on a triangle with value the whole projective plane: acyclic over Q only"""
    target = record('projective_plane')
    return AcyclicCarrier.constant_value(record('triangle'), target, target.complex.simplices(2),
                                         name='projective value')


def index_examples():
    """(name, carrier, open set, index) for whole-space and cluster problems"""
    interval_rec = record('interval')
    return [
        ('identity circle', AcyclicCarrier.identity(record('circle')), whole_space(record('circle')), 0),
        ('rotation circle', rotation(), whole_space(record('circle')), 0),
        ('doubling circle', doubling(), whole_space(record('circle')), -1),
        ('identity disk', AcyclicCarrier.identity(record('disk')), whole_space(record('disk')), 1),
        ('constant disk', AcyclicCarrier.constant(record('disk'), record('disk'), '6'),
         whole_space(record('disk')), 1),
        ('full disk', full_disk(), whole_space(record('disk')), 1),
        ('identity projective plane', AcyclicCarrier.identity(record('projective_plane')),
         whole_space(record('projective_plane')), 1),
        ('three clusters whole', three_clusters(), whole_space(interval_rec), 1),
        ('three clusters left', three_clusters(), interval_open_set(0, 4), 1),
        ('three clusters middle', three_clusters(), interval_open_set(4, 8), -1),
        ('three clusters right', three_clusters(), interval_open_set(8, 12), 1),
        ('three clusters upper', three_clusters(), interval_open_set(4, 12), 0),
    ]


def general_open_set_examples():
    """(name, carrier, V, index) where V itself is not admissible at level 0"""
    return [
        ('window around the repeller', three_clusters(), interval_open_set(3, 9), -1),
        ('window without fixed points', three_clusters(), interval_open_set(0, 1), 0),
    ]


def generated_self_maps():
    """Chain maps of simplicial self-maps: all vertex maps of a triangle, dihedral maps of the circle and disk"""
    maps = []
    tri = record('triangle').complex
    for images in product(tri.vertices, repeat=3):
        smap = SimplicialMap(tri, tri, dict(zip(tri.vertices, images)))
        maps.append((f"triangle {''.join(images)}", simplicial_chain_map(smap)))
    for name, center in (('circle', None), ('disk', '6')):
        c = record(name).complex
        for shift, flip in product(range(6), (1, -1)):
            vertex_map = {str(i): str((flip * i + shift) % 6) for i in range(6)}
            if center:
                vertex_map[center] = center
            smap = SimplicialMap(c, c, vertex_map)
            maps.append((f"{name} {'reflection' if flip < 0 else 'rotation'} {shift}",
                         simplicial_chain_map(smap, boundary_matrices(c), boundary_matrices(c))))
    return maps


# ===== DOMINATION =====

def annulus_domination():
    """Annulus retracting onto its inner circle: b_i -> a_i"""
    rec = record('annulus')
    k = rec.complex
    inner = k.closure([s for s in k.simplices(1) if all(v.startswith('a') for v in s)])
    vertex_map = {v: 'a' + v[1:] for v in k.vertices}
    retraction = SimplicialMap(k, inner.as_complex(), vertex_map)
    return DominationData(rec, inner, retraction)


# ===== AXIOM INSTANCES =====

def additivity_instances():
    two = record('two_disks')
    return [
        AdditivityInstance('three clusters', three_clusters(), whole_space(record('interval')),
                           [interval_open_set(0, 4), interval_open_set(4, 8), interval_open_set(8, 12)]),
        AdditivityInstance('repelling plus attracting', three_clusters(), interval_open_set(4, 12),
                           [interval_open_set(4, 8), interval_open_set(8, 12)]),
        AdditivityInstance('attracting plus repelling', three_clusters(), interval_open_set(0, 8),
                           [interval_open_set(0, 4), interval_open_set(4, 8)]),
        AdditivityInstance('two disks identity', AcyclicCarrier.identity(two), whole_space(two),
                           [component_open_set('two_disks', ('a0', 'a1', 'a2')),
                            component_open_set('two_disks', ('b0', 'b1', 'b2'))]),
    ]


def homotopy_instances():
    double = doubling()
    disk_rec = record('disk')
    interval_rec = record('interval')
    whole_disk = disk_rec.complex.whole()
    return [
        HomotopyInstance('doubling constant in time', double, whole_space(record('circle')),
                         end=double, prism=constant_prism(double)),
        HomotopyInstance('disk identity to constant', AcyclicCarrier.identity(disk_rec), whole_space(disk_rec),
                         end=AcyclicCarrier.constant(disk_rec, disk_rec, '6'), join=whole_disk),
        HomotopyInstance('disk constants', AcyclicCarrier.constant(disk_rec, disk_rec, '0'), whole_space(disk_rec),
                         end=AcyclicCarrier.constant(disk_rec, disk_rec, '6'), join=whole_disk),
        HomotopyInstance('interval constants', AcyclicCarrier.constant(interval_rec, interval_rec, '1'),
                         interval_open_set(0, 4),
                         end=AcyclicCarrier.constant(interval_rec, interval_rec, '2'),
                         join=interval_rec.complex.closure([('1', '2')])),
        HomotopyInstance('doubling choice rules', doubling(), whole_space(record('circle'))),
        HomotopyInstance('three clusters choice rules', three_clusters(), interval_open_set(4, 8)),
    ]


def commutativity_instances():
    two = record('two_disks')
    return [
        CommutativityInstance('hexagon and square', hexagon_to_square(), square_to_hexagon(),
                              whole_space(record('circle'))),
        CommutativityInstance('rotation and doubling', rotation(), doubling(), whole_space(record('circle'))),
        CommutativityInstance('two disk constants', AcyclicCarrier.constant(two, two, 'b0'),
                              AcyclicCarrier.constant(two, two, 'a0'),
                              component_open_set('two_disks', ('a0', 'a1', 'a2'))),
    ]


def normalization_instances():
    instances = []
    for name in ('circle', 'disk', 'projective_plane', 'torus', 'klein_bottle', 'two_disks'):
        instances.append(NormalizationInstance(f"identity {name}", AcyclicCarrier.identity(record(name)),
                                               whole_space(record(name))))
    instances.append(NormalizationInstance('doubling', doubling(), whole_space(record('circle'))))
    instances.append(NormalizationInstance('rotation', rotation(), whole_space(record('circle'))))
    instances.append(NormalizationInstance('full disk', full_disk(), whole_space(record('disk'))))
    instances.append(NormalizationInstance('three clusters', three_clusters(), whole_space(record('interval'))))
    return instances


def axiom_instances():
    return additivity_instances() + homotopy_instances() + commutativity_instances() + normalization_instances()
