"""
Shared fixtures: bundle directories written from corpus objects
"""

import json

import pytest

import corpus
from bundle_io import write_complex
from simplicial import vertex_label


class BundleWriter:
    """Writes complexes, carrier tables and manifests into one directory"""

    def __init__(self, root):
        self.root = root

    def path(self, name):
        return str(self.root / name)

    def text(self, name, lines):
        (self.root / name).write_text('\n'.join(lines) + '\n')
        return self.path(name)

    def complex(self, name, c):
        write_complex(c, self.path(name))
        return self.path(name)

    def table(self, name, carrier):
        """Every source simplex with the maximal simplices of its value"""
        lines = []
        for s in carrier.source.all_simplices():
            value = carrier.value(s)
            tops = [t for t in value if all(u not in value.simplices for u in carrier.target.cofacets(t))]
            right = ' | '.join(' '.join(vertex_label(v) for v in t) for t in tops)
            lines.append(f"{' '.join(vertex_label(v) for v in s)} -> {right}")
        return self.text(name, lines)

    def simplices(self, name, simplices):
        return self.text(name, [' '.join(vertex_label(v) for v in s) for s in simplices])

    def manifest(self, name, **entries):
        (self.root / name).write_text(json.dumps(entries))
        return self.path(name)

    def index_bundle(self, name, complex_name, carrier, open_set=None, **extra):
        """Manifest for one carrier on a corpus complex"""
        self.complex(f"{name}.complex", corpus.COMPLEXES[complex_name]())
        self.table(f"{name}.table", carrier)
        entry = {'file': f"{name}.table", 'source_level': carrier.source_level or 0,
                 'target_level': carrier.target_level or 0}
        manifest = {'complex': f"{name}.complex", 'carriers': [entry]}
        if open_set is not None:
            self.simplices(f"{name}.open", open_set.closure)
            manifest['open_set'] = f"{name}.open"
        manifest.update(extra)
        return self.manifest(f"{name}.json", **manifest)


@pytest.fixture
def bundles(tmp_path):
    return BundleWriter(tmp_path)
