"""Regenerate the example JSON documents in gallery/data/.

Every file is produced deterministically from the library, so the CLI
round-trip tests can compare bytes across runs.
"""

import json
import os

from trophom.cycles import TropicalCycle
from trophom.divisors import pl_from_terms
from trophom.matroids import uniform_matroid
from trophom.polyhedral import AffineMap, Polyhedron, complex_from_polyhedra

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def standard_line():
    pieces = [(frozenset(), Polyhedron(2, [(0, 0)], [r]))
              for r in [(1, 0), (0, 1), (-1, -1)]]
    return complex_from_polyhedra(2, pieces)[0]


def plane():
    poly = Polyhedron(2, [(0, 0)], [(1, 0), (-1, 0), (0, 1), (0, -1)])
    return complex_from_polyhedra(2, [(frozenset(), poly)])[0]


def real_line():
    pieces = [(frozenset(), Polyhedron(1, [(0,)], [(1,)])),
              (frozenset(), Polyhedron(1, [(0,)], [(-1,)]))]
    return complex_from_polyhedra(1, pieces)[0]


def half_line_compactified():
    return complex_from_polyhedra(
        1, [(frozenset(), Polyhedron(1, [(0,)], [(-1,)])),
            (frozenset(), Polyhedron(1, [(0,)], [(1,)])),
            (frozenset([0]), Polyhedron(0, [()]))])[0]


def main():
    os.makedirs(DATA, exist_ok=True)
    line = standard_line()
    docs = {
        "standard_line_complex.json": line.to_json_dict(),
        "standard_line_cycle.json": TropicalCycle(
            line, 1, {cid: 1 for cid in line.cells_of_dim(1)}).to_json_dict(),
        "unbalanced_line_cycle.json": TropicalCycle(
            line, 1, dict(zip(line.cells_of_dim(1), [1, 1, 2]))).to_json_dict(),
        "plane_complex.json": plane().to_json_dict(),
        "plane_cycle.json": TropicalCycle(
            plane(), 2, {plane().cells_of_dim(2)[0]: 1}).to_json_dict(),
        "line_divisor.json": pl_from_terms(
            plane(), [((0, 0), 0), ((-1, 0), 0), ((0, -1), 0)]).to_json_dict(),
        "real_line_cycle.json": TropicalCycle(
            real_line(), 1,
            {cid: 1 for cid in real_line().cells_of_dim(1)}).to_json_dict(),
        "doubling_map.json": AffineMap([[2]]).to_json_dict(),
        "difference_map.json": AffineMap([[1, -1]]).to_json_dict(),
        "u23_matroid.json": uniform_matroid(2, 3).to_json_dict(),
        "u24_matroid.json": uniform_matroid(2, 4).to_json_dict(),
        "half_line_complex.json": half_line_compactified().to_json_dict(),
    }
    for name, doc in sorted(docs.items()):
        path = os.path.join(DATA, name)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
