"""Write the JSON inputs used by the other demos and the README."""

import json
import pathlib
from fractions import Fraction

from qtoric.cli import canonical
from qtoric.fan_core import Calibration, QuantumFan
from qtoric.fan_cobordism import blowup_cobordism
from qtoric.blowup import standard_plane_spec, blown_up_fan

OUT = pathlib.Path(__file__).parent / "data"

half = Fraction(1, 2)
quarter = Fraction(1, 4)

p2 = QuantumFan(Calibration([(1, 0), (0, 1), (-1, -1)]), [{0, 1}, {1, 2}, {2, 0}])
p2_marked = QuantumFan(Calibration([(1, 0), (0, 1), (-1, -1), (0, -1)], {3}), [{0, 1}, {1, 2}, {2, 0}])
hirzebruch = QuantumFan(Calibration([(1, 0), (0, 1), (-1, 2), (0, -1)]), [{0, 1}, {1, 2}, {2, 3}, {3, 0}])

spec = standard_plane_spec([1, 1])
plane = spec.base
plane_blown = blown_up_fan(spec)

cube_flip = {
    "inequalities": {
        "A": [[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 0, "1/2"], [0, -1, 0, "1/2"],
              ["-1/4", "-1/4", 1, 0], ["-1/4", "-1/4", -1, 0], [0, 0, 0, 1], [0, 0, 0, -1]],
        "b": [0, 0, -1, -1, 0, -1, -1, -1],
    }
}
triangle_flip = {
    "inequalities": {
        "A": [[1, 0, 0], [0, 1, 0], [-1, -1, 0], [0, 0, 1], [0, 0, -1], [0, -1, "-3/4"]],
        "b": [0, 0, -2, -1, -1, "-7/4"],
    }
}

files = {
    "p2.json": p2.to_json(),
    "p2_marked.json": p2_marked.to_json(),
    "hirzebruch2.json": hirzebruch.to_json(),
    "plane.json": plane.to_json(),
    "plane_blown.json": plane_blown.to_json(),
    "blp2_cob.json": blowup_cobordism(p2_marked, (2, 0), (1, 1)).to_json(),
    "cube_flip.json": cube_flip,
    "triangle_flip.json": triangle_flip,
}

if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for name, obj in files.items():
        (OUT / name).write_text(canonical(obj))
        print("wrote", OUT / name)
