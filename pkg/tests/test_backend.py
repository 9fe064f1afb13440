import json
import os
import subprocess
import sys

import kreintools

SNIPPET = """
import json, numpy as np, kreintools
from kreintools import perturbation as pt
from conftest import op, rot
c = pt.theorem_5_1_region(op(np.diag([2.0, -2.0]), np.diag([1.0, -1.0])), rot(3.0))
K = kreintools.regions.BallUnion(1.5, 0.4, 0.3)
z = np.linspace(-3, 3, 101) + 0.7j
print(json.dumps({"backend": kreintools.KERNEL_BACKEND, "verified": c.verified,
                  "d": K.signed_distance(z).tolist(), "gap": c.boundary_gap}))
"""


def _run(pure: bool):
    env = dict(os.environ)
    env.pop("KREINTOOLS_PURE", None)
    if pure:
        env["KREINTOOLS_PURE"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", SNIPPET], env=env, capture_output=True, check=True, text=True,
        cwd=os.path.dirname(__file__),
    )
    return json.loads(out.stdout)


def test_backend_name():
    assert kreintools.KERNEL_BACKEND in ("cython", "python")


def test_fallback_selected_and_equivalent():
    pure = _run(True)
    default = _run(False)
    assert pure["backend"] == "python"
    assert pure["verified"] and default["verified"]
    assert max(abs(a - b) for a, b in zip(pure["d"], default["d"])) < 1e-13
    assert abs(pure["gap"] - default["gap"]) < 1e-13
