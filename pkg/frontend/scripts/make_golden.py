"""Regenerate test/fk_golden.json from the core library.

Usage: python scripts/make_golden.py  (from the frontend/ directory)
"""

import json
import math
from pathlib import Path

import numpy as np

from armlink.kinematics import JointAngles, fk_full

SEED = 42
COUNT = 1000

rng = np.random.default_rng(SEED)
poses = []
for _ in range(COUNT):
    thetas = [float(t) for t in rng.uniform(-math.pi / 2, math.pi / 2, size=5)]
    transform, chain = fk_full(JointAngles(*thetas))
    poses.append(
        {
            "thetas": thetas,
            "tool": list(chain[-1].as_tuple()),
            "chain": [list(p.as_tuple()) for p in chain],
        }
    )

out = Path(__file__).resolve().parent.parent / "test" / "fk_golden.json"
out.parent.mkdir(parents=True, exist_ok=True)
out.write_text(json.dumps({"links": [63.0, 145.0, 170.0, 110.0], "poses": poses}))
print(f"wrote {out} ({COUNT} poses)")
