"""
Batch runs through the command line front end
=============================================

Every computation is reachable without writing Python: a JSON problem
document goes in, a deterministic report plus field artifacts come
out.  Re-running the same document with the same seed reproduces every
output byte for byte.
"""

import json
import os
import tempfile

from balayage.cli import run

workdir = tempfile.mkdtemp(prefix="balayage_demo_")

# A grid envelope problem as a plain document: constant ceiling 5,
# point functional at the center, subharmonic class.
doc = {
    "command": "supremal",
    "grid": {"nx": 5, "ny": 5, "spacing": 1.0},
    "weight": {"constant": 5.0},
    "measure": [[2, 2, 1.0]],
    "cone": {"kind": "subharmonic"},
    "seed": 7,
}
spec = os.path.join(workdir, "problem.json")
with open(spec, "w") as fh:
    json.dump(doc, fh)

out1 = os.path.join(workdir, "run1")
code = run(spec, out1, quiet=True)
report = json.load(open(os.path.join(out1, "report.json")))
print("exit code:", code)
print("primal   :", report["primal"], "| dual:", report["dual"],
      "| status:", report["status"])
print("artifacts:", sorted(os.listdir(out1)))

# Determinism: a second run produces identical bytes.
out2 = os.path.join(workdir, "run2")
run(spec, out2, quiet=True)
same = all(
    open(os.path.join(out1, n), "rb").read()
    == open(os.path.join(out2, n), "rb").read()
    for n in os.listdir(out1)
)
print("byte-identical rerun:", same)

# Infeasibility is an exit code, not an exception: a bottomless weight
# node turns the criterion command into code 2 plus a witness.
weight = [[0.0] * 5 for _ in range(5)]
weight[2][2] = "-inf"
doc2 = {
    "command": "criterion",
    "grid": {"nx": 5, "ny": 5, "spacing": 0.5, "origin": [-1.0, -1.0]},
    "weight": weight,
    "measure": [[2, 2, 1.0]],
}
spec2 = os.path.join(workdir, "infeasible.json")
with open(spec2, "w") as fh:
    json.dump(doc2, fh)
out3 = os.path.join(workdir, "run3")
code2 = run(spec2, out3, quiet=True)
rep2 = json.load(open(os.path.join(out3, "report.json")))
print("criterion exit code:", code2,
      "| witness:", rep2["farkas"]["kind"])
print("reports live under:", workdir)
