"""
Problem files and the command line
==================================

A problem file names the network (a path, an inline layer list or a
seeded random architecture), the input distributions, the safety set,
the risk level and the numerics. The same file drives the ``cfverify``
command.
"""

import json
import subprocess
import sys
from pathlib import Path

from cfverify import load_config, verify_polytope

configs = Path(__file__).resolve().parent.parent / "configs"

cfg = load_config(configs / "identity_cauchy.json")
print("echo:", cfg.echo())
res = verify_polytope(cfg.to_problem())
print("verdict:", res.verdict, "p_hat:", round(res.results[0].p_hat, 4))

# same thing through the CLI; JSON on stdout, summary on stderr, exit code = verdict
out = subprocess.run(
    [sys.executable, "-m", "cfverify.cli", "verify", str(configs / "identity_cauchy.json"), "--risk", "0.3"],
    capture_output=True, text=True,
)
print("exit code", out.returncode, "|", out.stderr.strip())
print(json.dumps(json.loads(out.stdout)["params_echo"]))
