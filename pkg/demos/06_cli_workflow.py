"""End-to-end command-line workflow in a temporary directory.

Writes a config file, runs the rates / evolve / limits verbs through the
CLI entry point, and prints the heads of the emitted files.  The same
commands work from a shell:

    spinboson rates  --config run.cfg --out rates.csv
    spinboson evolve --config run.cfg --out traj.csv
    spinboson limits --config run.cfg --out limits.txt
"""

import tempfile
from pathlib import Path

from spinboson.cli import main

CONFIG = """\
# vacuum bath, resonant mode, excited start
omega0 = 1.0
beta = vacuum
modes = 1.0:0.1
t_max = 14.0
samples = 29
rk4_substeps = 60
rho00 = 1.0
rho01 = 0
"""


def show(path, lines):
    print(f"--- {path.name} (first {lines} lines) ---")
    for line in path.read_text().splitlines()[:lines]:
        print(" ", line)
    print()


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    cfg = tmp / "run.cfg"
    cfg.write_text(CONFIG)

    for verb, name in (("rates", "rates.csv"), ("evolve", "traj.csv"),
                       ("limits", "limits.txt")):
        code = main([verb, "--config", str(cfg), "--out", str(tmp / name)])
        print(f"exit code {code}")
        print()

    show(tmp / "rates.csv", 4)
    show(tmp / "traj.csv", 4)
    show(tmp / "traj.csv.summary", 14)
    show(tmp / "limits.txt", 20)
