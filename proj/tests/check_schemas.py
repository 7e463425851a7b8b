"""Runs every susy-spectra command with --format json and validates the
output against docs/schemas/<command>.schema.json."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

binary, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])

with tempfile.TemporaryDirectory() as tmp:
    tab = pathlib.Path(tmp) / "v.csv"
    tab.write_text("x,V\n" + "".join(f"{-8 + 0.02 * i},{(-8 + 0.02 * i) ** 2}\n" for i in range(801)))
    runs = [
        ["solve", "--w", "x", "--levels", "3", "--points", "401"],
        ["solve", "--tabulated", str(tab), "--levels", "2"],
        ["partner", "--catalog", "morse", "--points", "201", "--x-max", "6"],
        ["partner", "--tabulated", str(tab)],
        ["hierarchy", "--catalog", "poschl-teller", "--depth", "3"],
        ["hierarchy", "--w", "x", "--depth", "2", "--output", str(pathlib.Path(tmp) / "h.json")],
        ["si-check", "--catalog", "morse"],
        ["si-check", "--w", "x^3"],
        ["spectrum", "--catalog", "morse", "--levels", "4"],
        ["spectrum", "--catalog", "cyclic-demo", "--levels", "4"],
        ["spectrum", "--w", "A*tanh(x)", "--param", "A=2", "--levels", "3"],
        ["wavefunctions", "--catalog", "shifted-harmonic", "--levels", "3", "--points", "401"],
        ["classify", "--catalog", "coulomb-radial"],
        ["classify", "--catalog", "scaling-demo"],
        ["classify", "--w", "x^3"],
        ["classify", "--tabulated", str(tab)],
        ["algebra-check", "--w", "2*tanh(x)", "--points", "401"],
        ["catalog"],
        ["catalog", "--catalog", "cyclic-demo"],
    ]
    failures = 0
    for args in runs:
        proc = subprocess.run([binary, *args, "--format", "json"], capture_output=True, text=True)
        if "--output" in args:
            text = pathlib.Path(args[args.index("--output") + 1]).read_text()
        else:
            text = proc.stdout
        label = " ".join(args)
        try:
            if proc.returncode not in (0, 2):
                raise RuntimeError(f"exit {proc.returncode}: {proc.stderr.strip()}")
            schema = json.loads((schema_dir / f"{args[0]}.schema.json").read_text())
            jsonschema.validate(json.loads(text), schema)
            print(f"ok   {label}")
        except Exception as e:  # report every failure, then fail once
            failures += 1
            print(f"FAIL {label}: {e}")
    sys.exit(1 if failures else 0)
