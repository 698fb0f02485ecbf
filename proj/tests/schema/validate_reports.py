#!/usr/bin/env python3
"""Runs the CLI over the example data and validates every JSON report,
every embedded measure, and the CSV header layout."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema


def main() -> int:
    recur, schema_dir, data = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    report_schema = json.loads((schema_dir / "report.schema.json").read_text())
    measure_schema = json.loads((schema_dir / "measure.schema.json").read_text())
    report_validator = jsonschema.Draft202012Validator(report_schema)
    measure_validator = jsonschema.Draft202012Validator(measure_schema)

    def d(name: str) -> str:
        return str(data / name)

    pair = ["--mu", d("sticky3.json"), "--nu", d("skewed3.json")]
    runs = [
        ["path", "--x", "ABRACADABRA", "--y", "AVRAKEHDABRA", "--n", "11", "--format", "json"],
        ["return", "--w", "ABRACADABRA", "--format", "json"],
        ["wait", "--x", "ABRA", "--stream", "ABRACADABRA", "--format", "json"],
        ["wait", "--x", "ABRA", "--stream", "ABRACAD", "--format", "json"],
        ["divergence", *pair, "--kmax", "6", "--out", "json"],
        ["divergence", "--mu", d("defect_mixture.json"), "--nu", d("defect_mixture.json"),
         "--kmax", "6", "--out", "json"],
        ["rate", *pair, "--kmax", "32"],
        ["--log-base", "2", "rate", "--mu", d("b03.json"), "--nu", d("b07.json"), "--kmax", "8"],
        ["law", *pair, "--n", "5", "--oracle", "--limit", "--k", "2", "--mmax", "6"],
        ["law", "--mu", d("u.json"), "--nu", d("defect_mixture.json"), "--n", "6", "--limit",
         "--k", "1", "--mmax", "8"],
        ["avoid", "--mu", d("u.json"), "--nu", d("u.json"), "--n", "3", "--out", "json"],
        ["experiment", "concentration", "--config", d("concentration.json")],
        ["experiment", "ldp", "--config", d("ldp.json")],
        ["experiment", "nonconv", "--config", d("nonconv.json")],
        ["experiment", "oscillation", "--config", d("oscillation.json")],
        ["experiment", "vwsp", "--config", d("vwsp.json")],
    ]
    failures = 0
    for args in runs:
        proc = subprocess.run([recur, *args], capture_output=True, text=True)
        label = " ".join(args[:2])
        if proc.returncode != 0:
            print(f"FAIL {label}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        report = json.loads(proc.stdout)
        errors = list(report_validator.iter_errors(report))
        for key in ("mu", "nu", "measure"):
            if key in report["config"]:
                errors += list(measure_validator.iter_errors(report["config"][key]))
        if errors:
            failures += 1
            for e in errors[:5]:
                print(f"FAIL {label}: {list(e.absolute_path)}: {e.message}")
        else:
            print(f"ok   {label}")

    for spec in sorted(data.glob("*.json")):
        doc = json.loads(spec.read_text())
        if "type" not in doc or spec.name in ("bad_sum.json", "reducible.json"):
            continue
        errors = list(measure_validator.iter_errors(doc))
        if errors:
            failures += 1
            print(f"FAIL {spec.name}: {errors[0].message}")

    proc = subprocess.run([recur, "divergence", *pair, "--kmax", "4"], capture_output=True, text=True)
    lines = proc.stdout.splitlines()
    if not (lines and lines[0].startswith("# recur ") and lines[1] == "k,E_k_log,E_k,rate_k,method"
            and len(lines) == 6):
        failures += 1
        print("FAIL divergence csv layout")
    else:
        print("ok   divergence csv")

    print(f"{failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
