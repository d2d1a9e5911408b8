#!/usr/bin/env python3
"""Validate CLI JSON output and fixture documents against the schemas."""

import json
import subprocess
import sys
from pathlib import Path

from jsonschema import Draft202012Validator
from referencing import Registry, Resource


def main():
    cli, schema_dir, fixture_dir = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        schemas[path.name.removesuffix(".schema.json")] = json.loads(path.read_text())
    registry = Registry().with_resources(
        (s["$id"], Resource.from_contents(s)) for s in schemas.values()
    )
    validators = {
        name: Draft202012Validator(s, registry=registry) for name, s in schemas.items()
    }
    for v in validators.values():
        Draft202012Validator.check_schema(v.schema)

    failures = []

    def check(name, instance, what):
        errors = sorted(validators[name].iter_errors(instance), key=lambda e: list(e.path))
        for e in errors[:3]:
            failures.append(f"{what}: {list(e.path)}: {e.message}")

    for path in sorted(fixture_dir.glob("*.json")):
        kind = "ifs-document" if path.name.endswith(".ifs.json") else "sprout-document"
        check(kind, json.loads(path.read_text()), path.name)

    def fx(name):
        return str(fixture_dir / name)

    runs = [
        ("validate", ["validate", fx("fig2L.json")]),
        ("validate", ["validate", fx("vicsek5.json")]),
        ("addresses", ["addresses", fx("fig1.json")]),
        ("addresses", ["addresses", fx("fig4.json")]),
        ("classify", ["classify", fx("fig4.json")]),
        ("admissible", ["admissible", fx("fig3.json")]),
        ("admissible", ["admissible", fx("fig7.json")]),
        ("phi", ["phi", fx("fig6.json")]),
        ("transformation-graph", ["gt", fx("fig7.json")]),
        ("report", ["report", fx("fig6.json")]),
        ("report", ["report", fx("fig7.json")]),
        ("report", ["report", fx("vicsek5.json")]),
        ("sprout-document", ["square", fx("vicsek5.json")]),
        ("iso", ["iso", fx("interval2.json"), fx("interval2-relabeled.json")]),
        ("iso", ["iso", fx("interval2.json"), fx("fig1.json")]),
        ("extract", ["extract", fx("vicsek.ifs.json")]),
        ("extract", ["extract", fx("interval.ifs.json")]),
        ("sprout-document", ["extract", fx("interval.ifs.json"), "--sprout-only"]),
    ]
    for schema, args in runs:
        what = " ".join([args[0]] + [Path(a).name for a in args[1:]])
        outputs = []
        for _ in range(2):
            proc = subprocess.run([cli, *args, "--format", "json"], capture_output=True)
            outputs.append(proc.stdout)
        if proc.returncode not in (0, 1):
            failures.append(f"{what}: exit {proc.returncode}: {proc.stderr.decode()}")
            continue
        if outputs[0] != outputs[1]:
            failures.append(f"{what}: output differs between runs")
        try:
            instance = json.loads(outputs[0])
        except json.JSONDecodeError as e:
            failures.append(f"{what}: not JSON: {e}")
            continue
        check(schema, instance, what)
        print(f"ok  {what} -> {schema}")

    for f in failures:
        print("FAIL", f)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
