"""Validate a curves.json bundle against the JSON schema and check array lengths."""

import json
import sys

import jsonschema


def main(schema_path, bundle_path):
    with open(schema_path) as f:
        schema = json.load(f)
    with open(bundle_path) as f:
        bundle = json.load(f)
    jsonschema.validate(bundle, schema)
    for c in bundle["curves"]:
        n = len(c["x"])
        name = f'{c["check"]}/{c["variant"]}/{c["metric"]}'
        if len(c["mean"]) != n or len(c["errors"]) != n:
            sys.exit(f"{name}: mean/errors length differs from x")
        if any(len(row) != n for row in c["values"]):
            sys.exit(f"{name}: a repeat has the wrong length")
    print(f'{len(bundle["curves"])} curves valid')


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit("usage: validate_bundle.py SCHEMA BUNDLE")
    main(sys.argv[1], sys.argv[2])
