# SPDX-License-Identifier: Apache-2.0
"""The published JSON Schema accepts every loadable pack and rejects the malformed ones."""
import json
import sys
from pathlib import Path

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed")
    sys.exit(77)

ROOT = Path(sys.argv[1])
schema = json.loads((ROOT / "schema" / "pack.schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

valid = [ROOT / "packs" / "basics.json"] + [ROOT / "tests" / "fixtures" / n for n in
                                            ["small.json", "cycle.json", "dangling.json", "unsolvable.json"]]
invalid = [ROOT / "tests" / "fixtures" / "bad_version.json"]

failed = False
for path in valid:
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    print(("ok   " if not errors else "FAIL ") + f"{path.name} conforms")
    for e in errors[:5]:
        print("     ", "/".join(map(str, e.absolute_path)), e.message)
    failed |= bool(errors)
for path in invalid:
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    print(("ok   " if errors else "FAIL ") + f"{path.name} rejected")
    failed |= not errors

sys.exit(1 if failed else 0)
