"""Run the CLI on representative inputs and validate every JSON output
against docs/schemas.

    cargo build -p tambara-cli && python3 python/validate_schemas.py [path/to/tambara]
"""

import json
import subprocess
import sys
from pathlib import Path

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

ROOT = Path(__file__).resolve().parent.parent
SCHEMAS = ROOT / "docs" / "schemas"
FIX = ROOT / "fixtures"
BIN = sys.argv[1] if len(sys.argv) > 1 else str(ROOT / "target" / "debug" / "tambara")

schemas = {p.name: json.loads(p.read_text()) for p in SCHEMAS.glob("*.schema.json")}
registry = Registry().with_resources((name, Resource.from_contents(s)) for name, s in schemas.items())

fig2 = [str(FIX / "fig2-tm.ts"), str(FIX / "fig2-ta.ts")]
left, full = str(FIX / "fig1-left.ts"), str(FIX / "c4-complete.ts")
CASES = [
    ("lattice", ["lattice", "A4", "--json"], {0}),
    ("enumeration", ["ts", "enumerate", "S3", "--json"], {0}),
    ("validation", ["ts", "validate", str(FIX / "fig1-right.ts"), "--json"], {1}),
    ("validation", ["ts", "validate", left, "--json"], {0}),
    ("compat-check", ["compat", "check", "C2xC2", *fig2, "--oracle", "--json"], {1}),
    ("compat-check", ["compat", "check", "C4", left, full, "--json"], {0}),
    ("compat-pairs", ["compat", "pairs", "C2xC2", "--json"], {0}),
    ("equivalence", ["verify", "equivalence", "C6"], {0}),
    ("equivalence", ["verify", "equivalence", "C2", "--timing"], {0}),
    ("laws", ["verify", "laws", "C4", left, full, "--rounds", "5"], {0}),
    ("coinduce", ["coinduce", "C4", "e", "C4", "3*[e/e]", "--json"], {0}),
    ("coinduce", ["coinduce", "C2", "e", "C2", "100000000000*[e/e]", "--json"], {0}),
    ("burnside-element", ["burnside", "eval", "C4", full, full, "norm(e,C4,2*[e/e]) - tr(C2,C4,[C2/e])", "--json"], {0}),
]

failures = 0
for schema, args, codes in CASES:
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    validator = Draft202012Validator(schemas[f"{schema}.schema.json"], registry=registry)
    errors = [] if proc.returncode in codes else [f"exit code {proc.returncode}: {proc.stderr.strip()}"]
    if not errors:
        errors = [e.message for e in validator.iter_errors(json.loads(proc.stdout))]
    status = "ok" if not errors else "FAILED"
    print(f"{status:6} {schema:17} tambara {' '.join(Path(a).name if Path(a).is_file() else a for a in args)}")
    for e in errors[:3]:
        print(f"       {e}")
    failures += bool(errors)

sys.exit(1 if failures else 0)
