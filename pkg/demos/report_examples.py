"""Print a Markdown page with the manifest and JSON report of every shipped example.

Run: python demos/report_examples.py > docs/report-examples.md
"""

import io
import json
from contextlib import redirect_stdout
from pathlib import Path

from gcx import cli

ROOT = Path(__file__).resolve().parent.parent / "manifests"

print("# Report examples\n")
print("Every command run on its three shipped manifests with the default seed.")
print("Exit code 0 means verdict true, 1 verdict false, 2 malformed input.\n")
for cmd in cli.COMMANDS:
    print(f"## `{cmd}`\n")
    for suffix in ("ok", "false", "bad"):
        path = ROOT / f"{cmd}.{suffix}.gcx"
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = cli.main([cmd, "--manifest", str(path)])
        report = json.loads(buf.getvalue())
        report["input_digest"] = report.get("input_digest", "")[:12] + "..."
        print(f"`manifests/{path.name}` (exit {code})\n")
        print("```\n" + path.read_text().rstrip() + "\n```\n")
        print("```json\n" + json.dumps(report, indent=2, sort_keys=True) + "\n```\n")
