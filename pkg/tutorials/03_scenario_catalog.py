"""Touring the built-in scenarios and the artifacts they write.

Every scenario runs the same pipeline: build seeds, transform, check reality,
verify residuals, count peaks. The result carries sampled profiles that can
be written as CSV, and a compact summary that can be written as JSON.
"""

# %%
import json
import tempfile
from pathlib import Path

from susydirac import cli

print(f"{'name':12s} {'r1':>14s} {'peaks':>7s} {'worst residual':>15s}  exit")
for name, _ in cli.list_scenarios():
    res = cli.run_scenario(cli.builtin_config(name))
    worst = max(r.max_rel for r in res.residuals.values())
    print(f"{name:12s} {res.reality.r1:14.6f} {res.peaks.detected:3d}/{res.peaks.predicted:<3d} {worst:15.2e}  {res.exit_code}")

# %% configs are plain key = value text with one block per seed
cfg = cli.builtin_config("fig7-right")
text = cli.format_config(cfg)
print(text)
assert cli.parse_config(text) == cfg

# %% write both artifacts for one run
with tempfile.TemporaryDirectory() as tmp:
    run = cfg.with_overrides(points=241, csv_path=str(Path(tmp) / "u.csv"), json_path=str(Path(tmp) / "u.json"))
    cli.run_scenario(run)
    print(Path(run.outputs.csv_path).read_text().splitlines()[:3])
    print(json.dumps(json.loads(Path(run.outputs.json_path).read_text()), indent=1))
