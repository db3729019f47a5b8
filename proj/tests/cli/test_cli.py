"""End-to-end checks of the command-line front end on the bundled data."""

import filecmp
import json
import os
import shutil
import subprocess
import tempfile
import unittest
from pathlib import Path

CLI = os.environ["TRAJHEDGE_CLI"]
DATA = Path(os.environ["TRAJHEDGE_DATA_DIR"])
PIPELINE = ["ingest", "calibrate", "build", "price", "pnl", "match", "export-graph"]


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True, check=False)


class WorkDir:
    """Copy of the bundled config with the chart path made absolute."""

    def __init__(self, root, name, **overrides):
        self.dir = Path(root) / name
        self.dir.mkdir()
        doc = json.loads((DATA / "gbm" / "config.json").read_text())
        doc["input"]["chart"] = str(DATA / "gbm" / "chart.csv")
        for key, value in overrides.items():
            section, leaf = key.split("__")
            doc.setdefault(section, {})[leaf] = value
        self.config = self.dir / "config.json"
        self.config.write_text(json.dumps(doc))
        self.out = self.dir / "out"

    def run(self, command, *extra):
        return run(command, "-c", str(self.config), *extra)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp(prefix="trajhedge_cli_")

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def run_pipeline(self, work):
        for command in PIPELINE:
            res = work.run(command)
            self.assertEqual(res.returncode, 0, f"{command}: {res.stderr}")

    def test_missing_chart_exits_2_and_names_path(self):
        work = WorkDir(self.tmp, "w", input__chart="no_such_chart.csv")
        res = work.run("ingest")
        self.assertEqual(res.returncode, 2)
        self.assertIn(str(work.dir / "no_such_chart.csv"), res.stderr)

    def test_missing_config_exits_2_and_names_path(self):
        path = str(Path(self.tmp) / "absent.json")
        res = run("build", "-c", path)
        self.assertEqual(res.returncode, 2)
        self.assertIn(path, res.stderr)

    def test_invalid_value_reports_key_path(self):
        work = WorkDir(self.tmp, "w", model__deltaB=-1)
        res = work.run("ingest")
        self.assertEqual(res.returncode, 2)
        self.assertIn("model.deltaB", res.stderr)

    def test_missing_artifact_exits_2(self):
        work = WorkDir(self.tmp, "w")
        res = work.run("price")
        self.assertEqual(res.returncode, 2)
        self.assertIn(str(work.out / "nodes.csv"), res.stderr)

    def test_schema_lists_keys(self):
        res = run("config", "--schema")
        self.assertEqual(res.returncode, 0)
        schema = json.loads(res.stdout)
        self.assertEqual(schema["model"]["deltaB"]["default"], 0.011)

    def test_pipeline_bounds_straddle_spot(self):
        work = WorkDir(self.tmp, "w")
        self.run_pipeline(work)
        bounds = json.loads((work.out / "bounds.json").read_text())
        self.assertLessEqual(bounds["lower"], bounds["spot"])
        self.assertLessEqual(bounds["spot"], bounds["upper"])
        built = json.loads((work.out / "build.json").read_text())
        self.assertGreaterEqual(built["nodes"], 1000)
        match = json.loads((work.out / "match.json").read_text())
        self.assertEqual(match["total_error"], 0)
        for csv in work.out.rglob("*.csv"):
            first = csv.read_text().splitlines()[0]
            self.assertTrue(first.startswith("# trajhedge config_hash="), csv)

    def test_pipeline_is_deterministic(self):
        a = WorkDir(self.tmp, "a")
        b = WorkDir(self.tmp, "b")
        self.run_pipeline(a)
        self.run_pipeline(b)
        csvs = sorted(p.relative_to(a.out) for p in a.out.rglob("*.csv"))
        self.assertGreater(len(csvs), 5)
        for rel in csvs:
            self.assertTrue(filecmp.cmp(a.out / rel, b.out / rel, shallow=False), rel)

    def test_role_swapped_price(self):
        work = WorkDir(self.tmp, "w")
        for command in ["ingest", "build"]:
            self.assertEqual(work.run(command).returncode, 0)
        res = work.run("price", "--target", "asset1", "--trade", "asset2")
        self.assertEqual(res.returncode, 0, res.stderr)
        bounds = json.loads((work.out / "bounds.json").read_text())
        self.assertEqual((bounds["target"], bounds["trade"]), (1, 2))
        self.assertLessEqual(bounds["lower"], bounds["spot"])
        self.assertLessEqual(bounds["spot"], bounds["upper"])
        default = WorkDir(self.tmp, "d")
        for command in ["ingest", "build", "price"]:
            self.assertEqual(default.run(command).returncode, 0)
        spot2 = json.loads((default.out / "bounds.json").read_text())["spot"]
        self.assertNotEqual(bounds["spot"], spot2)


if __name__ == "__main__":
    unittest.main()
