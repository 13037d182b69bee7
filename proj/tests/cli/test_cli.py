"""End-to-end checks of the genum executable: artifacts, schemas, exit codes."""

import csv
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

GENUM = os.environ.get("GENUM_BIN", "genum")
SCHEMAS = Path(os.environ.get("GENUM_SCHEMA_DIR", Path(__file__).parents[2] / "docs" / "schema"))


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(*args, cwd=None):
    return subprocess.run([GENUM, *map(str, args)], cwd=cwd, capture_output=True, text=True)


class CliTest(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name, text):
        p = self.dir / name
        p.write_text(text)
        return p

    def generate(self, name, spec):
        spec_path = self.write(name + ".spec.json", json.dumps(spec))
        out = self.dir / name
        r = run("generate", spec_path, "-o", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        return out

    def build(self, data, *flags):
        out = self.dir / "hist.json"
        r = run("build", data, "-o", out, *flags)
        self.assertEqual(r.returncode, 0, r.stderr)
        doc = json.loads(out.read_text())
        jsonschema.validate(doc, schema("histogram"))
        manifest = json.loads((self.dir / "hist.json.manifest.json").read_text())
        jsonschema.validate(manifest, schema("manifest"))
        return doc, manifest

    def assert_valid_histogram(self, doc):
        ivs = doc["intervals"]
        self.assertEqual(sum(iv["count"] for iv in ivs), doc["n"])
        self.assertEqual(len(ivs), doc["K"])
        for a, b in zip(ivs, ivs[1:]):
            self.assertEqual(a["upper"], b["lower"])
        mass = sum(iv["density"] * (iv["upper"] - iv["lower"]) for iv in ivs)
        self.assertAlmostEqual(mass, 1.0, delta=1e-9)

    def test_build_values_file(self):
        data = self.write("v.txt", "# sample\n3\n1\n1\n2.5\n\n7\n")
        doc, manifest = self.build(data)
        self.assertEqual(doc["n"], 5)
        self.assert_valid_histogram(doc)
        self.assertEqual(manifest["command"], "build")

    def test_value_freq_matches_values(self):
        a = self.write("a.txt", "1\n1\n1\n2\n5\n5\n")
        b = self.write("b.txt", "5,2\n1,3\n2,1\n")
        doc_a, man_a = self.build(a)
        doc_b, man_b = self.build(b, "--format", "value-freq")
        self.assertEqual(doc_a["intervals"], doc_b["intervals"])
        self.assertNotEqual(man_a["input_digest"], man_b["input_digest"])

    def test_digest_and_output_are_stable(self):
        data = self.write("v.txt", "\n".join(str(i * 0.37 % 5) for i in range(300)) + "\n")
        doc1, man1 = self.build(data)
        doc2, man2 = self.build(data)
        self.assertEqual(doc1, doc2)
        self.assertEqual(man1["input_digest"], man2["input_digest"])

    def test_plot_csv(self):
        data = self.write("v.txt", "\n".join(str((i * 7919) % 1000 / 10) for i in range(500)) + "\n")
        plot = self.dir / "plot.csv"
        doc, _ = self.build(data, "--plot", plot)
        with plot.open(newline="") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(list(rows[0].keys()), ["lower", "upper", "count", "density"])
        self.assertEqual(len(rows), doc["K"])
        mass = sum(float(r["density"]) * (float(r["upper"]) - float(r["lower"])) for r in rows)
        self.assertAlmostEqual(mass, 1.0, delta=1e-9)
        self.assertTrue((self.dir / "plot.csv.manifest.json").exists())

    def test_outlier_dataset_standard_collapses_auto_triggers(self):
        values = self.generate("out.txt", {"kind": "gaussian", "n": 10000, "seed": 1, "mu": 1,
                                           "sigma": 0.1, "outliers": {"count": 1, "value": 2.0**34}})
        doc, _ = self.build(values, "--mode", "standard")
        self.assertLessEqual(doc["K"], 3)
        self.assertIsNotNone(doc["standard"])
        doc, _ = self.build(values, "--mode", "auto")
        self.assertTrue(doc["two_level_triggered"])
        self.assertEqual(doc["subset_count"], 2)
        self.assertIn("log_mapping", doc["provenance"])
        self.assert_valid_histogram(doc)

    def test_analyze(self):
        conditioning = schema("conditioning")

        def report(text):
            r = run("analyze", self.write("a.txt", text))
            self.assertEqual(r.returncode, 0, r.stderr)
            doc = json.loads(r.stdout)
            jsonschema.validate(doc, conditioning)
            return doc

        self.assertTrue(report("0\n1e-12\n1\n")["verdict_ich"])
        single = report("4\n4\n4\n")
        self.assertIsNone(single["gr"])
        self.assertFalse(single["verdict_ich"] or single["verdict_rich"] or single["verdict_pich"])
        uniform = self.generate("u.txt", {"kind": "uniform", "n": 1000, "seed": 5})
        r = run("analyze", uniform, "-o", self.dir / "rep.json")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertFalse(json.loads((self.dir / "rep.json").read_text())["verdict_pich"])
        jsonschema.validate(json.loads((self.dir / "rep.json.manifest.json").read_text()),
                            schema("manifest"))

    def test_generate_determinism_count_outlier(self):
        spec = {"kind": "binomial_mixture", "n": 777, "seed": 42, "sigma": 0.25,
                "outliers": {"count": 1, "value": 1e6}}
        jsonschema.validate(spec, schema("generator_spec"))
        a = self.generate("a.txt", spec).read_bytes()
        b = self.generate("b.txt", spec).read_bytes()
        self.assertEqual(a, b)
        lines = a.decode().splitlines()
        self.assertEqual(len(lines), 778)
        self.assertEqual(max(map(float, lines)), 1e6)
        spec["seed"] = 43
        self.assertNotEqual(self.generate("c.txt", spec).read_bytes(), a)

    def test_exit_codes(self):
        out = self.dir / "x.json"
        self.assertEqual(run("build", self.write("p.txt", "1\nfoo\n"), "-o", out).returncode, 2)
        self.assertEqual(run("build", self.write("f.txt", "1\ninf\n"), "-o", out).returncode, 2)
        self.assertEqual(run("build", self.write("q.txt", "1,0\n"), "--format", "value-freq",
                             "-o", out).returncode, 2)
        self.assertEqual(run("build", self.write("e.txt", "# nothing\n\n"), "-o", out).returncode, 3)
        self.assertEqual(run("build", self.dir / "missing.txt", "-o", out).returncode, 2)
        bad_spec = self.write("s.json", json.dumps({"kind": "gaussian", "n": 10, "sigma": -1}))
        self.assertEqual(run("generate", bad_spec, "-o", self.dir / "g.txt").returncode, 2)
        self.assertEqual(run("generate", self.write("t.json", "{"), "-o", out).returncode, 2)
        self.assertEqual(run("experiment", "nope").returncode, 2)
        self.assertEqual(run("frobnicate").returncode, 2)

    def test_experiment_csv(self):
        r = run("experiment", "one-outlier", "--reps", 2, "--min-exp", 0, "--max-exp", 20,
                "--step", 10, "--n", 300, "-o", self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        with (self.dir / "one-outlier.csv").open(newline="") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual([int(row["exponent"]) for row in rows], [0, 10, 20])
        self.assertEqual([float(row["v_out"]) for row in rows], [1.0, 1024.0, 2.0**20])
        for row in rows:
            self.assertEqual(int(row["reps"]), 2)
            self.assertEqual(int(row["n"]), 301)
            self.assertGreaterEqual(float(row["two_level_mean_K"]), 1)
            self.assertTrue(math.isfinite(float(row["standard_seconds"])))
        jsonschema.validate(json.loads((self.dir / "one-outlier.csv.manifest.json").read_text()),
                            schema("manifest"))


if __name__ == "__main__":
    unittest.main(argv=sys.argv[:1], verbosity=2)
