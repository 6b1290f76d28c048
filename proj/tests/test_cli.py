"""End-to-end checks of the expoly CLI: schema validity and exit codes.

usage: test_cli.py <path-to-expoly> <path-to-report.schema.json>
"""

import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

CLI = None
SCHEMA = None


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, timeout=120)


class Reports(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        d = Path(cls.tmp.name)
        cls.csv = d / "samples.csv"
        cls.csv.write_text("k,re,im\n0,2,0\n1,5,0\n2,13,0\n3,35,0\n4,97,0\n")
        cls.poly = d / "poly.json"
        cls.poly.write_text(json.dumps({"dim": 1, "terms": [
            {"coeff": [1, 0], "alpha": [0], "lambda": [[0.7, 0]]},
            {"coeff": [0.3, -0.4], "alpha": [1], "lambda": [[-0.5, 0]]},
        ]}))
        cls.grid = d / "grid.json"
        made = run("grid-samples", "--function", "cos-product", "--dim", "2", "--order", "1", "--out", cls.grid)
        assert made.returncode == 0, made.stderr
        cls.validator = jsonschema.Draft202012Validator(json.loads(Path(SCHEMA).read_text()))

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def report(self, *args, code=0):
        r = run(*args)
        self.assertEqual(r.returncode, code, r.stderr)
        doc = json.loads(r.stdout)
        errors = sorted(self.validator.iter_errors(doc), key=lambda e: list(e.path))
        self.assertEqual([], [f"{list(e.path)}: {e.message}" for e in errors])
        self.assertEqual(doc["command"], args[0])
        return doc

    def test_verify_popoviciu(self):
        doc = self.report("verify-popoviciu", "--function", "exp", "--trials", "100")
        self.assertEqual(doc["result"]["scan"]["summary"]["pass_rate"], 1.0)

    def test_verify_from_file(self):
        doc = self.report("verify-popoviciu", "--function", self.poly, "--order", "3", "--trials", "50")
        self.assertEqual(doc["result"]["function"]["translate_span_dim"], 3)
        self.assertEqual(doc["result"]["scan"]["summary"]["pass_rate"], 1.0)

    def test_line_restrict(self):
        doc = self.report("line-restrict", "--function", "product", "--dim", "2",
                          "--x0", "0.4", "1.1", "--h0", "0.8", "-0.3")
        self.assertEqual(doc["result"]["order"], 3)

    def test_line_restrict_budget_exceeded_exits_one(self):
        doc = self.report("line-restrict", "--function", "gaussian", "--x0", "-4", "--h0", "1", code=1)
        self.assertEqual(doc["result"]["status"], "order_budget_exceeded")

    def test_search_counterexample(self):
        doc = self.report("search-counterexample", "--function", "trig-bounded", "--dim", "2", "--terms", "2",
                          "--order", "3", "--trials", "2", "--expect-max-flags", "0")
        self.assertEqual(doc["result"]["summary"]["flags"], 0)

    def test_recover(self):
        doc = self.report("recover", "--input", self.csv, "--order", "2")
        roots = sorted(r[0] for r in doc["result"]["report"]["roots"])
        self.assertAlmostEqual(roots[0], 2.0, delta=1e-8)
        self.assertAlmostEqual(roots[1], 3.0, delta=1e-8)

    def test_dense_gens(self):
        doc = self.report("dense-gens", "--dim", "1", "--eps", "2")
        self.assertEqual(doc["result"]["generator_set"]["generators"], [[1.0], [2 ** 0.5]])

    def test_montel_check(self):
        doc = self.report("montel-check", "--function", self.poly, "--expect-max-residual", "1e-7")
        self.assertEqual(doc["result"]["dimW"], 3)

    def test_trig_reconstruct_from_grid(self):
        doc = self.report("trig-reconstruct", "--function", self.grid, "--order", "1")
        coeffs = doc["result"]["polynomial"]["coeffs"]
        self.assertEqual(len(coeffs), 4)
        for c in coeffs:
            self.assertEqual([abs(a) for a in c["alpha"]], [1, 1])
            self.assertAlmostEqual(c["c"][0], 0.25, delta=1e-12)

    def test_out_writes_file(self):
        out = Path(self.tmp.name) / "out.json"
        r = run("dense-gens", "--dim", "2", "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(r.stdout, "")
        self.validator.validate(json.loads(out.read_text()))


class ExitCodes(unittest.TestCase):
    def test_unmet_expectation_is_one(self):
        r = run("verify-popoviciu", "--function", "gaussian", "--order", "1", "--expect-min-pass-rate", "1")
        self.assertEqual(r.returncode, 1)
        self.assertTrue(json.loads(r.stdout)["result"])

    def test_unknown_function_is_one(self):
        r = run("verify-popoviciu", "--function", "no-such-function")
        self.assertEqual(r.returncode, 1)
        self.assertEqual(r.stdout, "")

    def test_parse_errors_are_two(self):
        self.assertEqual(run("verify-popoviciu", "--no-such-flag").returncode, 2)
        self.assertEqual(run("no-such-command").returncode, 2)
        self.assertEqual(run().returncode, 2)
        self.assertEqual(run("recover", "--input", "/nonexistent/file.csv").returncode, 2)


if __name__ == "__main__":
    CLI, SCHEMA = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1], verbosity=2)
