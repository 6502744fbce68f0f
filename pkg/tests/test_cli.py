import io
import json
import os
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest.mock import patch

# Add the project path to sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from sheafcalc.cli import load_json_argument, main, parse_word
from sheafcalc.errors import InconclusiveError, ValidationError

LINE = json.dumps({"kind": "band", "d": [0], "lambda": 1})
# Rank 2 on E_1 whose gluing matrix at 0 has rank 1
DEGENERATE = json.dumps({"kind": "nodal", "cycle": 1, "columns": [2],
                         "components": [{"degrees": [0, 0], "zero": [[1, 0], [1, 0]], "infinity": [[1, 0], [0, 1]]}]})


def run(*argv):
    """Run the CLI and return (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestArguments(unittest.TestCase):

    def test_parse_word(self):
        self.assertEqual(parse_word("1,0,-2"), [1, 0, -2])
        self.assertEqual(parse_word("[1, 0]"), [1, 0])
        with self.assertRaises(ValidationError):
            parse_word("1,x")
        with self.assertRaises(ValidationError):
            parse_word("[1.5, 0]")

    def test_json_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "band.json")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(LINE)
            self.assertEqual(load_json_argument("@" + path)["d"], [0])

    def test_bad_json(self):
        with self.assertRaises(ValidationError):
            load_json_argument("{kind: band}")
        with self.assertRaises(ValidationError):
            load_json_argument("@/nonexistent/band.json")


class TestCommands(unittest.TestCase):
    """Tests for the sheafcalc command."""

    def test_stable_seq(self):
        code, out, _ = run("--json", "stable-seq", "19", "11")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["bits"], [1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 1, 0])
        self.assertEqual(data["chain"][0], {"x": 11, "y": 8, "type": "B", "k": 1})

    def test_cohomology_of_a_unipotent_bundle_in_characteristic_three(self):
        code, out, _ = run("--json", "--field", "f3", "cohomology", "--both", '{"kind": "unipotent", "m": 3}')
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["formula"], {"h0": 1, "h1": 1})
        self.assertEqual(data["oracle"], {"h0": 1, "h1": 1})
        self.assertTrue(data["match"])

    def test_text_output(self):
        code, out, _ = run("describe", LINE)
        self.assertEqual(code, 0)
        self.assertIn("laps: 1", out)

    def test_non_coprime_rank_and_degree(self):
        code, _, err = run("stable-seq", "4", "2")
        self.assertEqual(code, 1)
        self.assertIn("no-stable-object", err)

    def test_malformed_descriptor(self):
        for m in ("x", 1.5):
            code, out, _ = run("--json", "describe", json.dumps({"kind": "band", "d": [1], "lambda": 1, "m": m}))
            self.assertEqual(code, 1)
            self.assertEqual(json.loads(out)["error"]["code"], "invalid-argument")
        code, _, err = run("cohomology", '{"kind": "nodal", "field": "q", "cycle": 1, "columns": [1], "components": [5]}')
        self.assertEqual(code, 1)
        self.assertIn("invalid-argument", err)

    def test_invalid_triple(self):
        code, out, _ = run("--json", "cohomology", "--oracle", DEGENERATE)
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)["error"]["code"], "invalid-argument")

    def test_periodic_pushforward(self):
        code, out, _ = run("--json", "pushforward", "0,0", "1")
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)["error"]["code"], "decomposable-pushforward")
        self.assertEqual(len(json.loads(out)["error"]["context"]["summands"]), 2)
        code, out, _ = run("--json", "pushforward", "0,0", "1", "--decompose")
        self.assertEqual(code, 0)
        self.assertEqual(len(json.loads(out)["summands"]), 2)

    def test_hom_and_isomorphic(self):
        code, out, _ = run("--json", "hom", LINE, json.dumps({"kind": "band", "d": [2], "lambda": 1}))
        self.assertEqual(json.loads(out), {"hom_dim": 2})
        code, out, _ = run("--json", "--field", "f5", "isomorphic", LINE, LINE)
        self.assertTrue(json.loads(out)["isomorphic"])

    def test_inconclusive_exit_status(self):
        with patch("sheafcalc.service.is_isomorphic", side_effect=InconclusiveError("no invertible morphism")):
            code, _, err = run("isomorphic", LINE, LINE)
        self.assertEqual(code, 2)
        self.assertIn("inconclusive", err)

    def test_verify_writes_a_report(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "golden.csv")
            code, out, _ = run("verify", "--suite", "golden", "--report", path)
            self.assertEqual(code, 0)
            self.assertTrue(os.path.exists(path))
            self.assertIn("golden", out)


if __name__ == '__main__':
    unittest.main()
