import os
import sys
import unittest
from unittest.mock import patch
import json
from datetime import datetime

# Add the project path to sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from fastapi.testclient import TestClient

# Import the API components
from sheafcalc.errors import InconclusiveError
from sheafcalc.main import app
from sheafcalc.utils import format_response


class TestAPI(unittest.TestCase):
    """Tests for API functionality."""

    def test_format_response(self):
        """Test response formatting."""
        data = {"key": "value", "nested": {"subkey": [1, 2]}}
        self.assertEqual(format_response(data), data)

        complex_data = {
            "normal": "value",
            "date": datetime.now(),  # datetime is not JSON serializable
        }
        with self.assertRaises(Exception):
            json.dumps(complex_data)

        # format_response returns an error object instead of raising
        error_result = format_response(complex_data)
        self.assertEqual(error_result["error"]["code"], "unserializable")


class TestAPIEndpoints(unittest.TestCase):
    """Tests for API endpoints."""

    def setUp(self):
        self.client = TestClient(app)

    def test_health(self):
        response = self.client.get("/health")
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json(), {"status": "healthy"})

    def test_describe_band(self):
        band = {"kind": "band", "curve": {"cycle": 2}, "d": [0, 1, 1, 3, 1, -2], "lambda": 2}
        response = self.client.post("/api/describe", json=band)
        self.assertEqual(response.status_code, 200)
        data = response.json()
        self.assertEqual(data["charge"]["rank"], 3)
        self.assertEqual(data["charge"]["degree"], 4)
        self.assertEqual(data["laps"], 3)

    def test_stable_seq(self):
        response = self.client.get("/api/stable-seq", params={"r": 3, "d": -1})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["word"], [0, 0, -1])

    def test_tensor(self):
        payload = {"first": {"kind": "band", "d": [1], "lambda": 2},
                   "second": {"kind": "band", "d": [-1], "lambda": 3}}
        response = self.client.post("/api/tensor", json=payload)
        self.assertEqual(response.status_code, 200)
        (summand,) = response.json()["summands"]
        self.assertEqual(summand["descriptor"]["p"], ["-6", "1"])

    def test_pushforward_with_lambda_alias(self):
        response = self.client.post("/api/pushforward", json={"d": [0, 1], "n": 1, "lambda": 2})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["band"]["p"], ["-2", "1"])

    def test_validation_errors_are_bad_requests(self):
        response = self.client.get("/api/stable-seq", params={"r": 4, "d": 2})
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.json()["detail"]["code"], "no-stable-object")

    def test_invalid_triple(self):
        triple = {"kind": "nodal", "cycle": 1, "columns": [2],
                  "components": [{"degrees": [0, 0], "zero": [[1, 0], [1, 0]], "infinity": [[1, 0], [0, 1]]}]}
        response = self.client.post("/api/cohomology", params={"method": "oracle"}, json=triple)
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.json()["detail"]["code"], "invalid-argument")

    def test_malformed_multiplicity(self):
        response = self.client.post("/api/describe", json={"kind": "band", "d": [1], "lambda": 1, "m": 1.5})
        self.assertEqual(response.status_code, 400)

    def test_unknown_field(self):
        response = self.client.post("/api/fm", params={"field": "f4"}, json={"kind": "N", "n": 0, "m": 0})
        self.assertEqual(response.status_code, 400)

    @patch("sheafcalc.service.is_isomorphic")
    def test_inconclusive_is_a_conflict(self, mock_iso):
        mock_iso.side_effect = InconclusiveError("no invertible morphism")
        line = {"kind": "band", "d": [0], "lambda": 1}
        response = self.client.post("/api/isomorphic", json={"first": line, "second": line})
        self.assertEqual(response.status_code, 409)
        self.assertEqual(response.json()["detail"]["code"], "inconclusive")

    @patch("sheafcalc.service.stable_sequence")
    def test_unexpected_errors(self, mock_sequence):
        mock_sequence.side_effect = RuntimeError("boom")
        response = self.client.get("/api/stable-seq", params={"r": 2, "d": 1})
        self.assertEqual(response.status_code, 500)


if __name__ == '__main__':
    unittest.main()
