"""
Runtime settings read from the environment.

Every value can be overridden per call (CLI flags, API query parameters);
these constants only provide the defaults.
"""
import os

# Base field used when a command does not name one: "q" or "f<p>"
DEFAULT_FIELD = os.environ.get("SHEAFCALC_FIELD", "q")

# Seed for every randomized procedure (isomorphism sampling, verify suites)
DEFAULT_SEED = int(os.environ.get("SHEAFCALC_SEED", "20240601"))

# Random Hom-space samples tried before an isomorphism test gives up
ISO_RETRIES = int(os.environ.get("SHEAFCALC_ISO_RETRIES", "20"))

# Hom spaces with at most this many elements are enumerated exhaustively
EXHAUSTIVE_LIMIT = int(os.environ.get("SHEAFCALC_EXHAUSTIVE_LIMIT", "4096"))

# Randomized candidates tried when searching for a simple non-locally-free cuspidal triple
TF_SEARCH_LIMIT = int(os.environ.get("SHEAFCALC_TF_SEARCH_LIMIT", "64"))

API_HOST = os.environ.get("API_HOST", "0.0.0.0")
API_PORT = int(os.environ.get("PORT", "8000"))
