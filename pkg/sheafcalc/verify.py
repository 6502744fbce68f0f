"""
Oracle cross-check suites.

Each suite yields one row per case with the closed-form (or printed) answer
in ``expected`` and the independent computation in ``actual``. Rows are
collected into a pandas DataFrame; ``VerifyReport.write`` exports it as CSV
or, for ``.xlsx`` paths, as an Excel sheet through openpyxl.
"""
import itertools
import json
import logging
import random
import time
from dataclasses import dataclass
from math import gcd
from typing import Any, Callable, Dict, Iterator, List, Optional

import pandas as pd

from . import config
from .descriptors import (BandDescriptor, StringDescriptor, canonical_band, is_periodic, rank_degree,
                          unipotent)
from .errors import SheafCalcError, ValidationError
from .fields import BaseField, UnivariatePoly, get_field
from .laurent import (LaurentMatrix, birkhoff_factor, random_minus_unimodular,
                      random_plus_unimodular)
from .oracle import cohomology, end_dim, fingerprint, hom_dim, is_isomorphic
from .serialization import dump_descriptor, dump_matrix
from .sheaf_ops import (cohomology_formula, dual, pullback_etale, pushforward_decompose,
                        tensor_bands, tensor_unipotent)
from .stable import cuspidal_simple_matrix, cuspidal_tf_nonlocallyfree, stable_band, stable_sequence
from .triples import (band_to_triple, dual_triple, euler_characteristic, pullback_triple,
                      pushforward_triple, string_to_triple, structure_sheaf, tensor_triples)

logger = logging.getLogger("sheafcalc")

SUITES = ("birkhoff", "golden", "cohomology", "stable", "cuspidal", "tensor", "pushforward", "duality")

CASE_COLUMNS = ["suite", "case", "expected", "actual", "match"]

BIRKHOFF_CASES = 200
TENSOR_PAIRS = 32
DUALITY_CASES = 200

# Known answer for rank 19 and degree 11
STABLE_19_11 = [1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 1, 0]


def _encode(value: Any) -> str:
    return json.dumps(value, sort_keys=True, default=str)


def _case(suite: str, name: str, expected: Any, compute: Callable[[], Any]) -> Dict[str, Any]:
    """Run one case; library errors become the actual value instead of aborting the suite."""
    try:
        actual = compute()
    except SheafCalcError as e:
        logger.warning(f"case {suite}/{name} raised {e.code}: {e.message}")
        actual = {"error": e.code}
    return {"suite": suite, "case": name, "expected": _encode(expected), "actual": _encode(actual),
            "match": _encode(expected) == _encode(actual)}


def _suite_field(field: Optional[str], default: str) -> BaseField:
    return get_field(field or default)


def _words(length: int, low: int, high: int) -> Iterator[tuple]:
    return itertools.product(range(low, high + 1), repeat=length)


def _canonical_words(n: int, length: int, low: int, high: int) -> List[tuple]:
    """Non-periodic words of a given length on E_n, one per rotation class."""
    seen = set()
    result = []
    for word in _words(length, low, high):
        if is_periodic(word, n) is not None:
            continue
        rotations = [word[i:] + word[:i] for i in range(0, length, n)]
        key = min(rotations)
        if key in seen:
            continue
        seen.add(key)
        result.append(key)
    return result


def birkhoff_suite(field: Optional[str], seed: int) -> Iterator[Dict[str, Any]]:
    """Random M = B D A with B over k[1/z], A over k[z]; the exponents of D must come back."""
    rng = random.Random(seed)
    fields = [get_field(field)] if field else [get_field("q"), get_field("f7")]
    for index in range(BIRKHOFF_CASES):
        fld = fields[index % len(fields)]
        size = index % 5 + 1
        exponents = [rng.randint(-3, 3) for _ in range(size)]
        minus = random_minus_unimodular(fld, size, rng, steps=3)
        plus = random_plus_unimodular(fld, size, rng, steps=3)
        matrix = minus * LaurentMatrix.diagonal(fld, exponents) * plus
        yield _case("birkhoff", f"{fld.name} size {size} #{index}", sorted(exponents),
                    lambda: birkhoff_factor(matrix).exponents)


def _lam_matrix(fld: BaseField, rows: List[List[Any]], lam: Any) -> List[List[str]]:
    """Dump a printed matrix whose entries are 0, 1 or the symbol 'L' for lambda."""
    return dump_matrix(fld, [[fld(lam) if x == "L" else fld(x) for x in row] for row in rows])


def golden_suite(field: Optional[str], seed: int) -> Iterator[Dict[str, Any]]:
    """Gluing matrices, sequences and cohomology values with known answers."""
    fld = _suite_field(field, "q")
    lam = fld(2)
    band = band_to_triple(BandDescriptor(2, (0, 1, 1, 3, 1, -2), 1, UnivariatePoly.linear(fld, lam)))
    expected_band = [
        {"degrees": [0, 1, 1], "zero": _lam_matrix(fld, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], lam),
         "infinity": _lam_matrix(fld, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], lam)},
        {"degrees": [-2, 1, 3], "zero": _lam_matrix(fld, [[0, 0, 1], [1, 0, 0], [0, 1, 0]], lam),
         "infinity": _lam_matrix(fld, [["L", 0, 0], [0, 1, 0], [0, 0, 1]], lam)},
    ]
    yield _case("golden", "band (0,1,1,3,1,-2) on E_2", expected_band, lambda: _components(band))

    string = string_to_triple(StringDescriptor(2, (-1, 0, 1, -1, 1), 2), fld)
    expected_string = [
        {"degrees": [-1, 0], "zero": _lam_matrix(fld, [[0, 1, 0], [1, 0, 0]], lam),
         "infinity": _lam_matrix(fld, [[0, 0, 1], [0, 1, 0]], lam)},
        {"degrees": [-1, 1, 1], "zero": _lam_matrix(fld, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], lam),
         "infinity": _lam_matrix(fld, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], lam)},
    ]
    yield _case("golden", "string (-1,0,1,-1,1) f=2 on E_2", expected_string, lambda: _components(string))

    yield _case("golden", "stable sequence (19,11)", STABLE_19_11, lambda: stable_sequence(19, 11).bits)

    cusp_expected = {
        (1, 0): [["L"]],
        (2, 1): [[0, 1], [0, "L"]],
        (7, 12): [[0, 0, 1, 0, 0, 0, 0],
                  [0, 0, 0, 1, 0, 0, 0],
                  [0, 0, 0, 0, 1, 0, 0],
                  [0, 0, 0, 0, 0, 1, 0],
                  [0, 0, 0, 0, 0, 1, 0],
                  [0, 0, 0, 0, 0, "L", 1],
                  [0, 0, 0, 0, 0, 0, 0]],
    }
    for (r, d), rows in cusp_expected.items():
        yield _case("golden", f"cuspidal i_eps ({r},{d})", _lam_matrix(fld, rows, lam),
                    lambda r=r, d=d: dump_matrix(fld, cuspidal_simple_matrix(r, d, lam, fld).i_eps))

    tf_expected = {
        (1, 0): ([-1], [[1, 0]], [[0, 1]]),
        (2, 1): ([0, 0], [[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]]),
    }
    for (r, d), (degrees, i0, i_eps) in tf_expected.items():
        expected = {"degrees": degrees, "i0": _lam_matrix(fld, i0, lam), "i_eps": _lam_matrix(fld, i_eps, lam)}
        yield _case("golden", f"cuspidal torsion-free ({r},{d})", expected,
                    lambda r=r, d=d: _cuspidal(cuspidal_tf_nonlocallyfree(r, d, fld, seed)))

    f3 = get_field("f3")
    yield _case("golden", "F_3 in characteristic 3", {"formula": [1, 1], "oracle": [1, 1]},
                lambda: _both_cohomologies(unipotent(1, 3, f3)))


def _components(t) -> List[Dict[str, Any]]:
    return [{"degrees": list(comp.degrees), "zero": dump_matrix(t.field, comp.zero),
             "infinity": dump_matrix(t.field, comp.infinity)} for comp in t.components]


def _cuspidal(t) -> Dict[str, Any]:
    return {"degrees": list(t.degrees), "i0": dump_matrix(t.field, t.i0), "i_eps": dump_matrix(t.field, t.i_eps)}


def _both_cohomologies(b: BandDescriptor) -> Dict[str, List[int]]:
    oracle = cohomology(band_to_triple(b))
    return {"formula": list(cohomology_formula(b)), "oracle": [oracle.h0, oracle.h1]}


def cohomology_suite(field: Optional[str], seed: int) -> Iterator[Dict[str, Any]]:
    """
    Closed formula against the oracle on every band of E_1 and E_2 with at
    most four letters in [-2, 2] and m <= 2, plus chi = degree on strings.
    """
    fld = _suite_field(field, "f5")
    scalars = [x for x in fld.elements() if not fld.is_zero(x)] if fld.size else [fld(x) for x in (1, 2, -1, 3)]
    index = 0
    for n, lengths in ((1, (1, 2, 3, 4)), (2, (2, 4))):
        for length in lengths:
            for word in _canonical_words(n, length, -2, 2):
                for m in (1, 2):
                    lam = fld.one if all(x == 0 for x in word) and m == 1 else scalars[index % len(scalars)]
                    index += 1
                    b = BandDescriptor(n, word, m, UnivariatePoly.linear(fld, lam))
                    h0, h1 = cohomology_formula(b)
                    expected = {"h0": h0, "h1": h1, "chi": rank_degree(b).degree}
                    yield _case("cohomology", f"B({list(word)},{m},t-{fld.format(lam)}) on E_{n}", expected,
                                lambda b=b: _oracle_with_chi(band_to_triple(b)))

    for n, lengths in ((1, (1, 2, 3)), (2, (1, 2, 3))):
        for length in lengths:
            for word in _words(length, -2, 2):
                for f in range(1, n + 1):
                    s = StringDescriptor(n, word, f)
                    yield _case("cohomology", f"chi of S({list(word)},{f}) on E_{n}", rank_degree(s).degree,
                                lambda s=s: euler_characteristic(string_to_triple(s, fld)))


def _oracle_with_chi(t) -> Dict[str, int]:
    result = cohomology(t)
    return {"h0": result.h0, "h1": result.h1, "chi": euler_characteristic(t)}


def stable_suite(field: Optional[str], seed: int) -> Iterator[Dict[str, Any]]:
    """Every coprime (r, d) with r <= 8 gives a band with End = k."""
    fld = _suite_field(field, "f7")
    lam = fld(2)
    for r in range(1, 9):
        for d in range(-r, 2 * r):
            if gcd(r, d) != 1:
                continue
            yield _case("stable", f"({r},{d}) simple", 1,
                        lambda r=r, d=d: end_dim(band_to_triple(stable_band(r, d, lam, fld))))
    yield _case("stable", "(19,11) bits", STABLE_19_11, lambda: stable_sequence(19, 11).bits)


def cuspidal_suite(field: Optional[str], seed: int) -> Iterator[Dict[str, Any]]:
    """Simple cuspidal triples have End = k and distinct parameters give distinct sheaves."""
    fld = _suite_field(field, "f7")
    for r in range(1, 6):
        for d in range(r):
            if gcd(r, d) != 1:
                continue
            first = cuspidal_simple_matrix(r, d, fld(1), fld)
            second = cuspidal_simple_matrix(r, d, fld(2), fld)
            yield _case("cuspidal", f"vector bundle ({r},{d}) simple", 1, lambda t=first: end_dim(t))
            yield _case("cuspidal", f"vector bundle ({r},{d}) lambda 1 vs 2", False,
                        lambda a=first, b=second: is_isomorphic(a, b, seed))
            yield _case("cuspidal", f"vector bundle ({r},{d}) lambda 1 vs 1", True,
                        lambda a=first: is_isomorphic(a, cuspidal_simple_matrix(r, d, fld(1), fld), seed))
    for r, d in ((1, 0), (2, 1), (3, 1), (3, 2)):
        yield _case("cuspidal", f"torsion-free ({r},{d}) simple", 1,
                    lambda r=r, d=d: end_dim(cuspidal_tf_nonlocallyfree(r, d, fld, seed)))


def _probes(fld: BaseField) -> List:
    line = lambda word, lam: band_to_triple(BandDescriptor(1, word, 1, UnivariatePoly.linear(fld, lam)))
    return [
        structure_sheaf(1, fld),
        line((0,), 2),
        line((1,), 1),
        line((-1,), 3),
        line((0, 1), 1),
        line((1, -1), 2),
        string_to_triple(StringDescriptor(1, (-1,)), fld),
        string_to_triple(StringDescriptor(1, (0, -1)), fld),
    ]


def tensor_suite(field: Optional[str], seed: int) -> Iterator[Dict[str, Any]]:
    """Predicted tensor decompositions against the Kronecker product of triples."""
    fld = _suite_field(field, "f7")
    rng = random.Random(seed)
    probes = _probes(fld)
    bands = [BandDescriptor(1, word, 1, UnivariatePoly.linear(fld, lam))
             for length in (1, 2, 3)
             for word in _canonical_words(1, length, -1, 1)
             for lam in (fld(1), fld(3))]
    for index in range(TENSOR_PAIRS):
        a, b = rng.choice(bands), rng.choice(bands)
        yield _case("tensor", f"{list(a.d)}@{fld.format(a.lam)} x {list(b.d)}@{fld.format(b.lam)}",
                    list(fingerprint(probes, tensor_bands(a, b).to_triple(fld))),
                    lambda a=a, b=b: list(fingerprint(probes, tensor_triples(band_to_triple(a), band_to_triple(b)))))

    yield _case("tensor", "F_2 x F_2 in characteristic 0", [3, 1], lambda: tensor_unipotent(2, 2, 0))
    yield _case("tensor", "F_2 x F_2 in characteristic 2", [2, 2], lambda: tensor_unipotent(2, 2, 2))


def pushforward_suite(field: Optional[str], seed: int) -> Iterator[Dict[str, Any]]:
    """Direct and inverse images along the etale coverings, closed form against triples."""
    for name, expected in (("q", _pi2_structure_q()), ("f2", [unipotent(1, 2, get_field("f2"))])):
        fld = get_field(name)
        yield _case("pushforward", f"pi_2 O decomposition over {name}", _sorted_dump(expected),
                    lambda fld=fld: _sorted_dump(x for x, _ in pushforward_decompose((0, 0), 1, 1, 1, fld).summands))
        yield _case("pushforward", f"pi_2 O triple over {name}", True,
                    lambda fld=fld: is_isomorphic(pushforward_triple(structure_sheaf(2, fld), 1),
                                                  pushforward_decompose((0, 0), 1, 1, 1, fld).to_triple(fld), seed))

    fld = _suite_field(field, "f7")
    for word, n in (((1, 0), 1), ((2, -1, 0), 1), ((1, 0, 0, 0), 2), ((1, 1), 1)):
        band = BandDescriptor(len(word), word, 1, UnivariatePoly.linear(fld, fld(3)))
        yield _case("pushforward", f"push {list(word)} to E_{n}", True,
                    lambda band=band, n=n, word=word: is_isomorphic(
                        pushforward_triple(band_to_triple(band), n),
                        pushforward_decompose(word, n, fld(3), 1, fld).to_triple(fld), seed))

    for word, r in (((1,), 2), ((0, 1), 2), ((1, -1), 3)):
        band = BandDescriptor(1, word, 1, UnivariatePoly.linear(fld, fld(2)))
        yield _case("pushforward", f"pull {list(word)} along degree {r}", True,
                    lambda band=band, r=r: is_isomorphic(pullback_triple(band_to_triple(band), r),
                                                         pullback_etale(band, r).to_triple(fld), seed))


def _sorted_dump(descriptors) -> List[Dict[str, Any]]:
    return sorted((dump_descriptor(x) for x in descriptors), key=_encode)


def _pi2_structure_q() -> List[BandDescriptor]:
    fld = get_field("q")
    return [BandDescriptor(1, (0,), 1, UnivariatePoly.linear(fld, fld(-1))),
            BandDescriptor(1, (0,), 1, UnivariatePoly.linear(fld, fld(1)))]


def _random_descriptor(rng: random.Random, fld: BaseField):
    n = rng.choice((1, 2))
    if rng.random() < 0.5:
        length = n * rng.randint(1, 3)
        while True:
            word = tuple(rng.randint(-2, 2) for _ in range(length))
            if is_periodic(word, n) is None:
                break
        lam = fld.random_nonzero(rng)
        return canonical_band(BandDescriptor(n, word, rng.randint(1, 2), UnivariatePoly.linear(fld, lam)))
    word = tuple(rng.randint(-2, 2) for _ in range(rng.randint(1, 4)))
    return StringDescriptor(n, word, rng.randint(1, n))


def _canonical(x):
    return canonical_band(x) if isinstance(x, BandDescriptor) else x


def duality_suite(field: Optional[str], seed: int) -> Iterator[Dict[str, Any]]:
    """dual is an involution, S((-1)) is self-dual and Hom(F, G) = H0(F^v (x) G)."""
    fld = _suite_field(field, "f7")
    rng = random.Random(seed)
    for index in range(DUALITY_CASES):
        x = _random_descriptor(rng, fld)
        yield _case("duality", f"double dual #{index}", dump_descriptor(x),
                    lambda x=x: dump_descriptor(_canonical(dual(dual(x)))))

    point = StringDescriptor(1, (-1,))
    yield _case("duality", "S((-1)) self-dual", dump_descriptor(point), lambda: dump_descriptor(dual(point)))

    for index in range(20):
        n = 1 + index % 2
        a, b = (BandDescriptor(n, tuple(rng.randint(-2, 2) for _ in range(n)), 1,
                               UnivariatePoly.linear(fld, fld.random_nonzero(rng))) for _ in range(2))
        ta, tb = band_to_triple(a), band_to_triple(b)
        yield _case("duality", f"hom vs sections #{index}", hom_dim(ta, tb),
                    lambda ta=ta, tb=tb: cohomology(tensor_triples(dual_triple(ta), tb)).h0)


SUITE_RUNNERS: Dict[str, Callable[[Optional[str], int], Iterator[Dict[str, Any]]]] = {
    "birkhoff": birkhoff_suite,
    "golden": golden_suite,
    "cohomology": cohomology_suite,
    "stable": stable_suite,
    "cuspidal": cuspidal_suite,
    "tensor": tensor_suite,
    "pushforward": pushforward_suite,
    "duality": duality_suite,
}


@dataclass
class VerifyReport:
    cases: pd.DataFrame
    summary: pd.DataFrame

    @property
    def mismatches(self) -> int:
        return int((~self.cases["match"]).sum()) if not self.cases.empty else 0

    def to_json(self) -> Dict[str, Any]:
        failed = self.cases[~self.cases["match"]] if not self.cases.empty else self.cases
        return {
            "cases": int(len(self.cases)),
            "mismatches": self.mismatches,
            "summary": json.loads(self.summary.to_json(orient="records")),
            "failures": json.loads(failed.to_json(orient="records")),
        }

    def write(self, path: str) -> None:
        if path.lower().endswith(".xlsx"):
            with pd.ExcelWriter(path, engine="openpyxl") as writer:
                self.cases.to_excel(writer, sheet_name="cases", index=False)
                self.summary.to_excel(writer, sheet_name="summary", index=False)
        else:
            self.cases.to_csv(path, index=False)
        logger.info(f"Wrote verify report with {len(self.cases)} cases to {path}")


def run_verify(suite: str = "all", field: Optional[str] = None, seed: Optional[int] = None) -> VerifyReport:
    """
    Run one suite or all of them.

    Args:
        suite: Suite name or "all"
        field: Base field override; each suite has its own default
        seed: Seed for the random cases (defaults to the configured seed)

    Returns:
        VerifyReport with the per-case frame and the per-suite summary
    """
    if suite != "all" and suite not in SUITE_RUNNERS:
        raise ValidationError(f"unknown suite {suite!r}", {"suites": list(SUITES) + ["all"]})
    names = list(SUITES) if suite == "all" else [suite]
    seed = config.DEFAULT_SEED if seed is None else seed

    rows: List[Dict[str, Any]] = []
    timings = []
    for name in names:
        logger.info(f"Running verify suite {name}")
        started = time.perf_counter()
        suite_rows = list(SUITE_RUNNERS[name](field, seed))
        elapsed = time.perf_counter() - started
        rows.extend(suite_rows)
        timings.append({"suite": name, "seconds": round(elapsed, 3)})
        logger.info(f"Suite {name}: {len(suite_rows)} cases, "
                    f"{sum(1 for row in suite_rows if not row['match'])} mismatches in {elapsed:.2f}s")

    cases = pd.DataFrame(rows, columns=CASE_COLUMNS)
    if cases.empty:
        counts = pd.DataFrame(columns=["suite", "cases", "mismatches"])
    else:
        counts = (cases.assign(mismatch=~cases["match"].astype(bool))
                  .groupby("suite", sort=False)
                  .agg(cases=("case", "count"), mismatches=("mismatch", "sum"))
                  .reset_index())
    summary = pd.DataFrame(timings).merge(counts, on="suite", how="left")
    summary = summary[["suite", "cases", "mismatches", "seconds"]]
    summary["cases"] = summary["cases"].fillna(0).astype(int)
    summary["mismatches"] = summary["mismatches"].fillna(0).astype(int)
    return VerifyReport(cases, summary)
