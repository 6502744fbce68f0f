"""
Command handlers shared by the CLI and the HTTP API.

Every function takes JSON-shaped input plus a field name and returns a
JSON-safe dict.
"""
import logging
from typing import Any, Dict, Optional, Sequence

from . import config
from .descriptors import (BandDescriptor, StringDescriptor, canonical_band,
                          normalization, rank_degree, string_chain)
from .errors import DecomposablePushforwardError, ValidationError
from .fields import get_field
from .laurent import birkhoff_factor
from .oracle import cohomology as oracle_cohomology
from .oracle import hom_dimension, is_isomorphic
from .serialization import (dump_descriptor, dump_laurent_matrix, dump_triple, parse_descriptor,
                            parse_laurent_matrix, parse_scalar, parse_triple)
from .sheaf_ops import (DecompositionResult, cohomology_formula, dual, pullback_etale,
                        pushforward_decompose, pushforward_line, tensor_bands)
from .stable import (certify_simple, cuspidal_simple_matrix, cuspidal_tf_nonlocallyfree, euclidean_chain,
                     stable_band, stable_sequence)
from .torsion import TorsionModuleDescriptor, fm_image, module_length
from .triples import band_to_triple, string_to_triple, triple_charge, validate_triple
from .utils import format_response

logger = logging.getLogger("sheafcalc")


def _field(name: Optional[str]):
    return get_field(name or config.DEFAULT_FIELD)


def _is_triple(data: Dict) -> bool:
    return isinstance(data, dict) and data.get("kind") in ("nodal", "cuspidal")


def to_triple(data: Dict, fld):
    """A triple given directly, or the triple of a band or string descriptor."""
    if _is_triple(data):
        t = parse_triple(data, fld)
        validate_triple(t)
        return t
    descriptor = parse_descriptor(data, fld)
    if isinstance(descriptor, BandDescriptor):
        return band_to_triple(descriptor)
    if isinstance(descriptor, StringDescriptor):
        return string_to_triple(descriptor, fld)
    raise ValidationError("torsion modules have no triple; use fm first", {"kind": data.get("kind")})


def _decomposition(result: DecompositionResult) -> Dict[str, Any]:
    return {
        "summands": [{"descriptor": dump_descriptor(x), "multiplicity": k} for x, k in result.summands],
        "total": result.total_charge().to_json(),
    }


def birkhoff(matrix: Any, field: Optional[str] = None) -> Dict[str, Any]:
    fld = _field(field)
    m = parse_laurent_matrix(matrix, fld)
    result = birkhoff_factor(m)
    return format_response({
        "exponents": result.exponents,
        "splitting_type": sorted(-d for d in result.exponents),
        "s": dump_laurent_matrix(result.s),
        "t": dump_laurent_matrix(result.t),
    })


def describe(data: Dict, field: Optional[str] = None) -> Dict[str, Any]:
    fld = _field(field)
    x = parse_descriptor(data, fld)
    if isinstance(x, TorsionModuleDescriptor):
        return format_response({"descriptor": dump_descriptor(x), "length": module_length(x)})
    output = {
        "descriptor": dump_descriptor(x),
        "charge": rank_degree(x).to_json(),
        "normalization": normalization(x),
    }
    if isinstance(x, BandDescriptor):
        output["canonical"] = dump_descriptor(canonical_band(x))
        output["laps"] = x.laps
    else:
        chain, degrees, start = string_chain(x)
        output["chain"] = {"links": chain.size, "degrees": list(degrees), "start": start + 1}
    return format_response(output)


def triple(data: Dict, field: Optional[str] = None) -> Dict[str, Any]:
    fld = _field(field)
    t = to_triple(data, fld)
    return format_response({"triple": dump_triple(t), "charge": triple_charge(t).to_json()})


def cohomology(data: Dict, field: Optional[str] = None, method: str = "both") -> Dict[str, Any]:
    """
    Cohomology by the closed formula, by the oracle, or both.

    The formula only applies to bands; strings and raw triples always use the oracle.
    """
    if method not in ("formula", "oracle", "both"):
        raise ValidationError("method must be formula, oracle or both", {"method": method})
    fld = _field(field)
    output: Dict[str, Any] = {}
    descriptor = None if _is_triple(data) else parse_descriptor(data, fld)
    if method in ("formula", "both"):
        if not isinstance(descriptor, BandDescriptor):
            if method == "formula":
                raise ValidationError("the closed formula is only available for bands")
        else:
            h0, h1 = cohomology_formula(descriptor)
            output["formula"] = {"h0": h0, "h1": h1}
    if method in ("oracle", "both"):
        output["oracle"] = oracle_cohomology(to_triple(data, fld)).to_json()
    if "formula" in output and "oracle" in output:
        output["match"] = output["formula"] == output["oracle"]
    return format_response(output)


def tensor(a: Dict, b: Dict, field: Optional[str] = None) -> Dict[str, Any]:
    fld = _field(field)
    return format_response(_decomposition(tensor_bands(parse_descriptor(a, fld), parse_descriptor(b, fld))))


def dualize(data: Dict, field: Optional[str] = None) -> Dict[str, Any]:
    fld = _field(field)
    result = dual(parse_descriptor(data, fld))
    if isinstance(result, BandDescriptor):
        result = canonical_band(result)
    return format_response({"dual": dump_descriptor(result)})


def pullback(data: Dict, r: int, field: Optional[str] = None) -> Dict[str, Any]:
    fld = _field(field)
    return format_response(_decomposition(pullback_etale(parse_descriptor(data, fld), r)))


def pushforward(d: Sequence[int], n: int, lam: Any = 1, m: int = 1, field: Optional[str] = None,
                decompose: bool = False) -> Dict[str, Any]:
    fld = _field(field)
    lam_value = parse_scalar(fld, lam)
    if decompose:
        return format_response(_decomposition(pushforward_decompose(d, n, lam_value, m, fld)))
    try:
        band = pushforward_line(d, n, lam_value, m, fld)
    except DecomposablePushforwardError as e:
        e.context["summands"] = _decomposition(e.decomposition)["summands"]
        raise
    return format_response({"band": dump_descriptor(band)})


def stable_seq(r: int, d: int, field: Optional[str] = None, lam: Any = 1, certify: bool = False) -> Dict[str, Any]:
    sequence = stable_sequence(r, d)
    output = {
        "bits": sequence.bits,
        "twist": sequence.twist,
        "word": list(sequence.word),
        "chain": [{"x": x, "y": y, "type": kind, "k": k} for x, y, kind, k in sequence.chain],
    }
    if certify:
        fld = _field(field)
        band = stable_band(r, d, parse_scalar(fld, lam), fld)
        output["band"] = dump_descriptor(band)
        output["simple"] = certify_simple(band_to_triple(band))
    return format_response(output)


def cusp_matrix(r: int, d: int, lam: Any = 0, field: Optional[str] = None) -> Dict[str, Any]:
    fld = _field(field)
    t = cuspidal_simple_matrix(r, d, parse_scalar(fld, lam), fld)
    c, r2 = divmod(d, r)
    return format_response({
        "triple": dump_triple(t),
        "chain": [list(pair) for pair in euclidean_chain(r - r2, r2)],
        "simple": certify_simple(t),
    })


def cusp_tf(r: int, d: int, field: Optional[str] = None, seed: Optional[int] = None) -> Dict[str, Any]:
    fld = _field(field)
    t = cuspidal_tf_nonlocallyfree(r, d, fld, seed)
    return format_response({"triple": dump_triple(t), "simple": certify_simple(t)})


def hom(a: Dict, b: Dict, field: Optional[str] = None) -> Dict[str, Any]:
    fld = _field(field)
    return format_response({"hom_dim": hom_dimension(to_triple(a, fld), to_triple(b, fld))})


def isomorphic(a: Dict, b: Dict, field: Optional[str] = None, seed: Optional[int] = None) -> Dict[str, Any]:
    fld = _field(field)
    return format_response({"isomorphic": is_isomorphic(to_triple(a, fld), to_triple(b, fld), seed)})


def fm(data: Dict, field: Optional[str] = None) -> Dict[str, Any]:
    fld = _field(field)
    module = parse_descriptor(data, fld)
    if not isinstance(module, TorsionModuleDescriptor):
        raise ValidationError("fm expects a torsion module of kind M or N", {"kind": data.get("kind")})
    image = fm_image(module)
    return format_response({
        "image": dump_descriptor(image),
        "length": module_length(module),
        "charge": rank_degree(image).to_json(),
    })

