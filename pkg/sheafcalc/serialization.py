"""
JSON shapes for scalars, polynomials, descriptors, Laurent matrices and triples.

Scalars are accepted as JSON integers or strings ("3/4", "2 mod 5") and always
written as strings; ``parse_*(dump_*(x)) == x`` for every supported value.
"""
from typing import Any, Dict, List, Optional, Sequence

from .descriptors import BandDescriptor, StringDescriptor, unipotent
from .errors import ValidationError
from .fields import BaseField, UnivariatePoly, get_field
from .laurent import LaurentMatrix, LaurentPoly
from .torsion import TorsionModuleDescriptor
from .triples import ComponentGluing, CuspidalTriple, NodalTriple


def parse_scalar(fld: BaseField, value: Any) -> Any:
    if isinstance(value, float):
        if not value.is_integer():
            raise ValidationError("scalars must be exact: use a string such as \"3/4\"", {"value": value})
        value = int(value)
    if isinstance(value, (int, str)):
        return fld(value)
    raise ValidationError(f"cannot read {value!r} as a scalar", {"value": repr(value)})


def parse_poly(fld: BaseField, coefficients: Sequence[Any]) -> UnivariatePoly:
    if not isinstance(coefficients, (list, tuple)):
        raise ValidationError("polynomials are coefficient arrays, lowest degree first",
                              {"value": repr(coefficients)})
    return UnivariatePoly(fld, tuple(parse_scalar(fld, c) for c in coefficients))


def _require(data: Any, key: str) -> Any:
    if not isinstance(data, dict):
        raise ValidationError(f"expected a JSON object with field {key!r}", {"value": repr(data)})
    if key not in data:
        raise ValidationError(f"missing field {key!r}", {"keys": sorted(data)})
    return data[key]


def _int(value: Any, name: str) -> int:
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"{name} must be an integer", {name: repr(value)})
    return value


def _int_list(value: Any, name: str) -> List[int]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ValidationError(f"{name} must be an array of integers", {name: repr(value)})
    return list(value)


def _cycle_of(data: Dict) -> int:
    curve = data.get("curve", {"cycle": 1})
    if not isinstance(curve, dict) or "cycle" not in curve:
        raise ValidationError("curve must look like {\"cycle\": n}", {"curve": repr(curve)})
    return _int(curve["cycle"], "cycle")


def _band_parameter(fld: BaseField, data: Dict) -> UnivariatePoly:
    if "p" in data:
        return parse_poly(fld, data["p"])
    if "lambda" in data:
        return UnivariatePoly.linear(fld, parse_scalar(fld, data["lambda"]))
    raise ValidationError("band needs a parameter \"p\" or \"lambda\"", {"keys": sorted(data)})


def parse_descriptor(data: Dict, fld: BaseField):
    """Band, string, unipotent or torsion-module descriptor from its JSON object."""
    if not isinstance(data, dict):
        raise ValidationError("descriptor must be a JSON object", {"value": repr(data)})
    kind = _require(data, "kind")
    if kind == "band":
        return BandDescriptor(_cycle_of(data), tuple(_int_list(_require(data, "d"), "d")),
                              _int(data.get("m", 1), "m"), _band_parameter(fld, data))
    if kind == "string":
        return StringDescriptor(_cycle_of(data), tuple(_int_list(_require(data, "d"), "d")),
                                _int(data.get("f", 1), "f"))
    if kind == "unipotent":
        return unipotent(_cycle_of(data), _int(_require(data, "m"), "m"), fld)
    if kind == "M":
        return TorsionModuleDescriptor("M", _int(_require(data, "n"), "n"), _int(_require(data, "m"), "m"),
                                       parse_scalar(fld, _require(data, "lambda")), fld)
    if kind == "N":
        return TorsionModuleDescriptor("N", _int(_require(data, "n"), "n"), _int(_require(data, "m"), "m"))
    raise ValidationError(f"unknown descriptor kind {kind!r}", {"kind": kind})


def dump_descriptor(x) -> Dict:
    if isinstance(x, BandDescriptor):
        return {"kind": "band", "curve": {"cycle": x.n}, "d": list(x.d), "m": x.m, "p": x.p.to_json()}
    if isinstance(x, StringDescriptor):
        data = {"kind": "string", "curve": {"cycle": x.n}, "d": list(x.d)}
        if x.n > 1:
            data["f"] = x.f
        return data
    if isinstance(x, TorsionModuleDescriptor):
        data = {"kind": x.kind, "n": x.n, "m": x.m}
        if x.kind == "M":
            data["lambda"] = x.field.format(x.lam)
        return data
    raise ValidationError(f"cannot serialize {type(x).__name__}")


def parse_laurent_matrix(data: Any, fld: BaseField) -> LaurentMatrix:
    if not isinstance(data, list) or not data:
        raise ValidationError("Laurent matrix must be a non-empty array of rows")
    rows = []
    for row in data:
        if not isinstance(row, list):
            raise ValidationError("Laurent matrix rows must be arrays")
        cells = []
        for cell in row:
            if not isinstance(cell, dict):
                raise ValidationError("Laurent entries are {exponent: coefficient} objects",
                                      {"value": repr(cell)})
            try:
                terms = tuple((int(e), parse_scalar(fld, c)) for e, c in cell.items())
            except ValueError as e:
                raise ValidationError(f"bad exponent in {cell!r}") from e
            cells.append(LaurentPoly(fld, terms))
        rows.append(cells)
    return LaurentMatrix(fld, rows)


def dump_laurent_matrix(matrix: LaurentMatrix) -> List[List[Dict[str, str]]]:
    return matrix.to_json()


def dump_matrix(fld: BaseField, matrix: Sequence[Sequence[Any]]) -> List[List[str]]:
    return [[fld.format(x) for x in row] for row in matrix]


def _parse_matrix(fld: BaseField, data: Any, rows: int, cols: int, name: str) -> List[List[Any]]:
    if not isinstance(data, list) or len(data) != rows or any(
            not isinstance(row, list) or len(row) != cols for row in data):
        raise ValidationError(f"{name} must be a {rows}x{cols} array", {"name": name})
    return [[parse_scalar(fld, x) for x in row] for row in data]


def parse_triple(data: Dict, fld: Optional[BaseField] = None):
    if not isinstance(data, dict):
        raise ValidationError("triple must be a JSON object")
    if "field" in data:
        fld = get_field(data["field"])
    if fld is None:
        raise ValidationError("triple needs a base field")
    kind = _require(data, "kind")
    if kind == "cuspidal":
        degrees = _int_list(_require(data, "degrees"), "degrees")
        columns = _int(data.get("columns", len(degrees)), "columns")
        return CuspidalTriple(fld, degrees, columns,
                              _parse_matrix(fld, _require(data, "i0"), len(degrees), columns, "i0"),
                              _parse_matrix(fld, _require(data, "i_eps"), len(degrees), columns, "i_eps"))
    if kind != "nodal":
        raise ValidationError(f"unknown triple kind {kind!r}", {"kind": kind})
    n = _int(_require(data, "cycle"), "cycle")
    columns = _int_list(_require(data, "columns"), "columns")
    entries = _require(data, "components")
    if not isinstance(entries, list):
        raise ValidationError("components must be an array", {"components": repr(entries)})
    if len(entries) != n or len(columns) != n:
        raise ValidationError("one component and one column count per node are required",
                              {"cycle": n, "components": len(entries), "columns": len(columns)})
    components = []
    for c, entry in enumerate(entries):
        degrees = _int_list(_require(entry, "degrees"), "degrees")
        zero = _parse_matrix(fld, _require(entry, "zero"), len(degrees), columns[c], "zero")
        infinity = _parse_matrix(fld, _require(entry, "infinity"), len(degrees), columns[(c + 1) % n], "infinity")
        components.append(ComponentGluing(degrees, zero, infinity))
    return NodalTriple(fld, components, columns)


def dump_triple(t) -> Dict:
    fld = t.field
    if isinstance(t, CuspidalTriple):
        return {"kind": "cuspidal", "field": fld.name, "degrees": list(t.degrees), "columns": t.columns,
                "i0": dump_matrix(fld, t.i0), "i_eps": dump_matrix(fld, t.i_eps)}
    return {
        "kind": "nodal",
        "field": fld.name,
        "cycle": t.n,
        "components": [{"degrees": list(comp.degrees), "zero": dump_matrix(fld, comp.zero),
                        "infinity": dump_matrix(fld, comp.infinity)} for comp in t.components],
        "columns": list(t.columns),
    }
