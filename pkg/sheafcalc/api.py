from fastapi import Body, HTTPException, Query
from typing import Any, Callable, Dict, List, Optional
import logging

# Import our application modules
from . import service
from .errors import SheafCalcError
from .utils import format_response
from .verify import run_verify

logger = logging.getLogger("sheafcalc")

FIELD_DESCRIPTION = "Base field: q or f<p>"


def _run(name: str, handler: Callable[..., Dict[str, Any]], *args) -> Dict[str, Any]:
    """Call a service handler and translate its errors into HTTP responses."""
    try:
        return handler(*args)
    except SheafCalcError as e:
        logger.info(f"Rejected {name} request: {e.code}: {e.message}")
        raise HTTPException(status_code=e.http_status, detail=e.to_dict())
    except Exception as e:
        logger.error(f"Error in {name}: {e}")
        raise HTTPException(status_code=500, detail=f"Error processing request: {str(e)}")


async def birkhoff_endpoint(matrix: List[List[Dict[str, Any]]] = Body(..., description="Rows of {exponent: coefficient} maps"),
                            field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    """
    Endpoint to factor a Laurent matrix with unit determinant.
    """
    return _run("birkhoff", service.birkhoff, matrix, field)


async def describe_endpoint(descriptor: Dict[str, Any] = Body(..., description="Band, string or torsion module"),
                            field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("describe", service.describe, descriptor, field)


async def triple_endpoint(descriptor: Dict[str, Any] = Body(..., description="Band or string"),
                          field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("triple", service.triple, descriptor, field)


async def cohomology_endpoint(descriptor: Dict[str, Any] = Body(..., description="Band, string or triple"),
                              method: str = Query("both", description="formula, oracle or both"),
                              field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    """
    Endpoint to compute h0 and h1, by the closed formula and/or the triples oracle.
    """
    return _run("cohomology", service.cohomology, descriptor, field, method)


async def tensor_endpoint(first: Dict[str, Any] = Body(..., description="First band"),
                          second: Dict[str, Any] = Body(..., description="Second band"),
                          field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("tensor", service.tensor, first, second, field)


async def dual_endpoint(descriptor: Dict[str, Any] = Body(..., description="Band or string"),
                        field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("dual", service.dualize, descriptor, field)


async def pullback_endpoint(descriptor: Dict[str, Any] = Body(..., description="Band on E_n"),
                            r: int = Query(..., description="Degree of the covering"),
                            field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("pullback", service.pullback, descriptor, r, field)


async def pushforward_endpoint(d: List[int] = Body(..., description="Multidegree on the cover"),
                               n: int = Body(..., description="Length of the target cycle"),
                               lam: Any = Body(1, alias="lambda", description="Line bundle parameter"),
                               m: int = Body(1, description="Unipotent rank"),
                               decompose: bool = Query(False, description="Split periodic words"),
                               field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    """
    Endpoint for the direct image of a line bundle along the covering E_{len(d)} -> E_n.
    """
    return _run("pushforward", service.pushforward, d, n, lam, m, field, decompose)


async def stable_seq_endpoint(r: int = Query(..., description="Rank"),
                              d: int = Query(..., description="Degree, coprime to the rank"),
                              certify: bool = Query(False, description="Check End = k with the oracle"),
                              lam: str = Query("1", alias="lambda", description="Band parameter"),
                              field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("stable-seq", service.stable_seq, r, d, field, lam, certify)


async def cusp_matrix_endpoint(r: int = Query(..., description="Rank"),
                               d: int = Query(..., description="Degree, coprime to the rank"),
                               lam: str = Query("0", description="Continuous parameter"),
                               field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("cusp-matrix", service.cusp_matrix, r, d, lam, field)


async def cusp_tf_endpoint(r: int = Query(..., description="Rank"),
                           d: int = Query(..., description="Degree, coprime to the rank"),
                           seed: Optional[int] = Query(None, description="Seed for the randomized search"),
                           field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("cusp-tf", service.cusp_tf, r, d, field, seed)


async def hom_endpoint(first: Dict[str, Any] = Body(..., description="Source descriptor or triple"),
                       second: Dict[str, Any] = Body(..., description="Target descriptor or triple"),
                       field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("hom", service.hom, first, second, field)


async def isomorphic_endpoint(first: Dict[str, Any] = Body(..., description="First descriptor or triple"),
                              second: Dict[str, Any] = Body(..., description="Second descriptor or triple"),
                              seed: Optional[int] = Query(None, description="Seed for random sampling"),
                              field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("isomorphic", service.isomorphic, first, second, field, seed)


async def fm_endpoint(module: Dict[str, Any] = Body(..., description="Torsion module of kind M or N"),
                      field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    return _run("fm", service.fm, module, field)


async def verify_endpoint(suite: str = Query("golden", description="Suite name or all"),
                          seed: Optional[int] = Query(None, description="Seed for random cases"),
                          field: Optional[str] = Query(None, description=FIELD_DESCRIPTION)):
    """
    Endpoint to run a verify suite and return its summary and failed cases.
    """
    return _run("verify", lambda: format_response(run_verify(suite, field, seed).to_json()))
