# src/data_pipeline/input_loader.py
"""JSON inputs: relation systems, alpha vectors and test-function specs."""
import json
import logging
from fractions import Fraction
from typing import Any, Dict, List, Type

from src.number_theory.density import TestFunction
from src.number_theory.relations import AlphaVector, RelationRow, RelationSystem, validate
from src.utils.errors import AlphaError, RelationError, TestFunctionError, ZetaFractionalError

logger = logging.getLogger(__name__)


def _read_json(path: str, error: Type[ZetaFractionalError]) -> Any:
    """Parse a JSON input; syntax and encoding failures become ``error``"""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise error(f"{path} is not valid JSON: {e}")


def relation_system_from_dict(payload: Dict) -> RelationSystem:
    """{"n": int, "rows": [{"b": [...], "a": int, "q": int, "p": int}, ...]}"""
    if not isinstance(payload, dict):
        raise RelationError("relation-system document must be a JSON object")
    try:
        rows = tuple(RelationRow(tuple(row["b"]), int(row["a"]), int(row["q"]), int(row["p"]))
                     for row in payload.get("rows", []))
        system = RelationSystem(int(payload["n"]), rows)
    except (KeyError, TypeError, ValueError) as e:
        raise RelationError(f"malformed relation-system document: {e}")
    return validate(system)


def load_relation_system(path: str) -> RelationSystem:
    system = relation_system_from_dict(_read_json(path, RelationError))
    logger.info(f"Loaded relation system from {path}: {system.describe()}")
    return system


def save_relation_system(system: RelationSystem, path: str):
    with open(path, "w") as handle:
        json.dump(system.to_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")


def alpha_from_dict(payload: Dict, precision: int = 160) -> AlphaVector:
    """{"decimal": ["...", ...]} or {"exact": [[{"num", "den", "p"}, ...], ...]}"""
    if not isinstance(payload, dict):
        raise AlphaError("alpha document must be a JSON object")
    if ("decimal" in payload) == ("exact" in payload):
        raise AlphaError('alpha document needs exactly one of "decimal" or "exact"')
    try:
        if "decimal" in payload:
            return AlphaVector.from_decimals([str(v) for v in payload["decimal"]], precision)
        exact = [[(Fraction(int(t["num"]), int(t["den"])), int(t["p"])) for t in coordinate]
                 for coordinate in payload["exact"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise AlphaError(f"malformed alpha document: {e}")
    return AlphaVector.from_exact(exact, precision)


def load_alpha(path: str, precision: int = 160) -> AlphaVector:
    alpha = alpha_from_dict(_read_json(path, AlphaError), precision)
    logger.info(f"Loaded alpha (n={alpha.n}) from {path}")
    return alpha


def parse_inline_alpha(text: str, precision: int = 160) -> AlphaVector:
    """Comma-separated decimals"""
    return AlphaVector.from_decimals([part.strip() for part in text.split(",") if part.strip()], precision)


def test_function_from_terms(terms: List[Dict]) -> TestFunction:
    """[{"m": [...], "re": x, "im": y}, ...]; Hermitian partners are filled in"""
    if not isinstance(terms, list):
        raise TestFunctionError("h_spec must be a JSON list of {m, re, im} objects")
    try:
        return TestFunction.from_terms(terms)
    except TestFunctionError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise TestFunctionError(f"malformed h_spec term: {e!r}")


test_function_from_terms.__test__ = False


def load_test_function(path: str) -> TestFunction:
    h = test_function_from_terms(_read_json(path, TestFunctionError))
    logger.info(f"Loaded test function with {len(h.coeffs)} coefficients from {path}")
    return h
