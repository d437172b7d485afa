from __future__ import annotations

import json
from functools import lru_cache
from importlib.resources import files
from typing import Any

import jsonschema

from mlmod_contracts import schemas as contract_schemas

Q_REPORT = "q_report.v1.json"
BOUNDS_VERIFICATION = "bounds_verification.v1.json"
SWEEP_ROW = "sweep_row.v1.json"


class ContractValidationError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict[str, Any]:
    resource = files(contract_schemas) / name
    if not resource.is_file():
        raise ContractValidationError(f"Unknown schema {name!r}.")
    return json.loads(resource.read_text(encoding="utf-8"))


def validate_json(instance: dict[str, Any], schema: dict[str, Any]) -> None:
    try:
        jsonschema.validate(instance=instance, schema=schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(part) for part in exc.absolute_path)
        raise ContractValidationError(f"{path or '<root>'}: {exc.message}") from exc


def validate_document(name: str, instance: dict[str, Any]) -> dict[str, Any]:
    """Validate `instance` against the named schema and hand it back unchanged."""
    validate_json(instance, load_schema(name))
    return instance


def assert_decomposition(
    q_global: float, contributions: list[float], *, tolerance: float = 1e-12
) -> None:
    total = sum(contributions)
    if abs(q_global - total) > tolerance:
        raise ContractValidationError(
            f"q_global={q_global!r} differs from the sum of contributions {total!r} "
            f"by more than {tolerance:g}"
        )
