from __future__ import annotations

import pytest

from mlmod_contracts.validate import (
    BOUNDS_VERIFICATION,
    Q_REPORT,
    SWEEP_ROW,
    ContractValidationError,
    assert_decomposition,
    load_schema,
    validate_document,
)

SHA = "0" * 64


def _q_report(**overrides: object) -> dict[str, object]:
    doc: dict[str, object] = {
        "schema_version": "q_report.v1",
        "network_sha256": SHA,
        "q_global": 0.25,
        "normalizer": 24,
        "resolution": "redundancy",
        "coupling": {
            "beta": 1,
            "variant": "symmetric",
            "time_aware": False,
            "ordering": "unordered",
            "descending": False,
        },
        "per_community": [{"community": "C1", "contribution": 0.25}],
        "gamma_values": [{"layer": "L1", "community": "C1", "gamma": 2.0}],
        "ic_values": [],
    }
    doc.update(overrides)
    return doc


@pytest.mark.parametrize("name", [Q_REPORT, BOUNDS_VERIFICATION, SWEEP_ROW])
def test_packaged_schemas_load(name: str) -> None:
    schema = load_schema(name)
    assert schema["type"] == "object"
    assert "schema_version" in schema["required"]


def test_unknown_schema_is_rejected() -> None:
    with pytest.raises(ContractValidationError):
        load_schema("missing.v1.json")


def test_valid_q_report_passes_through() -> None:
    doc = _q_report()
    assert validate_document(Q_REPORT, doc) is doc


def test_q_report_rejects_bad_resolution_label() -> None:
    with pytest.raises(ContractValidationError) as excinfo:
        validate_document(Q_REPORT, _q_report(resolution="linear"))
    assert "resolution" in excinfo.value.message


def test_q_report_rejects_negative_gamma() -> None:
    doc = _q_report(gamma_values=[{"layer": "L1", "community": "C1", "gamma": -1.0}])
    with pytest.raises(ContractValidationError) as excinfo:
        validate_document(Q_REPORT, doc)
    assert excinfo.value.message.startswith("gamma_values/0/gamma")


def test_q_report_rejects_unknown_fields() -> None:
    with pytest.raises(ContractValidationError):
        validate_document(Q_REPORT, _q_report(extra=True))


def test_bounds_document_requires_even_n() -> None:
    check = {
        "printed": -0.5,
        "realized": -0.5,
        "engine": None,
        "delta_printed": None,
        "delta_realized": None,
    }
    doc = {
        "schema_version": "bounds_verification.v1",
        "n": 8,
        "ell": 2,
        "ordering": "unordered",
        "p": 2,
        "eta": 0,
        "beta": 0,
        "resolution": "redundancy",
        "lower": check,
        "upper": check,
    }
    validate_document(BOUNDS_VERIFICATION, doc)
    with pytest.raises(ContractValidationError):
        validate_document(BOUNDS_VERIFICATION, {**doc, "n": 7})


def test_sweep_row_axis_is_closed() -> None:
    row = {
        "schema_version": "sweep_row.v1",
        "axis": "omega",
        "point": 0,
        "value": 0.5,
        "layers": 2,
        "nodes": 64,
        "measure": "qms",
        "q": 0.4,
        "seconds": 0.01,
    }
    validate_document(SWEEP_ROW, row)
    with pytest.raises(ContractValidationError):
        validate_document(SWEEP_ROW, {**row, "axis": "mu"})


def test_assert_decomposition() -> None:
    assert_decomposition(0.5, [0.25, 0.25])
    with pytest.raises(ContractValidationError):
        assert_decomposition(0.5, [0.25, 0.2])
