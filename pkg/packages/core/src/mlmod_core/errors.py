from __future__ import annotations

from pathlib import Path


class MlmodError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class FormatError(MlmodError):
    def __init__(self, message: str, *, path: Path | str | None = None, line_no: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line_no is not None:
                where += f":{line_no}"
            where += ": "
        super().__init__(f"{where}{message}")
        self.path = path
        self.line_no = line_no


class NetworkValidationError(FormatError):
    pass


class CommunityAssignmentError(FormatError):
    pass


class DegenerateInputError(MlmodError):
    pass


class SizeGuardError(MlmodError):
    pass


class ContractViolation(MlmodError):
    pass
