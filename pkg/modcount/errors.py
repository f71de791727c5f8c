"""
This library provides the exceptions raised throughout the tool.  Every one of them
carries a machine-readable code and says whether it is a validation problem (bad
input; exit code 1) or a runtime problem (exit code 2).
"""
from typing import Optional

VALIDATION = 'validation'
RUNTIME = 'runtime'


class ModCountError(ValueError):
    """
    The root of all our errors.  It extends ``ValueError`` so that callers which only
    care about "bad value" semantics may continue to catch that.
    """
    code = 'ERROR'
    kind = RUNTIME

    def __init__(self, message: str, code: Optional[str] = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    @property
    def message(self) -> str:
        return self.args[0]

    @property
    def exit_code(self) -> int:
        """
        A read-only property that returns the process exit code appropriate for this
        error.

        :return: ``1`` for validation errors, ``2`` for everything else.
        """
        return 1 if self.kind == VALIDATION else 2

    def __str__(self) -> str:
        return f'[{self.code}] {self.message}'


class ValidationError(ModCountError):
    code = 'INVALID'
    kind = VALIDATION


class GraphFormatError(ValidationError):
    code = 'MALFORMED_LINE'


class FamilyError(ValidationError):
    code = 'INVALID_FAMILY'


class DisconnectedMember(FamilyError):
    code = 'DISCONNECTED_MEMBER'

    def __init__(self, index: int):
        super().__init__(f'Family member {index} is not connected.')
        self.index = index


class TooSmallMember(FamilyError):
    code = 'TOO_SMALL_MEMBER'

    def __init__(self, index: int):
        super().__init__(f'Family member {index} has fewer than two vertices.')
        self.index = index


class IsomorphicPair(FamilyError):
    code = 'ISOMORPHIC_PAIR'

    def __init__(self, first: int, second: int):
        super().__init__(f'Family members {first} and {second} are isomorphic.')
        self.indices = (first, second)


class BoundaryAlpha(ValidationError):
    code = 'BOUNDARY_ALPHA'

    def __init__(self, index: int):
        super().__init__(f'm(G_{index}) equals 1/alpha exactly; the split into I and J is undefined here.')
        self.index = index


class ParameterError(ValidationError):
    code = 'BAD_PARAMETER'


class ConfigError(ValidationError):
    code = 'BAD_CONFIG'


class SizeCapExceeded(ModCountError):
    code = 'SIZE_CAP_EXCEEDED'


class TruncatedInput(ModCountError):
    code = 'TRUNCATED_INPUT'

