# This code is part of FuXi-Rec.
#
# (C) Copyright FuXi-Rec Developers 2026.
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

""" FuXi-Rec Exceptions """

from typing import Any, Dict, Optional


class FuxiRecError(Exception):
    """Base class for errors raised by the FuXi-Rec package."""

    def __init__(self, *message: Any) -> None:
        super().__init__(" ".join(str(m) for m in message))
        self.message = " ".join(str(m) for m in message)

    def __str__(self) -> str:
        return repr(self.message)


class DatasetParseError(FuxiRecError):
    """An interaction log line could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyDatasetError(FuxiRecError):
    """No user survived the interaction-count filter."""

    pass


class ConfigurationError(FuxiRecError, ValueError):
    """Invalid configuration value or unknown option name."""

    pass


class ShapeMismatchError(FuxiRecError, ValueError):
    """Operands of a kernel have incompatible shapes."""

    pass


class NonFiniteError(FuxiRecError, FloatingPointError):
    """A kernel produced a NaN or infinite value, or training diverged."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CheckpointError(FuxiRecError):
    """A checkpoint or split file is corrupt or does not match the model."""

    pass


class MissingOptionalLibraryError(FuxiRecError, ImportError):
    """Raised when an optional library is needed but not installed."""

    def __init__(self, libname: str, name: str, pip_install: Optional[str] = None) -> None:
        message = f"The '{libname}' library is required to use '{name}'."
        if pip_install:
            message += f" You can install it with '{pip_install}'."
        super().__init__(message)
        self.libname = libname
