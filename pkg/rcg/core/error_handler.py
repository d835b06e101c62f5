"""Exception hierarchy and the CLI error reporter."""

from __future__ import annotations

import logging
import traceback
from pathlib import Path

from pydantic import ValidationError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3


class RcgError(Exception):
    """Base class for every error raised by the package."""


class ContractViolation(RcgError, ValueError):
    """A caller broke a precondition (shape, base point, descent direction...)."""


class UnknownProblemError(ContractViolation):
    """Requested problem kind does not exist."""


class RetractionError(RcgError):
    """The retraction cannot be evaluated at the given tangent vector."""


class LineSearchError(RcgError):
    """Step-size selection failed; ``alpha`` is the last or best trial step."""

    def __init__(
        self, reason: str, alpha: float, cost_evals: int = 0, grad_evals: int = 0
    ) -> None:
        super().__init__(f"{reason} (alpha={alpha:.3e})")
        self.reason = reason
        self.alpha = alpha
        # evaluations spent before giving up
        self.cost_evals = cost_evals
        self.grad_evals = grad_evals


class ReportError(RcgError):
    """Writing or reading a benchmark artifact failed."""

    def __init__(self, message: str, path: Path | str | None = None) -> None:
        where = f" [{path}]" if path is not None else ""
        super().__init__(f"{message}{where}")
        self.path = Path(path) if path is not None else None


class ErrorHandler:
    """Maps exceptions escaping the CLI to log output and exit codes."""

    @staticmethod
    def exit_code_for(error: BaseException) -> int:
        if isinstance(error, (ContractViolation, ValidationError)):
            return EXIT_USAGE
        if isinstance(error, (ReportError, OSError)):
            return EXIT_IO
        return EXIT_FAILURE

    @staticmethod
    def handle_cli_error(error: BaseException, debug: bool = False) -> int:
        """Log ``error`` and return the process exit code."""
        code = ErrorHandler.exit_code_for(error)
        if isinstance(error, ValidationError):
            log.error("Invalid configuration:\n%s", error)
        elif isinstance(error, RcgError):
            log.error("%s: %s", type(error).__name__, error)
        else:
            log.error("Unexpected error: %s", error)

        if debug or code == EXIT_FAILURE:
            tb_string = "".join(traceback.format_exception(None, error, error.__traceback__))
            # Truncate traceback if too long
            if len(tb_string) > 4000:
                tb_string = tb_string[-4000:]
            log.debug("Traceback:\n%s", tb_string)
        return code
