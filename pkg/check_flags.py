from functools import wraps
from typing import Callable, Any
import logging

logger = logging.getLogger(__name__)

# Check flag names
CERTIFICATES = "CERTIFICATES"
ENOUGH_INJECTIVES = "ENOUGH_INJECTIVES"
CHOICE_INDEPENDENCE = "CHOICE_INDEPENDENCE"

DEFAULT_FLAGS = frozenset({CHOICE_INDEPENDENCE})


class CheckFlags:
    """Optional verification passes, switched on from the command line."""

    _enabled = set(DEFAULT_FLAGS)

    @staticmethod
    def is_enabled(flag_name: str) -> bool:
        """Check if a check flag is enabled."""
        return flag_name.upper() in CheckFlags._enabled

    @staticmethod
    def set_flag(flag_name: str, enabled: bool) -> None:
        if enabled:
            CheckFlags._enabled.add(flag_name.upper())
        else:
            CheckFlags._enabled.discard(flag_name.upper())

    @staticmethod
    def reset() -> None:
        """Restore the default flag set."""
        CheckFlags._enabled = set(DEFAULT_FLAGS)

    @staticmethod
    def require_flag(flag_name: str):
        """Decorator to require a check flag for a function."""
        def decorator(func: Callable) -> Callable:
            @wraps(func)
            def wrapper(*args, **kwargs) -> Any:
                if not CheckFlags.is_enabled(flag_name):
                    logger.debug(f"Check {flag_name} is disabled. Skipping {func.__name__}")
                    return None
                return func(*args, **kwargs)
            return wrapper
        return decorator


# Helper functions
def is_certificates_enabled() -> bool:
    """Check if provenance certificates should be emitted."""
    return CheckFlags.is_enabled(CERTIFICATES)


def is_enough_injectives_enabled() -> bool:
    """Check if the validator should test for enough injectives."""
    return CheckFlags.is_enabled(ENOUGH_INJECTIVES)


def is_choice_independence_enabled() -> bool:
    """Check if F should be recomputed under a permuted search order."""
    return CheckFlags.is_enabled(CHOICE_INDEPENDENCE)
