"""Map the hotgate error hierarchy to process exit codes."""
import functools
import traceback

from wasabi import msg

from hotgate.errors import ConfigError, NumericError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def exit_on_exception(func):
    """Report hotgate errors through wasabi and return their exit code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as e:
            msg.fail("Invalid configuration", str(e))
            return EXIT_CONFIG
        except NumericError as e:
            tail = "\n".join(traceback.format_exc().strip().splitlines()[-3:])
            msg.fail(f"Numeric failure: {e}", tail)
            return EXIT_NUMERIC

    return wrapper
