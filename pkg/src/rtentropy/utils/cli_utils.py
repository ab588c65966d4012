import logging
from contextlib import contextmanager

import typer

from rtentropy.errors import RuntimeEntropyError

logger = logging.getLogger(__name__)


@contextmanager
def exit_on_error(subject: str):
    """Turns input errors into a logged message naming `subject` and exit code 1.

    Plain ValueErrors come from option values out of range and surface as usage errors (exit code 2).
    """
    try:
        yield
    except RuntimeEntropyError as e:
        logger.error("%s: %s", subject, e)
        raise typer.Exit(code=1)
    except OSError as e:
        logger.error("%s: %s", subject, e)
        raise typer.Exit(code=1)
    except ValueError as e:
        raise typer.BadParameter(str(e))
