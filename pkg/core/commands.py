import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable

import numpy as np

from core.errors import ConfigError, ShiftKError, ValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERIC_ERROR = 3

# Command registry - commands register themselves here
COMMANDS: dict = {}


def register_command(command):
    """Register a command in the global registry."""
    COMMANDS[command.name] = command()
    return command


def get_command_list() -> str:
    """Formatted list of available commands for the CLI help epilog."""
    if not COMMANDS:
        return "No commands available."
    return "\n".join(f"  {command.get_help()}" for command in COMMANDS.values())


def run_pool(fn: Callable, items: Iterable, threads: int = 1) -> list:
    """Map `fn` over `items` on a worker pool; results keep the input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def execute_command(name: str, args) -> int:
    """Run a command by name and turn failures into exit codes."""
    if name not in COMMANDS:
        logger.error(f"Unknown command. Available: {', '.join(COMMANDS.keys())}")
        return EXIT_CONFIG_ERROR

    try:
        return COMMANDS[name].run(args)
    except (ConfigError, ValidationError) as e:
        logger.error(f"Invalid configuration for {name}: {e}")
        return EXIT_CONFIG_ERROR
    except OSError as e:
        logger.error(f"Could not read or write files for {name}: {e}")
        return EXIT_CONFIG_ERROR
    except (ShiftKError, FloatingPointError, ArithmeticError, np.linalg.LinAlgError) as e:
        logger.error(f"Numerical failure in {name}: {e}")
        return EXIT_NUMERIC_ERROR
