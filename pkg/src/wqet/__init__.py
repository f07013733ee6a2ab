"""
This file provides:

- Path settings for the global config file & the package directory
- Version numbering
- Protocols for the pluggable pieces of wqet (random sources and ledger runners).
  They only matter for static type checking; plain duck typing works everywhere.
"""

__version__ = "0.3.0"

import os
from pathlib import Path
from typing import Any, Protocol

import dotenv
from platformdirs import user_config_dir
from rich.console import Console

from wqet.utils.log import logger

package_dir = Path(__file__).resolve().parent

global_config_dir = Path(os.getenv("WQET_GLOBAL_CONFIG_DIR") or user_config_dir("wqet"))
global_config_dir.mkdir(parents=True, exist_ok=True)
global_config_file = Path(global_config_dir) / ".env"

if not os.getenv("WQET_SILENT_STARTUP"):
    Console(stderr=True).print(
        f"This is [bold green]wqet[/bold green] version [bold green]{__version__}[/bold green].\n"
        f"Loading global config from [bold green]'{global_config_file}'[/bold green]"
    )
dotenv.load_dotenv(dotenv_path=global_config_file)


# === Protocols ===


class RandomSource(Protocol):
    """Anything that yields uniform floats in [0, 1): `RngStream` or a `numpy.random.Generator`."""

    def random(self) -> float: ...


class LedgerRunner(Protocol):
    """Turns a protocol configuration into an energy ledger (sampled or exact)."""

    def __call__(self, config: Any) -> Any: ...


__all__ = [
    "LedgerRunner",
    "RandomSource",
    "package_dir",
    "__version__",
    "global_config_file",
    "global_config_dir",
    "logger",
]
