"""
BMW Chart Settings
Environment-driven defaults for search, move enumeration and diagnostics
"""

import os
from dataclasses import dataclass, replace
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Configuration
DEFAULT_DEPTH = 6
DEFAULT_BUDGET = 100_000
DEFAULT_WORKERS = 4
DEFAULT_WINDOW = 8
DEFAULT_TEMPLATES = Path(__file__).resolve().parent.parent / "chart_move_templates.json"

TRUE_VALUES = ("1", "true", "yes", "on")


@dataclass(frozen=True)
class Settings:
    search_depth: int = DEFAULT_DEPTH
    search_budget: int = DEFAULT_BUDGET
    search_workers: int = DEFAULT_WORKERS
    move_window: int = DEFAULT_WINDOW
    b2prime: bool = False
    templates_path: Path = DEFAULT_TEMPLATES
    log_level: str = "INFO"
    no_color: bool = False

    def override(self, **changes) -> "Settings":
        """Return a copy with every non-None change applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _flag(name: str) -> bool:
    return os.getenv(name, "").strip().lower() in TRUE_VALUES


def load_settings() -> Settings:
    """Read settings from the environment (and a .env file when present)."""
    return Settings(
        search_depth=int(os.getenv("BMW_SEARCH_DEPTH", DEFAULT_DEPTH)),
        search_budget=int(os.getenv("BMW_SEARCH_BUDGET", DEFAULT_BUDGET)),
        search_workers=int(os.getenv("BMW_SEARCH_WORKERS", DEFAULT_WORKERS)),
        move_window=int(os.getenv("BMW_MOVE_WINDOW", DEFAULT_WINDOW)),
        b2prime=_flag("BMW_B2_PRIME"),
        templates_path=Path(os.getenv("BMW_MOVE_TEMPLATES", str(DEFAULT_TEMPLATES))),
        log_level=os.getenv("BMW_LOG_LEVEL", "INFO").upper(),
        no_color="NO_COLOR" in os.environ or _flag("BMW_NO_COLOR"),
    )
