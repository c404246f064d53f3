"""
Regenerate the catalog model documents under models/.

Usage:
    poetry run python tools/export_catalog.py --out-dir models

Runs the same code path as ``symred export``; every option of that command is accepted.
"""

from __future__ import annotations

import sys
from collections.abc import Sequence

from symred.cli import main as cli_main


def main(argv: Sequence[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else list(argv)
    return cli_main(["export", *args])


if __name__ == "__main__":
    raise SystemExit(main())
