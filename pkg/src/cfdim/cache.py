"""CSV-backed cache for pressure crossing solutions.

Rows carry (B, alphabet, n, tolerance, s_value, residual, mode, leaves);
lookups hit only on exact keys, so a tighter tolerance is never served a
stale value. Corrupt rows are skipped with a warning, never returned.
"""

from __future__ import annotations

import csv
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .cf_core import format_rational
from .pressure import PressureSolution

__all__ = ["CacheKey", "cache_lookup", "cache_store", "default_cache_path"]

log = logging.getLogger(__name__)

_FIELDS = ["B", "alphabet", "n", "tolerance", "s_value", "residual", "mode",
           "leaves"]

ENV_CACHE = "CFDIM_CACHE"


@dataclass(frozen=True)
class CacheKey:
    B: Fraction
    alpha: int
    n: int
    tol: float
    mode: str

    def row_prefix(self) -> tuple[str, str, str, str]:
        return (format_rational(self.B), str(self.alpha), str(self.n),
                repr(self.tol))


def default_cache_path(explicit: str | None = None) -> Path | None:
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_CACHE)
    return Path(env) if env else None


def cache_lookup(path: Path, key: CacheKey) -> PressureSolution | None:
    if not path.exists():
        return None
    B_s, alpha_s, n_s, tol_s = key.row_prefix()
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.DictReader(fh), start=2):
            try:
                if (row["B"], row["alphabet"], row["n"], row["tolerance"],
                        row["mode"]) != (B_s, alpha_s, n_s, tol_s, key.mode):
                    continue
                return PressureSolution(
                    s_value=float(row["s_value"]),
                    residual=float(row["residual"]),
                    iterations=0,
                    bracket=(float(row["s_value"]), float(row["s_value"])),
                    tolerance=key.tol,
                    mode=row["mode"],
                    leaves=int(row["leaves"]),
                )
            except (KeyError, TypeError, ValueError):
                log.warning("skipping corrupt cache row %d in %s", lineno, path)
    return None


def cache_store(path: Path, key: CacheKey, sol: PressureSolution) -> None:
    new = not path.exists()
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_FIELDS)
        if new:
            writer.writeheader()
        B_s, alpha_s, n_s, tol_s = key.row_prefix()
        writer.writerow({
            "B": B_s, "alphabet": alpha_s, "n": n_s, "tolerance": tol_s,
            "s_value": repr(sol.s_value), "residual": repr(sol.residual),
            "mode": sol.mode, "leaves": str(sol.leaves),
        })
