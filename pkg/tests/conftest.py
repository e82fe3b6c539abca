"""Shared fixtures: warm the process-level caches once per session."""
from __future__ import annotations

import pytest

from ulam_moments import exact_core, genfun


@pytest.fixture(scope="session")
def warm_tables() -> None:
    """Build the shared exact table and the extended float table up front.

    Both are module-level caches, so requesting this fixture keeps individual
    tests measuring their own work instead of one-time construction cost.
    """
    exact_core.ensure_table()
    genfun.diag_table(genfun.DEFAULT_N_MAX, genfun.DEFAULT_J_MAX)
