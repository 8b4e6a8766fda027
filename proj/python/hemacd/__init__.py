# Copyright 2026 The hemacd Authors
# SPDX-License-Identifier: Apache-2.0
"""MACD and trading decisions over encrypted prices."""

from hemacd._core import (
    Cipher,
    DepthError,
    Engine,
    RunResult,
    Session,
    __version__,
    load_prices,
    macd,
    o1,
    o2,
    o2_hat,
    run_local,
    wma,
)

__all__ = [
    "Cipher",
    "DepthError",
    "Engine",
    "RunResult",
    "Session",
    "__version__",
    "load_prices",
    "macd",
    "o1",
    "o2",
    "o2_hat",
    "run_local",
    "wma",
]
