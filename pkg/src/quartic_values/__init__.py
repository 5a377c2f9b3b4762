"""Decide why a bivariate quartic cannot represent a full arithmetic progression tail."""

from __future__ import annotations

__version__ = "0.1.0"
