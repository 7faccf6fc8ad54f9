"""crflab: numerical laboratory for the normalized Chern-Ricci flow."""

from __future__ import annotations

__version__ = "0.1.0"
