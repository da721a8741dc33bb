from __future__ import annotations

__version__ = '2025.10.18'
