"""Hydropower-constraint-aware power system study toolkit."""

try:
    from ._hydrosim import *  # noqa: F401,F403  (installed layout)
    from ._hydrosim import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _hydrosim import *  # noqa: F401,F403
    from _hydrosim import __version__  # noqa: F401
