"""Exact linear-system engine for negatively twisted invariant 2-jet
differentials on Fermat-type surfaces and plane-curve complements."""

try:
    from ._jetvanish import *  # noqa: F401,F403  (installed layout)
    from ._jetvanish import __version__  # noqa: F401
except ImportError:  # development build: extension on PYTHONPATH
    from _jetvanish import *  # noqa: F401,F403
    from _jetvanish import __version__  # noqa: F401
