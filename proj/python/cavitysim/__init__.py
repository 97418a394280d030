"""Cavity-QED simulation and analysis toolkit (python bindings)."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # in-tree use: extension lives in the build directory
    import os
    import sys

    _mod_dir = os.environ.get("CAVITYSIM_MODULE_DIR")
    if not _mod_dir:
        raise
    sys.path.insert(0, _mod_dir)
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
