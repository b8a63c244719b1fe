try:
    from ckgopt._core import *  # noqa: F401,F403
except ImportError:  # extension built out-of-tree (plain CMake build)
    from _core import *  # noqa: F401,F403
