"""Step-line multiple orthogonal polynomial laboratory."""

try:
    from ._stepline import *  # noqa: F401,F403
    from ._stepline import __doc__  # noqa: F401
except ImportError:  # running against a build tree
    from _stepline import *  # noqa: F401,F403
    from _stepline import __doc__  # noqa: F401
