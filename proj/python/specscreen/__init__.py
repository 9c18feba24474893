from ._specscreen import *  # noqa: F401,F403
from ._specscreen import ConfigError, DataError, NumericError, SpecscreenError  # noqa: F401
