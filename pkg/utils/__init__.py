# Utils module

from utils.errors import ConfigError, XnyfemError
from utils.logger import setup_logging

__all__ = ['ConfigError', 'XnyfemError', 'setup_logging']
