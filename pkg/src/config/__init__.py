"""Configuration module for the CSM-H-R workbench."""

from .paths import *
from .settings import *
from .logging_config import setup_logging
