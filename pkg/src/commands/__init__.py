"""Command-line subcommands; each class adds its parser and runs its args."""

from .generate import GenerateCommand
from .build import BuildCommand
from .predict import PredictCommand
from .report import ReportCommand
from .sweep import SweepCommand

COMMANDS = (GenerateCommand, BuildCommand, PredictCommand, ReportCommand, SweepCommand)
