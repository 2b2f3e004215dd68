"""Flags shared by several subcommands."""

import argparse
from typing import Dict, List, Optional

from pydantic import BaseModel, ValidationError

from ..config.paths import models_dir
from ..config.settings import EngineSettings
from ..core.errors import ConfigError


def add_engine_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("engine")
    group.add_argument("--R", dest="transition_steps", type=int, help="transition steps (default 1)")
    group.add_argument("--H", dest="hierarchy_depth", type=int, help="hierarchy depth (default 2)")
    group.add_argument("--window", dest="colocation_window_s", type=float, help="co-location window, seconds")
    group.add_argument("--cotime-delta", dest="cotiming_delta_s", type=float, help="co-timing delta, seconds")
    group.add_argument("--cotime-hits", dest="cotiming_min_hits", type=int, help="co-timing hits needed")
    group.add_argument("--strengthen", dest="strengthen_delta", type=int, help="closeness added per reinforcement")
    group.add_argument("--base-closeness", dest="base_closeness", type=int, help="closeness of identified relations")
    group.add_argument("--hierarchy-bonus", dest="hierarchy_bonus", type=int, help="bonus for hierarchy affinity")
    group.add_argument("--situation-threshold", dest="situation_threshold", type=int,
                       help="minimum closeness for a related entity to enter a situation")
    group.add_argument("--focus", dest="focus_attribute", help="focus attribute of situations")
    group.add_argument("--track", dest="tracked_attributes", action="append",
                       help="attribute of related entities tracked in situations (repeatable)")
    group.add_argument("--count-self-loops", dest="count_self_loops", action="store_true", default=None,
                       help="record repeated identical states as transitions")
    group.add_argument("--bin", dest="bins", action="append", metavar="ATTR=WIDTH",
                       help="discretize a numeric attribute into bins of WIDTH (repeatable)")
    group.add_argument("--threshold", dest="prediction_threshold", type=float, help="prediction threshold")


def parse_bins(bins: Optional[List[str]]) -> Optional[Dict[str, float]]:
    if not bins:
        return None
    widths = {}
    for item in bins:
        name, sep, width = item.partition("=")
        if not sep or not name:
            raise ConfigError(f"--bin expects ATTR=WIDTH, got {item!r}")
        try:
            widths[name] = float(width)
        except ValueError:
            raise ConfigError(f"--bin width {width!r} is not a number") from None
    return widths


def settings_from_args(args: argparse.Namespace) -> EngineSettings:
    """EngineSettings with every flag the user gave overriding the default."""
    overrides = {name: getattr(args, name, None) for name in EngineSettings.model_fields}
    if overrides.get("tracked_attributes"):
        overrides["tracked_attributes"] = tuple(overrides["tracked_attributes"])
    overrides["bin_widths"] = parse_bins(getattr(args, "bins", None))
    return EngineSettings.build(**overrides)


def build_config(model: type, **values) -> BaseModel:
    """Instantiate a pydantic config, dropping ``None`` values; errors become ConfigError."""
    try:
        return model(**{k: v for k, v in values.items() if v is not None})
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "table"), default="csv", help="table output format")
    parser.add_argument("--xlsx", type=str, help="also export the tables to this .xlsx file")


def default_model_dir() -> str:
    return str(models_dir())


def int_list(text: str) -> List[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values
