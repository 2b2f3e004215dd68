"""bench-sweep: build timings at a fixed item count while the number of persons varies."""

import argparse
import logging
import sys
import tempfile
from pathlib import Path
from typing import List

from ..engine.pipeline import BuildPipeline
from ..models.reports import PhaseTimings
from ..models.workloads import ElevatorConfig
from ..reports.tables import ReportTables
from ..workloads.elevator import write_elevator_file
from ..workloads.restaurant import restaurant_config, write_restaurant_file
from .common import add_engine_flags, add_output_flags, build_config, int_list, settings_from_args

logger = logging.getLogger(__name__)


class SweepCommand:
    name = "bench-sweep"

    @staticmethod
    def add_parser(subparsers) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(SweepCommand.name, help="timing table over item counts and person counts")
        parser.add_argument("--system", choices=("elevator", "restaurant"), default="elevator")
        parser.add_argument("--sizes", type=int_list, default=[10_000], help="comma-separated item counts")
        parser.add_argument("--persons", type=int_list, default=[50], help="comma-separated person counts")
        parser.add_argument("--seed", type=int, default=7)
        parser.add_argument("--identify", action="store_true", help="identify relations before the CSSM phase")
        add_engine_flags(parser)
        add_output_flags(parser)
        return parser

    @staticmethod
    def run(args: argparse.Namespace) -> int:
        rows = SweepCommand.sweep(args.system, args.sizes, args.persons, args.seed, args)
        frame = ReportTables.timings_frame(rows)
        ReportTables.emit(frame, sys.stdout, args.format, title="Build timings (ms)")
        if args.xlsx:
            ReportTables.export_xlsx({"sweep": frame, "reference": ReportTables.reference_timings_frame()},
                                     Path(args.xlsx))
        return 0

    @staticmethod
    def sweep(system: str, sizes: List[int], persons: List[int], seed: int,
              args: argparse.Namespace) -> List[PhaseTimings]:
        settings = settings_from_args(args)
        pipeline = BuildPipeline(settings, identify=getattr(args, "identify", False))
        rows = []
        with tempfile.TemporaryDirectory(prefix="csm-sweep-") as tmp:
            for size in sizes:
                for count in persons:
                    path = Path(tmp) / f"{system}-{size}-{count}.txt"
                    if system == "elevator":
                        write_elevator_file(build_config(ElevatorConfig, person_count=count, record_count=size,
                                                         seed=seed), path)
                    else:
                        write_restaurant_file(restaurant_config("desk", student_count=count, professor_count=0,
                                                                record_count=size, seed=seed), path)
                    _, timings = pipeline.run(path, system=system)
                    rows.append(timings)
                    logger.info(f"sweep {system} items={size} persons={count}: {timings.total_ms:.1f} ms")
        return rows
