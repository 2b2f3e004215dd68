"""generate: write a seeded IntellElevator or IntellRestaurant workload file."""

import argparse
import logging
from pathlib import Path

from ..config.paths import ensure_dir, output_dir
from ..models.workloads import RESTAURANT_PRESETS, ElevatorConfig
from ..workloads.elevator import write_elevator_file
from ..workloads.restaurant import restaurant_config, write_restaurant_file
from .common import build_config

logger = logging.getLogger(__name__)


class GenerateCommand:
    name = "generate"

    @staticmethod
    def add_parser(subparsers) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(GenerateCommand.name, help="generate a workload file")
        parser.add_argument("system", choices=("elevator", "restaurant"))
        parser.add_argument("--out", type=str, help="output file (default: <output dir>/<system>.txt)")
        parser.add_argument("--records", type=int, help="number of records")
        parser.add_argument("--seed", type=int, help="random seed")
        parser.add_argument("--persons", type=int, help="elevator: number of persons")
        parser.add_argument("--preset", choices=sorted(RESTAURANT_PRESETS), default="desk",
                            help="restaurant: named configuration")
        parser.add_argument("--students", type=int, help="restaurant: number of students")
        parser.add_argument("--professors", type=int, help="restaurant: number of professors")
        return parser

    @staticmethod
    def run(args: argparse.Namespace) -> int:
        out = Path(args.out) if args.out else output_dir() / f"{args.system}.txt"
        ensure_dir(out.parent)
        if args.system == "elevator":
            config = build_config(ElevatorConfig, person_count=args.persons, record_count=args.records, seed=args.seed)
            count = write_elevator_file(config, out)
        else:
            config = restaurant_config(args.preset, student_count=args.students, professor_count=args.professors,
                                       record_count=args.records, seed=args.seed)
            count = write_restaurant_file(config, out)
        print(f"{count} records written to {out}")
        return 0
