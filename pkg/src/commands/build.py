"""build: ingest a workload, build CASMs and CSSMs, save the model and print phase timings."""

import argparse
import logging
import sys
from pathlib import Path

from ..reports.tables import ReportTables
from ..storage.actuator import CSMActuator
from ..engine.pipeline import BuildPipeline
from .common import add_engine_flags, add_output_flags, default_model_dir, settings_from_args

logger = logging.getLogger(__name__)


class BuildCommand:
    name = "build"

    @staticmethod
    def add_parser(subparsers) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(BuildCommand.name, help="build a model from a workload file")
        parser.add_argument("input", type=str, help="Triple-H-R or IntellElevator record file")
        parser.add_argument("--model-dir", default=None, help="where model files go (default: <output dir>/models)")
        parser.add_argument("--name", help="model name (default: input file stem)")
        parser.add_argument("--identify", action="store_true", help="identify co-located/co-timed relations")
        parser.add_argument("--relations", help="seed relations file: a_uri,b_uri,type,closeness")
        parser.add_argument("--no-save", action="store_true", help="skip writing model files")
        add_engine_flags(parser)
        add_output_flags(parser)
        return parser

    @staticmethod
    def run(args: argparse.Namespace) -> int:
        settings = settings_from_args(args)
        input_path = Path(args.input)
        pipeline = BuildPipeline(settings, identify=args.identify,
                                 relations_file=Path(args.relations) if args.relations else None)
        engine, timings = pipeline.run(input_path)

        frame = ReportTables.timings_frame([timings])
        ReportTables.emit(frame, sys.stdout, args.format, title="Phase timings (ms)")
        if args.xlsx:
            ReportTables.export_xlsx({"timings": frame}, Path(args.xlsx))
        if not args.no_save:
            actuator = CSMActuator(Path(args.model_dir or default_model_dir()))
            paths = actuator.write(args.name or input_path.stem, engine.domain, engine.coordinator)
            logger.info(f"Model written: {', '.join(str(p) for p in paths.values())}")
        return 0
