"""report: compression report of a saved model against its input file."""

import argparse
import sys
from pathlib import Path

from ..config.paths import artifact_paths
from ..core.errors import MissingInputError
from ..reports.tables import ReportTables
from ..storage.compression import compression_report
from .common import add_output_flags, default_model_dir


class ReportCommand:
    name = "report"

    @staticmethod
    def add_parser(subparsers) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(ReportCommand.name, help="compare model files with the input, raw and DEFLATE")
        parser.add_argument("input", help="record file the model was built from")
        parser.add_argument("--model-dir", default=None, help="model directory (default: <output dir>/models)")
        parser.add_argument("--name", help="model name (default: input file stem)")
        add_output_flags(parser)
        return parser

    @staticmethod
    def run(args: argparse.Namespace) -> int:
        input_path = Path(args.input)
        paths = artifact_paths(Path(args.model_dir or default_model_dir()), args.name or input_path.stem)
        for key in ("meta", "casm"):
            if not paths[key].exists():
                raise MissingInputError(f"model file {paths[key]} is missing; run build first")
        report = compression_report(input_path, meta_bytes=paths["meta"].read_bytes(),
                                    casm_bytes=paths["casm"].read_bytes())
        frame = ReportTables.compression_frame(report)
        reference = ReportTables.reference_compression_frame()
        ReportTables.emit(frame, sys.stdout, args.format, title="Compression report")
        ReportTables.emit(reference, sys.stdout, args.format, title="Reference run")
        if report.degenerate:
            print("degenerate report: empty input file")
        if args.xlsx:
            ReportTables.export_xlsx({"compression": frame, "reference": reference}, Path(args.xlsx))
        return 0
