"""predict: next-state distribution and prediction for a saved model."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List

from ..config.settings import EngineSettings
from ..core.domain import ContextDomain
from ..core.errors import NotFoundError
from ..engine.prediction import ReasoningFunction, laplace_reasoning
from ..reports.tables import ReportTables
from ..storage.actuator import CSMActuator
from .common import add_output_flags, default_model_dir

logger = logging.getLogger(__name__)


def resolve_object(domain: ContextDomain, token: str) -> int:
    """An object index, URI or registered name."""
    if token.isdigit():
        return domain.get_object(int(token)).object_index
    index = domain.find_object(token)
    if index is None:
        raise NotFoundError(f"no object {token!r} in the model")
    return index


class PredictCommand:
    name = "predict"

    @staticmethod
    def add_parser(subparsers) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(PredictCommand.name, help="predict the next state from a prefix")
        parser.add_argument("name", help="model name")
        parser.add_argument("--model-dir", default=None, help="model directory (default: <output dir>/models)")
        parser.add_argument("--object", required=True, help="object index, URI or name")
        parser.add_argument("--attribute", help="attribute (default: the focus attribute)")
        parser.add_argument("--prefix", help="comma-separated prefix of R states (default: recorded history)")
        parser.add_argument("--situation", action="store_true", help="query the object's situation machine")
        parser.add_argument("--threshold", type=float, default=0.5, help="prediction threshold")
        parser.add_argument("--laplace", action="store_true", help="use add-one smoothing")
        add_output_flags(parser)
        return parser

    @staticmethod
    def run(args: argparse.Namespace) -> int:
        domain, _ = CSMActuator(Path(args.model_dir or default_model_dir())).read(args.name)
        index = resolve_object(domain, args.object)
        reasoning = (laplace_reasoning(args.threshold) if args.laplace
                     else ReasoningFunction(threshold=args.threshold))

        if args.situation:
            machine = domain.cssms.get(index)
            if machine is None:
                raise NotFoundError(f"object {index} has no situation machine")
            tensor = machine.tensor
            prefix: List[int] = ([int(v) for v in args.prefix.split(",")] if args.prefix
                                 else list(machine.history))
            labels = None
        else:
            obj = domain.get_object(index)
            attribute = obj.get_attribute(args.attribute or EngineSettings().focus_attribute)
            if attribute.casm is None:
                raise NotFoundError(f"attribute {attribute.name!r} of object {index} has no state machine")
            tensor = attribute.casm.tensor
            prefix = ([attribute.state_index_of(v.strip()) for v in args.prefix.split(",")] if args.prefix
                      else list(attribute.history_states()))
            labels = [s.value for s in attribute.states]

        distribution = reasoning.distribution(tensor, prefix)
        ReportTables.emit(ReportTables.distribution_frame(distribution, labels), sys.stdout, args.format,
                          title=f"Next-state distribution after {prefix}")
        chosen = reasoning.predict(tensor, prefix)
        if chosen is None:
            print("prediction: none")
        else:
            state, probability = chosen
            print(f"prediction: {labels[state] if labels else state} ({probability:.4f})")
        return 0
