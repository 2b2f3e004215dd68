"""Threshold triggers on transition-tensor counts."""

import logging
from collections import defaultdict
from typing import TYPE_CHECKING, Dict, List, Optional, Tuple

from ..core.errors import ConflictError, NotFoundError
from ..models.events import ThresholdRule

if TYPE_CHECKING:
    from .channels import MessageBroker

logger = logging.getLogger(__name__)


class ThresholdMonitor:
    """Watches tensor coordinates and fires each rule once until it is re-armed."""

    def __init__(self, broker: Optional["MessageBroker"] = None):
        self.broker = broker
        self._rules: Dict[str, ThresholdRule] = {}
        self._by_target: Dict[Tuple[tuple, Tuple[int, ...]], List[ThresholdRule]] = defaultdict(list)

    def __len__(self) -> int:
        return len(self._rules)

    def register(self, rule: ThresholdRule) -> ThresholdRule:
        if rule.rule_id in self._rules:
            raise ConflictError(f"threshold rule {rule.rule_id!r} already registered")
        self._rules[rule.rule_id] = rule
        self._by_target[(rule.owner, rule.path)].append(rule)
        logger.debug(f"registered threshold rule {rule.rule_id} at {rule.threshold}")
        return rule

    def rule(self, rule_id: str) -> ThresholdRule:
        try:
            return self._rules[rule_id]
        except KeyError:
            raise NotFoundError(f"no threshold rule {rule_id!r}") from None

    def rearm(self, rule_id: str) -> None:
        self.rule(rule_id).fired = False

    def evaluate(self, machine: str, object_index: int, attribute_name: Optional[str],
                 path: Tuple[int, ...], count: int) -> List[str]:
        """Called after a tensor increment; returns ids of the rules that fired."""
        rules = self._by_target.get(((machine, object_index, attribute_name), tuple(path)))
        if not rules:
            return []
        fired = []
        for rule in rules:
            if rule.fired or count < rule.threshold:
                continue
            rule.fired = True
            fired.append(rule.rule_id)
            if self.broker is not None:
                self.broker.publish(rule.action_topic, {
                    "rule_id": rule.rule_id,
                    "machine": machine,
                    "object_index": object_index,
                    "attribute_name": attribute_name,
                    "path": list(path),
                    "count": count,
                })
            logger.info(f"threshold rule {rule.rule_id} fired at count {count}")
        return fired


def register_threshold(monitor: ThresholdMonitor, rule: ThresholdRule) -> ThresholdRule:
    return monitor.register(rule)
