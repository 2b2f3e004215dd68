"""In-process publish/subscribe channels.

Each topic keeps an ordered message log and delivers to its subscribers in
publish order. Publishing may happen from several threads; delivery on one
topic is serialized by the channel lock, so callbacks must return quickly and
hand long work to a queue (see ``Channel.subscribe_queue``). A callback that
raises is logged and skipped for that message only.
"""

import itertools
import logging
import queue
import threading
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Deque, Dict, Optional

from ..config.settings import TOPIC_KINDS
from ..core.errors import ClosedChannelError, ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Message:
    topic: str
    seq: int
    payload: Any


Callback = Callable[[Message], None]


class Subscription:
    """Handle returned by ``subscribe``; ``unsubscribe`` stops delivery."""

    def __init__(self, channel: "Channel", sid: int):
        self.channel = channel
        self.sid = sid

    @property
    def active(self) -> bool:
        return self.sid in self.channel._subscribers

    def unsubscribe(self) -> None:
        self.channel._unsubscribe(self.sid)


class Channel:
    """One topic: FIFO log plus subscriber callbacks, exactly-once per subscriber."""

    def __init__(self, topic: str, log_limit: Optional[int] = 10_000):
        self.topic = topic
        self.log: Deque[Message] = deque(maxlen=log_limit)
        self.closed = False
        self._subscribers: Dict[int, Callback] = {}
        self._sids = itertools.count()
        self._seq = 0
        self._lock = threading.RLock()

    def check(self, payload: Any) -> None:
        """Admission hook; guarded channels raise here."""

    def publish(self, payload: Any) -> Message:
        with self._lock:
            if self.closed:
                raise ClosedChannelError(f"channel {self.topic!r} is closed")
            self.check(payload)
            self._seq += 1
            message = Message(self.topic, self._seq, payload)
            self.log.append(message)
            for sid, callback in list(self._subscribers.items()):
                try:
                    callback(message)
                except Exception:
                    # logged; the remaining subscribers still get the message
                    logger.exception(f"Subscriber {sid} of {self.topic} failed on message {message.seq}")
        return message

    def subscribe(self, callback: Callback) -> Subscription:
        """Deliver every message published from now on; nothing is replayed."""
        with self._lock:
            sid = next(self._sids)
            self._subscribers[sid] = callback
        return Subscription(self, sid)

    def subscribe_queue(self, maxsize: int = 0) -> "tuple[Subscription, queue.Queue]":
        inbox: queue.Queue = queue.Queue(maxsize)
        return self.subscribe(inbox.put), inbox

    def _unsubscribe(self, sid: int) -> None:
        with self._lock:
            self._subscribers.pop(sid, None)

    def close(self) -> None:
        with self._lock:
            self.closed = True
            self._subscribers.clear()

    @property
    def has_subscribers(self) -> bool:
        return bool(self._subscribers)

    @property
    def published(self) -> int:
        return self._seq


class MessageBroker:
    """Topic registry; topics follow ``ctx/<domain>/<kind>``."""

    def __init__(self, log_limit: Optional[int] = 10_000):
        self.log_limit = log_limit
        self._channels: Dict[str, Channel] = {}
        self._lock = threading.Lock()

    @staticmethod
    def topic_name(domain_id: str, kind: str) -> str:
        if kind not in TOPIC_KINDS:
            raise ConfigError(f"unknown topic kind {kind!r}; expected one of {', '.join(TOPIC_KINDS)}")
        return f"ctx/{domain_id}/{kind}"

    def channel(self, topic: str) -> Channel:
        with self._lock:
            channel = self._channels.get(topic)
            if channel is None:
                channel = self._channels[topic] = Channel(topic, self.log_limit)
                logger.debug(f"opened channel {topic}")
            return channel

    def attach(self, channel: Channel) -> Channel:
        """Install a prepared (e.g. guarded) channel under its topic."""
        with self._lock:
            existing = self._channels.get(channel.topic)
            if existing is not None and isinstance(existing, type(channel)):
                return existing
            self._channels[channel.topic] = channel
            return channel

    def publish(self, topic: str, payload: Any) -> Message:
        return self.channel(topic).publish(payload)

    def subscribe(self, topic: str, callback: Callback) -> Subscription:
        return self.channel(topic).subscribe(callback)

    def close(self, topic: str) -> None:
        self.channel(topic).close()

    def topics(self) -> list:
        with self._lock:
            return sorted(self._channels)


def publish(channel: Channel, message: Any) -> Message:
    return channel.publish(message)


def subscribe(channel: Channel, callback: Callback) -> Subscription:
    return channel.subscribe(callback)
