"""In-process message broker and threshold triggers."""

from .channels import Channel, Message, MessageBroker, Subscription, publish, subscribe
from .thresholds import ThresholdMonitor, register_threshold
