"""Model persistence and compression reports."""

from .model_files import decode_document, encode_document, load, load_mapping, save, save_mapping
from .compression import compression_report, deflate_size
from .actuator import CSMActuator
