"""Record parsing and normalization."""

from .parsers import (
    DELIM_HEADER,
    ELEVATOR,
    TRIPLE_HR,
    ElevatorParser,
    RecordParser,
    TripleHRParser,
    detect_format,
    elevator_to_triple_rdf,
    iter_records,
    parse_elevator_record,
    parse_triple_hr_line,
)
from .normalizer import Normalizer, discretize, hr_object_uri, normalize
