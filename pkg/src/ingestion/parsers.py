"""Parsers for the two input record formats.

Triple-H-R lines (pipe-delimited by default)::

    Person::Student | Donnie | location | Building003 | Timestamp=2023-01-02 15:02:23 | GPS

IntellElevator lines (comma-delimited by default), 12 fields::

    index,person_id,person_name,person_type,date,decision,action,action_uri,
    action_type,location_uri,location_name,location_type

A file may start with ``#delim=<char>`` to override the delimiter.
"""

import logging
import re
from datetime import datetime
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

from pydantic import ValidationError

from ..core.errors import FormatError, MissingInputError
from ..models.records import ElevatorRecord, TripleHR, TripleRDF

logger = logging.getLogger(__name__)

DELIM_HEADER = "#delim="
CONDITION_SEPARATOR = ":::"
TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"
TRIPLE_HR = "triple-hr"
ELEVATOR = "elevator"

_TIMESTAMP = re.compile(r"^\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}$")
_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")

Record = Union[TripleHR, ElevatorRecord]


class RecordParser:
    """Shared helpers for delimited record lines."""

    @staticmethod
    def split_fields(line: str, delimiter: str, expected: int, line_no: Optional[int] = None) -> List[str]:
        fields = [f.strip() for f in line.rstrip("\r\n").split(delimiter)]
        if len(fields) != expected:
            raise FormatError(f"expected {expected} fields, got {len(fields)}", line_no)
        return fields

    @staticmethod
    def parse_timestamp(text: str, line_no: Optional[int] = None) -> datetime:
        """``YYYY-MM-DD HH:MM:SS`` (or a bare date, read as midnight)."""
        text = text.strip()
        if not (_TIMESTAMP.match(text) or _DATE.match(text)):
            raise FormatError(f"bad timestamp {text!r}", line_no)
        try:
            return datetime.fromisoformat(text)
        except ValueError:
            raise FormatError(f"bad timestamp {text!r}", line_no) from None

    @staticmethod
    def read_delimiter(line: str) -> Optional[str]:
        if line.startswith(DELIM_HEADER):
            delimiter = line[len(DELIM_HEADER):].rstrip("\r\n")
            if len(delimiter) != 1:
                raise FormatError(f"delimiter header needs one character, got {delimiter!r}", 1)
            return delimiter
        return None


class TripleHRParser(RecordParser):
    DELIMITER = "|"
    COLUMNS = 6

    @staticmethod
    def parse_line(line: str, delimiter: str = "|", line_no: Optional[int] = None) -> TripleHR:
        category, obj, attribute, state, conditions_text, sources_text = RecordParser.split_fields(
            line, delimiter, TripleHRParser.COLUMNS, line_no)
        conditions = [c.strip() for c in conditions_text.split(CONDITION_SEPARATOR) if c.strip()]
        timestamp = None
        complement = None
        for part in conditions:
            key, _, value = part.partition("=")
            if key == "Timestamp":
                timestamp = RecordParser.parse_timestamp(value, line_no)
            elif key == "Complement":
                complement = value.strip() or None
        if timestamp is None:
            raise FormatError("conditions carry no Timestamp=", line_no)
        sources = [s.strip() for s in sources_text.split(",") if s.strip()]
        try:
            return TripleHR(category_path=category, object_name=obj, attribute=attribute, state_value=state,
                            conditions=conditions, complement=complement, sources=sources, timestamp=timestamp)
        except ValidationError as e:
            raise FormatError(f"invalid triple: {e.errors()[0]['loc'][0]} must be non-empty", line_no) from None

    @staticmethod
    def format_line(triple: TripleHR, delimiter: str = "|") -> str:
        return delimiter.join([
            triple.category_path, triple.object_name, triple.attribute, triple.state_value,
            CONDITION_SEPARATOR.join(triple.conditions), ",".join(triple.sources),
        ])


class ElevatorParser(RecordParser):
    DELIMITER = ","
    PERSON_PREFIX = "urn:intellelevator:person:"
    # action types that move a person; their object is the location attribute
    PREDICATE_ATTRIBUTES = {"MoveTo": "location"}

    @staticmethod
    def parse_line(line: str, delimiter: str = ",", line_no: Optional[int] = None) -> ElevatorRecord:
        fields = RecordParser.split_fields(line, delimiter, len(ElevatorRecord.FIELDS), line_no)
        try:
            index = int(fields[0])
        except ValueError:
            raise FormatError(f"index {fields[0]!r} is not an integer", line_no) from None
        RecordParser.parse_timestamp(fields[4], line_no)
        values = dict(zip(ElevatorRecord.FIELDS, fields))
        values["index"] = index
        # every field is checked above
        return ElevatorRecord.model_construct(**values)

    @staticmethod
    def to_triple_rdf(record: ElevatorRecord, max_depth: int = 3) -> TripleRDF:
        subject = ElevatorParser.PERSON_PREFIX + record.person_id
        place = record.location_uri
        conditions = [
            TripleRDF(subject=subject, predicate="type", object=f"Person::{record.person_type}"),
            TripleRDF(subject=subject, predicate="name", object=record.person_name),
            TripleRDF(subject=subject, predicate="date", object=record.date),
            TripleRDF(subject=subject, predicate="Action", object=record.action),
            TripleRDF(subject=place, predicate="type", object=f"Place::{record.location_type}"),
            TripleRDF(subject=place, predicate="name", object=record.location_name),
        ]
        triple = TripleRDF(subject=subject, predicate=record.action_type, object=place,
                           decisions=[record.decision], conditions=conditions)
        if triple.depth() > max_depth:
            raise FormatError(f"condition nesting {triple.depth()} exceeds {max_depth}")
        return triple


def parse_triple_hr_line(line: str, delimiter: str = "|", line_no: Optional[int] = None) -> TripleHR:
    return TripleHRParser.parse_line(line, delimiter, line_no)


def parse_elevator_record(line: str, delimiter: str = ",", line_no: Optional[int] = None) -> ElevatorRecord:
    return ElevatorParser.parse_line(line, delimiter, line_no)


def elevator_to_triple_rdf(record: ElevatorRecord, max_depth: int = 3) -> TripleRDF:
    return ElevatorParser.to_triple_rdf(record, max_depth)


def detect_format(line: str, delimiter: Optional[str] = None) -> str:
    if delimiter is not None:
        return TRIPLE_HR if len(line.split(delimiter)) == TripleHRParser.COLUMNS else ELEVATOR
    return TRIPLE_HR if "|" in line else ELEVATOR


def iter_records(path: Path, fmt: str = "auto") -> Iterator[Tuple[int, Record]]:
    """Yield ``(line_no, record)`` for every data line of a workload file."""
    path = Path(path)
    if not path.exists():
        raise MissingInputError(f"input file {path} does not exist")
    delimiter = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if line_no == 1:
                delimiter = RecordParser.read_delimiter(line)
                if delimiter is not None:
                    continue
            if not line.strip() or line.startswith("#"):
                continue
            if fmt == "auto":
                fmt = detect_format(line, delimiter)
                logger.info(f"Reading {path} as {fmt} records")
            if fmt == TRIPLE_HR:
                yield line_no, TripleHRParser.parse_line(line, delimiter or TripleHRParser.DELIMITER, line_no)
            elif fmt == ELEVATOR:
                yield line_no, ElevatorParser.parse_line(line, delimiter or ElevatorParser.DELIMITER, line_no)
            else:
                raise FormatError(f"unknown record format {fmt!r}")
