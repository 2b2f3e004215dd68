from datetime import datetime

import pytest

from src.config.settings import EngineSettings
from src.core.domain import NOMINAL, ORDINAL, ContextDomain
from src.core.errors import ConfigError, FormatError, MissingInputError
from src.ingestion import (
    ElevatorParser,
    Normalizer,
    TripleHRParser,
    detect_format,
    discretize,
    elevator_to_triple_rdf,
    hr_object_uri,
    iter_records,
    normalize,
    parse_elevator_record,
    parse_triple_hr_line,
)
from src.models.records import TripleRDF
from src.privacy.coordinator import CoordinatorStore

DONNIE = "Person::Student | Donnie | location | Building003 | Timestamp=2023-01-02 15:02:23 | GPS"
ELEVATOR_LINE = ("7,P0003,Casey Holt,Student,2023-01-02 08:01:10,UseStairs,Walking,"
                 "urn:intellelevator:action:MoveTo,MoveTo,urn:intellelevator:location:SEC,SEC,Academic")


def _donnie(building: str, second: int) -> str:
    return f"Person::Student | Donnie | location | {building} | Timestamp=2023-01-02 15:02:{second:02d} | GPS"


def test_parse_donnie_line():
    triple = parse_triple_hr_line(DONNIE)
    assert triple.category_path == "Person::Student"
    assert triple.object_name == "Donnie"
    assert triple.attribute == "location"
    assert triple.state_value == "Building003"
    assert triple.timestamp == datetime(2023, 1, 2, 15, 2, 23)
    assert triple.sources == ["GPS"]
    assert triple.complement is None


def test_conditions_split_on_triple_colon():
    line = ("Person::Student | Donnie | location | Building003 | "
            "Timestamp=2023-01-02 15:02:23:::Complement=urn:other:lab:::Weather=Rain | GPS,WiFi")
    triple = parse_triple_hr_line(line)
    assert triple.conditions == ["Timestamp=2023-01-02 15:02:23", "Complement=urn:other:lab", "Weather=Rain"]
    assert triple.complement == "urn:other:lab"
    assert triple.sources == ["GPS", "WiFi"]


def test_format_line_inverts_parse():
    triple = parse_triple_hr_line(DONNIE)
    assert parse_triple_hr_line(TripleHRParser.format_line(triple)) == triple


@pytest.mark.parametrize("line, fragment", [
    ("Person::Student | Donnie | location | Building003 | GPS", "expected 6 fields"),
    ("Person::Student | Donnie | location | Building003 | Weather=Rain | GPS", "no Timestamp"),
    ("Person::Student | Donnie | location | Building003 | Timestamp=2023-13-45 25:00:00 | GPS", "bad timestamp"),
    ("Person::Student | Donnie | location | Building003 | Timestamp=yesterday | GPS", "bad timestamp"),
    ("Person::Student |  | location | Building003 | Timestamp=2023-01-02 15:02:23 | GPS", "non-empty"),
])
def test_malformed_triple_lines(line, fragment):
    with pytest.raises(FormatError, match=fragment) as info:
        parse_triple_hr_line(line, line_no=12)
    assert info.value.line_no == 12


def test_parse_elevator_line():
    record = parse_elevator_record(ELEVATOR_LINE)
    assert record.index == 7
    assert record.person_id == "P0003"
    assert record.location_name == "SEC"
    assert record.location_type == "Academic"
    assert record.to_line() == ELEVATOR_LINE


@pytest.mark.parametrize("line", [
    ELEVATOR_LINE.rsplit(",", 1)[0],
    "x" + ELEVATOR_LINE[1:],
    ELEVATOR_LINE.replace("2023-01-02 08:01:10", "02/01/2023"),
])
def test_malformed_elevator_lines(line):
    with pytest.raises(FormatError):
        ElevatorParser.parse_line(line, line_no=3)


def test_elevator_record_becomes_nested_triple():
    triple = elevator_to_triple_rdf(parse_elevator_record(ELEVATOR_LINE))
    assert triple.subject == "urn:intellelevator:person:P0003"
    assert triple.predicate == "MoveTo"
    assert triple.object == "urn:intellelevator:location:SEC"
    assert triple.decisions == ["UseStairs"]
    facts = {(c.subject, c.predicate): c.object for c in triple.conditions}
    assert facts[(triple.subject, "type")] == "Person::Student"
    assert facts[(triple.object, "type")] == "Place::Academic"
    assert facts[(triple.object, "name")] == "SEC"
    assert triple.depth() == 1


def test_condition_depth_bound():
    with pytest.raises(FormatError, match="exceeds"):
        elevator_to_triple_rdf(parse_elevator_record(ELEVATOR_LINE), max_depth=0)


def test_detect_format():
    assert detect_format(DONNIE) == "triple-hr"
    assert detect_format(ELEVATOR_LINE) == "elevator"
    assert detect_format(DONNIE.replace(" | ", ";"), ";") == "triple-hr"


def test_normalize_donnie_registers_everything(domain):
    events = normalize(domain, parse_triple_hr_line(DONNIE))
    assert len(events) == 1
    uri = hr_object_uri("Person::Student", "Donnie")
    assert uri == "urn:csm:Person:Donnie"
    obj = domain.objects[domain.object_index.resolve_index(uri)]
    assert obj.category == "Person"
    assert obj.name == "Donnie"
    assert obj.attributes["location"].states[0].value == "Building003"
    assert events[0].new_state_index == 0
    assert events[0].timestamp == datetime(2023, 1, 2, 15, 2, 23)


def test_repeated_state_is_suppressed(domain):
    normalizer = Normalizer(domain)
    lines = [_donnie("Building003", 1), _donnie("Building003", 2), _donnie("Building004", 3),
             _donnie("Building003", 4)]
    events = [e for line in lines for e in normalizer.normalize(parse_triple_hr_line(line))]
    assert [e.new_state_index for e in events] == [0, 1, 0]
    assert normalizer.suppressed == 1
    assert domain.objects[0].attributes["location"].last_transition == (1, 0)


def test_self_loops_counted_when_enabled(domain):
    normalizer = Normalizer(domain, EngineSettings(count_self_loops=True))
    for second in (1, 2):
        normalizer.normalize(parse_triple_hr_line(_donnie("Building003", second)))
    assert normalizer.suppressed == 0


def test_new_states_are_drained_once(domain):
    normalizer = Normalizer(domain)
    normalizer.normalize(parse_triple_hr_line(_donnie("Building003", 1)))
    normalizer.normalize(parse_triple_hr_line(_donnie("Building004", 2)))
    assert normalizer.drain_new_states() == [(0, "location", 0), (0, "location", 1)]
    assert normalizer.drain_new_states() == []


def test_state_naming_an_object_gets_a_reference(domain):
    normalizer = Normalizer(domain)
    normalizer.normalize(parse_triple_hr_line(
        "Place::Building | Building003 | rooms | LAB001 | Timestamp=2023-01-02 15:00:00 | Plan"))
    normalizer.normalize(parse_triple_hr_line(DONNIE))
    donnie = domain.find_object("Donnie")
    state = domain.objects[donnie].attributes["location"].states[0]
    assert state.referenced_object == domain.find_object("Building003")
    assert state.ref_by_name


def test_unresolved_complement_warns_once(domain, caplog):
    normalizer = Normalizer(domain)
    line = DONNIE.replace("Timestamp=", "Complement=urn:other:lab:::Timestamp=")
    with caplog.at_level("WARNING"):
        normalizer.normalize(parse_triple_hr_line(line))
        normalizer.normalize(parse_triple_hr_line(line))
    assert sum("urn:other:lab" in r.getMessage() for r in caplog.records) == 1


def test_elevator_record_normalizes_person_and_place(domain):
    events = normalize(domain, parse_elevator_record(ELEVATOR_LINE))
    assert [e.attribute_name for e in events] == ["location"]
    person = domain.find_object("urn:intellelevator:person:P0003")
    place = domain.find_object("urn:intellelevator:location:SEC")
    assert place is not None and place < person
    assert domain.objects[person].category == "Person"
    assert domain.objects[place].labels == ["Academic"]
    location = domain.objects[person].attributes["location"].states[0]
    assert location.referenced_object == place
    assert events[0].conditions == ("decision=UseStairs", "Action=Walking")
    assert "Action" not in domain.objects[person].attributes


def test_elevator_record_and_its_triple_normalize_alike():
    direct, via_rdf = ContextDomain("a"), ContextDomain("b")
    record = parse_elevator_record(ELEVATOR_LINE)
    events = normalize(direct, record)
    assert normalize(via_rdf, elevator_to_triple_rdf(record)) == events
    assert [(o.uri, o.category, o.labels, o.name) for o in direct.objects] == \
        [(o.uri, o.category, o.labels, o.name) for o in via_rdf.objects]


def test_rdf_without_date_is_rejected(domain):
    triple = TripleRDF(subject="urn:x:a", predicate="holds", object="b")
    with pytest.raises(FormatError, match="no date"):
        normalize(domain, triple)


def test_rdf_subject_defaults_to_thing(domain):
    triple = TripleRDF(subject="urn:x:a", predicate="holds", object="b",
                       conditions=[TripleRDF(subject="urn:x:a", predicate="date", object="2023-01-02")])
    events = normalize(domain, triple)
    assert domain.objects[0].category == "Thing"
    assert events[0].attribute_name == "holds"
    assert events[0].timestamp == datetime(2023, 1, 2)


def test_coordinator_receives_names(domain):
    store = CoordinatorStore()
    normalizer = Normalizer(domain, coordinator=store)
    normalizer.normalize(parse_elevator_record(ELEVATOR_LINE))
    assert "urn:intellelevator:person:P0003" in store
    assert "urn:intellelevator:location:SEC" in store
    assert len(store) == 2


@pytest.mark.parametrize("value, width, expected", [
    ("97", 10, "90-100"),
    ("100", 10, "100-110"),
    ("-3", 5, "-5-0"),
    ("2.5", 0.5, "2.5-3"),
])
def test_discretize(value, width, expected):
    assert discretize(value, width) == expected


def test_discretize_rejects_bad_input():
    with pytest.raises(ConfigError):
        discretize("5", 0)
    with pytest.raises(FormatError):
        discretize("high", 10)


def test_bins_applied_while_normalizing(domain):
    normalizer = Normalizer(domain, EngineSettings(bin_widths={"BloodSugar": 20}))
    for i, level in enumerate(("95", "105", "110")):
        normalizer.normalize(parse_triple_hr_line(
            f"Person::Student | Donnie | BloodSugar | {level} | Timestamp=2023-01-02 15:02:0{i} | Glucometer"))
    values = [s.value for s in domain.objects[0].attributes["BloodSugar"].states]
    assert values == ["80-100", "100-120"]
    assert normalizer.suppressed == 1
    assert domain.objects[0].attributes["BloodSugar"].kind == ORDINAL


def test_unbinned_attributes_are_nominal(domain):
    Normalizer(domain).normalize(parse_triple_hr_line(DONNIE))
    assert domain.objects[0].attributes["location"].kind == NOMINAL


def test_elevator_file_yields_one_location_event_per_record(elevator_file):
    domain = ContextDomain("elevator")
    normalizer = Normalizer(domain)
    records = list(iter_records(elevator_file))
    assert len(records) == 1000
    assert records[0][0] == 1
    events = [e for _, r in records for e in normalizer.normalize(r)]
    assert len(events) + normalizer.suppressed == len(records)
    assert {e.attribute_name for e in events} == {"location"}
    assert len(events) == 1000
    assert len(domain.categories["Person"].objects) == 20


def test_restaurant_file_has_seven_attributes(restaurant_file):
    domain = ContextDomain("restaurant")
    normalizer = Normalizer(domain)
    for _, record in iter_records(restaurant_file):
        normalizer.normalize(record)
    assert len(domain) == 25
    for obj in domain.objects:
        assert set(obj.attributes) == {"location", "Health", "BloodSugar", "Emotion", "Age", "Sex", "Activity"}


def test_delimiter_header_and_comments(tmp_path):
    path = tmp_path / "custom.txt"
    path.write_text(
        "#delim=;\n"
        "# a comment\n"
        "\n"
        + DONNIE.replace(" | ", ";") + "\n"
        + _donnie("Building004", 30).replace(" | ", ";") + "\n",
        encoding="utf-8",
    )
    records = list(iter_records(path))
    assert [n for n, _ in records] == [4, 5]
    assert records[1][1].state_value == "Building004"


def test_bad_delimiter_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("#delim=;;\n", encoding="utf-8")
    with pytest.raises(FormatError):
        list(iter_records(path))


def test_missing_file(tmp_path):
    with pytest.raises(MissingInputError):
        list(iter_records(tmp_path / "nope.txt"))


def test_error_carries_line_number(tmp_path):
    path = tmp_path / "broken.txt"
    path.write_text(DONNIE + "\n" + "Person::Student | Donnie | location\n", encoding="utf-8")
    with pytest.raises(FormatError) as info:
        list(iter_records(path))
    assert info.value.line_no == 2
