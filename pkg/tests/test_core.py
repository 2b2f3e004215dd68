import pytest

from src.core.domain import ContextDomain, split_category_path
from src.core.errors import ConfigError, FormatError, InternalError, NotFoundError
from src.core.mapping import ObjectURIMapping, resolve_index, resolve_uri


def test_first_object_gets_index_zero(domain):
    assert domain.register_object("Person::Student", "uri:donnie") == 0
    obj = domain.objects[0]
    assert obj.category == "Person"
    assert obj.labels == ["Student"]


def test_register_object_is_idempotent(domain):
    domain.register_object("Person::Student", "uri:donnie")
    assert domain.register_object("Person::Student", "uri:donnie") == 0
    assert len(domain) == 1


def test_fifty_first_person_gets_index_fifty(domain):
    for i in range(50):
        domain.register_object("Person::Student", f"urn:intellelevator:person:P{i:04d}")
    assert domain.register_object("Person::Student", "uri:newcomer") == 50


@pytest.mark.parametrize("path", ["", "Person::", "::Student", "Person::::Student"])
def test_malformed_category_path(domain, path):
    with pytest.raises(FormatError):
        domain.register_object(path, "uri:x")


def test_split_category_path():
    assert split_category_path("Place::Building::Floor") == ["Place", "Building", "Floor"]


def test_register_state_dense_and_idempotent(domain):
    obj = domain.register_object("Person", "uri:p")
    assert domain.register_state(obj, "location", "Home") == (0, True)
    assert domain.register_state(obj, "location", "GYM") == (1, True)
    assert domain.register_state(obj, "location", "Home") == (0, False)


def test_ten_restaurant_states(domain):
    obj = domain.register_object("Person", "uri:p")
    indexes = [domain.register_state(obj, "location", f"Restaurant-{i:02d}")[0] for i in range(10)]
    assert indexes == list(range(10))


def test_empty_state_value_rejected(domain):
    obj = domain.register_object("Person", "uri:p")
    with pytest.raises(FormatError):
        domain.register_state(obj, "location", "  ")


def test_invalid_hyperparameters():
    with pytest.raises(ConfigError):
        ContextDomain("d", hierarchy_depth=2, transition_steps=0)
    with pytest.raises(ConfigError):
        ContextDomain("d", hierarchy_depth=0, transition_steps=1)


def test_resolve_uri_and_index():
    mapping = ObjectURIMapping()
    mapping.register("uri:donnie")
    assert resolve_uri(mapping, 0) == "uri:donnie"
    assert resolve_index(mapping, "uri:donnie") == 0
    with pytest.raises(NotFoundError):
        resolve_uri(mapping, 1)
    with pytest.raises(NotFoundError):
        resolve_index(mapping, "uri:nobody")


def test_mapping_bijection_on_large_domain(domain):
    for i in range(2500):
        domain.register_object("Person::Student", f"urn:csm:Person:Student-{i:04d}")
    mapping = domain.object_index
    assert len(mapping) == 2500
    for k in range(2500):
        assert resolve_index(mapping, resolve_uri(mapping, k)) == k


def test_mapping_payload_rejects_duplicates():
    with pytest.raises(InternalError):
        ObjectURIMapping.from_dict({"uris": ["uri:a", "uri:a"]})


def test_state_reference_to_registered_object(campus_domain):
    d, person, building, lab = campus_domain
    state = d.objects[person].attributes["location"].states[0]
    assert state.referenced_object == building
    assert state.ref_by_name is True


def test_reference_backfilled_when_object_registers_later(domain):
    person = domain.register_object("Person", "uri:p")
    domain.register_state(person, "location", "uri:building")
    state = domain.objects[person].attributes["location"].states[0]
    assert state.referenced_object is None
    building = domain.register_object("Place", "uri:building")
    assert state.referenced_object == building
    assert state.ref_by_name is False


def test_current_state_and_last_transition(domain):
    obj = domain.register_object("Person", "uri:p")
    attribute, _ = domain.ensure_attribute(obj, "location")
    a = attribute.register_state("Home")
    b = attribute.register_state("GYM")
    attribute.set_current(a)
    assert attribute.last_transition is None
    attribute.set_current(b)
    assert attribute.last_transition == (a, b)
    with pytest.raises(NotFoundError):
        attribute.set_current(7)
