"""Desk-scale runs of the two workloads: throughput, round trip and compression."""

import time

import pytest

from src.engine import BuildPipeline
from src.models.workloads import ElevatorConfig
from src.privacy import find_leaks, forbidden_tokens
from src.storage import compression_report, load, load_mapping, save, save_mapping
from src.workloads import restaurant_config, write_elevator_file, write_restaurant_file

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def elevator_100k(tmp_path_factory):
    path = tmp_path_factory.mktemp("elevator") / "elevator-100k.txt"
    start = time.perf_counter()
    write_elevator_file(ElevatorConfig(person_count=50, record_count=100_000, seed=7), path)
    return path, time.perf_counter() - start


@pytest.fixture(scope="module")
def elevator_build(elevator_100k):
    path, generation_s = elevator_100k
    engine, timings = BuildPipeline().run(path, system="elevator")
    return engine, timings, generation_s


@pytest.fixture(scope="module")
def restaurant_desk(tmp_path_factory):
    path = tmp_path_factory.mktemp("restaurant") / "restaurant-desk.txt"
    write_restaurant_file(restaurant_config("desk"), path)
    engine, _ = BuildPipeline().run(path, system="restaurant")
    return path, engine


def test_elevator_100k_within_ten_seconds(elevator_build):
    engine, timings, generation_s = elevator_build
    assert timings.items == 100_000
    assert generation_s + timings.total_ms / 1000 < 10
    assert timings.events + engine.normalizer.suppressed == timings.items
    assert timings.conversion_ms > timings.casm_ms
    assert timings.cssm_ms > timings.casm_ms


def _assert_round_trip(engine):
    domain = engine.domain
    meta, casm = save(domain)
    loaded = load(meta, casm, load_mapping(save_mapping(domain.object_index)), engine.coordinator)
    assert save(loaded) == (meta, casm)
    for obj, attribute in domain.iter_attributes():
        other = loaded.objects[obj.object_index].attributes[attribute.name]
        assert [s.value for s in other.states] == [s.value for s in attribute.states]
        assert other.casm.tensor == attribute.casm.tensor
        for prefix in {path[:-1] for path in attribute.casm.tensor.counts}:
            assert other.casm.tensor.successors(prefix) == attribute.casm.tensor.successors(prefix)
    for owner, machine in domain.cssms.items():
        assert loaded.cssms[owner].registry.situations == machine.registry.situations
        assert loaded.cssms[owner].tensor == machine.tensor
    assert loaded.relationships.entries() == domain.relationships.entries()
    tokens = forbidden_tokens(domain, engine.coordinator)
    assert find_leaks(meta, tokens) == [] and find_leaks(casm, tokens) == []


def test_elevator_round_trip(elevator_build):
    _assert_round_trip(elevator_build[0])


def test_restaurant_round_trip(restaurant_desk):
    _assert_round_trip(restaurant_desk[1])


def test_restaurant_compression_direction(restaurant_desk):
    path, engine = restaurant_desk
    report = compression_report(path, engine.domain)
    assert report.meta_bytes + report.casm_bytes < report.input_bytes
    assert report.raw_ratio < 25
    assert report.meta_deflated + report.casm_deflated < report.input_deflated
