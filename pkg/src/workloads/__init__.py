"""Seeded synthetic workloads."""

from .elevator import generate_elevator, write_elevator, write_elevator_file
from .restaurant import generate_restaurant, location_names, restaurant_config, write_restaurant, write_restaurant_file
