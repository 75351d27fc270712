"""Reactive temporal-logic task planning with CLF/CBF motion planning."""

__version__ = "0.1.0"
