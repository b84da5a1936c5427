"""Find every instance of a one-variable pattern with reversals in a text.

A pattern is a string of constant segments and occurrences of one variable
``x`` or its reversal, written ``{x}`` and ``{~x}``.  Instances are reported
as arithmetic families of (start, substitution length).
"""
from .context import InstanceFamily, MatchConfig
from .matcher import (MatchReport, enumerate_arrays, enumerate_instances,
                      find_all, verify_instance)
from .oracle import naive_find
from .pattern import Instance, Pattern, PatternSyntaxError, parse_pattern

__all__ = [
    "Instance", "InstanceFamily", "MatchConfig", "MatchReport", "Pattern",
    "PatternSyntaxError", "enumerate_arrays", "enumerate_instances", "find_all",
    "naive_find", "parse_pattern", "verify_instance",
]
