"""Filtration levels: an integer (or infinity) that is either exact or a lower bound."""

import functools
import math

INFINITY = math.inf


@functools.total_ordering
class Level:
    __slots__ = ("value", "exact")

    def __init__(self, value, exact=True):
        self.value = value
        self.exact = exact

    @classmethod
    def infinity(cls):
        return cls(INFINITY, True)

    @classmethod
    def at_least(cls, value):
        return cls(value, False)

    @classmethod
    def min_of(cls, levels, default=None):
        """Minimum of levels, exact iff the smallest exact value is <= every bound."""
        exact_min = INFINITY
        bound_min = INFINITY
        seen = False
        for lv in levels:
            seen = True
            if lv.exact:
                exact_min = min(exact_min, lv.value)
            else:
                bound_min = min(bound_min, lv.value)
        if not seen:
            return default if default is not None else cls.infinity()
        if exact_min <= bound_min:
            return cls(exact_min, True)
        return cls(bound_min, False)

    @property
    def is_infinite(self):
        return self.value == INFINITY

    def __add__(self, k):
        return Level(self.value + k, self.exact)

    def capped(self, cap):
        """Clamp to a truncation level: anything >= cap becomes the bound '>= cap'."""
        if self.value >= cap:
            return Level(cap, False)
        return self

    def __eq__(self, other):
        if isinstance(other, Level):
            return self.value == other.value and self.exact == other.exact
        return self.exact and self.value == other

    def __lt__(self, other):
        v = other.value if isinstance(other, Level) else other
        return self.value < v

    def __hash__(self):
        return hash((self.value, self.exact))

    def __int__(self):
        if self.is_infinite:
            raise OverflowError("infinite level")
        return int(self.value)

    def __str__(self):
        if self.is_infinite:
            return "inf"
        return str(self.value) if self.exact else f">={self.value}"

    def __repr__(self):
        return f"Level({self})"

    def to_json(self):
        if self.is_infinite:
            return {"exact": True, "value": "inf"}
        return {"exact": self.exact, "value": int(self.value)}
