# valuation.py - values for the non-derived properties of a model
#
# This file contains the Valuation class that stores the values aggregate
# and emergent derivations are evaluated against, and helpers for reading
# them from valuation files.
#
# Copyright (c) 2026, scdpyler developers. All rights reserved.

"""
#### Valuation files:
A valuation file is flat text, one entry per line:

    Heart.Myocardium.weight = 2.5
    Person.PersonAsGenome.Variants.rs429358.isVariant = true

Keys are fully qualified property paths. Values are decimal literals; flag
properties also accept true and false, stored as 1 and 0. Blank lines and
lines starting with # are ignored.
"""

import decimal
import logging
import numbers
import re
from typing import Dict, Iterator, Mapping, Optional, Union
from warnings import warn

logger = logging.getLogger(__name__)

_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)+$")
_FLAGS = {"true": decimal.Decimal(1), "false": decimal.Decimal(0)}

ValueLike = Union[str, numbers.Real, decimal.Decimal, bool]


def parse_value(value: ValueLike) -> decimal.Decimal:
    """Converts a valuation value to a finite Decimal.

    Strings may be decimal literals or the flag words true / false.
    """
    if isinstance(value, bool):
        return _FLAGS["true"] if value else _FLAGS["false"]
    if isinstance(value, decimal.Decimal):
        result = value
    elif isinstance(value, numbers.Real):
        result = decimal.Decimal(str(value))
    elif isinstance(value, str):
        text = value.strip()
        if text.lower() in _FLAGS:
            return _FLAGS[text.lower()]
        try:
            result = decimal.Decimal(text)
        except decimal.InvalidOperation:
            raise ValueError(f"valuation value must be a decimal literal, true or false: received {value!r}.")
    else:
        raise TypeError(f"valuation value must be a string or a real number: received {type(value)}.")
    if not result.is_finite():
        raise ValueError(f"valuation value must be finite: received {value!r}.")
    return result


def check_key(key: str) -> str:
    if not isinstance(key, str) or not _KEY.match(key.strip()):
        raise ValueError(f"valuation key must be a dotted property path such as System.property: received {key!r}.")
    return key.strip()


class Valuation(object):
    def __init__(self, values: Optional[Mapping[str, ValueLike]] = None, value_file: Optional[str] = None,
                 overwrite_values: bool = False):
        """A store of property values keyed by fully qualified property path.

        :param values: dictionary of path -> value
        :param value_file: path of a valuation file (or a list of them)
        :param overwrite_values: whether later entries may replace existing ones
        """
        self.values: Dict[str, decimal.Decimal] = {}
        self.origins: Dict[str, str] = {}

        if isinstance(value_file, str):
            self.load_values_from_file(value_file, overwrite_values=overwrite_values)
        elif isinstance(value_file, list):
            for filename in value_file:
                if not isinstance(filename, str):
                    raise ValueError("value_file must be a string or list of strings representing file paths.")
                self.load_values_from_file(filename, overwrite_values=overwrite_values)
        elif value_file is not None:
            raise ValueError("value_file must be a string representing a file path.")

        if isinstance(values, Mapping):
            self.load_values_from_dictionary(values, overwrite_values=overwrite_values)
        elif values is not None:
            raise ValueError("values must be None or a dictionary!")

    def __contains__(self, key) -> bool:
        return isinstance(key, str) and key.strip() in self.values

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, key: str) -> decimal.Decimal:
        return self.values[check_key(key)]

    def __setitem__(self, key: str, value: ValueLike):
        self.add_value(key, value, origin="set manually", overwrite_values=True)

    def get(self, key: str, default=None):
        return self.values.get(key, default)

    def __str__(self):
        return "Valuation:\n" + "\n".join(f"{k} = {self.values[k]}" for k in self)

    def add_value(self, key: str, value: ValueLike, origin: Optional[str] = None, overwrite_values: bool = False):
        """Adds one entry.

        :param key: fully qualified property path
        :param value: decimal literal, number or flag
        :param origin: where the value came from, kept for messages
        :param overwrite_values: whether to replace an existing entry
        """
        key = check_key(key)
        parsed = parse_value(value)
        if key in self.values:
            if not overwrite_values:
                raise ValueError(f"Duplicate valuation entry detected. {key} is already set "
                                 f"(from {self.origins[key]}). To overwrite existing values, use "
                                 f"overwrite_values = True.")
            if self.values[key] != parsed:
                warn(f"valuation entry {key} = {self.values[key]} from {self.origins[key]} is overwritten "
                     f"with {parsed} from {origin}.")
        self.values[key] = parsed
        self.origins[key] = origin if origin is not None else "unknown"

    def load_values_from_dictionary(self, values: Mapping[str, ValueLike], overwrite_values: bool = False):
        for key in values:
            self.add_value(key, values[key], origin="dictionary", overwrite_values=overwrite_values)

    def load_values_from_file(self, filename: str, overwrite_values: bool = False):
        """Loads key = value lines from a valuation file.

        :raises OSError: when the file cannot be read
        :raises ValueError: on a malformed line, naming the file and line number
        """
        with open(filename, encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                text = line.strip()
                if text == "" or text.startswith("#"):
                    continue
                if "=" not in text:
                    raise ValueError(f"{filename}:{number}: expected 'path = value', found {text!r}.")
                key, value = (part.strip() for part in text.split("=", 1))
                try:
                    self.add_value(key, value, origin=f"{filename}:{number}", overwrite_values=overwrite_values)
                except ValueError as err:
                    raise ValueError(f"{filename}:{number}: {err}")
        logger.debug("loaded %d valuation entries from %s", len(self.values), filename)
