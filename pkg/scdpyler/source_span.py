#  Copyright (c) 2026, scdpyler developers. All rights reserved.

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan(object):
    """A half-open region [start, end) of a source file.

    Lines and columns are 1-based. A zero-width span (start == end) marks a
    position, for example the end of a file.
    """
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        if not isinstance(self.file, str):
            raise TypeError(f"SourceSpan file must be a string: received {type(self.file)}.")
        for name in ("start_line", "start_col", "end_line", "end_col"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"SourceSpan {name} must be a positive integer: received {value}.")
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError(f"SourceSpan start {self.start_line}:{self.start_col} lies after "
                             f"its end {self.end_line}:{self.end_col}.")

    @classmethod
    def at(cls, file: str, line: int = 1, col: int = 1) -> "SourceSpan":
        """A zero-width span at a single position."""
        return cls(file, line, col, line, col)

    def to(self, other: "SourceSpan") -> "SourceSpan":
        """The span running from the start of self to the end of other."""
        return SourceSpan(self.file, self.start_line, self.start_col, other.end_line, other.end_col)

    @property
    def sort_key(self):
        return (self.file, self.start_line, self.start_col)

    def __str__(self):
        return f"{self.file}:{self.start_line}:{self.start_col}"
