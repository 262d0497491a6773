# loader.py - finding and reading SCDL level files
#
# Explode references are forward-slash paths relative to the directory of
# the file that contains them. Loaders turn such a path into source text;
# the resolver never touches the file system directly, which keeps it
# deterministic and lets tests feed levels from memory.
#
# Copyright (c) 2026, scdpyler developers. All rights reserved.

import logging
import os
import posixpath
from typing import Dict, Mapping, Optional

logger = logging.getLogger(__name__)


class UnitLoadError(OSError):
    """A level file could not be read."""
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        OSError.__init__(self, f"cannot load '{path}': {reason}")


def normalize_path(path: str) -> str:
    """Forward-slash, normalized form of a path on every platform."""
    if not isinstance(path, str) or path == "":
        raise ValueError(f"path must be a non-empty string: received {path!r}.")
    return posixpath.normpath(path.replace("\\", "/"))


def resolve_relative(referrer: str, target: str) -> str:
    """The path of target written inside the file referrer."""
    target = target.replace("\\", "/")
    if posixpath.isabs(target):
        return normalize_path(target)
    return normalize_path(posixpath.join(posixpath.dirname(normalize_path(referrer)), target))


class UnitLoader(object):
    """Returns the source text stored under a path, or raises UnitLoadError."""

    def load(self, path: str) -> str:
        raise NotImplementedError("UnitLoader subclasses must implement load().")

    def __call__(self, path: str) -> str:
        return self.load(path)


class FileUnitLoader(UnitLoader):
    def __init__(self, base_dir: Optional[str] = None, encoding: str = "utf-8"):
        """Reads levels from the file system.

        :param base_dir: directory relative paths are read from (the working directory when None)
        :param encoding: text encoding of SCDL files
        """
        self.base_dir = base_dir
        self.encoding = encoding

    def load(self, path: str) -> str:
        full_path = path if self.base_dir is None else os.path.join(self.base_dir, path)
        logger.debug("reading %s", full_path)
        try:
            with open(full_path, encoding=self.encoding) as handle:
                return handle.read()
        except UnicodeDecodeError as err:
            raise UnitLoadError(path, f"not valid {self.encoding} text ({err.reason})")
        except OSError as err:
            raise UnitLoadError(path, err.strerror or str(err))
        except ValueError as err:
            # embedded NUL and similar unusable names
            raise UnitLoadError(path, str(err))


class MemoryUnitLoader(UnitLoader):
    def __init__(self, sources: Mapping[str, str] = None):
        """Serves levels from a dictionary of path -> text.

        Keys are normalized, so "a/./b.scd" and "a/b.scd" name the same level.
        """
        self.sources: Dict[str, str] = {}
        for path, text in (sources or {}).items():
            self.add(path, text)

    def add(self, path: str, text: str):
        if not isinstance(text, str):
            raise TypeError(f"source text for {path} must be a string: received {type(text)}.")
        self.sources[normalize_path(path)] = text

    def load(self, path: str) -> str:
        key = normalize_path(path)
        if key not in self.sources:
            raise UnitLoadError(path, "no such level")
        return self.sources[key]

    def __contains__(self, path: str) -> bool:
        return normalize_path(path) in self.sources

    def __len__(self):
        return len(self.sources)
