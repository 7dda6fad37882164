"""Error hierarchy: one base class, stable distinct exit codes."""

from __future__ import annotations

import builtins

import pytest

from napkit.errors import (
    DataError,
    FormatError,
    IoError,
    LookupError,
    NapkitError,
    ParamError,
    ShapeError,
)

ALL_ERRORS = [NapkitError, FormatError, DataError, ShapeError, LookupError, ParamError, IoError]


def test_all_errors_share_base():
    for cls in ALL_ERRORS:
        assert issubclass(cls, NapkitError)


def test_exit_codes_distinct_and_stable():
    codes = {cls: cls.exit_code for cls in ALL_ERRORS}
    assert codes[NapkitError] == 2
    assert codes[FormatError] == 3
    assert codes[DataError] == 4
    assert codes[ShapeError] == 5
    assert codes[LookupError] == 6
    assert codes[ParamError] == 7
    assert codes[IoError] == 8
    assert len(set(codes.values())) == len(ALL_ERRORS)


def test_errors_also_map_to_python_builtins():
    # So callers can catch idiomatic Python exceptions without importing ours.
    assert issubclass(FormatError, ValueError)
    assert issubclass(DataError, ValueError)
    assert issubclass(ShapeError, ValueError)
    assert issubclass(ParamError, ValueError)
    assert issubclass(LookupError, builtins.LookupError)
    assert issubclass(IoError, OSError)


def test_errors_carry_messages():
    with pytest.raises(NapkitError, match="went wrong"):
        raise DataError("something went wrong")
