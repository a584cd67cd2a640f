"""One test per acceptance criterion; each prints its PASS/FAIL line."""

import pytest

from symcoord.acceptance import CRITERIA

RESULTS = []


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__.removeprefix("criterion_"))
def test_criterion(criterion):
    result = criterion()
    RESULTS.append(result.line())
    print(result.line())
    assert result.passed, result.line()
