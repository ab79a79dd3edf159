import doctest
import importlib

import pytest


@pytest.mark.parametrize("name", ["fracvel.velocity"])
def test_docstring_examples(name):
    # the package re-exports a function of the same name, so go through importlib
    result = doctest.testmod(importlib.import_module(name))
    assert result.attempted > 0 and result.failed == 0
