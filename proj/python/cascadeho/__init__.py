"""Python access to the cascadeho engine.

Documents are JSON text (the same format the CLI reads). Report functions
return decoded dictionaries.
"""

import json as _json

from . import _cascadeho as _core
from ._cascadeho import (
    ChainMapFailure,
    InvalidScenario,
    SchemaError,
    SquareNonzero,
    UnknownFixture,
    Unsupported,
)

__all__ = [
    "ChainMapFailure",
    "InvalidScenario",
    "SchemaError",
    "SquareNonzero",
    "UnknownFixture",
    "Unsupported",
    "chs1",
    "compare",
    "egh",
    "fixture",
    "fixture_names",
    "groups",
    "morphism",
    "nch",
    "period_doubling",
    "prequantization",
    "validate",
]


def _text(doc):
    return doc if isinstance(doc, str) else _json.dumps(doc)


def fixture_names():
    return list(_core.fixture_names())


def fixture(name):
    return _core.fixture(name)


def prequantization(g, e, d, sign=1):
    return _core.prequantization(g, e, d, sign)


def period_doubling(side, c=1, allow_even=False):
    return _core.period_doubling(side, c, allow_even)


def validate(doc):
    return _json.loads(_core.validate(_text(doc)))


def nch(doc, action_bound=None):
    return _json.loads(_core.nch(_text(doc), action_bound))


def chs1(doc, umax):
    return _json.loads(_core.chs1(_text(doc), umax))


def egh(doc):
    return _json.loads(_core.egh(_text(doc)))


def compare(doc, umax, reference=None):
    ref = None if reference is None else _text(reference)
    return _json.loads(_core.compare(_text(doc), umax, ref))


def morphism(doc):
    return _json.loads(_core.morphism(_text(doc)))


def groups(report):
    """{(class, grading): group string} from a report with homology."""
    return {(g["class"], g["grading"]): g["group"] for g in report["homology"]["groups"]}
