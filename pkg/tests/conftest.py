import math

import pytest

from levy_exits.catalog import BROWNIAN, M_A, SYMMETRIC_JUMPS
from levy_exits.classifier import ExitQuery
from levy_exits.sampler import PlanHints, plan

E_INV = math.exp(-1.0)


@pytest.fixture
def ma_model():
    return M_A


@pytest.fixture
def symmetric_jumps():
    return SYMMETRIC_JUMPS


@pytest.fixture
def brownian():
    return BROWNIAN


@pytest.fixture
def unit_query():
    return ExitQuery(1.0, 1.0)


@pytest.fixture
def exact_plan(ma_model):
    return plan(ma_model, PlanHints(horizon=16.0))


MA_DOCUMENT = """\
schema: levy-exits/1
model:
  sigma2: 0.0
  measure:
    atoms:
      - {x: -2.0, rate: 1.0}
  drift: {gamma0: 1.0}
"""


@pytest.fixture
def ma_file(tmp_path):
    path = tmp_path / "ma.yaml"
    path.write_text(MA_DOCUMENT)
    return path
