import csv
import math
from pathlib import Path

import pytest

from invlang.series import h_series, inverse_langevin_series, reduce_additive

DATA = Path(__file__).parent / "data"


def printed_match(got: float, printed: str) -> bool:
    """True when got agrees with a decimal literal in every printed digit,
    i.e. to within half an ulp of the literal's last significant digit."""
    mant = printed.lstrip("+-").split("e")[0]
    digits = len(mant.replace(".", "").lstrip("0"))
    ref = float(printed)
    if ref == 0.0:
        return got == 0.0
    ulp = 10.0 ** (math.floor(math.log10(abs(ref))) - digits + 1)
    return abs(got - ref) <= 0.51 * ulp


@pytest.fixture(scope="session")
def inv449():
    return inverse_langevin_series(449)


@pytest.fixture(scope="session")
def h448(inv449):
    return h_series(reduce_additive(inv449))


def load_rows(name):
    with open(DATA / name, newline="") as fh:
        return list(csv.DictReader(fh))
