import math

import pytest

from lorenz_entropy import AdmissiblePair, LorenzMapSpec

# f0 = 1.25*sqrt(x), f1 = b*x + 1 - b with b = (1.25^-6 - 1)/(1.25^-2 - 1),
# q = 1.25^-2: periodic critical orbits, entropy ln((1+sqrt(5))/2)
GOLDEN_B = "(1.25^-6 - 1)/(1.25^-2 - 1)"


@pytest.fixture(scope="session")
def markov_map():
    return LorenzMapSpec.from_strings(
        "1.25*sqrt(x)", f"({GOLDEN_B})*x + 1 - {GOLDEN_B}", "0.64"
    )


@pytest.fixture(scope="session")
def slow_exp_map():
    # nearly-neutral first branch against an exponential second branch
    return LorenzMapSpec.from_strings("1.001*x", "exp(x + ln(2) - 1) - 1", "0.5")


@pytest.fixture(scope="session")
def sqrt2_half():
    return AdmissiblePair(math.sqrt(2.0), 0.5)


@pytest.fixture(scope="session")
def sqrt2_boundary():
    return AdmissiblePair(math.sqrt(2.0), 1.0 / math.sqrt(2.0))
