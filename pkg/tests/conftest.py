import numpy as np
import pytest
from hypothesis import strategies as st

from relaygap.channel import params_from_db

ACCEPTANCE_LINES = []

db_gain = st.floats(min_value=-60.0, max_value=60.0, allow_nan=False)
open_rho = st.floats(min_value=-0.999, max_value=0.999, allow_nan=False)


@st.composite
def channels(draw, rho=open_rho):
    return params_from_db(draw(db_gain), draw(db_gain), draw(db_gain), draw(rho))


def random_channels(n, seed, db_range=(-60.0, 60.0), rho_max=0.999):
    rng = np.random.default_rng(seed)
    dbs = rng.uniform(*db_range, size=(n, 3))
    rhos = rng.uniform(-rho_max, rho_max, size=n)
    return [params_from_db(*map(float, d), float(r)) for d, r in zip(dbs, rhos)]


@pytest.fixture
def example_channel():
    from relaygap.channel import ChannelParams

    return ChannelParams(h_sd=1.0, h_sr=2.0, h_rd=2.0, rho_z=0.5)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: s.split("criterion", 1)[1]):
            terminalreporter.write_line(line)
