import functools
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))


settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SIGMA2_REFERENCE = 0.8131947928329
MC_SEED = 20100101


@functools.lru_cache(maxsize=None)
def mc_correlation(kind, n, samples, seed=MC_SEED):
    from gue_extremes.montecarlo import EnsembleSpec, sample_correlation

    return sample_correlation(EnsembleSpec(kind, n), samples, seed)


@pytest.fixture(scope="session")
def tw():
    from gue_extremes.moments import tw_moments

    return tw_moments()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.REPORT):
        terminalreporter.write_line(line)
