import datetime as dt
import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import ratinglab as rl

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,  # byte-identical reruns matter more than fresh examples
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def make_history(bank_id, events, coverage_end=None):
    evs = tuple(rl.RatingEvent(date=d, state=s) for d, s in events)
    if coverage_end is None:
        coverage_end = evs[-1].date
    return rl.RatingHistory(bank_id=bank_id, events=evs, coverage_end=coverage_end)


def make_panel(span, specs):
    """specs: list of (bank_id, [(date, state), ...], coverage_end-or-None)."""
    histories = []
    for bank_id, events, cov in specs:
        histories.append(make_history(bank_id, events, cov if cov is not None else span[1]))
    return rl.Panel(histories, span)


def raw_histories(panel):
    """Plain (events, coverage_end) pairs for the oracle helpers."""
    return [
        ([(e.date, e.state) for e in h.events], h.coverage_end)
        for h in panel.histories
    ]


@pytest.fixture(scope="session")
def homogeneous_panel():
    """Mid-sized homogeneous panel shared by read-only tests."""
    q = rl.random_generator(7, 0.3)
    scen = rl.Scenario(
        kind="homogeneous",
        generators=((dt.date(2007, 1, 1), q),),
        n_banks=400,
        span=(dt.date(2007, 1, 1), dt.date(2011, 1, 1)),
        seed=42,
        initial_distribution=rl.uniform_distribution(),
    )
    return rl.simulate(scen), q


@pytest.fixture(scope="session")
def consistency_sweep():
    """Median Frobenius errors of the estimated generator vs truth.

    One shared sweep: 20 seeds at each bank count, homogeneous scenario
    with a banded generator at rate 0.3/yr over five years.  Consumed by
    both the estimator property test (monotone decrease) and the
    headline consistency check (relative error at the largest count).
    """
    q = rl.random_generator(1234, 0.3)
    span = (dt.date(2007, 1, 1), dt.date(2012, 1, 1))
    q_norm = float(np.linalg.norm(q.entries))
    medians = {}
    started = time.perf_counter()
    for n_banks in (100, 1000, 10000):
        dists = []
        for seed in range(20):
            scen = rl.Scenario(
                kind="homogeneous",
                generators=((span[0], q),),
                n_banks=n_banks,
                span=span,
                seed=9000 + seed,
                initial_distribution=rl.uniform_distribution(),
            )
            panel = rl.simulate(scen)
            counts = rl.count_transitions(panel, *span)
            expo = rl.exposures(panel, *span)
            qhat = rl.estimate_generator(counts, expo)
            dists.append(float(np.linalg.norm(qhat.entries - q.entries)))
        medians[n_banks] = float(np.median(dists))
    return medians, q_norm, time.perf_counter() - started


# -- acceptance reporting ---------------------------------------------

ACCEPTANCE_RESULTS = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion for the terminal summary."""

    def record(index, name, passed, detail):
        ACCEPTANCE_RESULTS.append((index, name, bool(passed), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for index, name, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {index:2d} {status}  {name}: {detail}")
