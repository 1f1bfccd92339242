"""Acceptance suite: one test per criterion, each printing its verdict.

Run with `pytest -v -s tests/test_acceptance.py` to see the per-check
lines; `pytest -v` alone still gives one pass/fail line per criterion.
The same suite is reachable from the command line as
`steklov-tubes verify-all`.
"""

import pytest

from steklov_tubes import acceptance


@pytest.fixture(scope="module")
def cache():
    return acceptance.SuiteCache()


def _run(index, cache):
    res = acceptance.run(indices=[index], seed=0, cache=cache)[0]
    status = "PASS" if res.passed else "FAIL"
    print(f"criterion {res.index:2d} {status}  {res.name}  [{res.elapsed:.1f}s]")
    for line in res.checks:
        print(f"  {line}")
    assert res.passed, f"criterion {res.index} failed: {res.name}"


def test_criterion_01_radial_model_limits(cache):
    _run(1, cache)


def test_criterion_02_sphere_caps_vs_oracle(cache):
    _run(2, cache)


def test_criterion_03_torus_bracketing(cache):
    _run(3, cache)


def test_criterion_04_scaled_sigma2_trend(cache):
    _run(4, cache)


def test_criterion_05_upper_bound_proxy(cache):
    _run(5, cache)


def test_criterion_06_lower_bound_thresholds(cache):
    _run(6, cache)


def test_criterion_07_torus_neumann_gap(cache):
    _run(7, cache)


def test_criterion_08_energy_inequalities(cache):
    _run(8, cache)


def test_criterion_09_fem_vs_closed_forms(cache):
    _run(9, cache)


def test_criterion_10_kernels_and_scaling(cache):
    _run(10, cache)
