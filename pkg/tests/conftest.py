import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import sscfw
from sscfw import ActiveIterate, run_with_ssc, run_plain


@pytest.fixture(scope="session")
def simplex3():
    return sscfw.simplex(3)


@pytest.fixture(scope="session")
def simplex5():
    return sscfw.simplex(5)


@pytest.fixture(scope="session")
def cube2():
    return sscfw.hypercube(2)


@pytest.fixture(scope="session")
def cube4():
    return sscfw.hypercube(4)


def default_suite_regions():
    return [sscfw.simplex(3), sscfw.simplex(5), sscfw.hypercube(4)]


def _vertex_start(region, seed):
    rng = sscfw.rng.SplitMix64(seed).spawn(7)
    return ActiveIterate.from_vertex(region, rng.randint(region.atom_set.m))


@pytest.fixture(scope="session")
def default_ssc_suite():
    """SSC runs of the default acceptance matrix, shared across criteria.

    Regions simplex(3)/simplex(5)/hypercube(4), mu/L in {0.01, 0.1}, three
    seeds, all three variants; budget 500, tol 1e-8.
    """
    runs = []
    for region in default_suite_regions():
        for ratio in (0.01, 0.1):
            for seed in (0, 1, 2):
                obj_proto = sscfw.sc_quadratic(region.n, ratio, 1.0, seed)
                for method in ("afw", "pfw", "fdfw"):
                    obj = sscfw.QuadraticObjective(
                        obj_proto.Q, obj_proto.b, lipschitz=1.0, strong_mu=ratio
                    )
                    trace = run_with_ssc(method, obj, region, _vertex_start(region, seed),
                                         budget=500, tol=1e-8)
                    runs.append({
                        "region": region, "obj": obj, "method": method,
                        "seed": seed, "mu": ratio, "trace": trace,
                    })
    return runs


@pytest.fixture(scope="session")
def plain_afw_runs():
    """Plain AFW runs (lipschitz rule) used by the good-step criteria.

    The distance-squared instances have their optimum pulled outside the
    simplex so the first steps are full FW steps.
    """
    runs = []
    region = sscfw.simplex(3)
    for ratio in (0.01, 0.1):
        for seed in (0, 1, 2):
            obj = sscfw.sc_quadratic(region.n, ratio, 1.0, seed)
            trace = run_plain("afw", obj, region, _vertex_start(region, seed),
                              budget=500, tol=1e-8, stepsize_rule="lipschitz")
            runs.append({"region": region, "obj": obj, "mu": ratio,
                         "seed": seed, "trace": trace})
    for seed, x_star in enumerate(([-0.4, 1.8, 0.2], [1.9, -0.3, 0.1],
                                   [0.1, -0.5, 2.1])):
        obj = sscfw.distance_squared(np.array(x_star))
        obj.reference_value = None  # recomputed by the oracle where needed
        trace = run_plain("afw", obj, region, ActiveIterate.from_vertex(region, seed),
                          budget=500, tol=1e-8, stepsize_rule="lipschitz")
        runs.append({"region": region, "obj": obj, "mu": 1.0,
                     "seed": seed, "trace": trace})
    return runs


@pytest.fixture(scope="session")
def nonconvex_ssc_runs():
    """Indefinite quadratics over hypercube(4) and simplex(5), chained runs."""
    runs = []
    for region in (sscfw.hypercube(4), sscfw.simplex(5)):
        if region.kind == "simplex":
            bounds = sscfw.simplex_bounds(region.n)
        else:
            bounds = sscfw.estimated_bounds(region.atoms, 4000, 1729)
        for method in ("afw", "pfw", "fdfw"):
            for seed in (0, 1):
                obj = sscfw.indefinite_quadratic(region.n, 1.0, seed)
                trace = run_with_ssc(method, obj, region, _vertex_start(region, seed),
                                     budget=2000, tol=1e-8)
                sscfw.annotate_hidden_points(trace, obj, region)
                runs.append({"region": region, "obj": obj, "method": method,
                             "seed": seed, "trace": trace, "bounds": bounds})
    return runs
