"""Exact small-ball probabilities of random signed sums.

Rational inputs may be ints, ``fractions.Fraction`` values, or strings such
as ``"3/2"`` or ``"0.35"`` (decimal strings are read exactly). Exact
probabilities come back as ``Fraction`` values.
"""

from fractions import Fraction

from . import _lolab
from ._lolab import (
    CapExceeded,
    InvalidInput,
    VerificationFailure,
    classify_regime,
    cos_dominated,
    dist_to_int,
    hoeffding_radius,
    mc_probability,
    stirling_approx,
)

__all__ = [
    "CapExceeded",
    "InvalidInput",
    "VerificationFailure",
    "binom_sum",
    "classify_regime",
    "cos_dominated",
    "dist_to_int",
    "enumerate_sums",
    "erdos_bound",
    "hoeffding_radius",
    "local_search_max",
    "max_ball_probability",
    "mc_probability",
    "min_spread",
    "prob_in_ball",
    "q_integral",
    "stirling_approx",
]


def _prob(p):
    num, log2_den = p
    return Fraction(num, 1 << log2_den)


def _vec(v):
    return tuple(Fraction(x) for x in v)


def _ball(b):
    return {"center": _vec(b["center"]), "radius": Fraction(b["radius"])}


def _dim(vectors, dim):
    if dim is not None:
        return dim
    if not vectors:
        raise InvalidInput("dim is required for an empty vector list")
    return len(vectors[0])


def enumerate_sums(vectors, dim=None, max_n=30, threads=1):
    """Distinct values of sum(+-v_i) mapped to their multiplicities."""
    cloud = _lolab.enumerate_sums(_dim(vectors, dim), list(vectors), max_n, threads)
    return {_vec(x): w for x, w in cloud}


def prob_in_ball(vectors, center, radius, dim=None):
    return _prob(_lolab.prob_in_ball(_dim(vectors, dim), list(vectors), list(center), radius))


def max_ball_probability(vectors, delta, dim=None, max_n=30):
    """(probability, witness ball) for the deepest closed ball of radius delta."""
    r = _lolab.max_ball_probability(_dim(vectors, dim), list(vectors), delta, max_n)
    return _prob(r["probability"]), _ball(r["witness"])


def binom_sum(n, s):
    return _lolab.binom_sum(n, s)


def erdos_bound(n, delta):
    return _prob(_lolab.erdos_bound(n, delta))


def q_integral(vectors, dim=None, decay=0.01, points=32, rel_tol=0.01):
    """(value, converged) for the Gaussian-type integral over the unit ball."""
    return _lolab.q_integral(_dim(vectors, dim), list(vectors), decay, points, rel_tol)


def min_spread(vectors, dim=None, net=1e-3):
    return _lolab.min_spread(_dim(vectors, dim), list(vectors), net)


def local_search_max(n, dim, delta, restarts=8, steps=200, seed=1, threads=1):
    r = _lolab.local_search_max(n, dim, delta, restarts, steps, seed, threads)
    return {
        "best_config": [_vec(v) for v in r["best_config"]],
        "best_ball": _ball(r["best_ball"]),
        "best_prob": _prob(r["best_prob"]),
        "erdos": _prob(r["erdos"]),
        "violation": r["violation"],
    }
