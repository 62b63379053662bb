"""Powersmooth quaternion lifting, classical Borel HSP solver and ideal-recovery simulation.

Integers go in as Python ints and come back as decimal strings inside plain dicts,
mirroring the CLI's JSON output.
"""

import json

from . import _qlift
from ._qlift import MalformedInput, QliftError

__all__ = [
    "MalformedInput",
    "QliftError",
    "params",
    "pqlp_lift",
    "explicit_isomorphism",
    "precomputed_lift",
    "borel_solve",
    "iserp_attack",
]


def _s(xs):
    return [str(int(x)) for x in xs]


def params(p):
    return json.loads(_qlift.params(str(p)))


def pqlp_lift(p, N, sigma, *, B=0, seed=0, relaxed=False):
    """Lift sigma = (a + b i + c j + d k)/den to an element with powersmooth norm.

    ``sigma`` is (a, b, c, d) or (a, b, c, d, den). B=0 picks floor((log2 p)^4).
    """
    return json.loads(_qlift.pqlp_lift(str(p), str(N), _s(sigma), str(B), seed, relaxed))


def explicit_isomorphism(p, N, *, seed=0):
    return json.loads(_qlift.explicit_isomorphism(str(p), str(N), seed))


def precomputed_lift(p, N, matrix, *, B=1 << 20, seed=0):
    """Lift an invertible 2x2 matrix (a, b, c, d) mod N through a fresh precomputed table."""
    return json.loads(_qlift.precomputed_lift(str(p), str(N), _s(matrix), str(B), seed))


def borel_solve(N, oracle=None, *, planted=None, seed=0):
    """Recover the hidden free cyclic submodule.

    ``oracle`` maps a matrix ((a, b), (c, d)) to a hashable label; alternatively
    pass ``planted=(x, y)`` for a self-test oracle.
    """
    pl = None if planted is None else _s(planted)
    return json.loads(_qlift.borel_solve(str(N), oracle, pl, seed))


def iserp_attack(p, N, *, seed=0, mode="ideal-hnf"):
    return json.loads(_qlift.iserp_attack(str(p), str(N), seed, mode))
