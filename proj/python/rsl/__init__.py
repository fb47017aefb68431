"""Rips complexes, shadows, nerves and Z/2 homology towers.

Models are given as a kind name ("circle", "trefoil", "theta") or as a model
record such as {"kind": "circle", "params": {"radius": 2.0}}. Reports come
back as plain dicts with the same layout as the command line JSON output.
"""

import json

from . import _rsl
from ._rsl import PreconditionError, SchemaError, known_hypotheses, nerve_betti, raster_betti, rips_betti

__all__ = [
    "PreconditionError",
    "SchemaError",
    "check_conditions",
    "direct_system",
    "inverse_system",
    "known_hypotheses",
    "nerve_betti",
    "projection_check",
    "raster_betti",
    "reconstruct",
    "rips",
    "rips_betti",
    "sample",
]


def _model(model):
    if isinstance(model, str):
        model = {"kind": model}
    return json.dumps(model)


def sample(model, n, tau=0.0, seed=0, scheme="stratified"):
    return _rsl.sample(_model(model), n, tau, seed, scheme)


def rips(points, beta, cap=2):
    return json.loads(_rsl.rips(points, beta, cap))


def check_conditions(model, beta, tau=0.0, zeta=None):
    return json.loads(_rsl.check_conditions(_model(model), beta, tau, zeta))


def inverse_system(model, betas, **kwargs):
    return json.loads(_rsl.inverse_system(_model(model), betas, **kwargs))


def direct_system(model, beta, sizes, **kwargs):
    return json.loads(_rsl.direct_system(_model(model), beta, sizes, **kwargs))


def projection_check(model, beta, n, **kwargs):
    return json.loads(_rsl.projection_check(_model(model), beta, n, **kwargs))


def reconstruct(model, points, beta, tau, zeta, faults=()):
    return json.loads(_rsl.reconstruct(_model(model), points, beta, tau, zeta, set(faults)))
