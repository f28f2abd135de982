"""Darboux polynomials, exponential factors, first integrals and trajectories
of polynomial vector fields."""

import json as _json

from . import _core
from ._core import (
    EvalDomain,
    Error,
    Field,
    InvalidCertificate,
    NonFinite,
    ParseError,
    trajectory,
    verify_darboux,
    verify_exp_factor,
)

__version__ = _core.__version__


def _wrap(fn):
    def run(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


darboux = _wrap(_core.darboux)
expfactors = _wrap(_core.expfactors)
integrals = _wrap(_core.integrals)
formal = _wrap(_core.formal)
simulate = _wrap(_core.simulate)
lyapunov = _wrap(_core.lyapunov)


def render_text(report):
    return _core.render_text(_json.dumps(report))


__all__ = [
    "EvalDomain",
    "Error",
    "Field",
    "InvalidCertificate",
    "NonFinite",
    "ParseError",
    "darboux",
    "expfactors",
    "formal",
    "integrals",
    "lyapunov",
    "render_text",
    "simulate",
    "trajectory",
    "verify_darboux",
    "verify_exp_factor",
]
