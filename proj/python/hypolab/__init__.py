"""Python access to the hypolab core: symbolic checks, the counterexample
field, kernel values and the experiment runner."""

import json

from ._hypolab import (
    ConfigError,
    DomainError,
    Error,
    ParseError,
    commutator,
    det_symbol,
    eval_kernel,
    hormander_rank,
    l2_growth,
    list_experiments,
    normalize_operator,
    principal_symbol,
    realize_u1,
    set_threads,
    threads,
)
from . import _hypolab

__version__ = "0.1.0"


def run_experiment(name, **overrides):
    """Runs one experiment and returns its report as a dict.

    Keyword arguments override config keys; lists may be given as sequences.
    """
    cfg = {}
    for k, v in overrides.items():
        if isinstance(v, (list, tuple)):
            v = ",".join(repr(float(x)) for x in v)
        cfg[k] = str(v)
    return json.loads(_hypolab.run_experiment_json(name, cfg))


def verify_report(report):
    """(consistent, pass, messages) for a report dict or JSON text."""
    text = report if isinstance(report, str) else json.dumps(report)
    return _hypolab.verify_report_json(text)
