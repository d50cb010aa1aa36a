"""Figure generation for symnls benchmark CSVs.

This package consumes only the published CSV schema
(study,scheme,boundary,d,K,alpha,seed,tau,t,metric,value); it performs no
numerics beyond axis transforms, and every annotated number is read from the
CSV itself.
"""

__version__ = "0.1.0"

from .figures import (  # noqa: F401
    PALETTE,
    SchemaError,
    plot_conservation,
    plot_convergence,
    plot_timing,
)
