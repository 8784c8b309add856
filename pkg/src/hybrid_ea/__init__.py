"""Hybrid/mixed-strategy evolutionary algorithms with schema and drift bounds.

Subpackages and modules:

* :mod:`hybrid_ea.engine` - the generic recombination/mutation/selection loop
* :mod:`hybrid_ea.schema` - schema survival probabilities and tail bounds
* :mod:`hybrid_ea.drift` - variable-drift runtime bounds, hitting-time oracle
* :mod:`hybrid_ea.scheduling` - the single-machine scheduling instantiation
* :mod:`hybrid_ea.exact` - brute-force optimum for small instances
* :mod:`hybrid_ea.harness` / :mod:`hybrid_ea.cli` - experiments and CLI
"""

__version__ = "0.1.0"
