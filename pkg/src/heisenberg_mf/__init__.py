"""Mean-field quantum Heisenberg ferromagnet through symmetric-group representation theory.

Submodules: ``young`` (diagrams and border strips), ``symfunc`` (symmetric
polynomials), ``repnum`` (dimensions, eigenvalues, characters), ``meanfield``
(closed forms, exact and floating), ``oracles`` (independent ground truths) and
``cli``.
"""

__version__ = "0.1.0"
