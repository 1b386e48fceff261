"""Exact computations around modified Macdonald polynomials and the HLV kernel.

Modules:

* ``scalars``: rational functions in q, t, s, u and sigma_i
* ``partitions``: partitions, hooks, z_lambda(q, t)
* ``symfunc``: symmetric functions, plethysm, pExp and pLog
* ``macdonald``: H~_lambda from its triangularity axioms
* ``hlv``: the HLV kernel, its logarithm and Poincare polynomials
* ``seriesalg``: matrices over F_p[[x]], normal forms and nilpotent classification
* ``oracle``: brute-force finite-field counts
* ``cli``: the ``hlvkit`` command
"""

from .scalars import Scalar, S, q, t, s, u, sigma
from .partitions import Partition, enumerate_partitions, z_qt, N_u
from .symfunc import SymFunc, MultiSymSeries, AlphabetExpr, m, h, e, p, schur, plethysm, pexp, plog, hall_pair, qt_pair
from .macdonald import macdonald_htilde, hall_littlewood, flag_count_poly, verify_macdonald_axioms
from .hlv import CurveData, ParabolicData, hlv_kernel, hlv_H, dim_moduli, poincare_polynomial, springer_count

__version__ = "0.1.0"
