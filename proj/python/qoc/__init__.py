"""Gate synthesis by commutator-corrected gradient flow.

Thin wrapper over the C++ core; matrices are numpy complex arrays and control
amplitudes are (n_controls, n_slices) float arrays.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
