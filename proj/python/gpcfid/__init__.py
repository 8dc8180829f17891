"""Generalized Pauli channels: closed-form fidelities and output norms with brute-force checks."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
