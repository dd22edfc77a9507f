"""
Zero-energy states of the massless Dirac equation with a hyperbolic scalar
potential, and their Wronskian (Darboux) partners.

Modules:

- ``jetcalc``: truncated Taylor jets and terminating Gauss 2F1 in jet arithmetic
- ``diracmodel``: the initial potential, its solutions and quantization rule
- ``susyengine``: Wronskian transformations, the partner potential ``U`` and
  its reality test
- ``verifier``: residuals, decay, density normalization and peak counting
- ``cli``: scenario configs, the built-in catalog and the ``susy-dirac`` command
"""

from . import cli, diracmodel, jetcalc, susyengine, verifier
from .diracmodel import ModeIndex, SystemParams
from .errors import *  # noqa: F401,F403
from .jetcalc import HypergeometricParams, Jet, jet_variable
from .susyengine import General, Nonregular, Regular, TransformationSpec, ZeroMode, evaluate, reality_report

__version__ = "0.1.0"
