"""Computational toolkit for contact structures on circle bundles over surfaces.

The package is organised around five independent engines plus a CLI:

* `circle_dynamics` -- lifts of circle homeomorphisms: displacement bounds,
  translation numbers, holonomy relators, Euler numbers from pairs of lifts.
* `hyperbolic` -- symmetric polygons in the Poincare disk, side-pairing
  isometries, commutator products and their boundary dynamics.
* `formcalc` -- a small symbolic engine for differential 1-forms: parser,
  exterior derivative, contact-sign grids, pullbacks, the model-form catalog.
* `classify` -- the integer existence / counting / bound formulas, and the
  brute-force cohomology orbit oracle.
* `multicurve` -- multicurves on surfaces encoded by complement
  decompositions; tightness criteria and torus intersection numbers.
"""

__version__ = "0.1.0"

from . import circle_dynamics, classify, hyperbolic, multicurve  # noqa: F401
from . import formcalc  # noqa: F401
