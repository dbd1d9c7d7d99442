"""tetradkit: numerical engine for tetrad gravity with Clifford/spin structure.

Subpackages by capability:

- ``exprs``        chart expression DSL + exact second-order Taylor derivatives
- ``clifford``     real/complex Clifford algebras on blade coefficients
- ``spin``         matrix representations, gamma matrices, Pin/Spin versors
- ``charts``       charts, jets of declared fields, tensor values
- ``gravity``      connection decomposition, curvature, field equations
- ``dirac``        Lorentz/spin connections and the Dirac operator
- ``conservation`` momenta, energy-momentum current, Komar superpotential
- ``chartfile``    the chart-definition file format
- ``cli``          command-line interface
"""

__version__ = "0.1.0"
