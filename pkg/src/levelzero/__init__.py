"""Exact character-theoretic toolkit for GL_n over Z/p^m.

Modules:
  cyclotomic  exact arithmetic in Q(zeta_e)
  modlinalg   linear algebra mod a prime (numpy backend)
  ringmat     matrices over Z/p^m, group enumeration, subgroup handles
  chartheory  conjugacy classes, class functions, character tables
  glnfq       residue-field representation theory (induction ring, derivatives)
  typicality  level-zero inertial classes, Clifford orbits, theorem verifiers
  cli         command-line front end
"""

__version__ = "0.1.0"
