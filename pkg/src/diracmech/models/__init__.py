"""Built-in systems: the planar constrained toy model, the relativistic
point particle, and abelian gauge fields on a periodic lattice."""

from .klauder import KlauderModel, KRamp, RadialPotential
from .maxwell import LatticeMaxwell
from .particle import RelativisticParticle

__all__ = ["KlauderModel", "KRamp", "RadialPotential", "LatticeMaxwell",
           "RelativisticParticle"]
