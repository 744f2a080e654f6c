"""Degree-2 K3 surfaces from cubic fourfolds containing a plane: point counts
over finite fields, Picard rank certificates and a Brauer-Manin obstruction
to weak approximation."""

__version__ = "0.1.0"
