"""Critical loci of multiview reconstruction problems as determinantal ideals."""

__version__ = "0.1.0"
