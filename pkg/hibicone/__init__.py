"""Conic divisorial classes, F-signatures and NCCR mutations of Hibi rings."""
from hibicone.errors import ErrorSeverity, HibiError
from hibicone.poset import AugmentedPoset, Poset, augment, parse_poset

__version__ = "0.1.0"
