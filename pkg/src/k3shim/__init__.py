"""Elliptic K3 surfaces, Shimura-curve CM points and their exact verification."""
__version__ = "0.1.0"
