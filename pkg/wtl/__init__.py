"""
Contour tracing swarms that turn a soft object-contour map into a
closed, 1 pixel wide object contour, plus the tooling to train, run and evaluate them.
"""

__version__ = "0.1.0"
