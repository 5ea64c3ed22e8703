"""
Orchestration of the contour pipeline stages.
"""

from .workflow import ContourWorkflow, PipelineResult

__all__ = ["ContourWorkflow", "PipelineResult"]
