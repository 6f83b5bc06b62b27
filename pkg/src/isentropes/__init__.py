"""Topological entropy of boundary-anchored multimodal interval maps."""
__version__ = "0.1.0"
