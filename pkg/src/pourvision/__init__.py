"""Desk-scale workbench for liquid detection and tracking.

Subpackages: nn (layer library), arch (network layouts and training),
simgen (pouring simulator, renderer and labeler), eval (slack-pixel
precision/recall), plus the command-line front end in pourvision.cli.
"""
__version__ = "0.1.0"
