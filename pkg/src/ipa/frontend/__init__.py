"""Model files and the command-line interface."""

from .modelfile import ModelFile, load_model, parse_model, parse_substitutions, render_model

__all__ = ["ModelFile", "load_model", "parse_model", "parse_substitutions", "render_model"]
