"""Texture classification with GLCM and histogram features and classifier ensembles."""

__version__ = "0.1.0"
