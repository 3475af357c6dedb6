"""Stylometric features and classifiers for telling human-written from AI-generated news."""
__version__ = "0.1.0"
