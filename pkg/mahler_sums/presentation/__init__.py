"""Presentation layer: command line interface and terminal rendering."""
