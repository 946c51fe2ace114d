"""Main entry point for the mahler-sums command line."""

from mahler_sums.presentation.cli import app

if __name__ == "__main__":
    app()
