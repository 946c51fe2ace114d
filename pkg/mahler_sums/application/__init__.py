"""Application layer: series evaluation, classification and relation finding."""
