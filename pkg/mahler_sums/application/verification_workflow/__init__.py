"""Verification workflow module."""

from mahler_sums.application.verification_workflow.graph import create_verification_workflow

__all__ = ["create_verification_workflow"]
