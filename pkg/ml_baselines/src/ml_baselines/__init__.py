"""Heavyweight regression baselines scored against breadsched benchmark files."""

from .runner import BaselineJob, JobError, run_baselines

__all__ = ["BaselineJob", "JobError", "run_baselines"]
