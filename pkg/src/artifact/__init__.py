"""Cylindrical bending of generalized continua."""
