"""Matrix verification of Casimir spectra for the U(1,4) phase-space algebra."""

__version__ = "0.1.0"
