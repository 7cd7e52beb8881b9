"""Shared exception types.

Exit-code mapping used by the CLI: parse/ingest/I-O problems are input
errors (exit 1), DomainError and subclasses are domain errors (exit 2),
verification failures are reported by return value (exit 3).
"""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NonLoxodromicError(DomainError):
    """An operation requiring a loxodromic element got something else."""


class ParseError(ValueError):
    """A structured input file could not be parsed; message carries the line."""


class IngestError(ValueError):
    """A dataset failed validation; carries per-row diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))
