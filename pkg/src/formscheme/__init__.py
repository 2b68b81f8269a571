"""Association schemes of quadratic and symmetric bilinear forms over finite fields.

Exact P- and Q-numbers, inner distributions, maximal d-codes and designs,
and the classical codes built from cosets of the first-order Reed-Muller
code.
"""

__all__ = [
    "gf",
    "qnum",
    "forms",
    "scheme",
    "codesets",
    "construct",
    "rmcodes",
    "ingest",
    "report",
    "verify",
    "config",
    "errors",
]
