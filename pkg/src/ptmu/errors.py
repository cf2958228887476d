"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can
embed it in reports without parsing messages.
"""


class PtmuError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def __init__(self, msg, **context):
        super().__init__(msg)
        self.context = context


class OnSingularSupport(PtmuError):
    code = "on-singular-support"


class NonIntegrableLog(PtmuError):
    code = "non-integrable-log"


class QuadratureNotConverged(PtmuError):
    code = "quadrature-not-converged"


class NodeCollision(PtmuError):
    code = "node-collision"


class SupportCollision(PtmuError):
    code = "support-collision"


class NonPSD(PtmuError):
    code = "non-psd"


class InsufficientDecay(PtmuError):
    code = "insufficient-decay"


class GridTooCoarse(PtmuError):
    code = "grid-too-coarse"


class InsufficientPieces(PtmuError):
    code = "insufficient-pieces"


class SolverError(PtmuError):
    """Linear solve failed; ``context['degree']`` names the failing degree."""

    code = "solver-error"


class Unsupported(PtmuError):
    code = "unsupported"
