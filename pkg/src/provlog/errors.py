"""Exception types shared across the package."""


class ProvlogError(Exception):
    """Base class for all provlog errors."""


class DatalogSyntaxError(ProvlogError):
    """Raised on malformed program or database text; carries a position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.line = line
        self.column = column


class ArityError(ProvlogError):
    """A predicate is used with two different arities."""


class HeadVariableError(ProvlogError):
    """A rule head contains a variable that does not occur in the body."""


class ZeroAnnotationError(ProvlogError):
    """A database fact is annotated with the semiring zero."""


class DuplicateFactError(ProvlogError):
    """The same fact is listed twice in a database."""


class SizeLimitError(ProvlogError):
    """A grounding exceeded the configured instantiation cap."""


class AxiomViolation(ProvlogError):
    """A semiring law failed; carries the law name and a witness tuple."""

    def __init__(self, law: str, witness: tuple):
        super().__init__(f"{law} violated at {witness!r}")
        self.law = law
        self.witness = witness


class MalformedSpec(ProvlogError):
    """A table-semiring document is structurally invalid."""


class UnboundVariable(ProvlogError):
    """A valuation or circuit leaf refers to a variable with no binding."""


class InfiniteCoefficientInNonContinuousTarget(ProvlogError):
    """An infinite coefficient cannot be evaluated into the target semiring."""


class UnannotatedLeaf(ProvlogError):
    """A derivation-tree leaf has no annotation."""


class DepthCapRequired(ProvlogError):
    """Enumerating all trees of a recursive program needs a depth cap."""


class SemiringMismatch(ProvlogError):
    """Two annotated interpretations use different semirings."""


class DivergenceError(ProvlogError):
    """A fixpoint computation failed to stabilize within its cap."""


class NotOmegaContinuousWarning(UserWarning):
    """The semiring lacks the flag that guarantees fixpoint convergence."""


class UnsupportedSemiring(ProvlogError):
    """The requested semantics is not defined on this semiring."""


class NotEntailed(ProvlogError):
    """The operation requires an entailed fact."""


class TermExplosion(ProvlogError):
    """Expanding a circuit exceeded the term or degree cap."""


class MatrixMismatch(ProvlogError):
    """The property matrix diverged from its expected verdicts."""

    def __init__(self, cells: list):
        lines = "; ".join(str(c) for c in cells)
        super().__init__(f"property matrix mismatch: {lines}")
        self.cells = cells
