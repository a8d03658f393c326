"""Exception taxonomy shared across the package.

Validation errors (bad inputs, unsatisfiable requests) carry exit code 2;
internal-check errors (broken invariants that should never fire) carry 3.
The CLI maps exceptions to exit codes through ``exit_code``.
"""


class NilgraphError(Exception):
    exit_code = 2


class CapExceeded(NilgraphError):
    """Group closure exceeded the configured element cap."""


class SubgroupError(NilgraphError):
    """Claimed subgroup generators do not live in the ambient group."""


class GeneratorSystemError(NilgraphError):
    pass


class IdentityInGenerators(GeneratorSystemError):
    pass


class InvolutionInGenerators(GeneratorSystemError):
    pass


class DuplicateGenerator(GeneratorSystemError):
    """Two chosen generators coincide or are mutually inverse."""


class GeneratorsDoNotGenerate(GeneratorSystemError):
    pass


class NoAdmissibleLabel(NilgraphError):
    """Three-step extension requested but the graph admits none."""


class AllZeroTAssignment(NilgraphError):
    pass


class TAssignmentSpanError(NilgraphError):
    """Assigned t-vectors do not span the declared t-space."""


class IndexMismatch(NilgraphError):
    """Subgroup indices differ, so no intertwiner can exist."""


class NoOrthogonalElement(NilgraphError):
    """The intertwiner space contains no orthogonal map."""


class GradingMismatch(NilgraphError):
    """Intrinsic grading disagrees with the basis block layout."""


class SpecError(NilgraphError):
    """Problem-spec parse/validation failure with a located field."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class InternalCheckError(NilgraphError):
    exit_code = 3


class AdjointMismatch(InternalCheckError):
    """Graph-formula and adjoint-definition j-operators disagree."""


class IsometryCheckFailed(InternalCheckError):
    """An extended map failed the exact isometry verification."""
