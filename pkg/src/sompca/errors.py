"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Array shapes are incompatible with the requested operation."""


class FeasibilityError(ValueError):
    """A constrained solve has no feasible unit direction left."""


class FeatureBoundError(ValueError):
    """More features were requested than the variant can extract."""

    def __init__(self, requested, bound, variant):
        self.requested = requested
        self.bound = bound
        self.variant = variant
        super().__init__(
            f"{variant} can extract at most max_features={bound} features, {requested} requested"
        )


class MalformedFileError(ValueError):
    """A dataset or model file does not match its declared format."""
