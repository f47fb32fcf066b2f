class InternalInconsistency(RuntimeError):
    """A computed configuration contradicts a structural result the code relies on."""


class TheoremViolation(AssertionError):
    """A census tally disagrees with its closed form."""

    def __init__(self, name: str, expected, observed):
        super().__init__(f"{name}: expected {expected}, observed {observed}")
        self.name = name
        self.expected = expected
        self.observed = observed
