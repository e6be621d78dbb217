"""Exception hierarchy.

``ConsistencyError`` is reserved for failed internal invariants (oracle
mismatch, transcription bugs); the CLI maps it to exit code 3 and reports
its ``invariant`` name.  Bad user input raises ``ValueError`` subclasses.
"""


class FlagrockError(Exception):
    pass


class InvalidParabolicError(FlagrockError, ValueError):
    pass


class InvalidFormError(FlagrockError, ValueError):
    pass


class UnsupportedFormError(FlagrockError, ValueError):
    pass


class NoFiberRootsError(FlagrockError, ValueError):
    pass


class HypothesisFailedError(FlagrockError):
    pass


class ZeroVectorCollapseError(FlagrockError):
    pass


class ConsistencyError(FlagrockError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)


class UniquenessViolation(ConsistencyError):
    def __init__(self, detail: str = ""):
        super().__init__("orthogonal-sequence-uniqueness", detail)
