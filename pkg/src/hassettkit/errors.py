"""Exception types shared by the lattice, enumeration and arithmetic layers."""


class LatticeError(Exception):
    """Base class for every error raised by hassettkit."""


class NotSymmetric(LatticeError, ValueError):
    pass


class InvalidGram(LatticeError, ValueError):
    """Malformed Gram input (non-square, non-integer entries, bad rank field)."""


class NotPositiveDefinite(LatticeError, ValueError):
    def __init__(self, pivot, message=None):
        self.pivot = pivot
        super().__init__(message or f"matrix is not positive-definite (pivot {pivot})")


class LatticeOverflow(LatticeError, OverflowError):
    pass


class Singular(LatticeError, ValueError):
    pass


class NotDistinguished(LatticeError, ValueError):
    pass


class NotInHassett(LatticeError, ValueError):
    def __init__(self, d):
        self.d = d
        super().__init__(f"{d} is not in the Hassett set (need d > 6, d = 0,2 mod 6)")


class NotSupportedInH(LatticeError, ValueError):
    """The form takes a value outside the Hassett set; ``witness`` exhibits it."""

    def __init__(self, witness, value, reason=""):
        self.witness = tuple(witness)
        self.value = value
        msg = f"form value {value} at {self.witness} is not in the Hassett set"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class RankOutOfRange(LatticeError, ValueError):
    pass


class MissingDiscriminants(LatticeError):
    def __init__(self, missing, bound):
        self.missing = sorted(missing)
        self.bound = bound
        head = ", ".join(map(str, self.missing[:20]))
        more = "" if len(self.missing) <= 20 else ", ..."
        super().__init__(
            f"{len(self.missing)} Hassett discriminants up to {bound} have no primitive witness: {head}{more}"
        )


class ProofModeUnavailable(LatticeError, ValueError):
    pass


class NotRepresentable(LatticeError, ValueError):
    pass


class OnlyTrivial(LatticeError, ValueError):
    pass


class NotDivisibleBy5(LatticeError, ValueError):
    pass


class NotApplicable(LatticeError, ValueError):
    pass


class ValueMismatch(LatticeError, ValueError):
    pass


class NotFound(LatticeError):
    pass


class InternalContradiction(LatticeError, AssertionError):
    """A constructive step found no admissible choice. Always a bug."""
