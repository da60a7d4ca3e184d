"""Exception hierarchy.

Every error that carries a counterexample stores it in ``witness`` so that
callers (and the CLI) can print it without parsing the message.
"""


class RefmonError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidTable(RefmonError):
    pass


class NotCommutative(InvalidTable):
    pass


class NotAssociative(InvalidTable):
    pass


class NoIdentityAtZero(InvalidTable):
    pass


class NotSemilattice(InvalidTable):
    pass


class SizeLimitExceeded(RefmonError):
    pass


class RefinementPreconditionError(RefmonError):
    pass


class NotHomomorphism(RefmonError):
    pass


class NotDistributive(RefmonError):
    pass


class ParentMismatch(RefmonError):
    pass


class NotPure(RefmonError):
    pass


class NotDirectSum(RefmonError):
    pass


class NotRegular(RefmonError):
    pass


class EmbRequired(RefmonError):
    pass


class InvalidTriple(RefmonError):
    pass


class NotInRep(RefmonError):
    pass


class DecompositionFailure(RefmonError):
    pass


class InvalidCertificate(RefmonError):
    pass


class NotOrderUnit(RefmonError):
    pass


class ClaimFailure(RefmonError):
    """A step that the construction guarantees did not hold (library bug)."""


class InternalInconsistency(RefmonError):
    """Two independent decision routes disagreed (library bug)."""
