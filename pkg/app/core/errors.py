class TorusInvError(Exception):
    """Base class of every error raised by the kernels and the CLI."""


# ----- input / CLI -----
class InputError(TorusInvError):
    pass


class InputParseError(InputError):
    pass


class SchemaMismatch(InputError):
    pass


# ----- exact-core -----
class NotSquarefree(TorusInvError):
    pass


class DegenerateTraceForm(TorusInvError):
    pass


class SingularMatrix(TorusInvError):
    pass


class NumericallyIndeterminate(TorusInvError):
    pass


# ----- perms -----
class NotSemiMagic(TorusInvError):
    pass


class NotAGroup(TorusInvError):
    pass


# ----- generators / relations -----
class BadIdempotents(TorusInvError):
    pass


class DegreeTooLarge(TorusInvError):
    pass


# ----- tori-galois -----
class RepeatedRoots(TorusInvError):
    pass


class RootResidualTooLarge(TorusInvError):
    pass


class GaloisSpecRequired(TorusInvError):
    pass


class GaloisSpecInvalid(TorusInvError):
    pass


class TauNotInGalois(TorusInvError):
    pass


class ReconstructionFailed(TorusInvError):
    pass


class PreconditionsFailed(TorusInvError):
    pass


# ----- discriminants -----
class NotAnOrder(TorusInvError):
    pass


class DegenerateQ(TorusInvError):
    pass


class NotHermitian(TorusInvError):
    pass


class NotPositive(TorusInvError):
    pass


# ----- entropy / packets -----
class ZeroEntropy(TorusInvError):
    pass


class DegenerateForm(TorusInvError):
    pass


class DNotSquarefree(TorusInvError):
    pass
