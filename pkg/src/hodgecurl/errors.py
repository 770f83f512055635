"""Exception hierarchy shared by all modules."""


class HodgeCurlError(Exception):
    """Base class for every error raised by the package."""


class MeshError(HodgeCurlError):
    pass


class NonManifold(MeshError):
    pass


class DegenerateTet(MeshError):
    pass


class ParseError(MeshError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class HomologyError(HodgeCurlError):
    pass


class NotClosedSurface(HomologyError):
    pass


class OpenChain(HomologyError):
    pass


class SingularPairing(HomologyError):
    pass


class HodgeError(HodgeCurlError):
    pass


class SolverFailure(HodgeError):
    pass


class DimensionMismatch(HodgeError):
    pass


class SingularPeriods(HodgeError):
    pass


class SizeMismatch(HodgeError):
    pass


class SymplecticError(HodgeCurlError):
    pass


class DegeneratePairing(SymplecticError):
    pass


class BadPartition(SymplecticError):
    pass


class SpectralError(HodgeCurlError):
    pass


class InvalidLagrangian(SpectralError):
    pass


class IndefiniteMass(SpectralError):
    pass


class EigenSolverFailure(SpectralError):
    pass
