class ArcImagingError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ConfigurationError(ArcImagingError):
    pass


class PreconditionError(ArcImagingError, ValueError):
    pass


class DomainError(ArcImagingError, ValueError):
    pass


class SingularKernelError(DomainError):
    pass


class SolverError(ArcImagingError):
    def __init__(self, condition: float, nodes: int, limit: float):
        super().__init__(
            f"Discretized boundary integral system is singular: condition number {condition:.3e} "
            f"exceeds {limit:.1e} at {nodes} nodes"
        )
        self.condition = condition
        self.nodes = nodes


class DecompositionError(ArcImagingError):
    pass


class RankSelectionError(ConfigurationError):
    pass


class QuadratureError(ArcImagingError):
    pass


class ArtifactError(ArcImagingError):
    pass
