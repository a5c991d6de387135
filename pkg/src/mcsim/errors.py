"""Exception types shared across the package."""


class McsimError(Exception):
    """Base class for all mcsim errors."""


class InvalidParameterError(McsimError):
    """A physical parameter or argument is out of its admissible range."""


class StrokeRangeError(McsimError):
    """Stroke would drive the main chamber volume to zero or below."""


class SimulationDivergedError(McsimError):
    """The plant state left the sane region (NaN or small-angle bound)."""


class ScenarioError(McsimError):
    """Malformed scenario definition (overlaps, bad durations, bounds)."""


class ConfigError(McsimError):
    """Malformed or inconsistent configuration file."""


class PhaseTooShortError(McsimError):
    """A labeled phase is too short for steady-state evaluation."""
