"""
Error types for the fixed point index engine
Every error carries the exit code the command line front end reports
"""

import config


class TopologyError(Exception):
    """Base class for all engine errors"""

    exit_code = config.EXIT_INPUT

    def __init__(self, message, details=None):
        super().__init__(message)
        self.message = message
        self.details = details if details is not None else {}

    def to_dict(self):
        """Structured form used in CLI error output"""
        return {'error': type(self).__name__, 'message': self.message,
                'code': self.exit_code, 'details': self.details}


class InputError(TopologyError):
    exit_code = config.EXIT_INPUT


class MalformedSimplexError(InputError):
    pass


class MalformedSubcomplexError(InputError):
    pass


class NotFoundError(InputError):
    pass


class ShapeError(InputError):
    pass


class PreconditionError(InputError):
    pass


class NotARefinementError(InputError):
    pass


class LevelMismatchError(InputError):
    pass


class RetractionError(InputError):
    pass


class ParseError(TopologyError):
    """Malformed input file; line is 1-based"""

    exit_code = config.EXIT_PARSE

    def __init__(self, message, path=None, line=None):
        where = f"{path or '<input>'}:{line}" if line is not None else (path or '<input>')
        super().__init__(f"{where}: {message}", {'path': path, 'line': line})
        self.path = path
        self.line = line


class InadmissibleError(TopologyError):
    exit_code = config.EXIT_INADMISSIBLE

    def __init__(self, message, report=None):
        details = report.to_dict() if report is not None else {}
        super().__init__(message, details)
        self.report = report


class AcyclicityError(TopologyError):
    """A cycle could not be filled inside a carrier value"""

    exit_code = config.EXIT_ACYCLICITY

    def __init__(self, message, simplex=None, obstruction=None):
        details = {}
        if simplex is not None:
            details['simplex'] = list(simplex)
        if obstruction is not None:
            details['obstruction'] = obstruction
        super().__init__(message, details)
        self.simplex = simplex
        self.obstruction = obstruction


class ResolutionExhaustedError(TopologyError):
    exit_code = config.EXIT_RESOLUTION


class InvariantError(TopologyError):
    """An internal consistency check failed (a bug, not bad input)"""

    exit_code = config.EXIT_INTERNAL
