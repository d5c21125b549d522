class SemirankError(Exception):
    pass


class ConfigError(SemirankError, ValueError):
    r"""
    Overview:
        Invalid parameters, config files or mismatched dimensions. Mapped to CLI exit code 1.
    """
    pass


class GraphFormatError(ConfigError):

    def __init__(self, path: str, line: int, reason: str) -> None:
        self.path = path
        self.line = line
        self.reason = reason
        super().__init__('{}:{}: {}'.format(path, line, reason))


class InstanceTooLargeError(ConfigError):
    pass


class SolverError(SemirankError, RuntimeError):
    r"""
    Overview:
        Numerical failure of a solver. Mapped to CLI exit code 2.
    """
    pass


class DisconnectedGraphError(SolverError):

    def __init__(self, component, message: str = None) -> None:
        self.component = sorted(int(v) for v in component)
        if message is None:
            preview = self.component[:10]
            suffix = ', ...' if len(self.component) > 10 else ''
            message = 'graph is disconnected; component of size {}: {{{}{}}}'.format(
                len(self.component), ', '.join(str(v) for v in preview), suffix
            )
        super().__init__(message)


class DivergenceError(SolverError):
    pass


class ExpActionError(SolverError):
    pass


class OracleError(SolverError):
    pass
