"""Exception hierarchy shared by all modules.

Every error raised on bad input derives from :class:`RainbowError`, which the
CLI maps to exit code 2.
"""


class RainbowError(ValueError):
    """Base class for input and precondition errors."""


class SelfLoop(RainbowError):
    def __init__(self, u: int):
        super().__init__(f"self-loop at vertex {u}")
        self.u = u


class DuplicatePair(RainbowError):
    def __init__(self, u: int, v: int):
        super().__init__(f"vertex pair {{{u}, {v}}} appears more than once")
        self.u, self.v = u, v


class VertexOutOfRange(RainbowError):
    def __init__(self, v: int, n: int):
        super().__init__(f"vertex {v} out of range for n={n}")
        self.v, self.n = v, n


class ParseError(RainbowError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InstanceTooLarge(RainbowError):
    pass


class NoRainbowTriangle(RainbowError):
    def __init__(self, message: str = "no rainbow triangles"):
        super().__init__(message)


class SupportTooLarge(InstanceTooLarge):
    pass


class NotInDomain(RainbowError):
    pass


class NotInImage(RainbowError):
    pass
