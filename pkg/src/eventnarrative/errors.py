"""Exception types shared across the pipeline."""
from __future__ import annotations


class PipelineError(Exception):
    """Base class for every error raised by this package."""


# ingest
class MalformedFeed(PipelineError):
    pass


class EmptyBody(PipelineError):
    pass


class IoFailure(PipelineError):
    pass


class CorruptRecord(PipelineError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


# extraction
class UnbalancedQuotes(PipelineError):
    def __init__(self, paragraph: int, count: int):
        super().__init__(f"paragraph {paragraph}: odd number of quotation marks ({count})")
        self.paragraph = paragraph
        self.count = count


class RemoteHookError(PipelineError):
    pass


# graph
class UnknownArticle(PipelineError):
    pass


class TurtleSyntax(PipelineError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


# query
class QuerySyntax(PipelineError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnsupportedFeature(PipelineError):
    def __init__(self, feature: str):
        super().__init__(f"unsupported SPARQL feature: {feature}")
        self.feature = feature


class UnboundFilterVariable(PipelineError):
    pass


class InvalidRegex(PipelineError):
    pass


# generation
class EmptyRetrieval(PipelineError):
    pass


class EmptySection(PipelineError):
    pass


class BackendError(PipelineError):
    pass


class BackendTimeout(BackendError):
    pass


class BackendHttp(BackendError):
    def __init__(self, status: int, body: str = ""):
        super().__init__(f"backend returned HTTP {status}")
        self.status = status
        self.body = body


class CapUnsatisfiable(PipelineError):
    pass


# evaluation
class LabelOutsideSet(PipelineError):
    pass


class ScoreOutOfRange(PipelineError):
    pass


class ConfigError(PipelineError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems
