"""Exception hierarchy shared across the package.

Everything raised on purpose derives from LandscaperError so callers can
catch one type at the boundary.  Input problems (bad text, bad graphs, bad
layouts) are kept distinct from infrastructure problems (endpoints, render
backends, storage) because the CLI maps them to different exit codes.
"""

from __future__ import annotations


class LandscaperError(Exception):
    """Base class for all errors raised by this package."""


# -- input / validation problems ------------------------------------------


class MalformedTriple(LandscaperError):
    """A relation triple could not be parsed from text."""


class UnknownRelation(LandscaperError):
    """A relation word is not one of the six supported kinds."""


class GraphInvariantError(LandscaperError):
    """A scene graph violates a structural invariant."""


class CyclicDepth(GraphInvariantError):
    """Depth relations form a cycle, so no front-to-back order exists."""


class MalformedTuple(LandscaperError):
    """A layout tuple could not be parsed from text."""


class LayoutInvariantError(LandscaperError):
    """A layout violates a structural invariant."""


class NonPositiveExtent(LayoutInvariantError):
    """A box has zero or negative width or height."""


class OutOfCanvas(LayoutInvariantError):
    """A box does not lie fully inside the canvas."""


class UnknownSpecies(LandscaperError):
    """A species is missing from the plant knowledge base."""


class Unsatisfiable(LandscaperError):
    """No placement satisfying every relation was found."""


class NameMismatch(LandscaperError):
    """Layout element names and graph node ids do not match one to one."""


class DimensionMismatch(LandscaperError):
    """Two images that must share a shape do not."""


class TooFewImages(LandscaperError):
    """A group statistic needs at least two images."""


class SessionStateError(LandscaperError):
    """A session operation was attempted before its inputs exist."""


class SessionNotFound(LandscaperError):
    """No session exists under the given id."""


class ConfigError(LandscaperError):
    """A configuration file is missing, unreadable, or inconsistent."""


# -- infrastructure problems ----------------------------------------------


class EndpointError(LandscaperError):
    """The language-model endpoint failed or a fixture was missing."""


class ParseFailedAfterRetry(LandscaperError):
    """Both the first response and the retry were unusable.

    Carries the raw response texts so callers can log or display them.
    """

    def __init__(self, message: str, raw_responses: list[str]):
        super().__init__(message)
        self.raw_responses = list(raw_responses)


class BackendError(LandscaperError):
    """A render backend failed; `step` names the stage that failed."""

    def __init__(self, step: str, message: str):
        super().__init__(f"{step}: {message}")
        self.step = step


class MaskEmpty(LandscaperError):
    """An instance image produced an all-background mask."""


class StorageError(LandscaperError):
    """Session or image persistence failed."""


# Families used by the CLI to pick exit codes.
VALIDATION_ERRORS = (
    MalformedTriple,
    UnknownRelation,
    GraphInvariantError,
    MalformedTuple,
    LayoutInvariantError,
    UnknownSpecies,
    Unsatisfiable,
    NameMismatch,
    DimensionMismatch,
    TooFewImages,
    SessionStateError,
    SessionNotFound,
    ConfigError,
)

INFRASTRUCTURE_ERRORS = (
    EndpointError,
    ParseFailedAfterRetry,
    BackendError,
    MaskEmpty,
    StorageError,
)
