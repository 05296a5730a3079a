"""Renderer error types."""


class RenderError(Exception):
    """Base class for renderer failures."""


class SpecError(RenderError):
    """The figure spec is malformed."""


class MissingColumnError(RenderError):
    """A required CSV column is absent; carries the column name."""

    def __init__(self, column: str, path=None):
        self.column = column
        where = f" in {path}" if path else ""
        super().__init__(f"required column {column!r} is missing{where}")


class EmptyDatasetError(RenderError):
    """The CSV holds no usable rows for the requested figure."""
