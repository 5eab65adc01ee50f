class ScidivError(Exception):
    """Base class for all library errors."""


class InputError(ScidivError, ValueError):
    """Bad user input: malformed files, invalid parameters, missing data.

    The CLI maps this to exit code 2.
    """


class FormatError(InputError):
    """A file failed to parse. ``line`` is 1-based when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class UndefinedSimilarityError(InputError):
    """Cosine similarity requested for an all-zero vector."""

    def __init__(self, categories):
        self.categories = tuple(categories)
        super().__init__(
            "cosine similarity undefined for all-zero citation vector(s): "
            + ", ".join(map(str, self.categories))
        )


class UnmappedCategoryError(InputError):
    """Subject categories absent from the basemap or distance matrix."""

    def __init__(self, categories, org_id=None):
        self.categories = tuple(sorted(categories))
        self.org_id = org_id
        who = f"{org_id}: " if org_id is not None else ""
        super().__init__(
            f"{who}subject categories not on the basemap: " + ", ".join(self.categories)
        )


class InvariantError(ScidivError):
    """An internal invariant was violated (CLI exit code 3)."""
