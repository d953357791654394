"""Size guards shared by the long-running searches."""


class GuardExceeded(ValueError):
    """A search would exceed its configured size limit."""
