"""Binary classifier training over the exported body-map dataset layout."""

__version__ = "0.1.0"
