"""
QuotaMatch: stable arrangements for many-to-one matching markets with
transfers and hiring quotas, computed and certified in exact arithmetic.
"""
__version__ = "1.0.1"
__author__ = "QuotaMatch Project"
__licence__ = "MIT"

# Instance, arrangement and certificate documents all carry this version.
DOCUMENT_VERSION = 1

VERSION_INFO = {
    "major": 1,
    "minor": 0,
    "patch": 1,
    "release": "stable",
    "build_date": "2026-10-19",
    "document_version": DOCUMENT_VERSION,
}


def get_version() -> str:
    """Package version, "major.minor.patch".

    Example:
        >>> get_version()
        '1.0.1'
    """
    return __version__


def get_version_info() -> dict:
    """Version components plus the document format version; a fresh copy per call."""
    return dict(VERSION_INFO)


def version_banner() -> str:
    """One-line banner printed by `python -m cli --version`."""
    return f"quotamatch {__version__} (documents v{DOCUMENT_VERSION})"
