"""
Exception hierarchy for the QuotaMatch toolkit.

Why:
    Callers (the CLI in particular) map failures to exit codes, so every
    failure mode gets its own type. Errors that mirror builtin categories
    also inherit the builtin so generic handlers keep working.
"""


class QuotaMatchError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(QuotaMatchError):
    """A document is missing a field or has the wrong shape."""


class InstanceValueError(QuotaMatchError, ValueError):
    """A document is well-shaped but carries an invalid value."""


class UnknownAgentError(QuotaMatchError, ReferenceError):
    """A worker or firm identifier is not declared by the instance."""


class ModeError(QuotaMatchError):
    """The operation is not defined for the instance's preference mode."""


class UnknownSetError(QuotaMatchError, KeyError):
    """A General-mode valuation table has no entry for a worker set."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class CapExceeded(QuotaMatchError):
    """An enumeration would exceed its configured cap."""


class DimensionMismatch(QuotaMatchError, ValueError):
    """An LP row does not have the same dimension as the objective."""


class StatusError(QuotaMatchError):
    """An LP solution does not have the status the operation requires."""


class LowerBoundPresent(QuotaMatchError):
    """The upper-bound LP was requested for an instance with lower quotas."""


class MismatchError(QuotaMatchError):
    """A payoff vector is inconsistent with the assignment it should support."""


class NoFeasibleAssignment(QuotaMatchError):
    """No assignment satisfies the firms' hiring constraints."""


class MultiFirm(QuotaMatchError):
    """A one-firm construction was asked to handle several firms."""


class PreconditionError(QuotaMatchError, ValueError):
    """Arguments violate a documented precondition."""


class UnknownFixture(QuotaMatchError, KeyError):
    """The fixture registry has no entry with the requested name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class SettingsError(QuotaMatchError, ValueError):
    """A settings file entry is unknown or out of range."""
