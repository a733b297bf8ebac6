"""Exception hierarchy shared by every module."""


class ContactRedError(Exception):
    """Base class for all package errors."""


class InputError(ContactRedError):
    """Malformed input: bad expression, unknown chart, unbound coordinate."""


class DegenerateDivision(ContactRedError):
    """Division by an expression whose canonical form is zero."""


class NotContact(ContactRedError):
    """The 1-form fails the contact condition."""


class NotContactType(ContactRedError):
    """The Jacobi structure is not of contact type."""


class NotLcsType(ContactRedError):
    """The Jacobi structure is not of locally conformal symplectic type."""


class WrongLeafType(ContactRedError):
    """Reduction requested for a leaf of the other type."""


class DescentFailure(ContactRedError):
    """A certification needed for the reduced structure to descend failed."""

    def __init__(self, condition: str, verdict=None):
        super().__init__(f"descent condition failed: {condition}")
        self.condition = condition
        self.verdict = verdict


class NotHamiltonian(ContactRedError):
    """Moment map and group action are inconsistent with the contact form."""
