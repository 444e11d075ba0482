"""Exception hierarchy."""


class ArtinresError(Exception):
    pass


class ModulusError(ArtinresError, ValueError):
    pass


class AlgebraError(ArtinresError, ValueError):
    """Structure constants do not describe a commutative local algebra."""


class NotCommutative(AlgebraError):
    pass


class NotAssociative(AlgebraError):
    pass


class BadUnit(AlgebraError):
    pass


class NotLocal(AlgebraError):
    pass


class NotFiniteDimensional(AlgebraError):
    pass


class InvalidAction(ArtinresError, ValueError):
    """Action matrices violate the module axioms."""


class AlgebraMismatch(ArtinresError, ValueError):
    pass


class BudgetExceeded(ArtinresError):
    """A randomized or bounded search gave up before reaching a certificate."""

    def __init__(self, message: str, data: dict | None = None):
        super().__init__(message)
        self.data = data or {}


class NotSingleClass(ArtinresError):
    """The cosyzygy of an indecomposable is not a single indecomposable class."""

    def __init__(self, message: str, class_id: int | None = None, image=None):
        super().__init__(message)
        self.class_id = class_id
        self.image = image


class NotGorenstein(ArtinresError):
    pass
