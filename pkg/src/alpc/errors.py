"""Exception hierarchy shared by the solver, IO layer and CLI.

The CLI maps each family onto an exit code: usage errors exit 1,
``DataError`` exits 2 and ``NumericalError`` exits 3.
"""


class AlpcError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(AlpcError, ValueError):
    """Operand shapes are inconsistent."""


class DataError(AlpcError):
    """On-disk or CSV data is malformed."""


class ValidationError(AlpcError, ValueError):
    """A dataset or hyperparameter invariant does not hold."""


class ViewShapeError(ValidationError, ShapeError):
    pass


class ClusterCountError(ValidationError):
    pass


class LabelRangeError(ValidationError):
    pass


class AnchorBudgetError(ValidationError):
    """``anchors_per_cluster * n_clusters`` exceeds the sample count."""


class HyperparameterError(ValidationError):
    pass


class NonFiniteError(ValidationError, DataError):
    pass


class NumericalError(AlpcError, ArithmeticError):
    pass


class SingularMatrixError(NumericalError):
    """Cholesky factorisation hit a non-positive pivot."""

    def __init__(self, pivot, message=None):
        self.pivot = pivot
        super().__init__(message or f"matrix is not positive definite (pivot {pivot})")


class FitError(NumericalError):
    """A block update failed; ``report`` holds the objective trace so far."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class ManifestError(DataError):
    pass


class FormatVersionError(ManifestError):
    pass


class FileSizeError(DataError):
    def __init__(self, name, expected, actual):
        self.name = name
        self.expected = expected
        self.actual = actual
        super().__init__(f"{name}: expected {expected} bytes, found {actual}")


class CsvParseError(DataError):
    def __init__(self, path, row, column, message):
        self.path = path
        self.row = row
        self.column = column
        super().__init__(f"{path}: row {row}, column {column}: {message}")


class SampleCountError(DataError, ShapeError):
    pass
