"""Weight enumerator engines. Importing the package registers every engine."""

from . import exact_engines, fourier_engines
