from __future__ import annotations
from typing import Any, Callable

"""
Option mimics an Enum of one of two choices:
    Some(T) => T is not None
    None => None

Solvers hand back an Option wherever an answer may legitimately
not exist: the |lambda_1| test of the spectral solver, the limit
parameters of a Cadzow run that collapsed to zero, and so on.

Option(val) => Some(val) or None

maybe_params = trace.final_params
"""


class Option:
    """
    Wraps any value and disallows unwrapped Nones. All operations
    are greedily evaluated.
    """
    __slots__ = ('value',)


    def __init__(self, value):
        self.value = value


    def __eq__(self, other):
        """Tests equality between two Options

        Parameters
        ----------
        other: Option
            Another option to compare against

        Returns
        -------
        bool
        """
        if not isinstance(other, Option):
            return NotImplemented
        return self.value == other.value


    def __repr__(self):
        return f'Option.Some({self.value!r})' if self.is_some() else 'Option.None'


    __str__ = __repr__


    def unwrap(self) -> Any:
        """Attempts to unwrap the Option into its contained
        value. Unwrapping a None will raise a ValueError

        Returns
        -------
        value : Any
            Returns the wrapped value so long as it isn't None

        Raises
        ------
        ValueError
            Only if unwrapping a None value

        Examples
        --------
        >>> opt = Option((0.5, (2.0, 3.0)))
        >>> opt.unwrap()[0]
        0.5

        >>> Option(None).unwrap()
        Traceback (most recent call last):
        ...
        ValueError: Bare 'None' not allowed
        """
        if not self.is_some():
            raise ValueError("Bare 'None' not allowed")

        return self.value


    def is_some(self) -> bool:
        """Checks if the Option is not wrapping None

        Examples
        --------
        >>> assert Option(0.0).is_some()
        >>> assert not Option(None).is_some()
        """
        return self.value is not None


    def is_none(self) -> bool:
        return self.value is None


    def contains(self, value: Any) -> bool:
        """Checks to see if the Option contains an explicit value.

        Examples
        --------
        >>> assert Option(5).contains(5)
        >>> assert not Option(None).contains(5)
        """
        return self.value == value if self.is_some() else False


    def expect(self, message: str) -> Any:
        """Returns the value or raises a ValueError carrying ``message``.

        Parameters
        ----------
        message : str
            The message to be displayed in the event that self is None

        Raises
        ------
        ValueError
        """
        if self.is_some():
            return self.value
        raise ValueError(message)


    def unwrap_or(self, default: Any) -> Any:
        """Unwraps an Option if it is_some(), otherwise return a default value.

        Examples
        --------
        >>> assert Option(5).unwrap_or(42) == 5
        >>> assert Option(None).unwrap_or(42) == 42
        """
        return self.value if self.is_some() else default


    def unwrap_or_else(self, f: Callable[[], Any]) -> Any:
        """Unwrap value or call a zero-argument closure

        Examples
        --------
        >>> assert Option(None).unwrap_or_else(lambda: 42) == 42
        """
        return self.value if self.is_some() else f()


    def map(self, f: Callable[[Any], Any]) -> Option:
        """Apply a function to an Option[T].

        Applies ``f`` to the wrapped value if it is not None, otherwise
        returns the Option(None) unchanged.

        Parameters
        ----------
        f: Callable
            Single argument function to be applied to self.value

        Returns
        -------
        Option[U]
            where f(T) -> U if T is not None

        Examples
        --------
        >>> assert Option(5).map(lambda x: x + 1) == Option(6)
        >>> assert Option(None).map(lambda x: x + 1) == Option(None)
        """
        return Option(f(self.value)) if self.is_some() else self


    def ok_or(self, e: Exception):
        """Convert an Option to a Result

        Some(T) becomes Ok(T), None becomes Err(e)

        Examples
        --------
        >>> from hankel_one.result import Result
        >>> assert Option(5).ok_or(ValueError("missing")) == Result(5)
        >>> assert Option(None).ok_or(ValueError("missing")).is_err()
        """
        from .result import Result

        return Result(self.value if self.is_some() else e)
