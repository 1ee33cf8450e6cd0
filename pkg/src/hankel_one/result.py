from __future__ import annotations
from typing import Any, Callable

from .option import Option


class Result:
    """
    Result is either Ok or Err. An Err keeps the exception object
    itself so that the command line front end can report its kind and
    message, or re-raise it untouched.

        r = Result.into(lambda: solve_real(A))
        if r.is_err():
            print(r.unwrap_err())
    """
    __slots__ = ('value', 'error')


    def __init__(self, value):
        if isinstance(value, Exception):
            self.value = None
            self.error = value
        else:
            self.value = value
            self.error = None


    def __repr__(self):
        if self.is_ok():
            return f"Result.Ok({self.value!r})"
        return f"Result.Err({type(self.error).__name__}: {self.error})"


    __str__ = __repr__


    def __eq__(self, other):
        if not isinstance(other, Result):
            return NotImplemented
        if self.is_ok() and other.is_ok():
            return self.value == other.value
        if self.is_err() and other.is_err():
            return (type(self.error) is type(other.error)
                and self.error.args == other.error.args)
        return False


    @classmethod
    def into(cls, f: Callable[[], Any]) -> Result:
        """
        Transform a function call/closure into a Result[T]. Calls
        the function and captures any raised exception as an Err.

        Examples
        --------
        >>> Result.into(lambda: 1 + 1)
        Result.Ok(2)
        >>> Result.into(lambda: 1 / 0).is_err()
        True
        """
        try:
            val = f()
        except Exception as e:
            val = e
        return cls(val)


    def map(self, key: Callable[[Any], Any]) -> Result:
        """
        Applies a function f[T] -> U to the value of an Ok Result[T].
        Returns another Result[U]; an exception raised by ``key``
        becomes the Err. Doesn't do anything if Result is Err[T]

            r = Result(1)
            assert r.map(lambda x: str(x)) == Result("1")
        """
        if self.is_err():
            return self
        return Result.into(lambda: key(self.value))


    def unwrap(self) -> Any:
        """
        Unwraps a Result. Re-raises the contained error and returns T
        from Ok[T]

            r = Result(2)
            assert r.unwrap() == 2
        """
        if self.is_err():
            raise self.error
        return self.value


    def unwrap_or(self, default: Any) -> Any:
        return self.value if self.is_ok() else default


    def unwrap_err(self) -> Exception:
        """
        Returns the contained exception, raising a ValueError on Ok
        """
        if self.is_ok():
            raise ValueError(f"called unwrap_err on Ok({self.value!r})")
        return self.error


    def is_ok(self) -> bool:
        """
        Returns True if Result is an Ok

            assert Result(22).is_ok()
            assert not Result(Exception(22)).is_ok()
        """
        return self.error is None


    def is_err(self) -> bool:
        return self.error is not None


    def ok(self) -> Option:
        """
        Converts an Ok[T] to Option[T], an Err to Option[None]
        """
        return Option(self.value) if self.is_ok() else Option(None)


    def err(self) -> Option:
        """
        Converts an Err[e] to Option[e], an Ok to Option[None]
        """
        return Option(self.error) if self.is_err() else Option(None)
