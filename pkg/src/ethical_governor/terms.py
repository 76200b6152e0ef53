"""Ground first-order terms used for beliefs, percepts and property atoms."""

from __future__ import annotations

from typing import NamedTuple


class Term(NamedTuple):
    """A functor applied to zero or more argument terms, e.g. ``outcome(a1, human(hole))``.

    Integers are stored as functors made of digits (``moveTo(3,2)`` has the
    arguments ``Term("3")`` and ``Term("2")``).
    """

    functor: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(str(a) for a in self.args)})"


def term(functor: str, *args: Term | str | int) -> Term:
    """Build a term, converting bare strings and integers into constants."""
    return Term(functor, tuple(a if isinstance(a, Term) else Term(str(a)) for a in args))
