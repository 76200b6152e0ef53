"""Reader and writer for governor files.

A governor file looks like::

    :name: ethical_g
    :agent: robot

    :Outcome Scores:

    safe = 0
    collision = 4
    hole = 10

    :Ethical Precedence:

    human > robot

Blank lines and lines starting with ``#`` are ignored. Sections appear in the
order shown and are all required.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from .core import check_precedence

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_IDENT_RE = re.compile(rf"^{_IDENT}$")
_HEADER_RE = re.compile(rf"^:(name|agent):\s*(\S.*?)\s*$")
_SCORE_RE = re.compile(rf"^({_IDENT})\s*=\s*(\S+)$")

SCORES_HEADER = ":Outcome Scores:"
PRECEDENCE_HEADER = ":Ethical Precedence:"


class GovernorParseError(ValueError):
    def __init__(self, message: str, line: int, expected: str | None = None) -> None:
        self.message = message
        self.line = line
        self.expected = expected
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class GovernorSpec:
    name: str
    agent: str
    severity: Mapping[str, int]
    precedence: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "severity", dict(self.severity))
        object.__setattr__(self, "precedence", tuple(self.precedence))
        check_precedence(self.precedence)
        for kind, score in self.severity.items():
            if not isinstance(score, int) or score < 0:
                raise ValueError(f"score for {kind!r} must be a non-negative integer")

    def __hash__(self) -> int:
        return hash((self.name, self.agent, tuple(sorted(self.severity.items())), self.precedence))


def _significant_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def parse_governor(text: str) -> GovernorSpec:
    lines = list(_significant_lines(text))
    end_line = len(text.splitlines()) + 1
    pos = 0

    def peek() -> tuple[int, str] | None:
        return lines[pos] if pos < len(lines) else None

    def expect_header(key: str) -> str:
        nonlocal pos
        item = peek()
        expected = f":{key}: <identifier>"
        if item is None:
            raise GovernorParseError(f"expected '{expected}' but reached end of input", end_line, expected)
        number, line = item
        m = _HEADER_RE.match(line)
        if not m or m.group(1) != key:
            raise GovernorParseError(f"expected '{expected}', found {line!r}", number, expected)
        value = m.group(2)
        if not _IDENT_RE.match(value):
            raise GovernorParseError(f"invalid identifier {value!r} for :{key}:", number, "identifier")
        pos += 1
        return value

    def expect_section(header: str) -> None:
        nonlocal pos
        item = peek()
        if item is None:
            raise GovernorParseError(f"missing section '{header}': reached end of input", end_line, header)
        number, line = item
        if line != header:
            raise GovernorParseError(f"expected section '{header}', found {line!r}", number, header)
        pos += 1

    name = expect_header("name")
    agent = expect_header("agent")
    expect_section(SCORES_HEADER)

    severity: dict[str, int] = {}
    while (item := peek()) is not None and item[1] != PRECEDENCE_HEADER:
        number, line = item
        m = _SCORE_RE.match(line)
        if not m:
            raise GovernorParseError(f"expected '<kind> = <int>', found {line!r}", number, "<kind> = <int>")
        kind, raw = m.groups()
        if kind in severity:
            raise GovernorParseError(f"duplicate outcome kind {kind!r}", number)
        try:
            score = int(raw)
        except ValueError:
            raise GovernorParseError(f"score must be an integer, found {raw!r}", number, "integer") from None
        if score < 0:
            raise GovernorParseError("score must be non-negative", number, "non-negative integer")
        severity[kind] = score
        pos += 1
    if not severity:
        number = item[0] if item else end_line
        raise GovernorParseError("expected at least one '<kind> = <int>' line", number, "<kind> = <int>")

    expect_section(PRECEDENCE_HEADER)
    item = peek()
    if item is None:
        raise GovernorParseError("expected precedence chain '<class> > <class> ...'", end_line, "<class>")
    number, line = item
    chain = [part.strip() for part in line.split(">")]
    for part in chain:
        if not _IDENT_RE.match(part):
            raise GovernorParseError(f"malformed precedence chain {line!r}", number, "<class>")
    if len(set(chain)) != len(chain):
        raise GovernorParseError(f"duplicate actor class in precedence chain {line!r}", number)
    pos += 1
    if (item := peek()) is not None:
        raise GovernorParseError(f"unexpected content after precedence chain: {item[1]!r}", item[0], "end of input")

    return GovernorSpec(name=name, agent=agent, severity=severity, precedence=tuple(chain))


def serialize_governor(spec: GovernorSpec) -> str:
    scores = "\n".join(f"{kind} = {spec.severity[kind]}" for kind in sorted(spec.severity))
    return (
        f":name: {spec.name}\n"
        f":agent: {spec.agent}\n"
        "\n"
        f"{SCORES_HEADER}\n"
        "\n"
        f"{scores}\n"
        "\n"
        f"{PRECEDENCE_HEADER}\n"
        "\n"
        f"{' > '.join(spec.precedence)}\n"
    )
