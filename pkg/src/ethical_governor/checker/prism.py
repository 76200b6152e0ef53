"""PRISM-language export of a :class:`Dtmc`, and a reader for the exported subset."""

from __future__ import annotations

import re
from fractions import Fraction

from .dtmc import Dtmc


def _prob(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def export_prism(m: Dtmc) -> str:
    lines = ["dtmc", "", "module M", f"  s : [0..{m.size - 1}] init 0;"]
    for i, out in enumerate(m.transitions):
        updates = " + ".join(f"{_prob(p)}:(s'={j})" for p, j in out)
        lines.append(f"  [] s={i} -> {updates};")
    lines += ["endmodule", ""]
    for name in sorted(m.labels):
        states = sorted(m.labels[name])
        expr = " | ".join(f"s={i}" for i in states) if states else "false"
        lines.append(f'label "{name}" = {expr};')
    return "\n".join(lines) + "\n"


class PrismParseError(ValueError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


_VAR_RE = re.compile(r"^s\s*:\s*\[\s*0\s*\.\.\s*(\d+)\s*\]\s*init\s+0\s*;$")
_CMD_RE = re.compile(r"^\[\]\s*s\s*=\s*(\d+)\s*->\s*(.+);$")
_UPDATE_RE = re.compile(r"^(\d+(?:/\d+)?)\s*:\s*\(\s*s'\s*=\s*(\d+)\s*\)$")
_LABEL_RE = re.compile(r'^label\s+"([^"]+)"\s*=\s*(.+);$')


def parse_prism(text: str) -> Dtmc:
    """Read back a single-variable DTMC as written by :func:`export_prism`."""
    size = None
    rows: dict[int, list[tuple[Fraction, int]]] = {}
    labels: dict[str, frozenset[int]] = {}
    section = "header"
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        if section == "header":
            if line != "dtmc":
                raise PrismParseError("expected 'dtmc'", number)
            section = "top"
        elif section == "top":
            if line.startswith("module"):
                section = "module"
            elif (m := _LABEL_RE.match(line)):
                labels[m.group(1)] = _parse_label(m.group(2), number)
            else:
                raise PrismParseError(f"unexpected {line!r}", number)
        elif section == "module":
            if line == "endmodule":
                section = "top"
            elif (m := _VAR_RE.match(line)):
                size = int(m.group(1)) + 1
            elif (m := _CMD_RE.match(line)):
                i = int(m.group(1))
                if i in rows:
                    raise PrismParseError(f"second command for s={i}", number)
                rows[i] = [_parse_update(u.strip(), number) for u in m.group(2).split("+")]
            else:
                raise PrismParseError(f"unexpected {line!r}", number)
    if size is None:
        raise PrismParseError("missing state variable declaration", 0)
    if sorted(rows) != list(range(size)):
        raise PrismParseError("every state needs exactly one command", 0)
    dtmc = Dtmc([rows[i] for i in range(size)], labels)
    dtmc.check()
    return dtmc


def _parse_update(text: str, number: int) -> tuple[Fraction, int]:
    m = _UPDATE_RE.match(text)
    if not m:
        raise PrismParseError(f"malformed update {text!r}", number)
    return Fraction(m.group(1)), int(m.group(2))


def _parse_label(expr: str, number: int) -> frozenset[int]:
    expr = expr.strip()
    if expr == "false":
        return frozenset()
    states = set()
    for part in expr.split("|"):
        m = re.fullmatch(r"\s*s\s*=\s*(\d+)\s*", part)
        if not m:
            raise PrismParseError(f"malformed label expression {expr!r}", number)
        states.add(int(m.group(1)))
    return frozenset(states)
