"""Finite grid world: a robot, a hole, a goal and humans drifting towards the hole.

Cells are ``(x, y)`` pairs. Each step the robot may jump to any cell along a
straight line; the cells the jump sweeps are given by :func:`supercover_line`.
Humans then move one cell towards the hole with probability
``move_probability`` each, unless the robot has diverted them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core import ActionId, EngineState, Outcome, evaluate_outcomes, model_applicable_actions
from .terms import Term, term

Cell = tuple[int, int]

ACTIVE = "active"
FALLEN = "fallen"
RESCUED = "rescued"

ROBOT = "robot"
HUMAN = "human"
HOLE = "hole"
COLLISION = "collision"

# "adjacent": ending next to a human diverts it; "contact": the sweep must reach its cell
DIVERSION_RULES = ("adjacent", "contact")


@dataclass(frozen=True)
class GridConfig:
    width: int = 5
    height: int = 5
    hole: Cell = (2, 2)
    goal: Cell = (4, 2)
    robot_start: Cell = (0, 2)
    humans: tuple[tuple[str, Cell], ...] = (("h1", (0, 0)), ("h2", (0, 4)))
    move_probability: Fraction = Fraction(1, 2)
    horizon: int = 20
    diversion: str = "adjacent"

    def __post_init__(self) -> None:
        object.__setattr__(self, "humans", tuple((h, tuple(c)) for h, c in self.humans))
        object.__setattr__(self, "move_probability", Fraction(self.move_probability))
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be positive")
        if not 0 <= self.move_probability <= 1:
            raise ValueError("move_probability must lie in [0, 1]")
        cells = {"hole": self.hole, "goal": self.goal, "robot": self.robot_start}
        cells.update({f"human.{h}": c for h, c in self.humans})
        for label, cell in cells.items():
            if not self.in_bounds(cell):
                raise ValueError(f"{label} cell {cell} is outside the {self.width}x{self.height} grid")
        if self.diversion not in DIVERSION_RULES:
            raise ValueError(f"diversion must be one of {', '.join(DIVERSION_RULES)}")
        if self.hole == self.goal:
            raise ValueError("hole and goal must differ")
        ids = [h for h, _ in self.humans]
        if len(set(ids)) != len(ids):
            raise ValueError("human ids must be distinct")
        starts = [self.robot_start] + [c for _, c in self.humans]
        if len(set(starts)) != len(starts):
            raise ValueError("start cells must be pairwise distinct")
        if self.hole in starts:
            raise ValueError("nothing may start on the hole")

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height


class HumanState(NamedTuple):
    id: str
    pos: Cell
    status: str = ACTIVE


class WorldState(NamedTuple):
    robot: Cell
    humans: tuple[HumanState, ...]
    step: int = 0

    def human(self, hid: str) -> HumanState:
        for h in self.humans:
            if h.id == hid:
                return h
        raise KeyError(hid)


def initial_world(cfg: GridConfig) -> WorldState:
    return WorldState(cfg.robot_start, tuple(HumanState(h, c) for h, c in cfg.humans), 0)


def chebyshev(p: Cell, q: Cell) -> int:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def supercover_line(p: Cell, q: Cell) -> list[Cell]:
    """Every cell touched by the segment joining the centres of ``p`` and ``q``.

    Cell squares are closed, so a segment passing exactly through a corner
    touches all four cells around it; the two side cells are emitted
    x-step first, which keeps the result reversible.
    """
    x, y = p
    dx, dy = abs(q[0] - x), abs(q[1] - y)
    sx = 1 if q[0] > x else -1
    sy = 1 if q[1] > y else -1
    cells = [(x, y)]
    ix = iy = 0
    while ix < dx or iy < dy:
        # compare the parameters of the next vertical and horizontal boundary crossings
        decision = (1 + 2 * ix) * dy - (1 + 2 * iy) * dx
        if decision == 0:
            cells.append((x + sx, y))
            cells.append((x, y + sy))
            x += sx
            y += sy
            ix += 1
            iy += 1
        elif decision < 0:
            x += sx
            ix += 1
        else:
            y += sy
            iy += 1
        cells.append((x, y))
    return cells


def move_to(cell: Cell) -> ActionId:
    return ActionId("moveTo", (cell[0], cell[1]))


def target_of(a: ActionId) -> Cell:
    if a.name != "moveTo" or len(a.args) != 2:
        raise ValueError(f"not a moveTo action: {a}")
    return a.args[0], a.args[1]


def applicable_actions(state: WorldState, cfg: GridConfig) -> list[ActionId]:
    """``moveTo`` every cell, rows of increasing y, x increasing within a row."""
    return [move_to((x, y)) for y in range(cfg.height) for x in range(cfg.width)]


class Sweep(NamedTuple):
    """Cells the robot actually passes through on a jump, and where it stops."""

    cells: tuple[Cell, ...]
    end: Cell
    fell: bool


def sweep(start: Cell, target: Cell, cfg: GridConfig) -> Sweep:
    """Follow the supercover line from ``start`` to ``target``, stopping in the hole if it is crossed."""
    line = supercover_line(start, target)
    if cfg.hole in line:
        cut = line.index(cfg.hole) + 1
        return Sweep(tuple(line[:cut]), cfg.hole, True)
    return Sweep(tuple(line), target, False)


def _diverts(move: Sweep, h: HumanState, cfg: GridConfig) -> bool:
    if h.pos in move.cells:
        return True
    return cfg.diversion == "adjacent" and not move.fell and chebyshev(move.end, h.pos) <= 1


def model_action(state: WorldState, a: ActionId, cfg: GridConfig) -> tuple[Outcome, ...]:
    """Predicted outcomes of ``a``: one entry per affected actor.

    A jump whose line crosses the hole ends there: cells beyond it are never
    reached, so humans past the hole are neither hit nor diverted.
    """
    target = target_of(a)
    if not cfg.in_bounds(target):
        raise ValueError(f"{a} targets a cell outside the grid")
    move = sweep(state.robot, target, cfg)
    outcomes = []
    if move.fell:
        outcomes.append(Outcome(ROBOT, HOLE))
    active = [h for h in state.humans if h.status == ACTIVE]
    for h in active:
        if h.pos in move.cells:
            outcomes.append(Outcome(ROBOT, COLLISION))
            outcomes.append(Outcome(HUMAN, COLLISION))
    for h in active:
        if chebyshev(h.pos, cfg.hole) == 1 and not _diverts(move, h, cfg):
            outcomes.append(Outcome(HUMAN, HOLE))
    return tuple(outcomes)


def percepts(state: WorldState, cfg: GridConfig) -> frozenset[Term]:
    """Facts the robot perceives: ``danger(h)``, ``path_to(h)`` and ``h(hole)``."""
    facts = set()
    for h in state.humans:
        if h.status == ACTIVE:
            if chebyshev(h.pos, cfg.hole) == 1:
                facts.add(term("danger", h.id))
            if cfg.hole not in supercover_line(state.robot, h.pos):
                facts.add(term("path_to", h.id))
        elif h.status == FALLEN:
            facts.add(term(h.id, HOLE))
    return frozenset(facts)


def human_step_target(h: HumanState, cfg: GridConfig) -> Cell:
    """Neighbouring cell closest to the hole; ties go to smaller x, then smaller y."""
    if h.status != ACTIVE:
        raise ValueError(f"human {h.id} is {h.status}, only active humans move")
    hx, hy = cfg.hole
    best = None
    for nx in range(h.pos[0] - 1, h.pos[0] + 2):
        for ny in range(h.pos[1] - 1, h.pos[1] + 2):
            if (nx, ny) == h.pos or not cfg.in_bounds((nx, ny)):
                continue
            key = ((nx - hx) ** 2 + (ny - hy) ** 2, nx, ny)
            if best is None or key < best:
                best = key
    if best is None:
        return h.pos
    return best[1], best[2]


def world_step(state: WorldState, a: ActionId, coin: Sequence[bool], cfg: GridConfig) -> WorldState:
    """Advance one step: the robot jumps, then each active human may move.

    ``coin`` holds one flag per active human, in order; ``True`` means that
    human tries to move this step.
    """
    active_count = sum(h.status == ACTIVE for h in state.humans)
    if len(coin) != active_count:
        raise ValueError(f"expected {active_count} coin flags, got {len(coin)}")
    move = sweep(state.robot, target_of(a), cfg)
    flips = iter(coin)
    humans = []
    for h in state.humans:
        if h.status != ACTIVE:
            humans.append(h)
            continue
        moves = next(flips)
        step_to = human_step_target(h, cfg)
        if _diverts(move, h, cfg) or (not move.fell and move.end == step_to):
            h = h._replace(status=RESCUED)
        elif moves:
            h = h._replace(pos=step_to, status=FALLEN if step_to == cfg.hole else ACTIVE)
        humans.append(h)
    return WorldState(move.end, tuple(humans), state.step + 1)


def choose(state: WorldState, engine: EngineState, cfg: GridConfig) -> tuple[ActionId, EngineState]:
    """Run the consequence engine, then pick the selected action closest to the goal.

    Returns the chosen action and the engine state after evaluation.
    """
    engine = replace(engine, applicable=tuple(applicable_actions(state, cfg)), annotated=(),
                     selected=frozenset(), beliefs=frozenset())
    engine = model_applicable_actions(engine, lambda a: model_action(state, a, cfg))
    engine = evaluate_outcomes(engine)
    gx, gy = cfg.goal

    def rank(a: ActionId) -> tuple[int, int, int]:
        x, y = target_of(a)
        return (x - gx) ** 2 + (y - gy) ** 2, y, x

    return min(engine.selected, key=rank), engine


def select_action(state: WorldState, engine: EngineState, cfg: GridConfig) -> ActionId:
    return choose(state, engine, cfg)[0]


def is_terminal(state: WorldState, cfg: GridConfig) -> bool:
    if state.step >= cfg.horizon or state.robot == cfg.hole:
        return True
    return state.robot == cfg.goal and all(h.status != ACTIVE for h in state.humans)


# Scenario files ------------------------------------------------------------

class ScenarioParseError(ValueError):
    def __init__(self, message: str, line: int) -> None:
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}")


_CELL_RE = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")
_KEY_RE = re.compile(r"^(width|height|hole|goal|robot|move_probability|horizon|human\.[A-Za-z_][A-Za-z0-9_]*)$")


def _parse_cell(raw: str, line: int) -> Cell:
    m = _CELL_RE.match(raw)
    if not m:
        raise ScenarioParseError(f"expected a cell '(x,y)', found {raw!r}", line)
    return int(m.group(1)), int(m.group(2))


def parse_scenario(text: str) -> GridConfig:
    """Read ``key = value`` lines into a :class:`GridConfig`.

    Keys: ``width``, ``height``, ``horizon`` (integers); ``hole``, ``goal``,
    ``robot`` and ``human.<id>`` (cells ``(x,y)``); ``move_probability``
    (a fraction such as ``1/2`` or a decimal). Humans keep file order.
    Missing keys take the :class:`GridConfig` defaults, except that the
    humans list is empty unless at least one ``human.<id>`` line is given.
    """
    values: dict[str, object] = {}
    humans: list[tuple[str, Cell]] = []
    seen: set[str] = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ScenarioParseError(f"expected 'key = value', found {line!r}", number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not _KEY_RE.match(key):
            raise ScenarioParseError(f"unknown key {key!r}", number)
        if key in seen:
            raise ScenarioParseError(f"duplicate key {key!r}", number)
        seen.add(key)
        if key in ("width", "height", "horizon"):
            try:
                values[key] = int(value)
            except ValueError:
                raise ScenarioParseError(f"{key} must be an integer, found {value!r}", number) from None
        elif key == "move_probability":
            try:
                values[key] = Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise ScenarioParseError(f"move_probability must be a number, found {value!r}", number) from None
        elif key.startswith("human."):
            humans.append((key[len("human."):], _parse_cell(value, number)))
        else:
            values["robot_start" if key == "robot" else key] = _parse_cell(value, number)
    try:
        return GridConfig(humans=tuple(humans), **values)
    except ValueError as exc:
        raise ScenarioParseError(str(exc), 0) from None


def format_scenario(cfg: GridConfig) -> str:
    def cell(c: Cell) -> str:
        return f"({c[0]},{c[1]})"

    lines = [
        f"width = {cfg.width}",
        f"height = {cfg.height}",
        f"hole = {cell(cfg.hole)}",
        f"goal = {cell(cfg.goal)}",
        f"robot = {cell(cfg.robot_start)}",
    ]
    lines += [f"human.{h} = {cell(c)}" for h, c in cfg.humans]
    lines += [f"move_probability = {cfg.move_probability}", f"horizon = {cfg.horizon}"]
    return "\n".join(lines) + "\n"
