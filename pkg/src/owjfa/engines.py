"""Execution semantics: classical, one-way jumping and general jumping runs.

One-way jumping (OWJ) mode treats the input as a circular tape with a fixed
origin. From the current head position the machine reads the nearest
unconsumed letter (clockwise) that has a transition from the current state;
letters in between are skipped and stay on the tape in their original order.

Counting conventions used throughout the package:

* ``sweeps`` counts passes started over a nonempty remaining tape. The first
  pass is sweep 1, every wrap past the origin starts another one, and the
  empty word has 0 sweeps.
* ``jumps`` counts letters skipped (Skip events), not jump moves.
* ``steps`` counts head advances, i.e. Read + Skip events.
* A run halts as soon as no remaining letter is readable from the current
  state ("stuck"); it is then rejected.

Trace positions are 1-based indices into the original word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .core import Automaton, Nfa, check_word
from .errors import AlreadyHalted, SearchBudgetExceeded, UnsupportedEngine

ACCEPT = "accept"
REJECT = "reject"
STUCK = "stuck"

DEFAULT_NODE_CAP = 10**7


@dataclass(frozen=True)
class Read:
    position: int
    symbol: int
    from_state: int
    to_state: int


@dataclass(frozen=True)
class Skip:
    position: int
    symbol: int
    state: int


@dataclass(frozen=True)
class SweepBoundary:
    sweep_index: int


@dataclass(frozen=True)
class Halt:
    reason: str


RunEvent = Union[Read, Skip, SweepBoundary, Halt]


@dataclass(frozen=True)
class RunOutcome:
    accepted: bool
    final_state: int
    sweeps: int
    jumps: int
    steps: int
    consumed: int
    residue: tuple[int, ...]


@dataclass(frozen=True)
class Trace:
    word: tuple[int, ...]
    events: tuple
    outcome: RunOutcome

    def sweep_reads(self):
        """Positions read in each sweep, one tuple per sweep."""
        rows = [[]] if self.word else []
        for ev in self.events:
            if isinstance(ev, SweepBoundary):
                rows.append([])
            elif isinstance(ev, Read):
                rows[-1].append(ev.position)
        return [tuple(r) for r in rows]

    def sweep_skips(self):
        rows = [[]] if self.word else []
        for ev in self.events:
            if isinstance(ev, SweepBoundary):
                rows.append([])
            elif isinstance(ev, Skip):
                rows[-1].append(ev.position)
        return [tuple(r) for r in rows]

    def replay(self, a: Automaton) -> RunOutcome:
        """Recompute the outcome counters from the event list alone."""
        state = a.start
        consumed_pos = set()
        jumps = reads = 0
        sweeps = 1 if self.word else 0
        reason = None
        for ev in self.events:
            if isinstance(ev, Read):
                state = ev.to_state
                consumed_pos.add(ev.position)
                reads += 1
            elif isinstance(ev, Skip):
                jumps += 1
            elif isinstance(ev, SweepBoundary):
                sweeps += 1
            else:
                reason = ev.reason
        residue = tuple(x for i, x in enumerate(self.word, 1) if i not in consumed_pos)
        return RunOutcome(reason == ACCEPT, state, sweeps, jumps, reads + jumps, reads, residue)


def run_classical(a: Automaton, word) -> RunOutcome:
    """Ordinary left-to-right DFA run; an undefined transition rejects."""
    w = check_word(a.alphabet, word)
    delta = a.delta
    state = a.start
    for i, x in enumerate(w):
        t = delta[state][x]
        if t is None:
            return RunOutcome(False, state, 1, 0, i, i, w[i:])
        state = t
    return RunOutcome(state in a.accepting, state, 1 if w else 0, 0, len(w), len(w), ())


def _readable_masks(a: Automaton):
    masks = []
    for row in a.delta:
        m = 0
        for x, t in enumerate(row):
            if t is not None:
                m |= 1 << x
        masks.append(m)
    return masks


def _owj_fast(a: Automaton, w):
    delta = a.delta
    readable = _readable_masks(a)
    counts = [0] * len(a.alphabet)
    for x in w:
        counts[x] += 1
    present = 0
    for x, c in enumerate(counts):
        if c:
            present |= 1 << x
    state = a.start
    remaining = list(range(len(w)))
    sweeps = jumps = 0
    while remaining:
        # sweep 1 starts unconditionally on a nonempty tape; later ones only if a letter is readable
        if sweeps and not present & readable[state]:
            break
        sweeps += 1
        kept = []
        for idx, pos in enumerate(remaining):
            x = w[pos]
            t = delta[state][x]
            if t is None:
                if not present & readable[state]:
                    kept.extend(remaining[idx:])
                    break
                kept.append(pos)
                jumps += 1
            else:
                state = t
                counts[x] -= 1
                if not counts[x]:
                    present &= ~(1 << x)
        else:
            remaining = kept
            continue
        remaining = kept
        break
    consumed = len(w) - len(remaining)
    residue = tuple(w[p] for p in remaining)
    accepted = not remaining and state in a.accepting
    return RunOutcome(accepted, state, sweeps, jumps, consumed + jumps, consumed, residue)


class OwjRun:
    """Incremental one-way jumping run; ``step()`` yields one event per call.

    Head movements produce Read or Skip events; crossing the origin onto a
    nonempty tape produces a SweepBoundary for sweep 2 onwards (sweep 1 is
    implicit at the start). The final call returns a Halt.
    """

    def __init__(self, a: Automaton, word):
        self.automaton = a
        self.word = check_word(a.alphabet, word)
        self.state = a.start
        self.sweeps = 1 if self.word else 0
        self.jumps = 0
        self.consumed = 0
        self.halted = False
        self.reason = None
        self._readable = _readable_masks(a)
        self._counts = [0] * len(a.alphabet)
        for x in self.word:
            self._counts[x] += 1
        # current sweep: letters still ahead of the head, and those skipped behind it
        self._ahead = list(range(len(self.word)))
        self._behind = []
        self._events = []

    def _present(self):
        m = 0
        for x, c in enumerate(self._counts):
            if c:
                m |= 1 << x
        return m

    def _halt(self, reason):
        self.halted = True
        self.reason = reason
        return Halt(reason)

    def step(self) -> RunEvent:
        if self.halted:
            raise AlreadyHalted("the run has already halted")
        ev = self._next()
        self._events.append(ev)
        return ev

    def _next(self):
        a = self.automaton
        if not self._ahead and not self._behind:
            return self._halt(ACCEPT if self.state in a.accepting else REJECT)
        if not self._present() & self._readable[self.state]:
            return self._halt(STUCK)
        if not self._ahead:
            self._ahead, self._behind = self._behind, []
            self.sweeps += 1
            return SweepBoundary(self.sweeps)
        pos = self._ahead.pop(0)
        x = self.word[pos]
        t = a.delta[self.state][x]
        if t is None:
            self._behind.append(pos)
            self.jumps += 1
            return Skip(pos + 1, x, self.state)
        ev = Read(pos + 1, x, self.state, t)
        self.state = t
        self._counts[x] -= 1
        self.consumed += 1
        return ev

    def run(self):
        while not self.halted:
            self.step()
        return self

    def outcome(self) -> RunOutcome:
        rest = sorted(self._behind + self._ahead)
        return RunOutcome(
            accepted=self.reason == ACCEPT,
            final_state=self.state,
            sweeps=self.sweeps,
            jumps=self.jumps,
            steps=self.consumed + self.jumps,
            consumed=self.consumed,
            residue=tuple(self.word[p] for p in rest),
        )

    def trace(self) -> Trace:
        return Trace(self.word, tuple(self._events), self.outcome())


def run_owj(a: Automaton, word, trace: bool = False):
    """Run ``word`` in one-way jumping mode.

    Returns ``(outcome, trace)``; ``trace`` is None unless requested.
    """
    w = check_word(a.alphabet, word)
    if not trace:
        return _owj_fast(a, w), None
    r = OwjRun(a, w).run()
    t = r.trace()
    return t.outcome, t


def owj_accepts(a: Automaton, word) -> bool:
    return _owj_fast(a, check_word(a.alphabet, word)).accepted


def nfa_accepts(n: Nfa, word) -> bool:
    """Classical (sequential) NFA acceptance by on-the-fly subset simulation."""
    current = {n.start}
    for x in check_word(n.alphabet, word):
        nxt = set()
        for q in current:
            nxt |= n.delta[q][x]
        if not nxt:
            return False
        current = nxt
    return not current.isdisjoint(n.accepting)


def classical_accepts(a, word) -> bool:
    if isinstance(a, Nfa):
        return nfa_accepts(a, word)
    return run_classical(a, word).accepted


def run_jumping(a: Automaton | Nfa, word, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """General jumping-automaton acceptance.

    A jumping machine may read any remaining occurrence of a letter, so only
    the multiset of remaining letters matters. Searches the space of
    ``(state, remaining Parikh vector)`` nodes depth first.
    """
    w = check_word(a.alphabet, word)
    k = len(a.alphabet)
    if isinstance(a, Nfa):
        succ = [[tuple(sorted(ts)) for ts in row] for row in a.delta]
    else:
        succ = [[() if t is None else (t,) for t in row] for row in a.delta]
    counts = [0] * k
    for x in w:
        counts[x] += 1
    root = (a.start, tuple(counts))
    seen = {root}
    stack = [root]
    while stack:
        q, rest = stack.pop()
        if not any(rest):
            if q in a.accepting:
                return True
            continue
        for x in range(k):
            if not rest[x]:
                continue
            targets = succ[q][x]
            if not targets:
                continue
            nrest = rest[:x] + (rest[x] - 1,) + rest[x + 1:]
            for t in targets:
                node = (t, nrest)
                if node not in seen:
                    if len(seen) >= node_cap:
                        raise SearchBudgetExceeded(
                            f"jumping search exceeded {node_cap} (state, multiset) nodes"
                        )
                    seen.add(node)
                    stack.append(node)
    return False


ENGINES = ("classical", "owj", "jumping")


def accepts(a, word, engine: str) -> bool:
    if engine == "classical":
        return classical_accepts(a, word)
    if engine == "owj":
        if isinstance(a, Nfa):
            raise UnsupportedEngine("one-way jumping mode is defined for deterministic machines only")
        return owj_accepts(a, word)
    if engine == "jumping":
        return run_jumping(a, word)
    raise UnsupportedEngine(f"unknown engine {engine!r}; expected one of {', '.join(ENGINES)}")


def trace_classical(a: Automaton, word) -> Trace:
    """Classical run as a trace: one sweep of Read events, then Halt."""
    w = check_word(a.alphabet, word)
    events = []
    state = a.start
    reason = None
    for i, x in enumerate(w):
        t = a.delta[state][x]
        if t is None:
            reason = STUCK
            break
        events.append(Read(i + 1, x, state, t))
        state = t
    if reason is None:
        reason = ACCEPT if state in a.accepting else REJECT
    events.append(Halt(reason))
    return Trace(w, tuple(events), run_classical(a, w))


def outcome_to_dict(a: Automaton, o: RunOutcome):
    return {
        "accepted": o.accepted,
        "final_state": a.state_names[o.final_state],
        "sweeps": o.sweeps,
        "jumps": o.jumps,
        "steps": o.steps,
        "consumed": o.consumed,
        "residue": a.alphabet.decode(o.residue),
    }


def event_to_dict(a: Automaton, ev: RunEvent):
    names, syms = a.state_names, a.alphabet.symbols
    if isinstance(ev, Read):
        return {"kind": "read", "position": ev.position, "symbol": syms[ev.symbol],
                "from_state": names[ev.from_state], "to_state": names[ev.to_state]}
    if isinstance(ev, Skip):
        return {"kind": "skip", "position": ev.position, "symbol": syms[ev.symbol],
                "state": names[ev.state]}
    if isinstance(ev, SweepBoundary):
        return {"kind": "sweep", "sweep_index": ev.sweep_index}
    return {"kind": "halt", "reason": ev.reason}


def trace_to_dict(a: Automaton, t: Trace, engine="owj"):
    """JSON-ready trace. Keys are fixed; see README for the schema."""
    return {
        "engine": engine,
        "word": a.alphabet.decode(t.word),
        "events": [event_to_dict(a, ev) for ev in t.events],
        "sweeps": [list(r) for r in t.sweep_reads()],
        "outcome": outcome_to_dict(a, t.outcome),
    }


def format_events(a: Automaton, t: Trace) -> str:
    """Line-oriented trace, one event per line."""
    names, syms = a.state_names, a.alphabet.symbols
    lines = []
    for ev in t.events:
        if isinstance(ev, Read):
            lines.append(f"read {ev.position} {syms[ev.symbol]} {names[ev.from_state]} -> {names[ev.to_state]}")
        elif isinstance(ev, Skip):
            lines.append(f"skip {ev.position} {syms[ev.symbol]} {names[ev.state]}")
        elif isinstance(ev, SweepBoundary):
            lines.append(f"sweep {ev.sweep_index}")
        else:
            lines.append(f"halt {ev.reason}")
    return "\n".join(lines) + "\n"


def render_sweeps(a: Automaton, t: Trace) -> list[str]:
    """One row per sweep over all original positions.

    Letters read during the sweep are bracketed, letters still on the tape
    are shown plain and letters consumed in earlier sweeps as ``.``.
    """
    syms = a.alphabet.symbols
    done = set()
    rows = []
    for i, reads in enumerate(t.sweep_reads(), 1):
        now = set(reads)
        cells = []
        for pos, x in enumerate(t.word, 1):
            if pos in done:
                cells.append(".")
            elif pos in now:
                cells.append(f"[{syms[x]}]")
            else:
                cells.append(syms[x])
        rows.append(f"sweep {i}: " + " ".join(cells))
        done |= now
    return rows
