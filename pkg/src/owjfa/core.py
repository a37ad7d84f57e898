"""Domain types, validation and the textual automaton format.

The text format is line oriented, ``#`` starts a comment::

    alphabet: a b
    states: q0 q1
    start: q0
    accept: q0
    q0 a -> q1
    q1 b -> q0

A (state, symbol) pair listed with several targets makes the description an
NFA; otherwise it is a (possibly partial) deterministic automaton.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    AlphabetMismatch,
    DuplicateState,
    DuplicateSymbol,
    DuplicateTransition,
    FormatError,
    MissingStart,
    OutOfRangeReference,
)

Word = tuple[int, ...]

_RESERVED = ("#",)


def _check_name(name, what):
    if not name or any(ch.isspace() for ch in name) or name == "->":
        raise FormatError(f"invalid {what} name {name!r}")
    if name.endswith(":") or any(r in name for r in _RESERVED):
        raise FormatError(f"invalid {what} name {name!r}")


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]
    index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        index = {}
        for i, s in enumerate(symbols):
            if not isinstance(s, str):
                raise FormatError(f"symbol names must be strings, got {s!r}")
            _check_name(s, "symbol")
            if "," in s:
                raise FormatError(f"symbol name {s!r} contains a comma")
            if s in index:
                raise DuplicateSymbol(f"symbol {s!r} declared twice")
            index[s] = i
        object.__setattr__(self, "index", index)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    @property
    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)

    def encode(self, word) -> Word:
        """Turn a string (or a sequence of names/ids) into a tuple of ids.

        Strings are read letter by letter when every symbol is one character
        long, otherwise as comma-separated symbol names.
        """
        if isinstance(word, str):
            if word == "":
                names = []
            elif self.single_char:
                names = list(word)
            else:
                names = word.split(",")
        else:
            names = list(word)
        out = []
        for x in names:
            if isinstance(x, str):
                if x not in self.index:
                    raise AlphabetMismatch(f"symbol {x!r} is not in alphabet {list(self.symbols)}")
                out.append(self.index[x])
            else:
                if not 0 <= x < len(self.symbols):
                    raise AlphabetMismatch(f"symbol id {x} out of range for alphabet of size {len(self)}")
                out.append(int(x))
        return tuple(out)

    def decode(self, word: Sequence[int]) -> str:
        sep = "" if self.single_char else ","
        return sep.join(self.symbols[i] for i in word)


def check_word(alphabet: Alphabet, word) -> Word:
    """Return ``word`` as a tuple of ids, raising AlphabetMismatch if foreign."""
    if isinstance(word, tuple) and all(type(x) is int and 0 <= x < len(alphabet) for x in word):
        return word
    return alphabet.encode(word)


@dataclass(frozen=True)
class ParikhVector:
    counts: tuple[int, ...]

    def __add__(self, other):
        if len(self.counts) != len(other.counts):
            raise AlphabetMismatch("Parikh vectors over different alphabets")
        return ParikhVector(tuple(x + y for x, y in zip(self.counts, other.counts)))

    def __getitem__(self, i):
        return self.counts[i]

    def __len__(self):
        return len(self.counts)

    def total(self):
        return sum(self.counts)


def parikh(word, alphabet: Alphabet) -> ParikhVector:
    word = check_word(alphabet, word)
    counts = [0] * len(alphabet)
    for x in word:
        counts[x] += 1
    return ParikhVector(tuple(counts))


@dataclass(frozen=True)
class Automaton:
    """Deterministic automaton with a possibly partial transition table.

    ``delta[q][x]`` is the target state id or ``None`` when undefined.
    """

    n_states: int
    alphabet: Alphabet
    delta: tuple[tuple[int | None, ...], ...]
    start: int
    accepting: frozenset[int]
    state_names: tuple[str, ...]

    def target(self, q, x):
        return self.delta[q][x]

    def transitions(self):
        for q, row in enumerate(self.delta):
            for x, t in enumerate(row):
                if t is not None:
                    yield q, x, t

    def __str__(self):
        return serialize(self)


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton without epsilon moves.

    ``delta[q][x]`` is a frozenset of target ids (possibly empty).
    """

    n_states: int
    alphabet: Alphabet
    delta: tuple[tuple[frozenset[int], ...], ...]
    start: int
    accepting: frozenset[int]
    state_names: tuple[str, ...]

    def transitions(self):
        for q, row in enumerate(self.delta):
            for x, ts in enumerate(row):
                for t in sorted(ts):
                    yield q, x, t

    def __str__(self):
        return serialize(self)


@dataclass
class RawDescription:
    """Name-based automaton description prior to validation.

    ``transitions`` holds ``(source, symbol, target)`` name triples; an
    optional fourth item is the source line number used in error messages.
    """

    alphabet: list
    states: list
    start: str | None
    accepting: list = field(default_factory=list)
    transitions: list = field(default_factory=list)


def _resolve(raw: RawDescription):
    alphabet = raw.alphabet if isinstance(raw.alphabet, Alphabet) else Alphabet(tuple(raw.alphabet))
    states = {}
    for name in raw.states:
        _check_name(name, "state")
        if name in states:
            raise DuplicateState(f"state {name!r} declared twice")
        states[name] = len(states)
    if not states:
        raise FormatError("an automaton needs at least one state")
    if raw.start is None:
        raise MissingStart("no start state given")
    if raw.start not in states:
        raise OutOfRangeReference(f"start state {raw.start!r} is not declared")
    accepting = set()
    for name in raw.accepting:
        if name not in states:
            raise OutOfRangeReference(f"accepting state {name!r} is not declared")
        accepting.add(states[name])

    table = [[[] for _ in alphabet.symbols] for _ in states]
    for item in raw.transitions:
        src, sym, dst = item[:3]
        where = f" (line {item[3]})" if len(item) > 3 else ""
        if src not in states:
            raise OutOfRangeReference(f"transition from undeclared state {src!r}{where}")
        if dst not in states:
            raise OutOfRangeReference(f"transition to undeclared state {dst!r}{where}")
        if sym not in alphabet.index:
            raise OutOfRangeReference(f"transition on undeclared symbol {sym!r}{where}")
        cell = table[states[src]][alphabet.index[sym]]
        if states[dst] in cell:
            raise DuplicateTransition(f"transition {src} {sym} -> {dst} listed twice{where}")
        cell.append(states[dst])
    return alphabet, tuple(states), states[raw.start], frozenset(accepting), table


def validate(raw: RawDescription) -> Automaton:
    """Validate a deterministic description and build an Automaton."""
    alphabet, names, start, accepting, table = _resolve(raw)
    delta = []
    for q, row in enumerate(table):
        out = []
        for x, cell in enumerate(row):
            if len(cell) > 1:
                raise DuplicateTransition(
                    f"state {names[q]!r} has {len(cell)} targets on symbol {alphabet.symbols[x]!r}"
                )
            out.append(cell[0] if cell else None)
        delta.append(tuple(out))
    return Automaton(len(names), alphabet, tuple(delta), start, accepting, names)


def validate_nfa(raw: RawDescription) -> Nfa:
    alphabet, names, start, accepting, table = _resolve(raw)
    delta = tuple(tuple(frozenset(cell) for cell in row) for row in table)
    return Nfa(len(names), alphabet, delta, start, accepting, names)


def build(alphabet, states, start, accepting, transitions) -> Automaton:
    """Convenience constructor: ``build("ab", ["q0","q1"], "q0", ["q0"], [("q0","a","q1")])``."""
    return validate(RawDescription(list(alphabet), list(states), start, list(accepting), list(transitions)))


def build_nfa(alphabet, states, start, accepting, transitions) -> Nfa:
    return validate_nfa(RawDescription(list(alphabet), list(states), start, list(accepting), list(transitions)))


def is_complete(a: Automaton) -> bool:
    return all(t is not None for row in a.delta for t in row)


def is_deterministic(n: Nfa) -> bool:
    return all(len(ts) <= 1 for row in n.delta for ts in row)


def nfa_from_automaton(a: Automaton) -> Nfa:
    delta = tuple(
        tuple(frozenset() if t is None else frozenset((t,)) for t in row) for row in a.delta
    )
    return Nfa(a.n_states, a.alphabet, delta, a.start, a.accepting, a.state_names)


def automaton_from_nfa(n: Nfa) -> Automaton:
    if not is_deterministic(n):
        raise DuplicateTransition("NFA has a (state, symbol) pair with several targets")
    delta = tuple(tuple(next(iter(ts)) if ts else None for ts in row) for row in n.delta)
    return Automaton(n.n_states, n.alphabet, delta, n.start, n.accepting, n.state_names)


_HEADERS = ("alphabet", "states", "start", "accept")


def parse_description(text: str) -> RawDescription:
    seen = {}
    transitions = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if sep and " " not in head.strip() and head.strip() in _HEADERS:
            key = head.strip()
            if key in seen:
                raise FormatError(f"duplicate '{key}:' line", lineno)
            seen[key] = (rest.split(), lineno)
            continue
        tokens = line.split()
        if len(tokens) != 4 or tokens[2] != "->":
            raise FormatError(f"expected 'STATE SYMBOL -> STATE', got {line!r}", lineno)
        transitions.append((tokens[0], tokens[1], tokens[3], lineno))

    for key in ("alphabet", "states"):
        if key not in seen:
            raise FormatError(f"missing '{key}:' line")
    if "start" not in seen or not seen["start"][0]:
        raise MissingStart("no 'start:' line")
    start_tokens, start_line = seen["start"]
    if len(start_tokens) != 1:
        raise FormatError("exactly one start state expected", start_line)
    try:
        alphabet = Alphabet(tuple(seen["alphabet"][0]))
    except FormatError as exc:
        raise FormatError(str(exc), seen["alphabet"][1]) from None
    return RawDescription(
        alphabet=alphabet,
        states=seen["states"][0],
        start=start_tokens[0],
        accepting=seen.get("accept", ([], None))[0],
        transitions=transitions,
    )


def parse_automaton(text: str) -> Automaton | Nfa:
    """Parse the text format; returns an Nfa only when some pair has several targets."""
    raw = parse_description(text)
    pairs = {}
    for src, sym, _dst, *_ in raw.transitions:
        pairs[(src, sym)] = pairs.get((src, sym), 0) + 1
    if any(c > 1 for c in pairs.values()):
        return validate_nfa(raw)
    return validate(raw)


def load(path) -> Automaton | Nfa:
    with open(path, encoding="utf-8") as fh:
        return parse_automaton(fh.read())


def serialize(a: Automaton | Nfa) -> str:
    names = a.state_names
    lines = [
        ("alphabet: " + " ".join(a.alphabet.symbols)).rstrip(),
        "states: " + " ".join(names),
        "start: " + names[a.start],
        ("accept: " + " ".join(names[q] for q in sorted(a.accepting))).rstrip(),
    ]
    for q, x, t in a.transitions():
        lines.append(f"{names[q]} {a.alphabet.symbols[x]} -> {names[t]}")
    return "\n".join(lines) + "\n"


def relabel(a: Automaton, names: Iterable[str]) -> Automaton:
    names = tuple(names)
    if len(names) != a.n_states or len(set(names)) != len(names):
        raise DuplicateState("relabel needs one distinct name per state")
    for n in names:
        _check_name(n, "state")
    return Automaton(a.n_states, a.alphabet, a.delta, a.start, a.accepting, names)
