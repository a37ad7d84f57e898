"""Language-level tooling over finite windows Σ^{≤n}.

Words are always enumerated in shortlex order: by length, then
lexicographically by symbol id. "First difference" means first in that
order.
"""

from __future__ import annotations

import csv
import io
import itertools
import random
from collections import deque
from dataclasses import dataclass

from .core import Automaton, Nfa, build, build_nfa, check_word, is_complete, nfa_from_automaton
from .engines import ENGINES, _owj_fast, nfa_accepts, run_classical, run_jumping
from .errors import (
    AlphabetMismatch,
    BadParameter,
    BoundsExceedSample,
    CapExceeded,
    NotComplete,
    StateCapExceeded,
    UnknownFamily,
    UnsupportedEngine,
)

DEFAULT_ENUM_CAP = 2 * 10**6
DEFAULT_SUBSET_CAP = 2**20


def acceptor(a, engine):
    """Membership predicate over trusted id tuples for the given engine."""
    if engine not in ENGINES:
        raise UnsupportedEngine(f"unknown engine {engine!r}; expected one of {', '.join(ENGINES)}")
    if engine == "jumping":
        return lambda w: run_jumping(a, w)
    if isinstance(a, Nfa):
        if engine == "owj":
            raise UnsupportedEngine("one-way jumping mode is defined for deterministic machines only")
        return lambda w: nfa_accepts(a, w)
    if engine == "owj":
        return lambda w: _owj_fast(a, w).accepted
    return lambda w: run_classical(a, w).accepted


def window_size(k, max_len):
    return sum(k**i for i in range(max_len + 1))


def shortlex(k, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(range(k), repeat=n)


def _check_cap(k, max_len, cap):
    total = window_size(k, max_len)
    if total > cap:
        raise CapExceeded(f"window of {total} words exceeds the cap of {cap}")
    return total


@dataclass(frozen=True)
class LanguageSample:
    """Membership of every word of length ≤ max_len.

    ``levels[n]`` holds one byte (0/1) per word of length n, indexed by the
    word read as a base-k number.
    """

    alphabet: object
    max_len: int
    levels: tuple[bytes, ...]

    def member(self, word) -> bool:
        w = check_word(self.alphabet, word)
        if len(w) > self.max_len:
            raise BoundsExceedSample(f"word of length {len(w)} outside a window of {self.max_len}")
        return bool(self.levels[len(w)][_index(w, len(self.alphabet))])

    __contains__ = member

    def __len__(self):
        return sum(len(lv) for lv in self.levels)

    def items(self):
        k = len(self.alphabet)
        for n in range(self.max_len + 1):
            for i, w in enumerate(itertools.product(range(k), repeat=n)):
                yield w, bool(self.levels[n][i])

    def accepted(self):
        return [w for w, m in self.items() if m]

    def export(self) -> str:
        """One ``word<TAB>bit`` line per word in shortlex order."""
        out = io.StringIO()
        for w, m in self.items():
            out.write(f"{self.alphabet.decode(w)}\t{int(m)}\n")
        return out.getvalue()


def _index(w, k):
    i = 0
    for x in w:
        i = i * k + x
    return i


def enumerate_language(a, engine, max_len, cap=DEFAULT_ENUM_CAP) -> LanguageSample:
    k = len(a.alphabet)
    _check_cap(k, max_len, cap)
    member = acceptor(a, engine)
    levels = []
    for n in range(max_len + 1):
        levels.append(bytes(member(w) for w in itertools.product(range(k), repeat=n)))
    return LanguageSample(a.alphabet, max_len, tuple(levels))


@dataclass(frozen=True)
class Comparison:
    n: int
    counterexample: tuple | None = None
    left: bool | None = None
    right: bool | None = None

    @property
    def equal(self):
        return self.counterexample is None


def equivalent_up_to(a1, engine1, a2, engine2, n, cap=DEFAULT_ENUM_CAP) -> Comparison:
    """Compare two acceptors on Σ^{≤n}; reports the first differing word."""
    if a1.alphabet != a2.alphabet:
        raise AlphabetMismatch("acceptors have different alphabets")
    k = len(a1.alphabet)
    _check_cap(k, n, cap)
    m1 = acceptor(a1, engine1)
    m2 = acceptor(a2, engine2)
    for w in shortlex(k, n):
        x, y = m1(w), m2(w)
        if x != y:
            return Comparison(n, w, x, y)
    return Comparison(n)


@dataclass(frozen=True)
class ResidualTable:
    alphabet: object
    p: int
    s: int
    prefixes: tuple
    suffixes: tuple
    rows: tuple[int, ...]
    classes: tuple[int, ...]

    @property
    def distinct_rows(self):
        return len(set(self.rows))

    def verdict(self):
        return f"consistent with ≤ {self.distinct_rows} residuals up to (p={self.p}, s={self.s})"

    def export_csv(self) -> str:
        width = max(1, (len(self.suffixes) + 3) // 4)
        out = io.StringIO()
        wr = csv.writer(out, lineterminator="\n")
        wr.writerow(["prefix", "row_bits_hex", "row_class_id"])
        for u, row, c in zip(self.prefixes, self.rows, self.classes):
            wr.writerow([self.alphabet.decode(u), format(row, f"0{width}x"), c])
        return out.getvalue()


def residual_probe(sample: LanguageSample, p: int, s: int) -> ResidualTable:
    """Bounded Myhill-Nerode table over prefixes ≤ p and suffixes ≤ s.

    Bit j of a row is the membership of ``prefix + suffixes[j]``. Class ids
    number distinct rows in order of first appearance.
    """
    if p < 0 or s < 0 or p + s > sample.max_len:
        raise BoundsExceedSample(f"p + s = {p + s} exceeds the sample window {sample.max_len}")
    k = len(sample.alphabet)
    prefixes = tuple(shortlex(k, p))
    suffixes = tuple(shortlex(k, s))
    levels = sample.levels
    rows = []
    for u in prefixes:
        bits = 0
        for j, v in enumerate(suffixes):
            w = u + v
            if levels[len(w)][_index(w, k)]:
                bits |= 1 << j
        rows.append(bits)
    ids = {}
    classes = tuple(ids.setdefault(r, len(ids)) for r in rows)
    return ResidualTable(sample.alphabet, p, s, prefixes, suffixes, tuple(rows), classes)


def _set_name(names, subset):
    return "{" + ",".join(names[q] for q in sorted(subset)) + "}"


def subset_construction(n, cap=DEFAULT_SUBSET_CAP) -> Automaton:
    """Reachable-subset determinization; the result is complete."""
    if isinstance(n, Automaton):
        n = nfa_from_automaton(n)
    k = len(n.alphabet)
    start = frozenset((n.start,))
    index = {start: 0}
    order = [start]
    delta = []
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        row = []
        for x in range(k):
            nxt = frozenset().union(*(n.delta[q][x] for q in cur)) if cur else frozenset()
            if nxt not in index:
                if len(index) >= cap:
                    raise StateCapExceeded(f"subset construction exceeded {cap} states")
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            row.append(index[nxt])
        delta.append(tuple(row))
    accepting = frozenset(i for i, sub in enumerate(order) if not sub.isdisjoint(n.accepting))
    names = tuple(_set_name(n.state_names, sub) for sub in order)
    return Automaton(len(order), n.alphabet, tuple(delta), 0, accepting, names)


def complete(a: Automaton, sink="sink") -> Automaton:
    """Add a rejecting sink for undefined transitions (classical semantics only)."""
    if is_complete(a):
        return a
    name = sink
    i = 0
    while name in a.state_names:
        i += 1
        name = f"{sink}{i}"
    s = a.n_states
    k = len(a.alphabet)
    delta = tuple(tuple(s if t is None else t for t in row) for row in a.delta) + ((s,) * k,)
    return Automaton(s + 1, a.alphabet, delta, a.start, a.accepting, a.state_names + (name,))


def _reachable(a):
    seen = [a.start]
    mark = {a.start}
    i = 0
    while i < len(seen):
        for t in a.delta[seen[i]]:
            if t is not None and t not in mark:
                mark.add(t)
                seen.append(t)
        i += 1
    return seen


def _hopcroft(n, k, delta, accepting):
    inv = [[[] for _ in range(n)] for _ in range(k)]
    for q in range(n):
        for x in range(k):
            inv[x][delta[q][x]].append(q)
    fin = {q for q in range(n) if q in accepting}
    rest = set(range(n)) - fin
    blocks = [b for b in (fin, rest) if b]
    block_of = [0] * n
    for i, b in enumerate(blocks):
        for q in b:
            block_of[q] = i
    work = [min(range(len(blocks)), key=lambda i: len(blocks[i]))] if len(blocks) == 2 else []
    pending = set(work)
    while work:
        a = work.pop()
        pending.discard(a)
        splitter = list(blocks[a])
        for x in range(k):
            touched = {}
            for q in splitter:
                for p in inv[x][q]:
                    touched.setdefault(block_of[p], set()).add(p)
            for b, inside in touched.items():
                if len(inside) == len(blocks[b]):
                    continue
                outside = blocks[b] - inside
                blocks[b] = inside
                new = len(blocks)
                blocks.append(outside)
                for q in outside:
                    block_of[q] = new
                if b in pending:
                    work.append(new)
                    pending.add(new)
                else:
                    pick = b if len(inside) <= len(outside) else new
                    work.append(pick)
                    pending.add(pick)
    return block_of


def minimize(a: Automaton, require_complete: bool = False) -> Automaton:
    """Minimal complete DFA under classical semantics.

    Partial input is first completed with a sink unless ``require_complete``.
    States are renumbered breadth first from the start; each block keeps
    the name of its first member in the original declaration order.
    """
    if isinstance(a, Nfa):
        raise NotComplete("minimize expects a deterministic automaton; determinize first")
    if not is_complete(a):
        if require_complete:
            raise NotComplete("automaton is partial and completion is not allowed")
        a = complete(a)
    reach = sorted(_reachable(a))
    local = {q: i for i, q in enumerate(reach)}
    k = len(a.alphabet)
    delta = [[local[a.delta[q][x]] for x in range(k)] for q in reach]
    accepting = {local[q] for q in reach if q in a.accepting}
    block_of = _hopcroft(len(reach), k, delta, accepting)

    order = {block_of[local[a.start]]: 0}
    queue = deque([block_of[local[a.start]]])
    rep = {}
    for i, q in enumerate(reach):
        rep.setdefault(block_of[i], q)
    members = {}
    for i in range(len(reach)):
        members.setdefault(block_of[i], i)
    new_delta = {}
    while queue:
        b = queue.popleft()
        q = members[b]
        row = []
        for x in range(k):
            t = block_of[delta[q][x]]
            if t not in order:
                order[t] = len(order)
                queue.append(t)
            row.append(order[t])
        new_delta[order[b]] = tuple(row)
    m = len(order)
    blocks_in_order = sorted(order, key=order.get)
    names = tuple(a.state_names[rep[b]] for b in blocks_in_order)
    acc = frozenset(order[b] for b in blocks_in_order if members[b] in accepting)
    return Automaton(m, a.alphabet, tuple(new_delta[i] for i in range(m)), 0, acc, names)


def isomorphic(a: Automaton, b: Automaton) -> bool:
    """Exact isomorphism test (start to start); brute force, meant for small machines."""
    if (a.n_states, a.alphabet, len(a.accepting)) != (b.n_states, b.alphabet, len(b.accepting)):
        return False
    others_a = [q for q in range(a.n_states) if q != a.start]
    others_b = [q for q in range(b.n_states) if q != b.start]
    for perm in itertools.permutations(others_b):
        f = {a.start: b.start, **dict(zip(others_a, perm))}
        if {f[q] for q in a.accepting} != b.accepting:
            continue
        if all(
            (t is None and b.delta[f[q]][x] is None) or (t is not None and b.delta[f[q]][x] == f[t])
            for q in range(a.n_states)
            for x, t in enumerate(a.delta[q])
        ):
            return True
    return False


def owj_machines(n_states, symbols=("a", "b"), trim=True):
    """Every partial DFA with the given size (start = first state).

    With ``trim`` only machines whose states are all reachable are produced.
    """
    names = [f"q{i}" for i in range(n_states)]
    k = len(symbols)
    pairs = [(q, x) for q in range(n_states) for x in range(k)]
    for targets in itertools.product([None, *range(n_states)], repeat=len(pairs)):
        trans = [(names[q], symbols[x], names[t]) for (q, x), t in zip(pairs, targets) if t is not None]
        for acc_bits in range(2**n_states):
            acc = [names[i] for i in range(n_states) if acc_bits >> i & 1]
            a = build(symbols, names, names[0], acc, trans)
            if trim and len(_reachable(a)) != n_states:
                continue
            yield a


def nonunique_minimal_pairs(n_states=2, window=10, symbols=("a", "b")):
    """Pairs of non-isomorphic ``n_states`` machines with equal OWJ windows.

    Only windows that no smaller machine realises are kept, so both members
    of a pair have the minimal state count for that window.
    """
    smaller = set()
    for m in range(1, n_states):
        for a in owj_machines(m, symbols, trim=False):
            smaller.add(enumerate_language(a, "owj", window).levels)
    groups = {}
    for a in owj_machines(n_states, symbols):
        key = enumerate_language(a, "owj", window).levels
        if key in smaller:
            continue
        groups.setdefault(key, []).append(a)
    pairs = []
    for machines in groups.values():
        for x, y in itertools.combinations(machines, 2):
            if not isomorphic(x, y):
                pairs.append((x, y))
    return pairs


FAMILIES = ("lab", "kth_last", "complete_random", "partial_random")


def gen_family(name, *params, symbols=("a", "b")):
    """Fixture automata.

    ``lab``: the two-state machine for equal numbers of a's and b's.
    ``kth_last k``: (k+1)-state NFA for "k-th letter from the end is a".
    ``complete_random n seed`` and ``partial_random n density seed``:
    seed-deterministic random DFAs (start q0, each state accepting with
    probability 1/2).
    """
    if name == "lab":
        if params:
            raise BadParameter("lab takes no parameters")
        return build("ab", ["q0", "q1"], "q0", ["q0"], [("q0", "a", "q1"), ("q1", "b", "q0")])
    if name == "kth_last":
        if len(params) != 1 or not isinstance(params[0], int) or params[0] < 1:
            raise BadParameter("kth_last needs one integer k >= 1")
        k = params[0]
        names = [f"q{i}" for i in range(k + 1)]
        trans = [("q0", "a", "q0"), ("q0", "b", "q0"), ("q0", "a", "q1")]
        for i in range(1, k):
            trans += [(names[i], "a", names[i + 1]), (names[i], "b", names[i + 1])]
        return build_nfa("ab", names, "q0", [names[k]], trans)
    if name in ("complete_random", "partial_random"):
        want = 2 if name == "complete_random" else 3
        if len(params) != want:
            raise BadParameter(f"{name} needs {want} parameters")
        n, *rest = params
        seed = rest[-1]
        density = 1.0 if name == "complete_random" else rest[0]
        if not isinstance(n, int) or n < 1:
            raise BadParameter("number of states must be a positive integer")
        if not 0.0 <= density <= 1.0:
            raise BadParameter("density must lie in [0, 1]")
        rng = random.Random(seed)
        names = [f"q{i}" for i in range(n)]
        trans = []
        for q in names:
            for x in symbols:
                if name == "complete_random" or rng.random() < density:
                    trans.append((q, x, names[rng.randrange(n)]))
        acc = [q for q in names if rng.random() < 0.5]
        return build(symbols, names, "q0", acc, trans)
    raise UnknownFamily(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")
