"""Loops and paths on a finite directed graph.

A loop is a word in signed edge steps that starts and ends at the base
vertex.  Two words are equivalent when they differ by immediate retracings
``e e^-1``; on a graph the freely reduced word is the canonical
representative, so every word returned from this module is reduced.

Steps are ``(edge_id, orientation)`` pairs with orientation ``+1`` (traverse
the edge from its source to its target) or ``-1`` (the reverse).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .errors import CompositionError, StructuralError

Step = tuple[Hashable, int]
HoopVector = tuple[int, ...]
GeneratorWord = tuple[tuple[int, int], ...]

LOOP = "loop"
PATH = "path"


@dataclass(frozen=True)
class Edge:
    id: Hashable
    source: Hashable
    target: Hashable


@dataclass(frozen=True)
class Graph:
    """Finite connected directed graph with a distinguished base vertex.

    Multiple edges and self-loops are allowed.  Edge order is significant:
    it fixes the spanning tree and the chord order of the generator basis.
    """

    vertices: tuple
    edges: tuple[Edge, ...]
    base: Hashable
    _by_id: dict = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if len(set(vertices)) != len(vertices):
            raise StructuralError("duplicate vertex identifiers")
        vset = set(vertices)
        if self.base not in vset:
            raise StructuralError(f"base vertex {self.base!r} is not a vertex")
        by_id = {}
        for e in edges:
            if e.id in by_id:
                raise StructuralError(f"duplicate edge id {e.id!r}")
            if e.source not in vset or e.target not in vset:
                raise StructuralError(f"edge {e.id!r} has an undeclared endpoint")
            by_id[e.id] = e
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_index", {e.id: i for i, e in enumerate(edges)})
        if not self.is_connected():
            raise StructuralError("graph is not connected")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], base=None, vertices=None) -> Graph:
        """Build a graph from ``(id, source, target)`` triples.

        Vertices default to the endpoints in order of first appearance and the
        base defaults to the first vertex.
        """
        edges = [Edge(*e) for e in edges]
        if vertices is None:
            seen = {}
            for e in edges:
                seen.setdefault(e.source, None)
                seen.setdefault(e.target, None)
            if base is not None:
                seen = {base: None, **seen}
            vertices = tuple(seen)
        if base is None:
            base = vertices[0]
        return cls(tuple(vertices), tuple(edges), base)

    def edge(self, edge_id) -> Edge:
        try:
            return self._by_id[edge_id]
        except KeyError:
            raise StructuralError(f"unknown edge {edge_id!r}") from None

    def edge_index(self, edge_id) -> int:
        return self._index[edge_id]

    @property
    def edge_ids(self) -> tuple:
        return tuple(e.id for e in self.edges)

    @property
    def rank(self) -> int:
        """Rank of the fundamental group, ``|E| - |V| + 1``."""
        return len(self.edges) - len(self.vertices) + 1

    def is_connected(self) -> bool:
        adj = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.source].append(e.target)
            adj[e.target].append(e.source)
        seen = {self.base}
        todo = [self.base]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def step_endpoints(self, step: Step) -> tuple:
        edge_id, sign = step
        e = self.edge(edge_id)
        if sign == 1:
            return e.source, e.target
        if sign == -1:
            return e.target, e.source
        raise StructuralError(f"orientation must be +1 or -1, got {sign!r}")


@dataclass(frozen=True)
class Word:
    """A sequence of edge steps on ``graph``.

    ``start`` is the source vertex; it only matters for the empty path and is
    filled in automatically otherwise (the base vertex for loops).  The
    constructor checks endpoint compatibility but does not reduce; use
    :func:`loop`, :func:`path` or :func:`reduce` for canonical words.
    """

    graph: Graph = field(repr=False)
    steps: tuple[Step, ...]
    kind: str = LOOP
    start: Hashable = None

    def __post_init__(self):
        steps = tuple((s[0], int(s[1])) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if self.kind not in (LOOP, PATH):
            raise StructuralError(f"unknown word kind {self.kind!r}")
        g = self.graph
        if steps:
            first = g.step_endpoints(steps[0])[0]
            if self.start is not None and self.start != first:
                raise StructuralError("declared start does not match the first step")
            object.__setattr__(self, "start", first)
        elif self.start is None:
            object.__setattr__(self, "start", g.base)
        elif self.start not in g.vertices:
            raise StructuralError(f"unknown start vertex {self.start!r}")
        at = self.start
        for i, step in enumerate(steps):
            src, dst = g.step_endpoints(step)
            if src != at:
                raise StructuralError(f"step {i} ({step[0]!r}) does not start at {at!r}")
            at = dst
        object.__setattr__(self, "_end", at)
        if self.kind == LOOP and (self.start != g.base or at != g.base):
            raise StructuralError("a loop must start and end at the base vertex")

    @property
    def source(self):
        return self.start

    @property
    def target(self):
        return self._end

    @property
    def is_closed(self) -> bool:
        return self.start == self._end

    def __len__(self):
        return len(self.steps)

    def __mul__(self, other: Word) -> Word:
        return compose(self, other)

    def tokens(self) -> list[str]:
        """Steps in the ``"e"`` / ``"~e"`` text form."""
        return [str(e) if s == 1 else f"~{e}" for e, s in self.steps]

    def __str__(self):
        return " ".join(self.tokens()) or "*"


def parse_step(token) -> Step:
    if isinstance(token, str):
        if token.startswith("~"):
            return token[1:], -1
        return token, 1
    edge_id, sign = token
    return edge_id, int(sign)


def reduce_steps(steps: Sequence[Step]) -> tuple[Step, ...]:
    """Cancel adjacent inverse pairs until none remain (single stack pass)."""
    out: list[Step] = []
    for e, s in steps:
        if out and out[-1][0] == e and out[-1][1] == -s:
            out.pop()
        else:
            out.append((e, s))
    return tuple(out)


def loop(graph: Graph, *tokens) -> Word:
    """Reduced loop at the base from tokens such as ``"e2", "~e1"``."""
    return reduce(Word(graph, tuple(parse_step(t) for t in tokens), LOOP))


def path(graph: Graph, *tokens, start=None) -> Word:
    """Reduced path from tokens; ``start`` is needed only for the empty path."""
    return reduce(Word(graph, tuple(parse_step(t) for t in tokens), PATH, start))


def constant_loop(graph: Graph) -> Word:
    return Word(graph, (), LOOP)


def reduce(w: Word) -> Word:
    steps = reduce_steps(w.steps)
    if steps == w.steps:
        return w
    return Word(w.graph, steps, w.kind, w.start)


def compose(w1: Word, w2: Word) -> Word:
    """Reduced concatenation ``w1 w2`` (traverse ``w1`` first)."""
    if w1.graph != w2.graph:
        raise CompositionError("words live on different graphs")
    if w1.target != w2.source:
        raise CompositionError(
            f"cannot compose: {w1.target!r} is not the source {w2.source!r}"
        )
    kind = LOOP if w1.kind == LOOP and w2.kind == LOOP else PATH
    return Word(w1.graph, reduce_steps(w1.steps + w2.steps), kind, w1.source)


def invert(w: Word) -> Word:
    steps = tuple((e, -s) for e, s in reversed(w.steps))
    return Word(w.graph, steps, w.kind, w.target)


def power(w: Word, k: int) -> Word:
    if not w.is_closed:
        if k in (0, 1, -1):
            return {0: Word(w.graph, (), w.kind, w.source), 1: w, -1: invert(w)}[k]
        raise CompositionError("only closed words have powers other than 0, ±1")
    base = w if k >= 0 else invert(w)
    return Word(w.graph, reduce_steps(base.steps * abs(k)), w.kind, w.source)


def product(words: Iterable[Word], graph: Graph | None = None) -> Word:
    words = list(words)
    if not words:
        if graph is None:
            raise StructuralError("empty product needs a graph")
        return constant_loop(graph)
    out = words[0]
    for w in words[1:]:
        out = compose(out, w)
    return out


@dataclass(frozen=True)
class GeneratorBasis:
    """Free generators of the loop group of a graph.

    ``generators[i]`` is the reduced loop running along the tree to the
    source of ``chords[i]``, across the chord, and back along the tree.
    """

    graph: Graph = field(repr=False)
    tree: frozenset
    chords: tuple
    generators: tuple[Word, ...]

    @property
    def rank(self) -> int:
        return len(self.chords)

    def chord_index(self, edge_id) -> int | None:
        try:
            return self.chords.index(edge_id)
        except ValueError:
            return None

    def edge_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Columns are the edge-count vectors of the generators (``|E|`` rows)."""
        cols = [path_abelianize(b) for b in self.generators]
        return tuple(tuple(col[r] for col in cols) for r in range(len(self.graph.edges)))


def _bfs_tree(g: Graph) -> tuple[set, dict]:
    # parent_step[v] is the step entering v from its BFS parent
    parent_step: dict = {g.base: None}
    parent: dict = {g.base: None}
    tree = set()
    queue = deque([g.base])
    while queue:
        u = queue.popleft()
        for e in g.edges:
            if e.source == u and e.target not in parent:
                parent[e.target], parent_step[e.target] = u, (e.id, 1)
            elif e.target == u and e.source not in parent:
                parent[e.source], parent_step[e.source] = u, (e.id, -1)
            else:
                continue
            tree.add(e.id)
            queue.append(e.target if e.source == u else e.source)
    if len(parent) != len(g.vertices):
        raise StructuralError("graph is not connected")
    paths = {}
    for v in g.vertices:
        steps = []
        at = v
        while parent_step[at] is not None:
            steps.append(parent_step[at])
            at = parent[at]
        paths[v] = tuple(reversed(steps))
    return tree, paths


def spanning_tree_generators(g: Graph) -> GeneratorBasis:
    tree, to_vertex = _bfs_tree(g)
    chords = tuple(e.id for e in g.edges if e.id not in tree)
    gens = []
    for c in chords:
        e = g.edge(c)
        back = tuple((x, -s) for x, s in reversed(to_vertex[e.target]))
        steps = reduce_steps(to_vertex[e.source] + ((c, 1),) + back)
        gens.append(Word(g, steps, LOOP))
    return GeneratorBasis(g, frozenset(tree), chords, tuple(gens))


def reduce_generator_word(word: Iterable[tuple[int, int]]) -> GeneratorWord:
    return reduce_steps(tuple(word))


def decompose(w: Word, basis: GeneratorBasis) -> GeneratorWord:
    """Express a loop as a reduced word in the generator symbols.

    Symbols are ``(i, ±1)`` with ``i`` the 0-based generator index.  Tree
    steps are dropped; each chord traversal becomes one generator symbol.
    """
    index = {c: i for i, c in enumerate(basis.chords)}
    return reduce_steps(
        tuple((index[e], s) for e, s in reduce_steps(w.steps) if e in index)
    )


def substitute(word: Iterable[tuple[int, int]], basis: GeneratorBasis) -> Word:
    """Replace generator symbols by their loops and reduce."""
    steps: list[Step] = []
    for i, s in word:
        gen = basis.generators[i]
        steps.extend(gen.steps if s == 1 else invert(gen).steps)
    return Word(basis.graph, reduce_steps(steps), LOOP)


def abelianize(w: Word, basis: GeneratorBasis) -> HoopVector:
    """Net signed number of traversals of each chord."""
    index = {c: i for i, c in enumerate(basis.chords)}
    v = [0] * basis.rank
    for e, s in w.steps:
        i = index.get(e)
        if i is not None:
            v[i] += s
    return tuple(v)


def kernel_test(w: Word, basis: GeneratorBasis) -> bool:
    """True iff ``w`` lies in the commutator subgroup of the loop group."""
    return not any(abelianize(w, basis))


def path_abelianize(w: Word) -> HoopVector:
    """Net signed traversal count per edge, in edge declaration order."""
    g = w.graph
    v = [0] * len(g.edges)
    for e, s in w.steps:
        v[g.edge_index(e)] += s
    return tuple(v)


def generator_power_word(
    exponents: Sequence[Sequence[int]], loops: Sequence[Word]
) -> Word:
    """The word ``prod_j prod_i loops[i] ** exponents[i][j]``.

    ``exponents`` has one row per loop and one column per block, so its row
    sums are the net exponents of each loop.
    """
    if not loops:
        raise StructuralError("need at least one loop")
    g = loops[0].graph
    start = loops[0].source
    steps: list[Step] = []
    ncols = len(exponents[0]) if exponents else 0
    for j in range(ncols):
        for i, w in enumerate(loops):
            steps.extend(power(w, exponents[i][j]).steps)
    return Word(g, reduce_steps(steps), loops[0].kind, start)
