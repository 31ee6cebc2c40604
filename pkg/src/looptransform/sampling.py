"""Seeded random graphs, words, levels and polynomials for property sweeps."""

from __future__ import annotations

import numpy as np

from .hoop_core import (
    LOOP,
    PATH,
    Edge,
    GeneratorBasis,
    Graph,
    Word,
    _bfs_tree,
    reduce_steps,
)
from .lattice import Level, columns_to_matrix, is_independent, matmul
from .torus import TrigPoly

DEFAULT_SEED = 42


def rng_from(seed=DEFAULT_SEED) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.uint64(seed))


def random_graph(rng, max_edges: int = 10, max_vertices: int = 5, min_rank: int = 0) -> Graph:
    """Connected graph with a random spanning tree plus extra edges.

    Extra edges may be self-loops or parallel edges; all orientations are
    random.  ``min_rank`` forces at least that many independent cycles.
    """
    while True:
        nv = int(rng.integers(1, max_vertices + 1))
        vertices = [f"v{i}" for i in range(nv)]
        edges = []
        for i in range(1, nv):
            j = int(rng.integers(0, i))
            a, b = (vertices[i], vertices[j]) if rng.random() < 0.5 else (vertices[j], vertices[i])
            edges.append((a, b))
        budget = max_edges - len(edges)
        if budget < min_rank:
            continue
        extra = int(rng.integers(min_rank, budget + 1))
        for _ in range(extra):
            a, b = rng.integers(0, nv, size=2)
            edges.append((vertices[int(a)], vertices[int(b)]))
        order = rng.permutation(len(edges))
        es = tuple(Edge(f"e{k}", *edges[int(i)]) for k, i in enumerate(order))
        base = vertices[int(rng.integers(0, nv))]
        return Graph(tuple(vertices), es, base)


def random_walk(rng, graph: Graph, start, length: int) -> list:
    steps = []
    at = start
    if not graph.edges:
        return steps
    for _ in range(length):
        options = []
        for e in graph.edges:
            if e.source == at:
                options.append((e.id, 1))
            if e.target == at:
                options.append((e.id, -1))
        step = options[int(rng.integers(0, len(options)))]
        steps.append(step)
        at = graph.step_endpoints(step)[1]
    return steps


def _tree_paths(graph: Graph) -> dict:
    return _bfs_tree(graph)[1]


def random_loop(rng, graph: Graph, max_length: int = 8, reduced: bool = True, at=None) -> Word:
    """Random closed walk at ``at`` (default: the base), closed along the tree."""
    at = graph.base if at is None else at
    paths = _tree_paths(graph)
    walk = random_walk(rng, graph, at, int(rng.integers(0, max_length + 1)))
    end = graph.step_endpoints(walk[-1])[1] if walk else at
    # tree path end -> base -> at
    back = [(e, -s) for e, s in reversed(paths[end])] + list(paths[at])
    steps = walk + back
    if reduced:
        steps = reduce_steps(steps)
    kind = LOOP if at == graph.base else PATH
    return Word(graph, tuple(steps), kind, at)


def random_path(rng, graph: Graph, max_length: int = 6) -> Word:
    start = graph.vertices[int(rng.integers(0, len(graph.vertices)))]
    walk = random_walk(rng, graph, start, int(rng.integers(0, max_length + 1)))
    return Word(graph, reduce_steps(walk), PATH, start)


def random_generator_word(rng, basis: GeneratorBasis, length: int = 6) -> Word:
    """A loop built from random generator symbols (not necessarily reduced)."""
    steps = []
    for _ in range(length):
        if not basis.rank:
            break
        b = basis.generators[int(rng.integers(0, basis.rank))]
        s = 1 if rng.random() < 0.5 else -1
        steps.extend(b.steps if s == 1 else [(e, -t) for e, t in reversed(b.steps)])
    return Word(basis.graph, tuple(steps), LOOP)


def zero_sum_exponents(rng, rows: int, cols: int, bound: int = 3) -> list[list[int]]:
    """Integer matrix with every row summing to zero."""
    k = rng.integers(-bound, bound + 1, size=(rows, max(cols, 2)))
    k[:, -1] = -k[:, :-1].sum(axis=1)
    return k.astype(int).tolist()


def nonzero_sum_exponents(rng, rows: int, cols: int, bound: int = 3) -> list[list[int]]:
    """Integer matrix with at least one nonzero row sum."""
    while True:
        k = rng.integers(-bound, bound + 1, size=(rows, cols))
        if np.any(k.sum(axis=1) != 0):
            return k.astype(int).tolist()


def random_independent(rng, ambient: int, count: int, bound: int = 3) -> list[tuple[int, ...]]:
    if count > ambient:
        raise ValueError("cannot draw more independent vectors than the dimension")
    while True:
        vs = [tuple(int(x) for x in rng.integers(-bound, bound + 1, size=ambient)) for _ in range(count)]
        if is_independent(vs):
            return vs


def random_level(rng, ambient: int, rank: int | None = None, bound: int = 3) -> Level:
    if rank is None:
        rank = int(rng.integers(0, ambient + 1))
    return Level(ambient, tuple(random_independent(rng, ambient, rank, bound)))


def random_full_rank_matrix(rng, rows: int, cols: int, bound: int = 3):
    """``rows x cols`` integer matrix of rank ``cols``."""
    return columns_to_matrix(random_independent(rng, rows, cols, bound), rows)


def random_sublevel(rng, fine: Level, rank: int | None = None, bound: int = 3):
    """A level inside ``fine`` together with the matrix ``K`` that defines it."""
    if rank is None:
        rank = int(rng.integers(0, fine.rank + 1))
    K = random_full_rank_matrix(rng, fine.rank, rank, bound)
    cols = matmul(fine.matrix, K) if fine.rank else tuple(() for _ in range(fine.ambient))
    basis = tuple(tuple(row[j] for row in cols) for j in range(rank))
    return Level(fine.ambient, basis), K


def random_trig_poly(rng, dim: int, bandwidth: int = 3, terms: int | None = None) -> TrigPoly:
    if dim == 0:
        return TrigPoly(0, {(): complex(rng.standard_normal(), rng.standard_normal())})
    if terms is None:
        terms = int(rng.integers(1, 7))
    coeffs = {}
    for _ in range(terms):
        k = tuple(int(x) for x in rng.integers(-bandwidth, bandwidth + 1, size=dim))
        coeffs[k] = complex(rng.standard_normal(), rng.standard_normal())
    return TrigPoly(dim, coeffs)


def random_hoop(rng, ambient: int, bound: int = 3) -> tuple[int, ...]:
    return tuple(int(x) for x in rng.integers(-bound, bound + 1, size=ambient))

