"""Brute-force Markov-chain oracle for biased walks, independent of qualia.cognition."""

import numpy as np

from qualia.cognition import KnowledgeGraph, generate_thoughts


def build_graph(nodes, edges, affect=None, rel=None):
    g = KnowledgeGraph()
    for n in nodes:
        g.add_node(n, (affect or {}).get(n), (rel or {}).get(n))
    for a, b, w in edges:
        g.add_edge(a, b, w)
    return g


def transition_matrix(nodes, edges, bias=None):
    """P[i, j] = w_ij * bias_j / sum_k w_ik * bias_k, from the raw edge list."""
    idx = {n: i for i, n in enumerate(nodes)}
    W = np.zeros((len(nodes), len(nodes)))
    for a, b, w in edges:
        W[idx[a], idx[b]] = W[idx[b], idx[a]] = w
    b = np.array([(bias or {}).get(n, 1.0) for n in nodes])
    M = W * b[None, :]
    rows = M.sum(axis=1, keepdims=True)
    return np.divide(M, rows, out=np.zeros_like(M), where=rows > 0)


def stationary(P):
    """Left eigenvector of P for eigenvalue 1, normalised to sum 1."""
    vals, vecs = np.linalg.eig(P.T)
    v = np.real(vecs[:, np.argmin(np.abs(vals - 1.0))])
    return v / v.sum()


def empirical(g, nodes, start, steps, emotion, alpha, beta, seed, goal_tag=None):
    """Walk once; return (transition frequency matrix, occupancy, transitions per row)."""
    (thought,) = generate_thoughts(g, start, goal_tag, emotion, steps, alpha, beta, seed)
    idx = {n: i for i, n in enumerate(nodes)}
    ids = np.fromiter((idx[n] for n in thought.path), dtype=np.intp, count=len(thought.path))
    counts = np.zeros((len(nodes), len(nodes)))
    np.add.at(counts, (ids[:-1], ids[1:]), 1)
    rows = counts.sum(axis=1, keepdims=True)
    freq = np.divide(counts, rows, out=np.zeros_like(counts), where=rows > 0)
    occupancy = np.bincount(ids[1:], minlength=len(nodes)) / steps
    return freq, occupancy, rows.ravel()


def steps_for_rows(P, per_row):
    """Walk length giving each branching row about ``per_row`` transitions at stationarity.

    Rows with a single neighbour are deterministic and need no samples.
    """
    branching = (P > 0).sum(axis=1) > 1
    return int(np.ceil(per_row / stationary(P)[branching].min()))


# Graph corpus (all <= 6 nodes): name -> (nodes, weighted edges)
CORPUS = {
    "triangle": (["a", "b", "c"], [("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)]),
    "path4": (["a", "b", "c", "d"], [("a", "b", 1.0), ("b", "c", 2.0), ("c", "d", 0.5)]),
    "star5": (["hub", "l1", "l2", "l3", "l4"], [("hub", "l1", 1.0), ("hub", "l2", 2.0), ("hub", "l3", 3.0), ("hub", "l4", 4.0)]),
    "k4": (
        ["a", "b", "c", "d"],
        [("a", "b", 1.0), ("a", "c", 2.0), ("a", "d", 3.0), ("b", "c", 1.5), ("b", "d", 0.5), ("c", "d", 1.0)],
    ),
    "bowtie": (
        ["a", "b", "m", "c", "d"],
        [("a", "b", 1.0), ("a", "m", 1.0), ("b", "m", 2.0), ("m", "c", 1.0), ("m", "d", 0.5), ("c", "d", 1.0)],
    ),
    "hex6": (
        ["p", "q", "r", "s", "t", "u"],
        [("p", "q", 1.0), ("q", "r", 0.7), ("r", "s", 1.3), ("s", "t", 2.0), ("t", "u", 1.0), ("u", "p", 0.4), ("p", "s", 1.1)],
    ),
}
