"""Multilayer edge-list files and bundled datasets.

File format (UTF-8, whitespace separated, ``#`` starts a comment line)::

    nodes <n> layers <L>          # exactly once, before any other record
    node <label>                  # optional: declare a (possibly isolated) node
    layer <label>                 # optional: declare a (possibly empty) layer
    <layer> <u> <v>               # intra-layer edge
    couple <i> <j> <u>            # node-aligned link between layers i and j
    coupling explicit|full        # optional: how to read absent couple lines

Without ``couple`` lines and without ``coupling explicit`` every node is
coupled across every pair of layers.  Labels map to dense ids: if all labels
of a kind are integers in ``range(count)`` they are used as-is, otherwise
they are sorted and numbered in order.
"""
from __future__ import annotations

import hashlib
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .network import FULL, MultisliceNetwork, NetworkError, build_network

DATASETS = ("florentine", "lazega")
LAZEGA_ENV = "MSER_LAZEGA_PATH"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


class DatasetUnavailable(FileNotFoundError):
    pass


@dataclass
class _Labels:
    kind: str
    count: int
    first_seen: dict[str, int] = field(default_factory=dict)

    def see(self, label: str, lineno: int) -> None:
        self.first_seen.setdefault(label, lineno)

    def mapping(self, source: str) -> tuple[dict[str, int], list[str]]:
        labels = list(self.first_seen)
        numeric = all(_is_int(x) for x in labels)
        if numeric and all(int(x) < self.count for x in labels):
            return {x: int(x) for x in labels}, [str(k) for k in range(self.count)]
        if len(labels) != self.count:
            if len(labels) > self.count:
                x = sorted(labels, key=self.first_seen.get)[self.count]
                raise ParseError(
                    f"unknown {self.kind} {x!r}: header declares {self.count} {self.kind}s",
                    self.first_seen[x], source,
                )
            raise ParseError(
                f"header declares {self.count} {self.kind}s but {len(labels)} labels were found; "
                f"declare isolated ones with '{self.kind} <label>'",
                None, source,
            )
        ordered = sorted(labels, key=int) if numeric else sorted(labels)
        return {x: k for k, x in enumerate(ordered)}, ordered


def _is_int(s: str) -> bool:
    return s.isdigit() and (s == "0" or not s.startswith("0"))


def _int_field(tok: str, what: str, lineno: int, source: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", lineno, source) from None
    if v < 1:
        raise ParseError(f"{what} must be >= 1, got {v}", lineno, source)
    return v


def parse_network(lines: Iterable[str], source: str = "<input>") -> MultisliceNetwork:
    header = None
    coupling_mode = None
    edges: list[tuple[str, str, str, int]] = []
    couples: list[tuple[str, str, str, int]] = []
    nodes = layers = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        head = tok[0]
        if head == "nodes":
            if header is not None:
                raise ParseError("duplicate header", lineno, source)
            if len(tok) != 4 or tok[2] != "layers":
                raise ParseError("header must read 'nodes <n> layers <L>'", lineno, source)
            header = (_int_field(tok[1], "node count", lineno, source),
                      _int_field(tok[3], "layer count", lineno, source))
            nodes = _Labels("node", header[0])
            layers = _Labels("layer", header[1])
            continue
        if header is None:
            raise ParseError("expected header 'nodes <n> layers <L>' before any record", lineno, source)
        if head == "node" and len(tok) == 2:
            nodes.see(tok[1], lineno)
        elif head == "layer" and len(tok) == 2:
            layers.see(tok[1], lineno)
        elif head == "couple":
            if len(tok) != 4:
                raise ParseError("coupling line must read 'couple <i> <j> <u>'", lineno, source)
            layers.see(tok[1], lineno)
            layers.see(tok[2], lineno)
            nodes.see(tok[3], lineno)
            couples.append((tok[1], tok[2], tok[3], lineno))
        elif head == "coupling":
            if len(tok) != 2 or tok[1] not in ("explicit", "full"):
                raise ParseError("expected 'coupling explicit' or 'coupling full'", lineno, source)
            if coupling_mode is not None and coupling_mode != tok[1]:
                raise ParseError("conflicting coupling directives", lineno, source)
            coupling_mode = tok[1]
        elif len(tok) == 3:
            layers.see(tok[0], lineno)
            nodes.see(tok[1], lineno)
            nodes.see(tok[2], lineno)
            edges.append((tok[0], tok[1], tok[2], lineno))
        else:
            raise ParseError(f"malformed line {line!r}", lineno, source)
    if header is None:
        raise ParseError("missing header 'nodes <n> layers <L>'", None, source)
    if coupling_mode == "full" and couples:
        raise ParseError("'coupling full' conflicts with explicit couple lines", couples[0][3], source)

    node_id, node_labels = nodes.mapping(source)
    layer_id, layer_labels = layers.mapping(source)
    n, L = header

    intra = []
    for l, u, v, lineno in edges:
        if u == v:
            raise ParseError(f"self-loop on node {u!r}", lineno, source)
        intra.append((layer_id[l], node_id[u], node_id[v]))
    coupling: list | str
    if couples or coupling_mode == "explicit":
        coupling = []
        for i, j, u, lineno in couples:
            if i == j:
                raise ParseError(f"coupling of layer {i!r} with itself", lineno, source)
            coupling.append((layer_id[i], layer_id[j], node_id[u]))
    else:
        coupling = FULL
    try:
        return build_network(n, L, intra, coupling, node_labels=node_labels, layer_labels=layer_labels)
    except NetworkError as exc:  # pragma: no cover - parse checks come first
        raise ParseError(str(exc), None, source) from exc


def load_network(path: str | os.PathLike, stdin: TextIO | None = None) -> MultisliceNetwork:
    """Read a network file; ``"-"`` reads standard input."""
    if str(path) == "-":
        return parse_network((stdin or sys.stdin).read().splitlines(), "<stdin>")
    p = Path(path)
    with p.open(encoding="utf-8") as fh:
        return parse_network(fh, str(p))


def dumps_network(net: MultisliceNetwork) -> str:
    """Serialize to the edge-list format; parsing the result gives ``net`` back."""
    nl = [net.node_label(u) for u in range(net.n)]
    ll = [net.layer_label(i) for i in range(net.L)]
    out = [f"nodes {net.n} layers {net.L}"]
    written = net.coupling if not net.is_fully_coupled else frozenset()
    used_nodes = {u for e in net.intra for pair in e for u in pair} | {u for _, _, u in written}
    used_layers = {i for i, e in enumerate(net.intra) if e} | {x for i, j, _ in written for x in (i, j)}
    identity_nodes = nl == [str(u) for u in range(net.n)]
    identity_layers = ll == [str(i) for i in range(net.L)]
    out += [f"node {nl[u]}" for u in range(net.n) if u not in used_nodes and not identity_nodes]
    out += [f"layer {ll[i]}" for i in range(net.L) if i not in used_layers and not identity_layers]
    out += [f"{ll[i]} {nl[u]} {nl[v]}" for i, u, v in net.edge_records()]
    if not net.is_fully_coupled:
        out.append("coupling explicit")
        out += [f"couple {ll[i]} {ll[j]} {nl[u]}" for i, j, u in net.coupling_records()]
    return "\n".join(out) + "\n"


def network_digest(net: MultisliceNetwork) -> str:
    return "sha256:" + hashlib.sha256(dumps_network(net).encode("utf-8")).hexdigest()


# ------------------------------------------------------------------ datasets


def dataset_path(name: str) -> Path:
    """Location of a bundled dataset, or of the user-supplied Lazega file."""
    name = name.removesuffix(".mnet")
    if name not in DATASETS:
        raise DatasetUnavailable(f"unknown dataset {name!r}; choose from {DATASETS}")
    bundled = resources.files("mser") / "data" / f"{name}.mnet"
    if bundled.is_file():
        return Path(str(bundled))
    if name == "lazega" and os.environ.get(LAZEGA_ENV):
        p = Path(os.environ[LAZEGA_ENV])
        if p.is_file():
            return p
        raise DatasetUnavailable(f"{LAZEGA_ENV}={p} does not name a file")
    raise DatasetUnavailable(
        f"dataset {name!r} is not bundled with this build; convert the original adjacency "
        f"matrices with mser.formats.network_from_matrices and point {LAZEGA_ENV} at the result"
    )


def load_dataset(name: str) -> MultisliceNetwork:
    return load_network(dataset_path(name))


def reference_values(name: str) -> dict | None:
    """Published figures for a bundled dataset, if a reference file is shipped."""
    import json

    ref = resources.files("mser") / "data" / f"{name.removesuffix('.mnet')}.reference.json"
    if not ref.is_file():
        return None
    return json.loads(ref.read_text(encoding="utf-8"))


def network_from_matrices(
    matrices: Sequence[np.ndarray | str | os.PathLike],
    node_labels: Sequence[str] | None = None,
    layer_labels: Sequence[str] | None = None,
) -> MultisliceNetwork:
    """Fully coupled network from square 0/1 matrices, one per layer.

    Directed ties are symmetrized: ``u ~ v`` if either ``M[u, v]`` or
    ``M[v, u]`` is non-zero.  The diagonal is ignored.  Paths are read with
    :func:`numpy.loadtxt`.
    """
    mats = [np.loadtxt(m) if isinstance(m, (str, os.PathLike)) else np.asarray(m) for m in matrices]
    n = mats[0].shape[0]
    edges = []
    for i, m in enumerate(mats):
        if m.shape != (n, n):
            raise NetworkError(f"layer {i} matrix has shape {m.shape}, expected {(n, n)}")
        sym = (m != 0) | (m.T != 0)
        u, v = np.nonzero(np.triu(sym, 1))
        edges += [(i, int(a), int(b)) for a, b in zip(u, v)]
    return build_network(n, len(mats), edges, FULL, node_labels=node_labels, layer_labels=layer_labels)
