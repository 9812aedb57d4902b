"""Versioned, checksummed binary artifacts.

Layout::

    b"RMSY" | version (1 byte) | kind length (1 byte) | kind | sha256(payload) | payload

where ``payload`` is zlib-compressed canonical JSON.  Every artifact embeds the
graph it was built from, so one file is enough to query, route or verify.
"""
from __future__ import annotations

import hashlib
import json
import zlib
from typing import Any

from .forest import ForestCollection
from .graph import WeightedGraph
from .oracle import EpsilonOracle, OracleCollection
from .routing import Label, NetworkRoutingScheme, Table, TreeRoutingScheme
from .tree import SpanningTree
from .ultrametric import UltrametricTree

MAGIC = b"RMSY"
VERSION = 1
KINDS = ("oracle", "forest", "scheme")


class ArtifactError(ValueError):
    """Unreadable, corrupted or mismatched artifact."""


class ChecksumMismatch(ArtifactError):
    pass


def pack(kind: str, body: dict[str, Any]) -> bytes:
    raw = json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
    payload = zlib.compress(raw, 9)
    k = kind.encode()
    return MAGIC + bytes([VERSION, len(k)]) + k + hashlib.sha256(payload).digest() + payload


def unpack(blob: bytes) -> tuple[str, dict[str, Any]]:
    if blob[:4] != MAGIC:
        raise ArtifactError("not a ramsey artifact (bad magic)")
    if len(blob) < 6 or blob[4] != VERSION:
        raise ArtifactError(f"unsupported artifact version {blob[4] if len(blob) > 4 else None}")
    klen = blob[5]
    kind = blob[6:6 + klen].decode(errors="replace")
    digest = blob[6 + klen:6 + klen + 32]
    payload = blob[6 + klen + 32:]
    if hashlib.sha256(payload).digest() != digest:
        raise ChecksumMismatch("artifact checksum mismatch (file corrupted)")
    try:
        body = json.loads(zlib.decompress(payload))
    except (zlib.error, ValueError) as exc:
        raise ArtifactError(f"undecodable payload: {exc}") from None
    return kind, body


# -- graphs -------------------------------------------------------------------

def graph_to_dict(g: WeightedGraph) -> dict:
    return {"n": g.n, "names": list(g.names), "edges": [[u, v, w] for u, v, w in g.edges()],
            "fingerprint": g.fingerprint()}


def graph_from_dict(d: dict) -> WeightedGraph:
    g = WeightedGraph(d["n"], [tuple(e) for e in d["edges"]], names=d["names"])
    if g.fingerprint() != d["fingerprint"]:
        raise ArtifactError("embedded graph does not match its fingerprint")
    return g


def require_graph(body: dict, g: WeightedGraph) -> None:
    """Raise unless the artifact was built from ``g``."""
    if body["graph"]["fingerprint"] != g.fingerprint():
        raise ArtifactError("artifact was built from a different graph")


# -- oracles ------------------------------------------------------------------

def _tree_to_dict(t: UltrametricTree) -> dict:
    return {"parent": t.parent, "label": t.label, "level": t.level,
            "leaf_of": sorted(t.leaf_of.items()), "scale": t.scale}


def _tree_from_dict(d: dict) -> UltrametricTree:
    return UltrametricTree(d["parent"], d["label"], d["level"], {v: x for v, x in d["leaf_of"]},
                           [None] * len(d["parent"]), d["scale"])


def _collection_to_dict(o: OracleCollection) -> dict:
    return {"variant": o.variant, "k": o.k, "scale": o.scale, "home": o.home,
            "round_sizes": o.round_sizes, "trees": [_tree_to_dict(t) for t in o.trees]}


def _collection_from_dict(d: dict) -> OracleCollection:
    return OracleCollection(d["variant"], d["k"], d["scale"], [_tree_from_dict(t) for t in d["trees"]],
                            d["home"], [], d["round_sizes"])


def dump_oracle(o: OracleCollection | EpsilonOracle, g: WeightedGraph) -> bytes:
    if isinstance(o, EpsilonOracle):
        body = {"variant": "eps", "eps": o.eps, "k": o.k,
                "copies": [_collection_to_dict(c) for c in o.copies]}
    else:
        body = {"variant": o.variant, "k": o.k, "copies": [_collection_to_dict(o)]}
    body["graph"] = graph_to_dict(g)
    return pack("oracle", body)


def load_oracle(blob: bytes) -> tuple[OracleCollection | EpsilonOracle, WeightedGraph]:
    body = _expect(blob, "oracle")
    g = graph_from_dict(body["graph"])
    copies = [_collection_from_dict(c) for c in body["copies"]]
    if body["variant"] == "eps":
        return EpsilonOracle(body["eps"], body["k"], copies), g
    return copies[0], g


# -- forests and schemes -----------------------------------------------------

def _forest_to_dict(f: ForestCollection) -> dict:
    return {"k": f.k, "home": f.home,
            "trees": [{"root": t.root, "edges": [list(e) for e in t.edges]} for t in f.trees],
            "survivors": [sorted(s) for s in f.survivors],
            "marked": [sorted(m) for m in f.marked]}


def _forest_from_dict(d: dict, g: WeightedGraph) -> ForestCollection:
    trees = [SpanningTree(g, t["root"], [tuple(e) for e in t["edges"]]) for t in d["trees"]]
    return ForestCollection(d["k"], trees, [frozenset(s) for s in d["survivors"]], d["home"],
                            [frozenset(m) for m in d["marked"]])


def dump_forest(f: ForestCollection, g: WeightedGraph) -> bytes:
    return pack("forest", {"graph": graph_to_dict(g), "forest": _forest_to_dict(f)})


def load_forest(blob: bytes) -> tuple[ForestCollection, WeightedGraph]:
    body = _expect(blob, "forest")
    g = graph_from_dict(body["graph"])
    return _forest_from_dict(body["forest"], g), g


def dump_scheme(s: NetworkRoutingScheme) -> bytes:
    schemes = []
    for ts in s.schemes:
        schemes.append({
            "tables": [[t.dfs_in, t.dfs_out, t.depth, t.parent_port, [list(h) for h in t.heavy]]
                       for t in ts.tables],
            "labels": [[lab.dfs, [list(e) for e in lab.light]] for lab in ts.labels],
        })
    return pack("scheme", {"graph": graph_to_dict(s.graph), "forest": _forest_to_dict(s.forest),
                           "b": s.b, "schemes": schemes})


def load_scheme(blob: bytes) -> NetworkRoutingScheme:
    body = _expect(blob, "scheme")
    g = graph_from_dict(body["graph"])
    f = _forest_from_dict(body["forest"], g)
    schemes = []
    for T, d in zip(f.trees, body["schemes"]):
        tables = [Table(a, b, dep, pp, tuple(tuple(h) for h in hv)) for a, b, dep, pp, hv in d["tables"]]
        labels = [Label(dfs, tuple(tuple(e) for e in light)) for dfs, light in d["labels"]]
        schemes.append(TreeRoutingScheme(body["b"], T, tables, labels))
    return NetworkRoutingScheme(g, body["b"], f, schemes)


def _expect(blob: bytes, kind: str) -> dict:
    got, body = unpack(blob)
    if got != kind:
        raise ArtifactError(f"expected a {kind} artifact, found {got!r}")
    return body


def load_any(blob: bytes):
    """Decode any artifact; returns ``(kind, object, graph)``."""
    kind, body = unpack(blob)
    if kind == "oracle":
        o, g = load_oracle(blob)
        return kind, o, g
    if kind == "forest":
        f, g = load_forest(blob)
        return kind, f, g
    if kind == "scheme":
        s = load_scheme(blob)
        return kind, s, s.graph
    raise ArtifactError(f"unknown artifact kind {kind!r}")


__all__ = [
    "ArtifactError", "ChecksumMismatch", "dump_forest", "dump_oracle", "dump_scheme",
    "load_any", "load_forest", "load_oracle", "load_scheme", "pack", "unpack", "require_graph",
]
