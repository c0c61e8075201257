"""Exact computations with multi-seminormed spaces.

Spaces, maps, nets and colourings are plain dicts in the msn/1 JSON format.
Rationals are strings such as "3/4".
"""

import json

from . import _msn

__all__ = [
    "MsnError",
    "back_and_forth",
    "build_iso",
    "build_net",
    "build_tower",
    "evaluate",
    "invariant_alpha",
    "is_embedding",
    "map_distance",
    "pushout",
    "search_monochromatic",
    "set_threads",
    "space",
    "verify_tower",
]


class MsnError(Exception):
    """A library error with its kind name and JSON witness (or None)."""

    def __init__(self, kind, message, witness):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.message = message
        self.witness = witness


def _call(fn, *args):
    try:
        return json.loads(fn(*args))
    except _msn.MsnError as e:
        kind, message, witness = e.args
        raise MsnError(kind, message, json.loads(witness)) from None


def _dump(obj):
    return json.dumps(obj)


def _q(x):
    return str(x)


def space(dim, seminorms, graded=False):
    """Build a space dict from lists of functionals (one list per seminorm)."""
    return {
        "format": "msn/1",
        "dim": dim,
        "graded": graded,
        "seminorms": [{"functionals": [[_q(c) for c in f] for f in fs]} for fs in seminorms],
    }


def set_threads(n):
    _msn.set_threads(n)


def invariant_alpha(x):
    return _call(_msn.invariant_alpha, _dump(x))


def is_embedding(f, delta="0"):
    return _call(_msn.is_embedding, _dump(f), _q(delta))


def map_distance(f, g):
    return _call(_msn.map_distance, _dump(f), _dump(g))


def evaluate(x, level, vector):
    try:
        return _msn.evaluate(_dump(x), level, [_q(c) for c in vector])
    except _msn.MsnError as e:
        kind, message, witness = e.args
        raise MsnError(kind, message, json.loads(witness)) from None


def pushout(x, y, z, f, g, delta="0", eps="1", graded=False):
    return _call(_msn.pushout, _dump(x), _dump(y), _dump(z), _dump(f), _dump(g), _q(delta), _q(eps), graded)


def build_iso(x, y, seed=0):
    return _call(_msn.build_iso, _dump(x), _dump(y), seed)


def build_tower(catalog, directory, stages=3, deltas=("0",), seed=0, omega=False):
    return _call(_msn.build_tower, [_dump(c) for c in catalog], str(directory), stages, [_q(d) for d in deltas], seed, omega)


def verify_tower(directory):
    return _call(_msn.verify_tower, str(directory))


def back_and_forth(a, b, start, steps):
    return _call(_msn.back_and_forth, str(a), str(b), start, steps)


def build_net(x, y, eps):
    return _call(_msn.build_net, _dump(x), _dump(y), _q(eps))


def search_monochromatic(net_xz, net_xy, colouring, candidates, eps):
    return _call(_msn.search_monochromatic, _dump(net_xz), _dump(net_xy), _dump(colouring), [_dump(c) for c in candidates], _q(eps))
