"""Line-delimited key/value report format.

Each line is ``dotted.key = value``; nested dicts and lists flatten to dotted
keys (list items use their index).  Values are JSON literals, except exact
rationals, which are written as ``p/q`` so they round-trip exactly.
Key order is the insertion order of the report tree, so identical runs
produce byte-identical output.
"""

from fractions import Fraction
import json
import re

SCHEMA = "kgsing-report/1"

_RATIONAL = re.compile(r"^-?\d+/\d+$")


def _value(v):
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return json.dumps(str(v))


def flatten(tree, prefix=""):
    out = []
    if isinstance(tree, dict):
        for k, v in tree.items():
            out += flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(tree, (list, tuple)):
        if not tree:
            out.append((prefix, "[]"))
        for i, v in enumerate(tree):
            out += flatten(v, f"{prefix}.{i}")
    else:
        out.append((prefix, _value(tree)))
    return out


def dumps(tree):
    return "".join(f"{k} = {v}\n" for k, v in flatten(tree))


def _parse_value(s):
    if s == "[]":
        return []
    if _RATIONAL.match(s):
        return Fraction(s)
    v = json.loads(s)
    return v


def loads(text):
    """Inverse of ``dumps`` (lists come back as lists, exact rationals as Fractions)."""
    root = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, raw = line.partition(" = ")
        parts = key.split(".")
        node = root
        for p in parts[:-1]:
            node = node.setdefault(p, {})
        node[parts[-1]] = _parse_value(raw)
    return _listify(root)


def _listify(node):
    if isinstance(node, dict):
        node = {k: _listify(v) for k, v in node.items()}
        if node and all(k.isdigit() for k in node):
            keys = sorted(node, key=int)
            if keys == [str(i) for i in range(len(keys))]:
                return [node[k] for k in keys]
    return node
