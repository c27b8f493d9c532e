"""Canonical JSON for signature sets, grids, CSP instances, and scripts.

One normal form everywhere: sorted keys, two-space indent, scalar values
rendered through the exact literal grammar.  Emitted documents re-parse to
identical objects and re-emit byte for byte, which is what the golden
files and the replay hashes rely on.
"""

import hashlib
import json

from . import scalar as _sc
from .constructions import GadgetScript
from .errors import ParseError
from .grid import CspInstance, Grid
from .scalar import DEFAULT_EPS
from .signature import Signature

FIELDS = ("cyclo24", "approx")


def canonical_dumps(data) -> str:
    """Display form: sorted keys, indented, stable across runs."""
    return json.dumps(data, sort_keys=True, indent=2)


def compact_dumps(data) -> str:
    """Hash form: sorted keys, no whitespace."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def replay_hash(data) -> str:
    """Hex digest of the compact canonical form."""
    return hashlib.sha256(compact_dumps(data).encode("utf-8")).hexdigest()


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON at line %d column %d: %s"
                         % (exc.lineno, exc.colno, exc.msg))


# -- signatures ---------------------------------------------------------------------


def signature_entry(sig: Signature, name: str | None = None) -> dict:
    """One signature as {"arity", "values", "default"} plus optional name."""
    values = {}
    for idx in sig.support():
        key = format(idx, "0%db" % sig.arity) if sig.arity else ""
        values[key] = _sc.format_literal(sig.table[idx])
    entry = {"arity": sig.arity, "values": values, "default": "0"}
    if name is not None:
        entry["name"] = name
    return entry


def entry_to_signature(entry: dict, field: str,
                       eps: float = DEFAULT_EPS) -> Signature:
    if not isinstance(entry, dict):
        raise ParseError("signature entry must be an object")
    try:
        arity = int(entry["arity"])
        values = entry["values"]
    except (KeyError, TypeError, ValueError):
        raise ParseError("signature entry needs integer 'arity' and a "
                         "'values' map")
    if arity < 0:
        raise ParseError("negative arity %d" % arity)
    default = _sc.parse_literal(str(entry.get("default", "0")), field, eps)
    table = [default] * (1 << arity)
    for key, literal in values.items():
        if len(key) != arity or any(c not in "01" for c in key):
            raise ParseError("bit string %r does not fit arity %d"
                             % (key, arity))
        table[int(key, 2) if key else 0] = _sc.parse_literal(
            str(literal), field, eps)
    return Signature(table, field=field, eps=eps)


def sigset_to_json(named, field: str | None = None) -> dict:
    """named: iterable of (name, Signature); field inferred when omitted."""
    named = list(named)
    if field is None:
        field = named[0][1].backend if named else "cyclo24"
    entries = [signature_entry(sig, name) for name, sig in named]
    entries.sort(key=lambda e: e["name"])
    return {"field": field, "signatures": entries}


def sigset_from_json(data, eps: float = DEFAULT_EPS) -> tuple:
    """Returns (field, ordered name->Signature dict)."""
    if not isinstance(data, dict):
        raise ParseError("signature set must be an object")
    field = data.get("field", "cyclo24")
    if field not in FIELDS:
        raise ParseError("unknown field %r" % (field,))
    sigs = {}
    for entry in data.get("signatures", ()):
        name = entry.get("name") if isinstance(entry, dict) else None
        if not isinstance(name, str) or not name:
            raise ParseError("every signature needs a non-empty name")
        if name in sigs:
            raise ParseError("duplicate signature name %r" % name)
        sigs[name] = entry_to_signature(entry, field, eps)
    return field, sigs


# -- grids --------------------------------------------------------------------------


def grid_to_json(grid: Grid, names) -> dict:
    """names: signature name per vertex, aligned with grid.signatures."""
    names = list(names)
    if len(names) != len(grid.signatures):
        raise ParseError("need one name per vertex")
    ref = {}
    for k, (end0, end1) in enumerate(grid.edges):
        ref[end0] = [k, 0]
        ref[end1] = [k, 1]
    m = len(grid.edges)
    for j, port in enumerate(grid.externals):
        ref[port] = [m + j, 0]
    vertices = []
    for v, sig in enumerate(grid.signatures):
        ends = [ref[(v, s)] for s in range(sig.arity)]
        vertices.append({"sig": names[v], "ends": ends})
    return {"vertices": vertices,
            "edges": list(range(m + len(grid.externals))),
            "dangling": list(range(m, m + len(grid.externals)))}


def grid_from_json(data, sigset: dict) -> tuple:
    """Returns (Grid, vertex name list); sigset maps names to tables."""
    if not isinstance(data, dict):
        raise ParseError("grid must be an object")
    try:
        vertices = list(data["vertices"])
        edge_ids = list(data["edges"])
    except (KeyError, TypeError):
        raise ParseError("grid needs 'vertices' and 'edges'")
    dangling = list(data.get("dangling", ()))
    known = set(edge_ids)
    if len(known) != len(edge_ids):
        raise ParseError("duplicate edge id")
    if any(d not in known for d in dangling):
        raise ParseError("dangling id not listed under 'edges'")
    claims: dict = {}
    sigs = []
    names = []
    for v, vertex in enumerate(vertices):
        try:
            name = vertex["sig"]
            ends = vertex["ends"]
        except (KeyError, TypeError):
            raise ParseError("vertex %d needs 'sig' and 'ends'" % v)
        if name not in sigset:
            raise ParseError("vertex %d references unknown signature %r"
                             % (v, name))
        sig = sigset[name]
        names.append(name)
        sigs.append(sig.with_fresh_vars())
        if len(ends) != sig.arity:
            raise ParseError("vertex %d lists %d ends but %r has arity %d"
                             % (v, len(ends), name, sig.arity))
        for s, end in enumerate(ends):
            try:
                eid, side = end
            except (TypeError, ValueError):
                raise ParseError("edge-end ref must be [edge id, 0|1]")
            if eid not in known or side not in (0, 1):
                raise ParseError("vertex %d slot %d references unknown "
                                 "edge end %r" % (v, s, end))
            slot = claims.setdefault(eid, {})
            if side in slot:
                raise ParseError("edge %r end %d claimed twice" % (eid, side))
            slot[side] = (v, s)
    edges = []
    for eid in edge_ids:
        if eid in dangling:
            continue
        slot = claims.get(eid, {})
        if set(slot) != {0, 1}:
            raise ParseError("edge %r needs both ends wired" % (eid,))
        edges.append((slot[0], slot[1]))
    externals = []
    for eid in dangling:
        slot = claims.get(eid, {})
        if len(slot) != 1:
            raise ParseError("dangling edge %r needs exactly one end"
                             % (eid,))
        externals.append(next(iter(slot.values())))
    return Grid(sigs, edges, externals), names


# -- CSP instances ------------------------------------------------------------------


def csp_to_json(csp: CspInstance, names) -> dict:
    names = list(names)
    if len(names) != len(csp.constraints):
        raise ParseError("need one name per constraint")
    cons = [{"sig": names[i], "vars": list(vs)}
            for i, (_, vs) in enumerate(csp.constraints)]
    return {"num_vars": csp.num_vars, "constraints": cons}


def csp_from_json(data, sigset: dict) -> tuple:
    if not isinstance(data, dict) or "num_vars" not in data:
        raise ParseError("CSP instance needs 'num_vars'")
    cons = []
    names = []
    for i, c in enumerate(data.get("constraints", ())):
        try:
            name = c["sig"]
            vs = list(c["vars"])
        except (KeyError, TypeError):
            raise ParseError("constraint %d needs 'sig' and 'vars'" % i)
        if name not in sigset:
            raise ParseError("constraint %d references unknown signature %r"
                             % (i, name))
        names.append(name)
        cons.append((sigset[name], vs))
    return CspInstance(data["num_vars"], cons), names


def is_csp_json(data) -> bool:
    return isinstance(data, dict) and "num_vars" in data


# -- gadget scripts -----------------------------------------------------------------


def _meta_to_json(value):
    if isinstance(value, (_sc.Cyclo, _sc.Approx)):
        return {"$scalar": _sc.format_literal(value)}
    if isinstance(value, (list, tuple)):
        return [_meta_to_json(v) for v in value]
    if isinstance(value, dict):
        return {k: _meta_to_json(v) for k, v in value.items()}
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    raise ParseError("meta value %r is not serializable" % (value,))


def _meta_from_json(value, field: str, eps: float):
    if isinstance(value, dict):
        if set(value) == {"$scalar"}:
            return _sc.parse_literal(value["$scalar"], field, eps)
        return {k: _meta_from_json(v, field, eps) for k, v in value.items()}
    if isinstance(value, list):
        return [_meta_from_json(v, field, eps) for v in value]
    return value


def script_to_json(script: GadgetScript) -> dict:
    field = script.claimed.backend
    data = {
        "provenance": script.provenance,
        "field": field,
        "steps": [list(_meta_to_json(part) for part in step)
                  for step in script.steps],
        "base": {name: signature_entry(sig)
                 for name, sig in script.base.items()},
        "claimed": signature_entry(script.claimed),
        "meta": _meta_to_json(script.meta),
    }
    data["replay_hash"] = replay_hash(data)
    return data


def script_from_json(data, eps: float = DEFAULT_EPS) -> GadgetScript:
    if not isinstance(data, dict):
        raise ParseError("script must be an object")
    field = data.get("field", "cyclo24")
    if field not in FIELDS:
        raise ParseError("unknown field %r" % (field,))
    recorded = data.get("replay_hash")
    if recorded is not None:
        body = {k: v for k, v in data.items() if k != "replay_hash"}
        if replay_hash(body) != recorded:
            raise ParseError("replay hash does not match the script body")
    try:
        steps = [tuple(_meta_from_json(part, field, eps) for part in step)
                 for step in data["steps"]]
        base = {name: entry_to_signature(entry, field, eps)
                for name, entry in data["base"].items()}
        claimed = entry_to_signature(data["claimed"], field, eps)
        provenance = str(data["provenance"])
    except (KeyError, TypeError):
        raise ParseError("script needs 'steps', 'base', 'claimed', and "
                         "'provenance'")
    meta = _meta_from_json(data.get("meta", {}), field, eps)
    return GadgetScript(steps, claimed, provenance, base, meta)
