"""JSON scene files: named sets, chains, gauges, structures, maps and disks.

Rationals are written as integers or ``"p/q"`` strings; floats are rejected
so that nothing inexact enters the computation. Errors carry the JSON path
of the offending entry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .bornology import BoundedDisk
from .gauge import GaugeFunctional
from .lipstruct import ChainMetric, GaugeMetric, LipschitzStructure, ScaledMetric, generate_structure
from .metrization import DEFAULT_DEPTH, MAX_DEPTH, CircledChain, DyadicPseudoSeminorm, chain_from_convex, scale_chain
from .numkernel import as_rat
from .sets import DEFAULT_CAP, BalancedPolytope, CircledSet
from .veccheck import MapSpec

SECTIONS = ("sets", "chains", "gauges", "structures", "maps", "disks")


class SceneError(ValueError):
    def __init__(self, message, location="$"):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


@dataclass
class Scene:
    dimension: int
    raw: dict
    sets: dict = field(default_factory=dict)
    chains: dict = field(default_factory=dict)
    gauges: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    disks: dict = field(default_factory=dict)
    depth_override: int = None
    cap: int = DEFAULT_CAP
    validation_samples: int = 200
    seed: int = 0
    _psn_cache: dict = field(default_factory=dict)

    def lookup(self, section, name, location="$"):
        table = getattr(self, section)
        if name not in table:
            raise SceneError(f"unknown {section[:-1]} {name!r}", location)
        return table[name]

    def psn(self, name, strategy="fast") -> DyadicPseudoSeminorm:
        key = (name, strategy)
        if key not in self._psn_cache:
            chain = self.lookup("chains", name, f"$.chains.{name}")
            self._psn_cache[key] = DyadicPseudoSeminorm(
                _validated(chain, self), strategy=strategy, cap=self.cap, name=name)
        return self._psn_cache[key]

    def metric(self, name, location="$"):
        if name in self.gauges:
            return GaugeMetric(self.gauges[name], name=name)
        if name in self.chains:
            return ChainMetric(self.psn(name), name=name)
        raise SceneError(f"unknown metric {name!r} (not a gauge or chain)", location)


def _validated(chain, scene):
    from .metrization import UNVALIDATED, validated
    if chain.status != UNVALIDATED:
        return chain
    return validated(chain, samples=scene.validation_samples, seed=scene.seed, cap=scene.cap)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _rat(value, loc):
    if isinstance(value, float):
        raise SceneError(f"floating-point value {value!r}; write rationals as \"p/q\"", loc)
    try:
        return as_rat(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SceneError(f"malformed rational {value!r}", loc) from None


def _vector(value, loc, dim=None):
    if not isinstance(value, list) or not value:
        raise SceneError("expected a nonempty list of rationals", loc)
    v = tuple(_rat(a, f"{loc}[{i}]") for i, a in enumerate(value))
    if dim is not None and len(v) != dim:
        raise SceneError(f"dimension {len(v)} does not match {dim}", loc)
    return v


def _matrix(value, loc):
    if not isinstance(value, list) or not value:
        raise SceneError("expected a nonempty list of rows", loc)
    rows = [_vector(r, f"{loc}[{i}]") for i, r in enumerate(value)]
    if len({len(r) for r in rows}) != 1:
        raise SceneError("matrix rows differ in length", loc)
    return rows


def _object(value, loc):
    if not isinstance(value, dict):
        raise SceneError("expected an object", loc)
    return value


def _parse_set(spec, loc, dim):
    spec = _object(spec, loc)
    pieces = spec.get("pieces")
    if not isinstance(pieces, list) or not pieces:
        raise SceneError("a set needs a nonempty 'pieces' list", loc)
    d = spec.get("dimension", dim)
    out = []
    for i, piece in enumerate(pieces):
        ploc = f"{loc}.pieces[{i}]"
        if not isinstance(piece, list) or not piece:
            raise SceneError("a piece is a nonempty list of generators", ploc)
        out.append(BalancedPolytope(tuple(_vector(g, f"{ploc}[{j}]", d) for j, g in enumerate(piece))))
    return CircledSet(tuple(out))


def _set_ref(scene, ref, loc):
    if isinstance(ref, str):
        return scene.lookup("sets", ref, loc)
    return _parse_set(ref, loc, scene.dimension)


def _depth(value, loc, override):
    if override is not None:
        value = override
    if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= MAX_DEPTH:
        raise SceneError(f"depth must be an integer in 1..{MAX_DEPTH}", loc)
    return value


def _parse_chain(scene, name, spec, loc):
    spec = _object(spec, loc)
    if "from_convex" in spec:
        U = _set_ref(scene, spec["from_convex"], f"{loc}.from_convex")
        if not U.is_convex_piece:
            raise SceneError("from_convex needs a single-piece set", f"{loc}.from_convex")
        depth = _depth(spec.get("depth", DEFAULT_DEPTH), f"{loc}.depth", scene.depth_override)
        return chain_from_convex(U, depth)
    if "levels" in spec:
        levels = spec["levels"]
        if not isinstance(levels, list) or not levels:
            raise SceneError("'levels' must be a nonempty list", f"{loc}.levels")
        if len(levels) > MAX_DEPTH:
            raise SceneError(f"at most {MAX_DEPTH} levels", f"{loc}.levels")
        sets = [_set_ref(scene, v, f"{loc}.levels[{i}]") for i, v in enumerate(levels)]
        return CircledChain(tuple(sets))
    if "scale" in spec and "chain" in spec:
        base_name = spec["chain"]
        if base_name not in scene.chains:
            raise SceneError(f"unknown chain {base_name!r} (define it earlier)", f"{loc}.chain")
        s = _rat(spec["scale"], f"{loc}.scale")
        if s <= 0:
            raise SceneError("scale must be positive", f"{loc}.scale")
        return scale_chain(scene.chains[base_name], s)
    raise SceneError("a chain needs 'from_convex', 'levels' or 'scale'+'chain'", loc)


def _parse_gauge(scene, spec, loc, name):
    spec = _object(spec, loc)
    if "set" in spec:
        return GaugeFunctional(_set_ref(scene, spec["set"], f"{loc}.set"), name=name)
    if "disk" in spec:
        disk = scene.lookup("disks", spec["disk"], f"{loc}.disk")
        return GaugeFunctional.of_disk(disk.polytope, name=name)
    raise SceneError("a gauge needs 'set' or 'disk'", loc)


def _parse_structure(scene, spec, loc):
    spec = _object(spec, loc)
    gens = spec.get("generators")
    if not isinstance(gens, list) or not gens:
        raise SceneError("a structure needs a nonempty 'generators' list", loc)
    metrics = []
    for i, g in enumerate(gens):
        gloc = f"{loc}.generators[{i}]"
        if isinstance(g, str):
            metrics.append(scene.metric(g, gloc))
        else:
            g = _object(g, gloc)
            if "metric" not in g or "scale" not in g:
                raise SceneError("expected a name or {'metric', 'scale'}", gloc)
            s = _rat(g["scale"], f"{gloc}.scale")
            if s <= 0:
                raise SceneError("scale must be positive", f"{gloc}.scale")
            metrics.append(ScaledMetric(s, scene.metric(g["metric"], f"{gloc}.metric")))
    if len(metrics) > 8:
        raise SceneError("at most 8 generating metrics", loc)
    if len({m.dim for m in metrics}) != 1:
        raise SceneError("generating metrics live on different spaces", loc)
    return generate_structure(metrics)


def _parse_map(spec, loc, name):
    spec = _object(spec, loc)
    if "linear" in spec:
        m = _matrix(spec["linear"], f"{loc}.linear")
        if "shift" in spec:
            b = _vector(spec["shift"], f"{loc}.shift", len(m))
            return MapSpec.affine(m, b, name=name)
        return MapSpec.linear(m, name=name)
    if "blackbox" in spec:
        table = spec["blackbox"]
        if not isinstance(table, list) or not table:
            raise SceneError("'blackbox' must be a nonempty list of [input, output] pairs", f"{loc}.blackbox")
        pairs = []
        for i, pair in enumerate(table):
            ploc = f"{loc}.blackbox[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise SceneError("expected [input, output]", ploc)
            x, y = _vector(pair[0], f"{ploc}[0]"), _vector(pair[1], f"{ploc}[1]")
            if pairs and (len(x) != len(pairs[0][0]) or len(y) != len(pairs[0][1])):
                raise SceneError("pair dimensions differ from the first pair", ploc)
            pairs.append((x, y))
        return MapSpec.blackbox(pairs, name=name)
    for kind, ctor in (("addition", MapSpec.addition), ("scalar", MapSpec.scalar_multiplication)):
        if kind in spec:
            d = spec[kind]
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise SceneError("expected a positive dimension", f"{loc}.{kind}")
            return ctor(d, name=name)
    raise SceneError("a map needs 'linear', 'blackbox', 'addition' or 'scalar'", loc)


def parse_scene(doc, depth=None, cap=DEFAULT_CAP, samples=200, seed=0) -> Scene:
    doc = _object(doc, "$")
    dim = doc.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SceneError("'dimension' must be a positive integer", "$.dimension")
    unknown = set(doc) - set(SECTIONS) - {"dimension", "description"}
    if unknown:
        raise SceneError(f"unknown keys {sorted(unknown)}", "$")
    scene = Scene(dim, doc, depth_override=depth, cap=cap, validation_samples=samples, seed=seed)
    for section in SECTIONS:
        _object(doc.get(section, {}), f"$.{section}")
    for name, spec in doc.get("sets", {}).items():
        scene.sets[name] = _parse_set(spec, f"$.sets.{name}", dim)
    for name, spec in doc.get("disks", {}).items():
        loc = f"$.disks.{name}"
        S = _set_ref(scene, _object(spec, loc).get("set"), f"{loc}.set")
        if not S.is_convex_piece:
            raise SceneError("a disk must be a single convex piece", f"{loc}.set")
        scene.disks[name] = BoundedDisk(S.pieces[0], name=name)
    for name, spec in doc.get("chains", {}).items():
        scene.chains[name] = _parse_chain(scene, name, spec, f"$.chains.{name}")
    for name, spec in doc.get("gauges", {}).items():
        if name in scene.chains:
            raise SceneError("gauge and chain names must differ", f"$.gauges.{name}")
        scene.gauges[name] = _parse_gauge(scene, spec, f"$.gauges.{name}", name)
    for name, spec in doc.get("structures", {}).items():
        scene.structures[name] = _parse_structure(scene, spec, f"$.structures.{name}")
    for name, spec in doc.get("maps", {}).items():
        scene.maps[name] = _parse_map(spec, f"$.maps.{name}", name)
    return scene


def load_scene(path, **kwargs) -> Scene:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return parse_scene(doc, **kwargs)


def parse_point(text, dim=None):
    parts = [p.strip() for p in text.split(",")]
    v = tuple(_rat(p, f"--point[{i}]") for i, p in enumerate(parts))
    if dim is not None and len(v) != dim:
        raise SceneError(f"point has dimension {len(v)}, expected {dim}", "--point")
    return v


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def rat_str(a: Fraction) -> str:
    return str(a)


def _set_doc(S: CircledSet):
    return {"pieces": [[[rat_str(a) for a in g] for g in p.generators] for p in S.pieces]}


def dump_scene(scene: Scene) -> dict:
    """Explicit-form document for a parsed scene.

    Chains are written level by level, so constructors are expanded; the
    result parses back to objects with identical membership behaviour.
    """
    doc = {"dimension": scene.dimension}
    doc["sets"] = {n: _set_doc(S) for n, S in scene.sets.items()}
    doc["disks"] = {n: {"set": _set_doc(CircledSet((d.polytope,)))} for n, d in scene.disks.items()}
    doc["chains"] = {n: {"levels": [_set_doc(v) for v in c.levels]} for n, c in scene.chains.items()}
    gauges = {}
    for n, g in scene.gauges.items():
        if g.on_span:
            disk = next(k for k, d in scene.disks.items() if d.polytope == g.polytope)
            gauges[n] = {"disk": disk}
        else:
            gauges[n] = {"set": _set_doc(g.base)}
    doc["gauges"] = gauges
    raw_structs = scene.raw.get("structures", {})
    doc["structures"] = {n: raw_structs[n] for n in scene.structures}
    maps = {}
    for n, f in scene.maps.items():
        if f.kind in ("linear", "affine"):
            m = {"linear": [[rat_str(a) for a in r] for r in f.matrix]}
            if f.shift is not None:
                m["shift"] = [rat_str(a) for a in f.shift]
        elif f.kind == "blackbox":
            m = {"blackbox": [[[rat_str(a) for a in x], [rat_str(a) for a in y]] for x, y in f.table]}
        elif f.kind == "addition":
            m = {"addition": f.out_dim}
        else:
            m = {"scalar": f.out_dim}
        maps[n] = m
    doc["maps"] = maps
    return doc
