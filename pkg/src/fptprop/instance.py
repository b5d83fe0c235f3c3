"""Reading and writing instance files.

An instance is a YAML document (comments allowed) checked against
``instance.schema.json``. Errors carry the line of the offending node::

    variables:
      - {name: X1, domain: [1, 2]}
    set_variables:
      - {name: S, universe: [1, 2, 3], lb: [1], ub: [1, 2]}
    constraints:
      - {kind: nvalue, x: [X1, X2], n: N}
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import jsonschema
import yaml

from .core import ConstraintDescriptor, FPTError, ProblemState, UsageError

__all__ = ["InstanceError", "SCHEMA", "load_instance", "parse_instance", "dump_instance", "instance_to_dict"]

SCHEMA = json.loads(resources.files(__package__).joinpath("instance.schema.json").read_text())
_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


class InstanceError(FPTError):
    def __init__(self, message: str, source: str = "<instance>", line: int | None = None):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line


def _node_at(root, path):
    """Follow a key/index path through a composed YAML node tree."""
    node = root
    for step in path:
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                if key.value == step:
                    node = value
                    break
            else:
                return node
        elif isinstance(node, yaml.SequenceNode) and isinstance(step, int) and step < len(node.value):
            node = node.value[step]
        else:
            return node
    return node


class _Locator:
    def __init__(self, text: str, source: str):
        self.source = source
        try:
            self.root = yaml.compose(text, Loader=yaml.SafeLoader)
        except yaml.YAMLError:  # parse errors are reported by the loader
            self.root = None

    def error(self, message: str, path=()) -> InstanceError:
        line = None
        if self.root is not None:
            line = _node_at(self.root, list(path)).start_mark.line + 1
        field = "/".join(str(p) for p in path)
        return InstanceError(f"{field}: {message}" if field else message, self.source, line)


def parse_instance(text: str, source: str = "<instance>") -> ProblemState:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise InstanceError(f"YAML syntax error: {getattr(exc, 'problem', exc)}", source,
                            mark.line + 1 if mark else None) from None
    data = {} if data is None else data
    loc = _Locator(text, source)
    errors = sorted(_VALIDATOR.iter_errors(data), key=lambda e: (list(e.absolute_path), e.message))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise loc.error(err.message, err.absolute_path)
    return _build(data, loc)


def load_instance(path) -> ProblemState:
    path = Path(path)
    return parse_instance(path.read_text(), str(path))


def _build(data: dict, loc: _Locator) -> ProblemState:
    st = ProblemState()
    seen: dict[str, int] = {}
    setvars = {}

    def declare(name, path):
        if name in seen or name in setvars:
            raise loc.error(f"name {name!r} declared twice", path)

    for i, var in enumerate(data.get("variables", [])):
        declare(var["name"], ("variables", i, "name"))
        seen[var["name"]] = st.add_var(var["name"], var["domain"])
    for i, sv in enumerate(data.get("set_variables", [])):
        declare(sv["name"], ("set_variables", i, "name"))
        try:
            setvars[sv["name"]] = st.add_setvar(sv["name"], sv["universe"], sv.get("lb", ()), sv.get("ub"))
        except UsageError as exc:
            raise loc.error(str(exc), ("set_variables", i)) from None

    def var(name, path):
        if name not in seen:
            raise loc.error(f"undeclared variable {name!r}", path)
        return seen[name]

    def vars_(names, path):
        return [var(n, (*path, j)) for j, n in enumerate(names)]

    def setvar(name, path):
        if name not in setvars:
            raise loc.error(f"undeclared set variable {name!r}", path)
        return setvars[name]

    for i, c in enumerate(data.get("constraints", [])):
        at = ("constraints", i)
        kind = c["kind"]
        name = c.get("name", "")
        try:
            if kind == "nvalue":
                desc = ConstraintDescriptor.nvalue(vars_(c["x"], (*at, "x")), var(c["n"], (*at, "n")), name)
            elif kind in ("uses", "disjoint"):
                factory = getattr(ConstraintDescriptor, kind)
                desc = factory(vars_(c["x"], (*at, "x")), vars_(c["y"], (*at, "y")), name)
            elif kind == "cardpath":
                allowed = c.get("builtin") or c["tuples"]
                desc = ConstraintDescriptor.cardpath(vars_(c["x"], (*at, "x")), var(c["n"], (*at, "n")), c["p"], allowed, name)
            elif kind == "valsymbreak":
                sigmas = []
                for j, s in enumerate(c["symmetries"]):
                    if len(s["from"]) != len(s["to"]) or len(set(s["from"])) != len(s["from"]):
                        raise loc.error("from/to must be equal-length lists with distinct 'from' values", (*at, "symmetries", j))
                    sigmas.append(dict(zip(s["from"], s["to"])))
                desc = ConstraintDescriptor.valsymbreak(vars_(c["x"], (*at, "x")), sigmas, name)
            elif kind == "among_set":
                desc = ConstraintDescriptor.among_set(vars_(c["x"], (*at, "x")), setvar(c["s"], (*at, "s")), var(c["n"], (*at, "n")), name)
            elif kind == "roots":
                desc = ConstraintDescriptor.roots(vars_(c["x"], (*at, "x")), setvar(c["s"], (*at, "s")), setvar(c["t"], (*at, "t")), name)
            elif kind == "sum_eq":
                desc = ConstraintDescriptor.sum_eq(vars_(c["x"], (*at, "x")), var(c["target"], (*at, "target")), name)
            else:
                desc = ConstraintDescriptor.extensional(vars_(c["scope"], (*at, "scope")), c["tuples"], name)
        except UsageError as exc:
            raise loc.error(str(exc), at) from None
        st.post(desc)
    return st


def instance_to_dict(st: ProblemState) -> dict:
    """Inverse of parsing: set-variable bits are folded back into lb/ub."""
    bit_ids = {b for sv in st.setvars for b in sv.bits}
    out: dict = {
        "variables": [
            {"name": st.names[v], "domain": list(st.domains[v])} for v in range(len(st.domains)) if v not in bit_ids
        ]
    }
    if st.setvars:
        out["set_variables"] = [
            {
                "name": sv.name,
                "universe": list(sv.universe),
                "lb": sorted(sv.lb(st)),
                "ub": sorted(sv.ub(st)),
            }
            for sv in st.setvars
        ]
    names = st.names
    cons = []
    for c in st.constraints:
        r = c.roles
        d: dict = {"kind": c.kind}
        if c.name:
            d["name"] = c.name
        if c.kind == "extensional":
            d["scope"] = [names[v] for v in r["x"]]
            d["tuples"] = sorted(list(t) for t in c.params["tuples"])
            cons.append(d)
            continue
        d["x"] = [names[v] for v in r["x"]]
        if "y" in r:
            d["y"] = [names[v] for v in r["y"]]
        if "n" in r:
            d["n"] = names[r["n"]]
        if "target" in r:
            d["target"] = names[r["target"]]
        for role in ("s", "t"):
            if role in r:
                d[role] = r[role].name
        if c.kind == "cardpath":
            d["p"] = c.params["p"]
            allowed = c.params["allowed"]
            if isinstance(allowed, str):
                d["builtin"] = allowed
            else:
                d["tuples"] = sorted(list(t) for t in allowed)
        if c.kind == "valsymbreak":
            d["symmetries"] = [{"from": sorted(s), "to": [s[v] for v in sorted(s)]} for s in c.params["sigmas"]]
        cons.append(d)
    out["constraints"] = cons
    return out


def dump_instance(st: ProblemState, header: str | None = None) -> str:
    body = yaml.safe_dump(instance_to_dict(st), sort_keys=False, default_flow_style=None, width=100)
    if header:
        body = "".join(f"# {line}\n" for line in header.splitlines()) + body
    return body
