"""Strategy certificates: extraction, JSON form, and an independent verifier.

A certificate is a DAG of game states keyed by their canonical text
``L=[..];H=[..]``. Each node is either terminal, with the guard that closes
it, or lists one decision for every adversary item: a bin to place it in
(and the resulting child state) or a cheat proof, the class multiset that
cannot fit ``m`` bins of size ``k - 1``.

Document layout (keys sorted, ``format_version`` 1)::

    {"format_version": 1,
     "params": {"k": 3, "m": 2, "s": 4},
     "root": "L=[0,0];H=[]",
     "nodes": {
       "L=[0,0];H=[]": {"branches": {"0|11": {"bin": 0, "child": "L=[1,0];H=[]"},
                                     "2|11": {"cheat": [2, 2, 1]}, ...}},
       "L=[3,0];H=[2]": {"terminal": "EmptiestBin"}}}

Key grammar: a state key is ``L=[`` m comma-separated levels ``]`` ``;H=[``
zero or more comma-separated classes ``]``, every list non-increasing, no
leading zeros. An item key is the class, ``|``, then one overflow bit per
bin in canonical position order.

Canonical-form rules enforced by :func:`verify`: a node is terminal exactly
when a guard applies, and names the first applicable guard in the order
VolumeExceeded, EmptiestBin, NoItems; a placement uses the lowest bin index
among bins with the same level and overflow bit; a cheat proof lists the
node's history plus the item's class. Class-0 items that do not overflow
every bin never appear: they go to any bin they do not overflow and change
nothing.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from .model import Item, Params, add_to_history, place, render_item, render_state
from .packing import PackingInstance, che, fits_exact

FORMAT_VERSION = 1
TERMINAL_REASONS = ("VolumeExceeded", "EmptiestBin", "NoItems")

_NUM = r"(?:0|[1-9][0-9]*)"
_STATE_RE = re.compile(rf"^L=\[({_NUM}(?:,{_NUM})*)\];H=\[((?:{_NUM}(?:,{_NUM})*)?)\]$")
_ITEM_RE = re.compile(rf"^({_NUM})\|([01]+)$")


class CertificateFormatError(ValueError):
    """The document is not a well-formed certificate."""

    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.col = col


class CertificateMisuseError(RuntimeError):
    """Extraction was attempted on a state the online player does not win."""


@dataclass(frozen=True)
class Terminal:
    reason: str


@dataclass(frozen=True)
class Place:
    bin: int
    child: str


@dataclass(frozen=True)
class CheatProof:
    classes: Tuple[int, ...]


Decision = Union[Place, CheatProof]


@dataclass(frozen=True)
class Branch:
    decisions: Dict[str, Decision]


Node = Union[Terminal, Branch]


@dataclass
class Certificate:
    params: Params
    root: str
    nodes: Dict[str, Node]

    def to_dict(self) -> dict:
        nodes = {}
        for key, node in self.nodes.items():
            if isinstance(node, Terminal):
                nodes[key] = {"terminal": node.reason}
            else:
                branches = {}
                for item, d in node.decisions.items():
                    if isinstance(d, Place):
                        branches[item] = {"bin": d.bin, "child": d.child}
                    else:
                        branches[item] = {"cheat": list(d.classes)}
                nodes[key] = {"branches": branches}
        p = self.params
        return {
            "format_version": FORMAT_VERSION,
            "params": {"m": p.m, "k": p.k, "s": p.s},
            "root": self.root,
            "nodes": nodes,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(exc.msg, exc.lineno, exc.colno) from None
        return cls.from_dict(doc)

    @classmethod
    def load(cls, path) -> "Certificate":
        return cls.loads(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def from_dict(cls, doc) -> "Certificate":
        def need(cond, msg):
            if not cond:
                raise CertificateFormatError(msg)

        def is_int(x):
            return isinstance(x, int) and not isinstance(x, bool)

        need(isinstance(doc, dict), "top level must be an object")
        need(set(doc) == {"format_version", "params", "root", "nodes"},
             f"unexpected top-level fields {sorted(doc)}")
        need(doc["format_version"] == FORMAT_VERSION and is_int(doc["format_version"]),
             f"unsupported format_version {doc['format_version']!r}")
        raw = doc["params"]
        need(isinstance(raw, dict) and set(raw) == {"m", "k", "s"}, "params must be {m,k,s}")
        need(all(is_int(raw[x]) for x in "mks"), "params must be integers")
        try:
            params = Params(raw["m"], raw["k"], raw["s"])
        except ValueError as exc:
            raise CertificateFormatError(f"bad params: {exc}") from None
        need(isinstance(doc["root"], str) and _STATE_RE.match(doc["root"]),
             f"malformed root key {doc['root']!r}")
        need(isinstance(doc["nodes"], dict), "nodes must be an object")

        nodes: Dict[str, Node] = {}
        for key, obj in doc["nodes"].items():
            need(_STATE_RE.match(key), f"malformed state key {key!r}")
            need(isinstance(obj, dict) and len(obj) == 1, f"node {key}: expected one field")
            if "terminal" in obj:
                need(obj["terminal"] in TERMINAL_REASONS,
                     f"node {key}: unknown terminal reason {obj['terminal']!r}")
                nodes[key] = Terminal(obj["terminal"])
                continue
            need("branches" in obj and isinstance(obj["branches"], dict),
                 f"node {key}: expected 'terminal' or 'branches'")
            decisions: Dict[str, Decision] = {}
            for item, d in obj["branches"].items():
                need(_ITEM_RE.match(item), f"node {key}: malformed item key {item!r}")
                need(isinstance(d, dict), f"node {key}, item {item}: decision must be an object")
                if set(d) == {"bin", "child"}:
                    need(is_int(d["bin"]), f"node {key}, item {item}: bin must be an integer")
                    need(isinstance(d["child"], str) and _STATE_RE.match(d["child"]),
                         f"node {key}, item {item}: malformed child key")
                    decisions[item] = Place(d["bin"], d["child"])
                elif set(d) == {"cheat"}:
                    need(isinstance(d["cheat"], list) and all(is_int(c) for c in d["cheat"]),
                         f"node {key}, item {item}: cheat must be a list of integers")
                    decisions[item] = CheatProof(tuple(d["cheat"]))
                else:
                    raise CertificateFormatError(f"node {key}, item {item}: unknown decision")
            nodes[key] = Branch(decisions)
        return cls(params, doc["root"], nodes)


def extract(solver) -> Certificate:
    """Build a certificate from a solver whose root state is won.

    Children are confirmed with ``solver`` (cache hits included) and then
    expanded themselves, so the result never relies on dominance reasoning.
    """
    p = solver.params
    root = ((0,) * p.m, ())
    if not solver._solve(root[0], root[1], 0):
        raise CertificateMisuseError("the online player does not win this instance")
    nodes: Dict[str, Node] = {}
    stack = [root]
    while stack:
        fill, history = stack.pop()
        key = render_state(fill, history)
        if key in nodes:
            continue
        reason = solver.terminal_reason(fill)
        if reason is not None:
            nodes[key] = Terminal(reason)
            continue
        decisions: Dict[str, Decision] = {}
        for item in solver.items_for(fill):
            grown = add_to_history(history, item.cls)
            decision = None
            tried = set()
            for b, level in enumerate(fill):
                if (level, item.overflows[b]) in tried:
                    continue
                tried.add((level, item.overflows[b]))
                new = place(fill, item, b, p.s)
                if new is not None and solver._solve(new, grown, 1):
                    decision = Place(b, render_state(new, grown))
                    stack.append((new, grown))
                    break
            if decision is None:
                if not che(grown, p):
                    raise CertificateMisuseError(
                        f"no winning reply to {render_item(item)} at {key}"
                    )
                decision = CheatProof(grown)
            decisions[render_item(item)] = decision
        nodes[key] = Branch(decisions)
    return Certificate(p, render_state(*root), nodes)


@dataclass(frozen=True)
class VerifyResult:
    valid: bool
    reason: Optional[str] = None
    state: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.valid


class _Reject(Exception):
    def __init__(self, reason, state, detail=""):
        self.result = VerifyResult(False, reason, state, detail)


def _parse_state(key: str):
    m = _STATE_RE.match(key)
    fill = tuple(int(x) for x in m.group(1).split(","))
    history = tuple(int(x) for x in m.group(2).split(",")) if m.group(2) else ()
    return fill, history


@lru_cache(maxsize=4096)
def _expected_items(p: Params, total: int):
    # deliberately separate from the solver's item generation
    budget = p.m * p.k - total - 1
    top = budget if budget < p.k else p.k
    keys = []
    if top > 0:
        keys.append("0|" + "1" * p.m)
    for c in range(1, top):
        for bits in product("01", repeat=p.m):
            keys.append(f"{c}|{''.join(bits)}")
    return tuple(keys)


def _check_node(p: Params, key: str, node: Node, nodes: Dict[str, Node]):
    fill, history = _parse_state(key)
    if len(fill) != p.m or list(fill) != sorted(fill, reverse=True):
        raise _Reject("MalformedState", key, "fill levels must be m non-increasing values")
    if fill[0] >= p.s:
        raise _Reject("MalformedState", key, "fill level at or above capacity")
    if list(history) != sorted(history, reverse=True) or any(
        not 1 <= c <= p.k - 1 for c in history
    ):
        raise _Reject("MalformedState", key, "history must be non-increasing classes in 1..k-1")

    total = sum(fill)
    guards = []
    if total >= p.m * p.k:
        guards.append("VolumeExceeded")
    if p.m * p.k - total - 1 + fill[-1] < p.s:
        guards.append("EmptiestBin")
    expected = _expected_items(p, total)
    if not expected:
        guards.append("NoItems")

    if isinstance(node, Terminal):
        if node.reason not in guards:
            raise _Reject("TerminalGuardFailed", key, f"{node.reason} does not hold")
        if node.reason != guards[0]:
            raise _Reject("NonCanonicalTerminal", key, f"expected {guards[0]}")
        return []
    if guards:
        raise _Reject("MissingTerminal", key, f"{guards[0]} applies")

    got = set(node.decisions)
    if got != set(expected):
        missing = sorted(set(expected) - got)
        extra = sorted(got - set(expected))
        raise _Reject("IncompleteBranches", key, f"missing {missing}, unexpected {extra}")

    children = []
    for item_key in expected:
        d = node.decisions[item_key]
        cls_text, bits = _ITEM_RE.match(item_key).groups()
        item = Item(int(cls_text), tuple(int(b) for b in bits))
        grown = add_to_history(history, item.cls)
        if isinstance(d, Place):
            if not 0 <= d.bin < p.m:
                raise _Reject("IllegalPlacement", key, f"{item_key}: bin {d.bin} out of range")
            new = place(fill, item, d.bin, p.s)
            if new is None:
                raise _Reject("IllegalPlacement", key, f"{item_key}: bin {d.bin} reaches capacity")
            first = min(
                j for j in range(p.m)
                if fill[j] == fill[d.bin] and item.overflows[j] == item.overflows[d.bin]
            )
            if first != d.bin:
                raise _Reject("NonCanonicalBin", key, f"{item_key}: use bin {first}")
            want = render_state(new, grown)
            if d.child != want:
                raise _Reject("WrongChild", key, f"{item_key}: child should be {want}")
            if d.child not in nodes:
                raise _Reject("MissingNode", key, f"{item_key}: child {d.child} absent")
            children.append(d.child)
        else:
            if d.classes != grown:
                raise _Reject("CheatProofMismatch", key, f"{item_key}: expected {list(grown)}")
            inst = PackingInstance(grown, (p.k - 1,) * p.m) if p.k > 1 else None
            if not grown or (inst is not None and fits_exact(inst)):
                raise _Reject("CheatProofRejected", key, f"{item_key}: {list(grown)} packs")
    return children


def verify(cert: Certificate, expected: Optional[Params] = None) -> VerifyResult:
    """Check ``cert`` against the game rules alone.

    With ``expected`` given, the certificate must also be for those params.
    """
    p = cert.params
    if expected is not None and expected != p:
        return VerifyResult(False, "ParamsMismatch", None, f"certificate is for {p}")
    root_key = render_state((0,) * p.m, ())
    if cert.root != root_key:
        return VerifyResult(False, "BadRoot", cert.root, f"root must be {root_key}")
    if root_key not in cert.nodes:
        return VerifyResult(False, "MissingNode", root_key, "root node absent")
    seen = {root_key}
    queue = deque([root_key])
    try:
        while queue:
            key = queue.popleft()
            for child in _check_node(p, key, cert.nodes[key], cert.nodes):
                if child not in seen:
                    seen.add(child)
                    queue.append(child)
    except _Reject as rej:
        return rej.result
    stray = sorted(set(cert.nodes) - seen)
    if stray:
        return VerifyResult(False, "UnreachableNode", stray[0], f"{len(stray)} unreachable")
    return VerifyResult(True)
