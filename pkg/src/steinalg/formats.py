"""Parsers and printers for the groupoid (.grpd) and element (.elt) files.

Both formats are line oriented UTF-8 with ``#`` comments.  Validation is
strict: unknown keys or statements are parse errors, and structural
violations (a broken composition table, a non-bisection arrow set) raise
axiom errors so the CLI can distinguish exit codes 2 and 3.
"""

from __future__ import annotations

import os
import re

from .algebra import AlgebraElement
from .cantor import ClopenSet
from .errors import AxiomError, GroupoidParseError
from .groupoid import FiniteBisection, FiniteGroupoid, SnakeBisection, SnakeGroupoid, TestPoint
from .scalars import QC

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
# first term: the coefficient may carry its own leading minus; later terms
# are joined by an explicit +/- which negates the whole coefficient
_FIRST_TERM_RE = re.compile(
    r"\s*(?P<coeff>-?\d+(?:\.\d+)?(?:[+-]\d+(?:\.\d+)?i)?)"
    r"\s*\*\s*(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
)
_NEXT_TERM_RE = re.compile(
    r"\s*(?P<op>[+-])\s*(?P<coeff>\d+(?:\.\d+)?(?:[+-]\d+(?:\.\d+)?i)?)"
    r"\s*\*\s*(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
)


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _fail(lineno: int, message: str):
    raise GroupoidParseError(f"line {lineno}: {message}")


# ---------------------------------------------------------------------------
# groupoid files


def _pair_arrow(a: str, b: str, single: bool) -> str:
    return f"e_{{{a}{b}}}" if single else f"e_{{{a},{b}}}"


def _build_pair(units: list) -> FiniteGroupoid:
    single = all(len(u) == 1 for u in units)
    name = {(a, b): _pair_arrow(a, b, single) for a in units for b in units}
    arrows = [name[(a, b)] for a in units for b in units]
    unit_arrows = [name[(u, u)] for u in units]
    src = {name[(a, b)]: name[(b, b)] for a in units for b in units}
    rng = {name[(a, b)]: name[(a, a)] for a in units for b in units}
    compose = {
        (name[(a, b)], name[(b, c)]): name[(a, c)]
        for a in units
        for b in units
        for c in units
    }
    inv = {name[(a, b)]: name[(b, a)] for a in units for b in units}
    return FiniteGroupoid(unit_arrows, arrows, src, rng, compose, inv, name="pair")


def _build_group(elements: list, rows: dict) -> FiniteGroupoid:
    identity = elements[0]
    src = {g: identity for g in elements}
    rng = {g: identity for g in elements}
    compose = {}
    inv = {}
    for g, products in rows.items():
        for h, gh in zip(elements, products):
            compose[(g, h)] = gh
    for g in elements:
        for h in elements:
            if compose.get((g, h)) == identity and compose.get((h, g)) == identity:
                inv.setdefault(g, h)
    return FiniteGroupoid([identity], elements, src, rng, compose, inv, name="group")


def parse_groupoid(text: str, *, validate: bool = True):
    """Parse a .grpd file; optionally skip the axiom check (verify uses this)."""
    entries = list(_lines(text))
    if not entries:
        raise GroupoidParseError("empty groupoid file")
    lineno, first = entries[0]
    m = re.match(r"^kind:\s*(\S+)$", first)
    if not m:
        _fail(lineno, "expected 'kind: finite|pair|group|snake'")
    kind = m.group(1)
    body = entries[1:]
    if kind == "pair":
        model = _parse_pair(body)
    elif kind == "group":
        model = _parse_group(body)
    elif kind == "finite":
        model = _parse_finite(body)
    elif kind == "snake":
        model = _parse_snake(body)
    else:
        _fail(lineno, f"unknown kind {kind!r}")
    if validate:
        model.validate()
    return model


def _parse_pair(body):
    units = None
    for lineno, line in body:
        m = re.match(r"^units:\s*(.+)$", line)
        if not m:
            _fail(lineno, f"unexpected statement {line!r} in a pair groupoid file")
        if units is not None:
            _fail(lineno, "duplicate units: line")
        units = m.group(1).split()
        for u in units:
            if not re.match(r"^[A-Za-z0-9]+$", u):
                _fail(lineno, f"bad unit name {u!r}")
        if len(set(units)) != len(units):
            _fail(lineno, "duplicate unit names")
    if not units:
        raise GroupoidParseError("pair groupoid needs a nonempty units: line")
    return _build_pair(units)


def _parse_group(body):
    elements = None
    rows = {}
    for lineno, line in body:
        m = re.match(r"^elements:\s*(.+)$", line)
        if m:
            if elements is not None:
                _fail(lineno, "duplicate elements: line")
            elements = m.group(1).split()
            if len(set(elements)) != len(elements):
                _fail(lineno, "duplicate element names")
            continue
        m = re.match(r"^row\s+(\S+)\s*:\s*(.+)$", line)
        if m:
            if elements is None:
                _fail(lineno, "row before elements:")
            g, products = m.group(1), m.group(2).split()
            if g not in elements:
                _fail(lineno, f"unknown element {g!r}")
            if len(products) != len(elements):
                _fail(lineno, f"row {g} must list {len(elements)} products")
            for p in products:
                if p not in elements:
                    _fail(lineno, f"unknown element {p!r} in row {g}")
            if g in rows:
                _fail(lineno, f"duplicate row {g}")
            rows[g] = products
            continue
        _fail(lineno, f"unexpected statement {line!r} in a group file")
    if not elements:
        raise GroupoidParseError("group file needs an elements: line")
    return _build_group(elements, rows)


def _parse_finite(body):
    units: list = []
    arrows: list = []
    src: dict = {}
    rng: dict = {}
    compose: dict = {}
    inv: dict = {}
    declared = set()
    for lineno, line in body:
        parts = line.split()
        if parts[0] == "unit":
            for u in parts[1:]:
                if u in declared:
                    _fail(lineno, f"duplicate declaration of {u}")
                declared.add(u)
                units.append(u)
                arrows.append(u)
                src[u] = rng[u] = u
                inv[u] = u
            if len(parts) == 1:
                _fail(lineno, "unit statement needs at least one name")
        elif parts[0] == "arrow":
            m = re.match(r"^arrow\s+(\S+)\s+src=(\S+)\s+rng=(\S+)$", line)
            if not m:
                _fail(lineno, "expected 'arrow <name> src=<u> rng=<u>'")
            a, s, r = m.groups()
            if a in declared:
                _fail(lineno, f"duplicate declaration of {a}")
            declared.add(a)
            arrows.append(a)
            src[a] = s
            rng[a] = r
        elif parts[0] == "compose":
            m = re.match(r"^compose\s+(\S+)\s+(\S+)\s*=\s*(\S+)$", line)
            if not m:
                _fail(lineno, "expected 'compose <a> <b> = <c>'")
            a, b, c = m.groups()
            if (a, b) in compose:
                _fail(lineno, f"duplicate composition row ({a}, {b})")
            compose[(a, b)] = c
        elif parts[0] == "inverse":
            m = re.match(r"^inverse\s+(\S+)\s*=\s*(\S+)$", line)
            if not m:
                _fail(lineno, "expected 'inverse <a> = <b>'")
            a, b = m.groups()
            if a in inv and inv[a] != b:
                _fail(lineno, f"conflicting inverse for {a}")
            inv[a] = b
            inv.setdefault(b, a)
        else:
            _fail(lineno, f"unknown statement {parts[0]!r}")
    for a in arrows:
        if src.get(a) not in declared or rng.get(a) not in declared:
            raise GroupoidParseError(f"arrow {a} references undeclared units")
    for (a, b), c in compose.items():
        for x in (a, b, c):
            if x not in declared:
                raise GroupoidParseError(f"composition row uses undeclared arrow {x!r}")
    # unit compositions are forced; fill in the ones the file omits
    for a in arrows:
        compose.setdefault((a, src[a]), a)
        compose.setdefault((rng[a], a), a)
    return FiniteGroupoid(units, arrows, src, rng, compose, inv, name="finite")


def _parse_snake(body):
    heads = None
    for lineno, line in body:
        m = re.match(r"^heads:\s*(\S+)$", line)
        if not m:
            _fail(lineno, f"unexpected statement {line!r} in a snake file")
        if heads is not None:
            _fail(lineno, "duplicate heads: line")
        value = m.group(1)
        if value == "Z":
            heads = "Z"
        elif value.isdigit() and int(value) >= 2:
            heads = int(value)
        else:
            _fail(lineno, "heads must be an integer >= 2 or Z")
    if heads is None:
        raise GroupoidParseError("snake file needs a heads: line")
    return SnakeGroupoid(None if heads == "Z" else heads)


def load_groupoid(path: str, *, validate: bool = True):
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    return parse_groupoid(text, validate=validate)


# ---------------------------------------------------------------------------
# element files


def _split_args(blob: str) -> list:
    """Split on top-level commas, honouring braces in arrow names."""
    args, depth, cur = [], 0, ""
    for ch in blob:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            args.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        args.append(cur.strip())
    return args


def _parse_bisection_spec(lineno: int, spec: str, model):
    m = re.match(r"^arrows\((?P<args>.*)\)$", spec)
    if m:
        if model.kind != "finite":
            _fail(lineno, "arrows(...) bisections need a finite model")
        names = _split_args(m.group("args"))
        try:
            return model.bisection(names)
        except (ValueError, AxiomError) as exc:
            raise AxiomError(f"line {lineno}: {exc}") from exc
    m = re.match(r"^clopen\((?P<args>.*)\)\s+head\s+(?P<head>\S+)$", spec)
    if m:
        if model.kind != "snake":
            _fail(lineno, "clopen(...) bisections need a snake model")
        words = []
        for arg in _split_args(m.group("args")):
            wm = re.match(r'^"([01]*)"$', arg)
            if not wm:
                _fail(lineno, f"bad cylinder word {arg!r}")
            words.append(wm.group(1))
        head_text = m.group("head")
        if head_text == "unit":
            head = 0
        else:
            try:
                head = int(head_text)
            except ValueError:
                _fail(lineno, f"bad head {head_text!r}")
        try:
            return SnakeBisection(model, ClopenSet(words), head)
        except AxiomError as exc:
            raise AxiomError(f"line {lineno}: {exc}") from exc
    _fail(lineno, f"bad bisection spec {spec!r}")


def parse_element_terms(lineno: int, expr: str, bisections: dict, model) -> AlgebraElement:
    terms = []
    pos = 0
    first = True
    while pos < len(expr) and expr[pos:].strip():
        m = (_FIRST_TERM_RE if first else _NEXT_TERM_RE).match(expr, pos)
        if not m:
            _fail(lineno, f"bad element term near {expr[pos:]!r}")
        coeff = QC.parse(m.group("coeff"))
        if not first and m.group("op") == "-":
            coeff = -coeff
        name = m.group("name")
        if name not in bisections:
            _fail(lineno, f"unknown bisection {name!r}")
        terms.append((coeff, bisections[name]))
        pos = m.end()
        first = False
    if not terms:
        _fail(lineno, "empty element expression")
    return AlgebraElement(model, terms)


class ElementFile:
    """Parsed .elt file: the model plus named bisections and elements."""

    def __init__(self, model, groupoid_path, bisections, elements):
        self.model = model
        self.groupoid_path = groupoid_path
        self.bisections = dict(bisections)
        self.elements = dict(elements)


def parse_elements(text: str, base_dir: str = ".") -> ElementFile:
    model = None
    groupoid_path = None
    bisections: dict = {}
    elements: dict = {}
    for lineno, line in _lines(text):
        m = re.match(r"^groupoid:\s*(\S+)$", line)
        if m:
            if model is not None:
                _fail(lineno, "duplicate groupoid: line")
            groupoid_path = os.path.join(base_dir, m.group(1))
            model = load_groupoid(groupoid_path)
            continue
        m = re.match(r"^bisection\s+(\S+)\s*=\s*(.+)$", line)
        if m:
            if model is None:
                _fail(lineno, "bisection before groupoid:")
            name, spec = m.groups()
            if not _NAME_RE.match(name):
                _fail(lineno, f"bad bisection name {name!r}")
            if name in bisections:
                _fail(lineno, f"duplicate bisection {name!r}")
            bisections[name] = _parse_bisection_spec(lineno, spec, model)
            continue
        m = re.match(r"^element\s+(\S+)\s*=\s*(.+)$", line)
        if m:
            if model is None:
                _fail(lineno, "element before groupoid:")
            name, expr = m.groups()
            if not _NAME_RE.match(name):
                _fail(lineno, f"bad element name {name!r}")
            if name in elements:
                _fail(lineno, f"duplicate element {name!r}")
            elements[name] = parse_element_terms(lineno, expr, bisections, model)
            continue
        _fail(lineno, f"unknown statement {line!r}")
    if model is None:
        raise GroupoidParseError("element file declares no groupoid")
    return ElementFile(model, groupoid_path, bisections, elements)


def load_elements(path: str) -> ElementFile:
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    return parse_elements(text, base_dir=os.path.dirname(os.path.abspath(path)))


# ---------------------------------------------------------------------------
# printing


def bisection_spec(b) -> str:
    if isinstance(b, FiniteBisection):
        return f"arrows({','.join(sorted(b.arrows))})"
    words = ",".join(f'"{w}"' for w in b.clopen.words)
    head = "unit" if b.head == 0 else str(b.head)
    return f"clopen({words}) head {head}"


def serialize_element(element: AlgebraElement, name: str = "result") -> str:
    """Render an element as .elt bisection/element lines that re-parse."""
    names: dict = {}
    decls = []
    for _, bis in element.terms:
        if bis not in names:
            label = f"b{len(names)}"
            names[bis] = label
            decls.append(f"bisection {label} = {bisection_spec(bis)}")
    if not element.terms:
        zero_bis = (
            element.model.bisection([])
            if element.model.kind == "finite"
            else SnakeBisection(element.model, ClopenSet(), 0)
        )
        names[zero_bis] = "b0"
        decls.append(f"bisection b0 = {bisection_spec(zero_bis)}")
        body = "0*b0"
    else:
        chunks = []
        for i, (coef, bis) in enumerate(element.terms):
            if i == 0:
                chunks.append(f"{coef}*{names[bis]}")
            elif coef.re < 0:
                chunks.append(f"- {-coef}*{names[bis]}")
            else:
                chunks.append(f"+ {coef}*{names[bis]}")
        body = " ".join(chunks)
    return "\n".join(decls + [f"element {name} = {body}"])


def parse_point(text: str, model) -> TestPoint:
    text = text.strip()
    if model.kind == "finite":
        return model.point(text)
    if text == "base":
        return TestPoint.base()
    m = re.match(r"^unit:([01]*)$", text)
    if m:
        return TestPoint.unit(m.group(1))
    m = re.match(r"^head:(-?\d+)$", text)
    if m:
        k = model.head_norm(int(m.group(1)))
        if k == 0:
            return TestPoint.base()
        return TestPoint.head(k)
    raise GroupoidParseError(f"bad point {text!r}; use unit:<word>, base, or head:<k>")
