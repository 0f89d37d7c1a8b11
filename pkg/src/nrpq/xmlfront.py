"""XML documents as labeled graphs, and navigational XPath as NRPQs.

Encoding: a ``document`` node with a ``first`` edge to the root element;
``first`` edges to first children and ``next`` edges between siblings;
every element has a ``name`` edge to a tag node shared by all elements
with that tag.  Text chunks become ``string`` nodes labeled with their
value; attributes become edges labeled with the attribute name to such a
``string`` node.  Value labels are percent-encoded so they never contain
whitespace.
"""
from __future__ import annotations

import random
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from urllib.parse import quote

from .graph import LabeledGraph
from .indexing import IndexDef, make_top_index
from .syntax import (
    And, Concat, Edge, FilterStep, HasPath, NodeLabel, Plus, Star, concat,
    desugar,
)

DOCUMENT, ELEMENT, STRING = "document", "element", "string"
FIRST, NEXT, NAME = "first", "next", "name"
STRUCTURAL = (FIRST, NEXT)
_RESERVED_LABELS = {DOCUMENT, ELEMENT, STRING}
_RESERVED_EDGES = {FIRST, NEXT, NAME}


class XmlError(ValueError):
    pass


class UnsupportedXPath(ValueError):
    pass


def value_label(s: str) -> str:
    """Node label for a tag or string value.

    Percent-encoded; a value spelled like a structural label gets its
    first character escaped so it cannot pass for one.
    """
    q = quote(s, safe="")
    if q in _RESERVED_LABELS:
        q = "%{:02X}".format(ord(q[0])) + q[1:]
    return q or "%00"  # empty attribute values still need a label


def attribute_edge(name: str) -> str:
    return "@" + name if name in _RESERVED_EDGES else name


@dataclass
class XmlGraphEncoding:
    graph: LabeledGraph
    document_node: str
    element_count: int = 0


class _Builder:
    def __init__(self) -> None:
        self.nodes: set[str] = set()
        self.labels: dict[str, set[str]] = {}
        self.edges: dict[str, set[tuple[str, str]]] = {}
        self.n_elem = self.n_text = self.n_val = 0

    def node(self, v: str, *labels: str) -> str:
        self.nodes.add(v)
        for a in labels:
            self.labels.setdefault(a, set()).add(v)
        return v

    def edge(self, a: str, u: str, v: str) -> None:
        self.edges.setdefault(a, set()).add((u, v))

    def text(self, s: str | None) -> str | None:
        if s is None or not s.strip():
            return None
        self.n_text += 1
        return self.node(f"t{self.n_text}", STRING, value_label(s.strip()))

    def element(self, el: ET.Element) -> str:
        self.n_elem += 1
        v = self.node(f"e{self.n_elem}", ELEMENT)
        tag = self.node(f"tag:{quote(el.tag, safe='')}", value_label(el.tag))
        self.edge(NAME, v, tag)
        for k, val in sorted(el.attrib.items()):
            self.n_val += 1
            w = self.node(f"v{self.n_val}", STRING, value_label(val))
            self.edge(attribute_edge(k), v, w)
        kids: list[str] = []
        t = self.text(el.text)
        if t:
            kids.append(t)
        for child in el:
            kids.append(self.element(child))
            t = self.text(child.tail)
            if t:
                kids.append(t)
        if kids:
            self.edge(FIRST, v, kids[0])
            for a, b in zip(kids, kids[1:]):
                self.edge(NEXT, a, b)
        return v


def xml_to_graph(text: str) -> XmlGraphEncoding:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as e:
        raise XmlError(f"XML parse error: {e}") from None
    b = _Builder()
    doc = b.node("doc", DOCUMENT)
    b.edge(FIRST, doc, b.element(root))
    g = LabeledGraph(frozenset(b.nodes), b.labels, b.edges)
    return XmlGraphEncoding(g, doc, b.n_elem)


# -- XPath subset ----------------------------------------------------------

@dataclass(frozen=True)
class XPathStep:
    axis: str  # "child" or "descendant"
    name: str  # tag or "*"


@dataclass(frozen=True)
class XPathExpr:
    steps: tuple[XPathStep, ...]

    def __str__(self) -> str:
        return "".join(("/" if s.axis == "child" else "//") + s.name for s in self.steps)


_STEP = re.compile(r"(//?)([A-Za-z_][\w.\-]*(?::[A-Za-z_][\w.\-]*)?|\*)")


def xpath_parse(text: str) -> XPathExpr:
    """Absolute paths of ``/name`` and ``//name`` steps; ``*`` is the wildcard."""
    s = text.strip()
    if not s.startswith("/"):
        raise UnsupportedXPath(f"only absolute paths are supported: {text!r}")
    steps = []
    pos = 0
    while pos < len(s):
        m = _STEP.match(s, pos)
        if m is None:
            raise UnsupportedXPath(
                f"unsupported XPath at position {pos} of {text!r}: only child and descendant name steps are allowed"
            )
        steps.append(XPathStep("child" if m.group(1) == "/" else "descendant", m.group(2)))
        pos = m.end()
    return XPathExpr(tuple(steps))


def _name_check(tag: str):
    """``?([name/?(.tag)])``"""
    return FilterStep(HasPath(Concat(Edge(NAME), FilterStep(NodeLabel(value_label(tag))))))


def _children():
    return Concat(Edge(FIRST), Star(Edge(NEXT)))


def xpath_to_nrpq(x: XPathExpr):
    """Left-nested chain ``?(.document)/nav/?(.element)/?([name/?(.t)])/...``.

    ``nav`` is ``first/next*`` for a child step and ``(first/next*)+`` for
    a descendant step; a wildcard step drops the name check.
    """
    parts = [FilterStep(NodeLabel(DOCUMENT))]
    for step in x.steps:
        parts.append(_children() if step.axis == "child" else Plus(_children()))
        parts.append(FilterStep(NodeLabel(ELEMENT)))
        if step.name != "*":
            parts.append(_name_check(step.name))
    return desugar(concat(*parts))


def element_test(tag: str):
    """Filter for elements with the given tag."""
    return And(
        NodeLabel(ELEMENT),
        HasPath(Concat(Edge(NAME), FilterStep(NodeLabel(value_label(tag))))),
    )


def indexed_q05(outer: str = "listitem", inner: str = "keyword") -> tuple[list[IndexDef], object]:
    """``top`` indexes for ``//outer//inner`` and the query jumping along them.

    Agrees with the plain translation when the siblings of every ``outer``
    element are themselves ``outer`` elements (as in the synthetic
    documents): a ``next`` step out of an element never leaves the
    subtree of an ``outer`` ancestor.
    """
    defs = [
        make_top_index(outer, STRUCTURAL, element_test(outer)),
        make_top_index(inner, STRUCTURAL, element_test(inner)),
    ]
    q = concat(
        FilterStep(NodeLabel(DOCUMENT)),
        Plus(Edge(defs[0].name)),
        Plus(Edge(defs[1].name)),
    )
    return defs, q


# -- synthetic documents ---------------------------------------------------

def gen_synthetic_doc(depth: int, fanout: int, keyword_density: float = 0.3, seed: int = 0) -> str:
    """Auction-site shaped document with ``depth`` levels of nested list items.

    ``site/regions/item*`` where each item has a description holding a
    ``parlist`` of ``fanout`` list items, each with a text paragraph and a
    nested ``parlist`` until ``depth`` is reached.  Paragraph keywords
    appear with probability ``keyword_density``; some keywords also occur
    outside list items.  Parlists contain only list items.
    """
    if depth < 1 or fanout < 1:
        raise ValueError("depth and fanout must be at least 1")
    if not 0.0 <= keyword_density <= 1.0:
        raise ValueError("keyword_density must lie in [0, 1]")
    rng = random.Random(seed)
    words = ["gold", "silk", "oak", "amber", "jade", "iron", "pearl", "tin"]

    def para(parent: ET.Element) -> None:
        text = ET.SubElement(parent, "text")
        text.text = rng.choice(words)
        if rng.random() < keyword_density:
            if rng.random() < 0.3:
                holder = ET.SubElement(text, "bold")
            else:
                holder = text
            kw = ET.SubElement(holder, "keyword")
            kw.text = rng.choice(words)
            kw.tail = rng.choice(words)

    def parlist(parent: ET.Element, level: int) -> None:
        pl = ET.SubElement(parent, "parlist")
        for _ in range(fanout):
            li = ET.SubElement(pl, "listitem")
            para(li)
            if level < depth:
                parlist(li, level + 1)

    site = ET.Element("site")
    regions = ET.SubElement(site, "regions")
    for k in range(fanout):
        item = ET.SubElement(regions, "item", id=f"item{k}")
        ET.SubElement(item, "name").text = rng.choice(words)
        parlist(ET.SubElement(item, "description"), 1)
        if rng.random() < keyword_density:
            cat = ET.SubElement(item, "incategory")
            ET.SubElement(cat, "keyword").text = rng.choice(words)
    ET.SubElement(site, "people")
    ET.indent(site)
    return ET.tostring(site, encoding="unicode") + "\n"


def count_elements(text: str) -> int:
    return sum(1 for _ in ET.fromstring(text).iter())
