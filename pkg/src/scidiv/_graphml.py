"""Minimal GraphML reading/writing on top of ElementTree."""

import xml.etree.ElementTree as ET

NS = "http://graphml.graphdrawing.org/xmlns"
_Q = "{" + NS + "}"


def write(path, nodes, edges, node_attrs=(), edge_attrs=()):
    """Write an undirected graph.

    ``nodes`` is a list of ``(id, {attr: value})``, ``edges`` a list of
    ``(source, target, {attr: value})``; ``node_attrs``/``edge_attrs`` list
    ``(name, type)`` pairs declared as keys.
    """
    ET.register_namespace("", NS)
    root = ET.Element(_Q + "graphml")
    for name, typ in node_attrs:
        ET.SubElement(root, _Q + "key", id=f"n_{name}", attrib={"for": "node", "attr.name": name, "attr.type": typ})
    for name, typ in edge_attrs:
        ET.SubElement(root, _Q + "key", id=f"e_{name}", attrib={"for": "edge", "attr.name": name, "attr.type": typ})
    graph = ET.SubElement(root, _Q + "graph", id="G", edgedefault="undirected")
    for node_id, attrs in nodes:
        el = ET.SubElement(graph, _Q + "node", id=str(node_id))
        for key, value in attrs.items():
            ET.SubElement(el, _Q + "data", key=f"n_{key}").text = _fmt(value)
    for src, dst, attrs in edges:
        el = ET.SubElement(graph, _Q + "edge", source=str(src), target=str(dst))
        for key, value in attrs.items():
            ET.SubElement(el, _Q + "data", key=f"e_{key}").text = _fmt(value)
    ET.indent(root)
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)


def _fmt(value):
    return repr(value) if isinstance(value, float) else str(value)


def read(path):
    """Return ``(node_ids, edges)`` with ``edges`` as ``(source, target, {name: text})``.

    Attribute names are resolved through the ``<key>`` declarations.
    """
    root = ET.parse(path).getroot()
    keys = {}
    for key in root.iter(_Q + "key"):
        keys[key.get("id")] = key.get("attr.name") or key.get("id")
    graph = root.find(_Q + "graph")
    if graph is None:
        raise ValueError("no <graph> element")
    nodes = [n.get("id") for n in graph.iter(_Q + "node")]
    edges = []
    for e in graph.iter(_Q + "edge"):
        attrs = {keys.get(d.get("key"), d.get("key")): (d.text or "").strip() for d in e.iter(_Q + "data")}
        edges.append((e.get("source"), e.get("target"), attrs))
    return nodes, edges
