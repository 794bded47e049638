"""JSON and DOT serialization.

All JSON is written with sorted keys and canonical rationals ("p/q", q > 0,
reduced) so that equal objects serialize to identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .abp import Abp, EdgeId, LinearLabel
from .formats import is_parity_preserving
from .laurent import LaurentEps, as_fraction
from .tensor import LayeredTensor


def rational_to_json(q) -> str:
    q = as_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def scalar_to_json(x) -> Any:
    if isinstance(x, LaurentEps):
        if x.is_constant():
            return rational_to_json(x.constant_term())
        return {"eps_terms": [[k, rational_to_json(c)] for k, c in x.items()]}
    return rational_to_json(x)


def scalar_from_json(obj) -> Fraction | LaurentEps:
    if isinstance(obj, dict):
        if set(obj) != {"eps_terms"}:
            raise ValueError(f"bad scalar object {obj!r}")
        return LaurentEps((int(k), Fraction(str(c))) for k, c in obj["eps_terms"])
    if isinstance(obj, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj.strip())
    raise ValueError(f"bad scalar {obj!r}")


def tensor_to_json(t: LayeredTensor) -> dict:
    return {
        "degree": t.degree,
        "alphabet_sizes": list(t.alphabet_sizes),
        "terms": [{"monomial": list(m), "coeff": scalar_to_json(c)} for m, c in t.items()],
    }


def tensor_from_json(obj: Mapping) -> LayeredTensor:
    sizes = obj["alphabet_sizes"]
    if "degree" in obj and obj["degree"] != len(sizes):
        raise ValueError("degree does not match alphabet_sizes")
    return LayeredTensor(sizes, ((tuple(term["monomial"]), scalar_from_json(term["coeff"])) for term in obj["terms"]))


def label_to_json(lab: LinearLabel) -> dict:
    return {
        "terms": {v: scalar_to_json(c) for v, c in lab.terms.items()},
        "const": scalar_to_json(lab.constant),
    }


def label_from_json(obj: Mapping) -> LinearLabel:
    terms = {v: scalar_from_json(c) for v, c in obj.get("terms", {}).items()}
    return LinearLabel(terms, scalar_from_json(obj.get("const", "0")))


def abp_to_json(abp: Abp) -> dict:
    out = {
        "format": list(abp.format),
        "model": abp.model,
        "variables": list(abp.variables),
        "edges": [
            {"layer": e.layer, "from": e.src, "to": e.dst, "label": label_to_json(lab)}
            for e, lab in sorted(abp.labels.items())
        ],
    }
    if abp.alphabets is not None:
        out["alphabets"] = [list(a) for a in abp.alphabets]
    if abp.affine:
        out["affine"] = True
    return out


def abp_from_json(obj: Mapping) -> Abp:
    labels = {}
    for edge in obj.get("edges", []):
        e = EdgeId(int(edge["layer"]), int(edge["from"]), int(edge["to"]))
        if e in labels:
            raise ValueError(f"duplicate edge {tuple(e)}")
        labels[e] = label_from_json(edge["label"])
    alph = obj.get("alphabets")
    return Abp(
        tuple(obj["format"]),
        labels,
        obj.get("model", "trace"),
        tuple(obj.get("variables", ())),
        None if alph is None else tuple(tuple(a) for a in alph),
        bool(obj.get("affine", False)),
    )


def to_jsonable(obj) -> Any:
    """Recursively convert library values to JSON-ready structures."""
    if isinstance(obj, Abp):
        return abp_to_json(obj)
    if isinstance(obj, LayeredTensor):
        return tensor_to_json(obj)
    if isinstance(obj, (Fraction, LaurentEps)):
        return scalar_to_json(obj)
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def checksum(obj) -> str:
    text = json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(text.encode()).hexdigest()


def load_json(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def detect_kind(obj: Mapping) -> str:
    """'abp' or 'tensor' for a parsed JSON object."""
    if "format" in obj and "edges" in obj:
        return "abp"
    if "alphabet_sizes" in obj and "terms" in obj:
        return "tensor"
    raise ValueError("JSON object is neither an ABP nor a tensor")


# DOT ---------------------------------------------------------------------------


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def abp_to_dot(abp: Abp, bold_parity_preserving: bool = False) -> str:
    """Layered digraph; preserving edges drawn bold when requested."""
    lines = ["digraph abp {", "  rankdir=LR;", "  node [shape=circle, fontsize=10];"]
    for layer in range(1, abp.degree + 2):
        names = " ".join(f'"v{layer}_{j}"' for j in range(1, abp.width(layer) + 1))
        lines.append(f"  {{ rank=same; {names} }}")
    for e, lab in abp.labels.items():
        attrs = [f'label="{_dot_escape(str(lab))}"']
        if bold_parity_preserving and is_parity_preserving(e):
            attrs.append("style=bold")
        lines.append(f'  "v{e.layer}_{e.src}" -> "v{e.layer + 1}_{e.dst}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def identified_graph_to_dot(fmt, edges: Iterable[EdgeId], tree: Iterable[EdgeId] = ()) -> str:
    """The digraph with first and last layers merged; tree edges highlighted."""
    d = len(fmt)
    tree = set(tree)
    lines = ["digraph identified {", "  node [shape=circle, fontsize=10];"]
    for i in range(1, d + 1):
        for j in range(1, fmt[i - 1] + 1):
            lines.append(f'  "v{i}_{j}";')
    for e in edges:
        tgt_layer = e.layer % d + 1
        style = ' [color=red, penwidth=2]' if e in tree else ""
        lines.append(f'  "v{e.layer}_{e.src}" -> "v{tgt_layer}_{e.dst}"{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"
