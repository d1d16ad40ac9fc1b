"""JSON / CSV persistence for quadrature rules.

Floats are written with ``repr`` (shortest string that round-trips), so
``load_rule(dump_rule(rule))`` reproduces nodes and weights bit for bit.
Only float64 weights are stored; the extra digits used internally are not.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Optional

import numpy as np

from .solver import METHODS, QuadratureRule

__all__ = ["rule_to_dict", "rule_from_dict", "dump_rule", "load_rule", "rule_to_csv"]


def rule_to_dict(rule: QuadratureRule, norm: Optional[float] = None) -> dict:
    return {
        "m": int(rule.m),
        "N": int(rule.N),
        "h": float(rule.h),
        "nodes": [float(x) for x in rule.nodes],
        "coeffs": [float(c) for c in rule.coeffs],
        "method": rule.method,
        "norm": None if norm is None else float(norm),
    }


def rule_from_dict(doc: dict) -> tuple[QuadratureRule, Optional[float]]:
    missing = {"m", "N", "h", "nodes", "coeffs", "method"} - doc.keys()
    if missing:
        raise ValueError(f"rule file lacks fields: {sorted(missing)}")
    if doc["method"] not in METHODS:
        raise ValueError(f"unknown method {doc['method']!r}")
    rule = QuadratureRule(
        m=int(doc["m"]),
        N=int(doc["N"]),
        h=float(doc["h"]),
        nodes=np.array(doc["nodes"], dtype=float),
        coeffs=np.array(doc["coeffs"], dtype=float),
        method=doc["method"],
    )
    norm = doc.get("norm")
    return rule, None if norm is None else float(norm)


def dump_rule(rule: QuadratureRule, norm: Optional[float] = None) -> str:
    return json.dumps(rule_to_dict(rule, norm), indent=2) + "\n"


def load_rule(text: str) -> tuple[QuadratureRule, Optional[float]]:
    return rule_from_dict(json.loads(text))


def rule_to_csv(rule: QuadratureRule) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "node", "coeff"])
    for b, (x, c) in enumerate(zip(rule.nodes, rule.coeffs)):
        w.writerow([b, repr(float(x)), repr(float(c))])
    return buf.getvalue()
