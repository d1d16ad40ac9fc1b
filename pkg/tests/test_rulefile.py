import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sardquad.rulefile import dump_rule, load_rule, rule_to_csv
from sardquad.solver import coefficients


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.integers(4, 40))
def test_json_round_trip_bit_exact(m, N):
    rule = coefficients(m, N)
    back, norm = load_rule(dump_rule(rule, 0.125))
    assert norm == 0.125
    assert (back.m, back.N, back.h, back.method) == (rule.m, rule.N, rule.h, rule.method)
    assert np.array_equal(back.coeffs, rule.coeffs)
    assert np.array_equal(back.nodes, rule.nodes)


def test_schema_fields():
    doc = json.loads(dump_rule(coefficients(2, 10)))
    assert set(doc) == {"m", "N", "h", "nodes", "coeffs", "method", "norm"}
    assert doc["norm"] is None
    assert len(doc["coeffs"]) == 11


def test_csv_layout():
    rule = coefficients(2, 4)
    lines = rule_to_csv(rule).splitlines()
    assert lines[0] == "beta,node,coeff"
    assert len(lines) == 6
    beta, node, coeff = lines[2].split(",")
    assert (int(beta), float(node), float(coeff)) == (1, rule.nodes[1], rule.coeffs[1])


def test_load_rejects_bad_documents():
    with pytest.raises(ValueError):
        load_rule('{"m": 2}')
    doc = json.loads(dump_rule(coefficients(2, 4)))
    doc["method"] = "simpson"
    with pytest.raises(ValueError):
        load_rule(json.dumps(doc))
