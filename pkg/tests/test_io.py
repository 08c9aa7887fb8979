import json

import numpy as np
import pytest

from nestquad.cubature import tensor_rule
from nestquad.distributions import beta, normal, uniform
from nestquad.io import SCHEMA, RuleFile, table_csv, to_csv
from nestquad.quadrature import clenshaw_curtis_rule, gauss_rule
from nestquad.reduce1d import nested_family


def _same(a, b):
    assert type(a) is type(b)
    assert np.array_equal(a.std_nodes, b.std_nodes)
    assert np.array_equal(a.weights, b.weights)
    assert a.degree == b.degree and a.provenance == b.provenance


@pytest.mark.parametrize("rule", [
    gauss_rule(normal(0.3, 2.0), 6),
    clenshaw_curtis_rule(beta(4, 4, 0.0038, 0.05), 9),
    tensor_rule([gauss_rule(uniform(0, 1), 3), gauss_rule(normal(), 2)]),
])
def test_rule_roundtrip_exact(rule, tmp_path):
    p = tmp_path / "r.json"
    RuleFile(rule, {"command": "test"}).save(p)
    back = RuleFile.load(p)
    _same(rule, back.payload)
    assert back.metadata == {"command": "test"}


def test_family_roundtrip_exact():
    fam = nested_family(gauss_rule(uniform(-1, 1), 9))
    data = json.loads(RuleFile(fam).dumps())
    assert data["schema"] == SCHEMA and data["nested"] is True
    back = RuleFile.from_dict(data).payload
    assert back.sizes == fam.sizes
    for a, b in zip(fam, back):
        _same(a, b)


def test_schema_checked():
    data = json.loads(RuleFile(gauss_rule(uniform(), 2)).dumps())
    data["schema"] = "other/9"
    with pytest.raises(ValueError, match="schema"):
        RuleFile.from_dict(data)


def test_csv_layouts(tmp_path):
    g = gauss_rule(uniform(0, 1), 3)
    text = to_csv(g, {"seed": 1})
    lines = text.splitlines()
    assert lines[0] == "# seed: 1" and lines[1] == "node,weight" and len(lines) == 5
    assert float(lines[2].split(",")[0]) == g.nodes[0]
    fam = to_csv(nested_family(gauss_rule(uniform(0, 1), 5))).splitlines()
    assert fam[0] == "rule_size,node,weight" and len(fam) == 1 + 5 + 3 + 1
    t = to_csv(tensor_rule([g, g])).splitlines()
    assert t[0] == "x1,x2,weight" and len(t) == 10
    p = tmp_path / "g.csv"
    RuleFile(g).save(p)
    with pytest.raises(ValueError):
        RuleFile.load(p)


def test_table_csv():
    out = table_csv([{"a": 1, "b": 0.1}], {"k": "v"}).splitlines()
    assert out == ['# k: "v"', "a,b", "1,0.10000000000000001"]
