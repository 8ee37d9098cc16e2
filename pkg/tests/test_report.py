from __future__ import annotations

import json
from fractions import Fraction

from zreg.report import Table


def test_csv_format():
    t = Table(["n", "x", "q"], metadata={"z": 0.5 + 1j})
    t.add(1, 0.1, Fraction(1, 3))
    lines = t.to_csv().splitlines()
    assert lines[0] == '# {"z": {"im": 1.0, "re": 0.5}}'
    assert lines[1] == "n,x,q"
    assert lines[2] == "1,0.10000000000000001,1/3"
    assert float(lines[2].split(",")[1]) == 0.1


def test_json_round_trip():
    t = Table(["a", "b"], metadata={"k": [1, 2]})
    t.add(1, 2.5)
    t.add(2, None)
    back = Table.from_dict(json.loads(t.to_json()))
    assert back.columns == t.columns and back.rows == t.rows and back.metadata == t.metadata


def test_records_and_column():
    t = Table(["a", "b"])
    t.add(1, 2)
    assert t.records() == [{"a": 1, "b": 2}] and t.column("b") == [2]
