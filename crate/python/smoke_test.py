"""Smoke test for the pyorbcoh extension.

Build and run from the repository root:

    cargo build --release -p orbcoh-py --features extension-module
    cp target/release/libpyorbcoh.so python/pyorbcoh.so
    python3 python/smoke_test.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pyorbcoh  # noqa: E402


def main():
    assert pyorbcoh.SCHEMA_VERSION == 1

    r = json.loads(pyorbcoh.classify(3, 5, 7, "z2"))
    assert r["schema_version"] == 1
    assert [f["tag"] for f in r["families"]] == ["i"]

    assert json.loads(pyorbcoh.chase(3, 1, 2))["solutions"] == []
    assert not pyorbcoh.congruence_precheck(3, 1, 2)

    ss = json.loads(pyorbcoh.ss(3, 5, 7, "q"))
    assert any(c["feasible"] and c["candidates"] for c in ss["choices"])

    assert pyorbcoh.ind_standard_sphere(3, 43) == 10
    idx = json.loads(pyorbcoh.index(json.dumps({"kind": "standard_sphere", "d": 3, "total_dim": 43})))
    assert idx["entries"][0]["pinned"] == 10

    (case, ring), = pyorbcoh.classify_rings(3, 5, 7)
    assert case == "s3-mod2 (i)"
    assert ring.poincare() == {0: 1, 4: 1, 5: 1, 9: 1}
    assert ring.nilpotency_index("u") == 1
    assert ring.normal_form("u*u") == "0"
    again = pyorbcoh.Presentation.from_json(ring.to_json())
    assert again == ring and again.same_ideal(ring)

    try:
        pyorbcoh.classify(2, 1, 1)
    except pyorbcoh.OrbcohError as e:
        assert "d must be 1 or 3" in str(e)
    else:
        raise AssertionError("expected OrbcohError")

    report = json.loads(pyorbcoh.verify(8))
    assert report["summary"]["failed"] == 0
    print("pyorbcoh smoke test: ok")


if __name__ == "__main__":
    main()
