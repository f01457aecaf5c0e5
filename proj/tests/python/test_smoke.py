"""Smoke tests for the combnet python module.

Runs under pytest or directly: python3 test_smoke.py
"""

import sys
from fractions import Fraction

import combnet as cn


def test_topology_worked_example():
    t = cn.build_network(4, 2)
    assert t.user_count == 6
    assert t.users_per_relay == 3
    assert t.relays_of(1) == [1, 2]
    assert t.common_relays([1, 2]) == [1]
    assert t.common_users([2, 3]) == [3]
    groups = t.groups(2)
    assert len(groups) == 12
    for missing in ([1, 6], [2, 5], [3, 4]):
        assert missing not in groups


def test_counting():
    assert cn.k_i(6, 3, 2) == 4
    assert cn.count_z(4, 2, 2) == 12
    assert cn.count_z(6, 3, 5) == 1512
    assert cn.per_user_incidence(6, 3, 5) == 378
    t = cn.build_network(6, 3)
    assert cn.count_z(6, 3, 3) == len(t.groups(3))


def test_memories_and_loads():
    assert cn.memory_symmetric(1, 4, 2, 2) == Fraction(1, 3)
    assert cn.memory_asymmetric(1, 4, 2, 2) == Fraction(1, 5)
    assert cn.load_at(1, 4, 2, 1, 0) == Fraction(3, 2)
    report = cn.compare_memories(6, 3)
    assert report["equality_threshold"] == 6
    assert report["rows"][1]["equal"] is False
    assert report["rows"][5]["equal"] is True


def test_envelope():
    vertices = cn.envelope([(0, 4), (2, 2), (4, 0)])
    assert vertices == [(Fraction(0), Fraction(4)), (Fraction(4), Fraction(0))]


def test_mds_roundtrip():
    blocks = cn.mds_encode(4, 2, [b"ab", b"cd"])
    assert blocks[0] == (1, b"ab")
    assert cn.mds_decode(4, 2, blocks[2:]) == [b"ab", b"cd"]
    try:
        cn.mds_decode(4, 2, blocks[:1])
    except ValueError:
        pass
    else:
        raise AssertionError("short decode should raise")


def test_simulate():
    res = cn.simulate(H=4, r=2, scheme="asymmetric", g=2)
    assert res["ok"] is True
    assert res["M_over_N"] == Fraction(1, 5)
    assert res["R1"] == Fraction(3, 5)
    assert res["R2"] == Fraction(2, 5)
    assert res["k3"] == 12

    res = cn.simulate(H=4, r=2, scheme="routing", cache_fraction="1")
    assert res["R1"] == 0 and res["R2"] == 0

    res = cn.simulate(H=4, r=2, scheme="symmetric", g=2, demand=[1, 1, 2, 2, 3, 3])
    assert res["ok"] is True
    assert res["M_over_N"] == Fraction(1, 3)


def test_sweep_csv():
    csv = cn.sweep_csv(6, 3, 20, grid=5)
    lines = csv.strip().split("\n")
    assert lines[0].startswith("H,r,N,scheme,g,M_exact")
    assert len(lines) == 1 + 20 + 10


def test_verify_network():
    results = cn.verify_network(4, 2)
    assert results and all(passed for _, passed, _ in results)


def main():
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"PASS {name}")
            except Exception as exc:  # noqa: BLE001
                failures += 1
                print(f"FAIL {name}: {exc!r}")
    return failures


if __name__ == "__main__":
    sys.exit(1 if main() else 0)
