import io
import json
from collections import defaultdict

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilmodels.classify import canonical_model, classify
from nilmodels.oracle import (
    enumerate_dim3_f3,
    fingerprint,
    invariance_trial,
    random_matrix,
    scramble,
    unscramble,
    write_jsonl,
)

from strategies import ALL_LABELS, model

# Registry classes that the fingerprint cannot tell apart; the classifier's
# finer invariants separate them.
FINGERPRINT_COLLISIONS = [
    {"L4+A1", "L5_3"},
    {"L5_4", "L5_6"},
    {"L4+A2", "L5_3+A1"},
    {"L6_5", "L6_6", "L6_9"},
    {"L6_7", "L6_8[a=1]", "L6_8[a=-1]"},
    {"L6_10", "L6_11", "L6_12[a=-1]"},
    {"L5_4+A1", "L6_13", "L5_6+A1", "L6_14"},
    {"L6_16", "L6_17[a=1]", "L6_17[a=-1]"},
    {"L6_18", "L6_19", "L6_21"},
    {"L6_20", "L6_22"},
]


def test_identity_path_and_inverse():
    a = canonical_model("L6_13")
    same, g = scramble(a, None)
    assert same == a
    b, g = scramble(a, 11)
    assert b != a
    assert unscramble(b, g) == a
    assert classify(b).name == "L6_13"


def test_scramble_is_seeded():
    a = canonical_model("L6_21")
    assert scramble(a, 5) == scramble(a, 5)
    g = random_matrix(6, 5, a.field)
    assert all(-3 <= x <= 3 for row in g for x in row)


def test_fingerprint_examples():
    fp = fingerprint(canonical_model("A6"))
    assert fp.signature == (6,)
    assert fp.betti == (1, 6, 15, 20, 15, 6, 1)
    assert fp.symplectic is True
    assert fingerprint(canonical_model("L6_20")) == fingerprint(canonical_model("L6_22"))
    assert fingerprint(canonical_model("L5_1")).symplectic is None
    assert json.loads(json.dumps(fp.to_json()))["signature"] == [6]


def test_fingerprint_separates_pencil_classes():
    a = fingerprint(canonical_model("L6_2[a=-1]"))
    b = fingerprint(canonical_model("L6_2[a=2]"))
    assert a.parameter != b.parameter


def test_collisions_are_exactly_the_documented_ones():
    groups = defaultdict(set)
    for label in ALL_LABELS:
        groups[fingerprint(model(label))].add(label)
    found = sorted(sorted(g) for g in groups.values() if len(g) > 1)
    assert found == sorted(sorted(g) for g in FINGERPRINT_COLLISIONS)


@settings(max_examples=60)
@given(st.sampled_from(ALL_LABELS), st.integers(0, 2**32), st.sampled_from(["Q", "F5", "F7"]))
def test_fingerprint_invariance(label, seed, mode):
    a = model(label, mode)
    b, _ = scramble(a, seed)
    assert fingerprint(b) == fingerprint(a)


def test_invariance_trial_record():
    rec = invariance_trial(canonical_model("L6_8[a=-1]"), 3)
    assert rec["ok"] and not rec["unreachable"]
    assert rec["expected"] == rec["got"] == "L6_8[a=-1]"


def test_census_small():
    census = enumerate_dim3_f3()
    assert census.labels == {"A3", "L3"}
    assert census.counts["A3"] == 1
    # |GL3(F3)| / |Aut(Heisenberg)| = 11232 / 432
    assert census.counts["L3"] == 26
    assert census.tables == 3**9
    assert not census.mismatches
    buf = io.StringIO()
    assert write_jsonl(census.records(), buf) == 1
    line = json.loads(buf.getvalue())
    assert line["counts"] == {"A3": 1, "L3": 26}
