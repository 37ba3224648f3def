import json

import pydlcd

GOLDEN = "C SubClassOf [2 x + 3 y = 5] .\nC SubClassOf [4 y = 3] .\n"


def test_golden_proof_checks():
    text = pydlcd.prove(GOLDEN, "C SubClassOf [4 x - 6 y = 1]")
    proof = json.loads(text)
    assert len(proof["nodes"]) == 4
    assert pydlcd.check(GOLDEN, text) == []


def test_not_entailed():
    assert not pydlcd.entails(GOLDEN, "C SubClassOf D")
    try:
        pydlcd.prove(GOLDEN, "C SubClassOf D")
    except ValueError:
        pass
    else:
        raise AssertionError("expected an error")


def test_bench_goal_in_classification():
    onto, goal = pydlcd.bench("artificial", 3, 7)
    lhs, rhs = goal.split(" SubClassOf ")
    assert (lhs, rhs) in pydlcd.classify(onto)


def test_parse_error():
    try:
        pydlcd.classify("A SubClassOf")
    except ValueError:
        pass
    else:
        raise AssertionError("expected a parse error")
