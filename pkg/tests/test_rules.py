import random

import pytest

from conftest import make_net
from oracles import (
    literal_link_rule_violations,
    literal_object_rule_violations,
    random_network,
)
from spatnet.errors import MissingCategoryError, MissingLinkCategoryError
from spatnet.model import Link
from spatnet.rules import (
    HierarchyConfig,
    detect_invalid_link_categories,
    detect_invalid_object_links,
)


def pairs_of(violations):
    return {(v.subject_id, v.rule) for v in violations}


class TestObjectRules:
    def test_high_rank_cycle_is_clean(self):
        # three rank-1 objects on a directed cycle satisfy the closed-network rule
        net = make_net(3, [(1, 2), (2, 3), (3, 1)], p={1: 1, 2: 1, 3: 1})
        cfg = HierarchyConfig(k=2, a=2)
        assert detect_invalid_object_links(net, cfg) == []

    def test_unfed_high_rank_object(self):
        # rank-1 object with only a link down the hierarchy and nothing incoming.
        # Checked against the directional reading of all three rules: object 1
        # breaks rule 1 (no qualifying out- or in-link) and rule 2 (lowest
        # category linked straight to the highest); object 2 is left with no
        # qualifying link at all, breaking rule 3.
        net = make_net(2, [(1, 2)], p={1: 1, 2: 2})
        cfg = HierarchyConfig(k=2, a=2)
        got = pairs_of(detect_invalid_object_links(net, cfg))
        assert got == {(1, "ObjRule1"), (1, "ObjRule2"), (2, "ObjRule3")}
        assert got == literal_object_rule_violations(net, cfg)

    def test_extreme_categories_must_not_be_linked(self):
        net = make_net(2, [(1, 2)], p={1: 1, 2: 3})
        cfg = HierarchyConfig(k=3, a=1)
        got = pairs_of(detect_invalid_object_links(net, cfg))
        assert (1, "ObjRule2") in got

    def test_rule2_suppressed_for_single_category(self):
        net = make_net(2, [(1, 2), (2, 1)], p={1: 2, 2: 2})
        cfg = HierarchyConfig(k=2, a=1)
        got = pairs_of(detect_invalid_object_links(net, cfg))
        assert all(rule != "ObjRule2" for _, rule in got)

    def test_extremes_are_dataset_relative(self):
        # categories 2 and 3 present out of k=4: they are the extremes
        net = make_net(2, [(1, 2)], p={1: 2, 2: 3})
        cfg = HierarchyConfig(k=4, a=1)
        assert (1, "ObjRule2") in pairs_of(detect_invalid_object_links(net, cfg))

    def test_missing_category(self):
        net = make_net(2, [(1, 2)], p={1: 1})
        with pytest.raises(MissingCategoryError):
            detect_invalid_object_links(net, HierarchyConfig(k=2, a=1))

    def test_single_category_produces_no_rule1_rule2(self):
        rand = random.Random(11)
        for _ in range(25):
            net = random_network(rand, max_objects=8, max_links=16, k=1)
            got = pairs_of(detect_invalid_object_links(net, HierarchyConfig(k=1, a=1)))
            assert all(rule == "ObjRule3" for _, rule in got)

    def test_adding_links_never_clears_rule2(self):
        rand = random.Random(23)
        for _ in range(40):
            net = random_network(rand, max_objects=6, max_links=8, k=3)
            cfg = HierarchyConfig(k=3, a=2)
            before = {pair for pair in pairs_of(detect_invalid_object_links(net, cfg))
                      if pair[1] == "ObjRule2"}
            candidates = [(a, b) for a in net.objects for b in net.objects
                          if a != b and (a, b) not in {(l.from_id, l.to_id)
                                                       for l in net.registry.values()}]
            if not candidates:
                continue
            a, b = rand.choice(candidates)
            net.add_link(Link(link_id=max(net.registry, default=0) + 1, from_id=a, to_id=b))
            after = {pair for pair in pairs_of(detect_invalid_object_links(net, cfg))
                     if pair[1] == "ObjRule2"}
            assert before <= after

    def test_sorted_deduplicated_output(self):
        net = make_net(3, [(2, 1), (3, 1)], p={1: 1, 2: 3, 3: 3})
        cfg = HierarchyConfig(k=3, a=2)
        out = detect_invalid_object_links(net, cfg)
        keys = [(v.subject_id, v.rule) for v in out]
        assert keys == sorted(keys) and len(keys) == len(set(keys))


class TestLinkRules:
    def test_category1_ring_is_clean(self):
        net = make_net(3, [(1, 2), (2, 3), (3, 1)], l={0: 1, 1: 1, 2: 1})
        cfg = HierarchyConfig(k=1, a=1, c=2, a_link=2)
        assert detect_invalid_link_categories(net, cfg) == []

    def test_lone_high_rank_link(self):
        net = make_net(2, [(1, 2)], l={0: 1})
        cfg = HierarchyConfig(k=1, a=1, c=2, a_link=2)
        got = pairs_of(detect_invalid_link_categories(net, cfg))
        assert got == {(1, "LinkRule1")}
        assert got == literal_link_rule_violations(net, cfg)

    def test_extreme_link_categories_on_one_object(self):
        net = make_net(3, [(1, 2), (2, 3)], l={0: 1, 1: 3})
        cfg = HierarchyConfig(k=1, a=1, c=3, a_link=1)
        got = pairs_of(detect_invalid_link_categories(net, cfg))
        assert (2, "LinkRule2") in got

    def test_rule2_suppressed_for_single_link_category(self):
        net = make_net(2, [(1, 2), (2, 1)], l={0: 2, 1: 2})
        cfg = HierarchyConfig(k=1, a=1, c=3, a_link=1)
        got = pairs_of(detect_invalid_link_categories(net, cfg))
        assert all(rule != "LinkRule2" for _, rule in got)

    def test_missing_link_category(self):
        net = make_net(2, [(1, 2)])
        with pytest.raises(MissingLinkCategoryError):
            detect_invalid_link_categories(net, HierarchyConfig(k=1, a=1, c=2, a_link=1))

    def test_no_links_no_violations(self):
        net = make_net(2, [])
        assert detect_invalid_link_categories(net, HierarchyConfig(k=1, a=1, c=2, a_link=1)) == []


class TestOracleAgreement:
    def test_object_rules_match_literal_checker(self):
        rand = random.Random(4242)
        for _ in range(60):
            k = rand.randint(1, 4)
            net = random_network(rand, max_objects=10, max_links=24, k=k)
            cfg = HierarchyConfig(k=k, a=rand.randint(1, k))
            got = pairs_of(detect_invalid_object_links(net, cfg))
            assert got == literal_object_rule_violations(net, cfg)

    def test_link_rules_match_literal_checker(self):
        rand = random.Random(777)
        for _ in range(60):
            c = rand.randint(1, 4)
            net = random_network(rand, max_objects=10, max_links=24, k=2,
                                 link_categories=True, c=c)
            cfg = HierarchyConfig(k=2, a=1, c=c, a_link=rand.randint(1, c))
            if not net.registry:
                continue
            got = pairs_of(detect_invalid_link_categories(net, cfg))
            assert got == literal_link_rule_violations(net, cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        HierarchyConfig(k=2, a=3)
    with pytest.raises(ValueError):
        HierarchyConfig(k=2, a=1, c=2, a_link=None)
    with pytest.raises(ValueError):
        HierarchyConfig(k=2, a=1, c=2, a_link=5)
