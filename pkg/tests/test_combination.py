import pytest
from hypothesis import given
from hypothesis import strategies as st

from ird.algebra import IRD, PathParam, dimension_value, ird_from_outages
from ird.combination import (
    CfAssignment,
    CombinationError,
    CombinationFunction,
    add,
    combine_dimension,
    subtract,
)

IND = CombinationFunction("independent")


def by_city(key="city"):
    return CombinationFunction("dedupe_by_key", key)


def value(*paths_):
    return dimension_value([PathParam(pid, p, params) for pid, p, params in paths_])


def test_independent_two_single_paths():
    merged = combine_dimension(IND, value(("a", 0.1, {})), value(("b", 0.1, {})))
    assert merged.live == pytest.approx(0.99, abs=1e-12)


def test_dedupe_same_city_collapses():
    a = value(("a", 0.1, {"city": "x"}))
    b = value(("b", 0.1, {"city": "x"}))
    assert combine_dimension(by_city(), a, b).live == pytest.approx(0.9, abs=1e-12)


def test_dedupe_different_cities_independent():
    a = value(("a", 0.1, {"city": "x"}))
    b = value(("b", 0.1, {"city": "y"}))
    assert combine_dimension(by_city(), a, b).live == pytest.approx(0.99, abs=1e-12)


def test_dedupe_missing_key_is_singleton():
    a = value(("a", 0.2, {}))
    b = value(("b", 0.5, {}))
    assert combine_dimension(by_city(), a, b).live == pytest.approx(0.9, abs=1e-12)


def test_dedupe_requires_key():
    with pytest.raises(CombinationError, match="key"):
        combine_dimension(CombinationFunction("dedupe_by_key"), value(("a", 0.1, {})), value(("b", 0.1, {})))


def test_unknown_cf_name():
    with pytest.raises(CombinationError):
        CombinationFunction("similarity")


def test_empty_operand_rejected():
    from ird.algebra import DimensionValue

    with pytest.raises(CombinationError):
        combine_dimension(IND, value(("a", 0.1, {})), DimensionValue(1.0, ()))


def test_duplicate_ids_are_idempotent():
    a = value(("a", 0.1, {}), ("b", 0.3, {}))
    b = value(("a", 0.1, {}))
    for cf in (IND, by_city()):
        merged = combine_dimension(cf, a, b)
        assert merged.live == cf.evaluate(a.paths).live
        assert len(merged.paths) == 2


def test_add_disjoint_dimensions():
    a = ird_from_outages({"hw": 0.1})
    b = ird_from_outages({"sw": 0.2})
    assert add(a, b) == IRD({**a.dimensions, **b.dimensions})


def test_add_same_city_dedupe():
    a = IRD({"city": value(("a", 0.2, {"city": "x"}))})
    b = IRD({"city": value(("b", 0.3, {"city": "x"}))})
    result = add(a, b, CfAssignment(per_dimension={"city": by_city()}))
    assert result.dimensions["city"].live == pytest.approx(0.8, abs=1e-12)


def test_add_identity():
    a = ird_from_outages({"hw": 0.1, "sw": 0.01})
    assert add(a, IRD({})) == a
    assert add(IRD({}), a) == a


def test_add_parameter_length():
    a = IRD({"d": value(("a", 0.1, {}), ("b", 0.1, {}))})
    b = IRD({"d": value(("b", 0.1, {}), ("c", 0.1, {}))})
    assert len(add(a, b).dimensions["d"].paths) == 3  # t < r + s on collision
    c = IRD({"d": value(("x", 0.1, {}))})
    assert len(add(a, c).dimensions["d"].paths) == 3  # t == r + s otherwise


def test_subtract_nothing():
    a = ird_from_outages({"hw": 0.1})
    assert subtract(a, []) == a


def test_subtract_recomputes():
    ird = IRD({"d": value(("a", 0.1, {}), ("b", 0.2, {}))})
    assert subtract(ird, [("d", "b")]).dimensions["d"].live == pytest.approx(0.9, abs=1e-12)


def test_subtract_last_path_drops_dimension():
    ird = ird_from_outages({"hw": 0.1, "sw": 0.2})
    assert set(subtract(ird, [("sw", "sw")]).dimensions) == {"hw"}


@pytest.mark.parametrize("removal", [[("net", "x")], [("hw", "nope")]])
def test_subtract_unknown(removal):
    with pytest.raises(CombinationError, match="nope|net"):
        subtract(ird_from_outages({"hw": 0.1}), removal)


def test_subtract_under_dedupe():
    ird = IRD(
        {"d": by_city().evaluate([PathParam("a", 0.1, {"city": "x"}), PathParam("b", 0.2, {"city": "x"}), PathParam("c", 0.5, {"city": "y"})])}
    )
    out = subtract(ird, [("d", "a")], CfAssignment(per_dimension={"d": by_city()}))
    # groups {b}, {c} -> 1 - 0.2 * 0.5
    assert out.dimensions["d"].live == pytest.approx(0.9, abs=1e-12)


# --- properties --------------------------------------------------------------

probs = st.floats(0.0, 1.0)
cities = st.sampled_from(["x", "y", "z"])


@st.composite
def path_lists(draw, prefix, min_size=1, max_size=4):
    n = draw(st.integers(min_size, max_size))
    return [
        PathParam(f"{prefix}{i}", draw(probs), {"city": draw(cities)}) for i in range(n)
    ]


@st.composite
def three_operands(draw):
    return [IND.evaluate(draw(path_lists(p))) for p in "abc"]


@given(three_operands())
def test_independent_commutative_associative(ops):
    a, b, c = ops
    ab, ba = combine_dimension(IND, a, b), combine_dimension(IND, b, a)
    assert set(ab.paths) == set(ba.paths)
    assert ab.live == pytest.approx(ba.live, abs=1e-12)
    left = combine_dimension(IND, combine_dimension(IND, a, b), c)
    right = combine_dimension(IND, a, combine_dimension(IND, b, c))
    assert set(left.paths) == set(right.paths)
    assert left.live == pytest.approx(right.live, abs=1e-12)


@given(path_lists("a"), path_lists("b"))
def test_dedupe_commutative_and_never_better(pa, pb):
    cf = by_city()
    a, b = cf.evaluate(pa), cf.evaluate(pb)
    ab, ba = combine_dimension(cf, a, b), combine_dimension(cf, b, a)
    assert ab.live == pytest.approx(ba.live, abs=1e-12)
    ind = combine_dimension(IND, IND.evaluate(pa), IND.evaluate(pb))
    assert ab.live <= ind.live + 1e-12


@given(path_lists("a"), path_lists("b"), st.sampled_from(["independent", "dedupe_by_key"]))
def test_combined_live_bounds(pa, pb, name):
    cf = CombinationFunction(name, "city" if name == "dedupe_by_key" else None)
    a, b = cf.evaluate(pa), cf.evaluate(pb)
    merged = combine_dimension(cf, a, b)
    assert max(a.live, b.live) - 1e-12 <= merged.live <= 1.0


@st.composite
def collision_free_pair(draw):
    dims = ["d1", "d2", "d3"]
    a_dims = draw(st.sets(st.sampled_from(dims), max_size=3))
    b_dims = draw(st.sets(st.sampled_from(dims), max_size=3))
    a = IRD({d: dimension_value(draw(path_lists(f"a-{d}-"))) for d in a_dims})
    b = IRD({d: dimension_value(draw(path_lists(f"b-{d}-"))) for d in b_dims})
    return a, b


@given(collision_free_pair())
def test_add_subtract_round_trip(pair):
    a, b = pair
    removal = [(d, p.path_id) for d, v in b.dimensions.items() for p in v.paths]
    assert subtract(add(a, b), removal) == a
