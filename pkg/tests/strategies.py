from hypothesis import strategies as st

from dlw.logic import FALSE, TRUE, And, Iff, Implies, Not, Or, Var

ATOMS = ("a", "b", "c", "d")


def formulas(names=ATOMS, max_leaves=12):
    leaves = st.one_of(st.sampled_from([Var(n) for n in names]),
                       st.sampled_from([TRUE, FALSE]))

    def extend(children):
        pair = st.tuples(children, children)
        return st.one_of(
            children.map(Not),
            st.lists(children, min_size=2, max_size=3).map(lambda xs: And(tuple(xs))),
            st.lists(children, min_size=2, max_size=3).map(lambda xs: Or(tuple(xs))),
            pair.map(lambda p: Implies(*p)),
            pair.map(lambda p: Iff(*p)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)
