import pytest

from gpdcov import (FiniteGroup, GroupoidMorphism, codiscrete_groupoid,
                    covering_from_subgroup, group_groupoid, require_covering,
                    trivial_groupoid, universal_cover, vertex_group)


@pytest.fixture(scope="session")
def t1():
    return trivial_groupoid()


@pytest.fixture(scope="session")
def i2():
    return codiscrete_groupoid(2, labels=("x", "y"))


@pytest.fixture(scope="session")
def c4():
    return group_groupoid(FiniteGroup.cyclic(4), label="*")


@pytest.fixture(scope="session")
def s3():
    return group_groupoid(FiniteGroup.symmetric(3), label="*")


@pytest.fixture(scope="session")
def c4_univ(c4):
    return universal_cover(c4, 0)


@pytest.fixture(scope="session")
def s3_univ(s3):
    return universal_cover(s3, 0)


@pytest.fixture(scope="session")
def cov02(c4):
    vg = vertex_group(c4, 0)
    return covering_from_subgroup(c4, 0, vg.subgroup([0, 2]))


@pytest.fixture(scope="session")
def id_c4(c4):
    return require_covering(GroupoidMorphism.identity(c4))


@pytest.fixture(scope="session")
def s3_covers(s3):
    vg = vertex_group(s3, 0)
    return {sub.elements: covering_from_subgroup(s3, 0, sub)
            for sub in vg.subgroups()}
