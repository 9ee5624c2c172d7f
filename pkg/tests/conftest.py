import pytest

from colexdec import gf2
from colexdec.cellcomplex import build_bcc_colex, dual
from colexdec.code import stabilizer_matrices
from colexdec.pipeline import DecodingContext


@pytest.fixture(scope="session")
def colex2():
    return build_bcc_colex(2)


@pytest.fixture(scope="session")
def dual2(colex2):
    return dual(colex2)


@pytest.fixture(scope="session")
def ctx2(dual2):
    return DecodingContext(dual2)


@pytest.fixture(scope="session")
def mats2(dual2):
    return stabilizer_matrices(dual2)


@pytest.fixture(scope="session")
def memberships2(mats2):
    sx = gf2.Gf2Solver(mats2.sx.T.copy())
    sz = gf2.Gf2Solver(mats2.sz.T.copy())
    return sx, sz
