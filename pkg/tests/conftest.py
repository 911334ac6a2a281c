import pytest

from sitcalc import OracleConfig, corpus_path, parse_bat, parse_theory


def load_bat(name):
    return parse_bat(corpus_path(name).read_text(), name)


def load_theory(name):
    return parse_theory(corpus_path(name).read_text(), name)


@pytest.fixture(scope="session")
def cfg1():
    return OracleConfig(max_extra=1)


@pytest.fixture(scope="session")
def cfg2():
    return OracleConfig(max_extra=2)


@pytest.fixture(scope="session")
def bw_pipeline():
    return load_bat("bw_pipeline.bat")


@pytest.fixture(scope="session")
def blocks_world():
    return load_bat("blocks_world.bat")


@pytest.fixture(scope="session")
def blocks_stacks():
    return load_bat("blocks_stacks.bat")


@pytest.fixture(scope="session")
def blocks_stacks_raw():
    return load_bat("blocks_stacks_raw.bat")


@pytest.fixture(scope="session")
def decomp_lost():
    return load_bat("decomp_lost.bat")


@pytest.fixture(scope="session")
def insep_lost():
    return load_bat("insep_lost.bat")


@pytest.fixture(scope="session")
def split_lost():
    return load_bat("split_lost.bat")


@pytest.fixture(scope="session")
def chain():
    return load_theory("propositional_chain.bat")


@pytest.fixture(scope="session")
def insep_pair():
    return load_theory("insep_forgetting_t1.bat"), load_theory("insep_forgetting_t2.bat")
