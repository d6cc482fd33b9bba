import pytest

import touropt as tp


@pytest.fixture(scope="session")
def juneau():
    return tp.get_preset("juneau")


@pytest.fixture(scope="session")
def juneau_exog(juneau):
    return tp.synth_dataset(juneau, seed=0)


@pytest.fixture(scope="session")
def juneau_init(juneau, juneau_exog):
    return tp.initial_state(juneau, juneau_exog, seed=0)


@pytest.fixture(scope="session")
def iceland():
    return tp.get_preset("iceland")
