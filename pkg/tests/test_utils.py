import inspect

import pytest

from hotgate.errors import ConfigError
from hotgate.utils import THREADS_ENV_VAR, chunker, n_threads, ordered_map
from hotgate.utils_for_testing import str_to_df


def test_chunker():
    assert [list(c) for c in chunker(list(range(7)), 3)] == [[0, 1, 2], [3, 4, 5], [6]]


def test_ordered_map_keeps_order():
    """Results come back in input order whatever the pool size."""
    items = list(range(50))
    assert ordered_map(lambda x: x * x, items, threads=8) == [x * x for x in items]
    assert ordered_map(lambda x: x + 1, [], threads=4) == []


def test_thread_count_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "3")
    assert n_threads() == 3
    monkeypatch.setenv(THREADS_ENV_VAR, "many")
    with pytest.raises(ConfigError):
        n_threads()
    monkeypatch.setenv(THREADS_ENV_VAR, "0")
    with pytest.raises(ConfigError):
        n_threads()
    monkeypatch.delenv(THREADS_ENV_VAR)
    assert n_threads() >= 1


def test_str_to_df():
    df = str_to_df(
        """delta_t,infidelity_trivial,
        0.1,0.4,
        1.0,0.2,
        """,
    )
    assert list(df.columns) == ["delta_t", "infidelity_trivial"]
    assert df["infidelity_trivial"].tolist() == [0.4, 0.2]


def test_public_names():
    """Only helpers the package uses are defined here."""
    import hotgate.utils as utils

    imported = {"Any", "Optional", "Callable", "Iterable", "Sequence", "ThreadPoolExecutor", "ConfigError"}
    public = {
        name
        for name, value in vars(utils).items()
        if not name.startswith("_") and not inspect.ismodule(value) and name not in imported
    }
    assert public == {"presets", "THREADS_ENV_VAR", "n_threads", "chunker", "ordered_map"}
