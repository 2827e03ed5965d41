"""Shared fixtures: the soy/salt tables and seeded random databases."""
import numpy as np
import pytest

from transactions import TransactionDatabase

SEEDS = range(100)


def table_rows(both, soy_only, salt_only, neither, filler=None):
    """Rows for a 2x2 soy/salt table; 'neither' rows are empty unless a filler label is given"""
    empty = [filler] if filler else []
    return (
        [["soy", "salt"]] * both
        + [["soy"]] * soy_only
        + [["salt"]] * salt_only
        + [list(empty)] * neither
    )


def table_basket(both, soy_only, salt_only, neither):
    """Basket text for the same table; blank lines are skipped, so 'neither' rows hold 'bread'"""
    rows = table_rows(both, soy_only, salt_only, neither, filler="bread")
    return "\n".join(" ".join(row) for row in rows) + "\n"


def random_rows(seed, max_items=8, max_transactions=64):
    """Seeded random rows over at most max_items labels"""
    rng = np.random.default_rng(seed)
    n_items = int(rng.integers(2, max_items + 1))
    n_transactions = int(rng.integers(1, max_transactions + 1))
    density = rng.uniform(0.2, 0.7)
    matrix = rng.random((n_transactions, n_items)) < density
    return [[f"i{j}" for j in np.flatnonzero(row)] for row in matrix]


def random_db(seed, **kwargs):
    return TransactionDatabase.from_rows(random_rows(seed, **kwargs))


@pytest.fixture
def table1_db():
    # 20 soy+salt, 5 soy only, 70 salt only, 5 neither
    return TransactionDatabase.from_rows(table_rows(20, 5, 70, 5))


@pytest.fixture
def table2_db():
    # 5 soy+salt, 35 soy only, 55 salt only, 5 neither
    return TransactionDatabase.from_rows(table_rows(5, 35, 55, 5))


@pytest.fixture
def soy(table1_db):
    return (table1_db.items.name_to_id["soy"],)


@pytest.fixture
def salt(table1_db):
    return (table1_db.items.name_to_id["salt"],)


@pytest.fixture
def table1_basket(tmp_path):
    path = tmp_path / "table1.basket"
    path.write_text(table_basket(20, 5, 70, 5), encoding="utf-8")
    return path


@pytest.fixture
def table2_basket(tmp_path):
    path = tmp_path / "table2.basket"
    path.write_text(table_basket(5, 35, 55, 5), encoding="utf-8")
    return path
