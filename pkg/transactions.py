"""
Basket ingestion and exact support counting.

Each item owns a packed occurrence bit-vector over the transactions; the
support of an itemset is the popcount of the AND of its items' vectors.
"""
import logging
from fractions import Fraction

import numpy as np

from errors import (
    EmptyDatabase,
    InvalidParameter,
    OverlappingItemsets,
    UnknownItem,
)
from models import ItemDictionary, RuleForm, make_itemset, require_non_empty

DELIMITERS = ("ws", "comma")


class TransactionDatabase:
    """Immutable set of transactions plus per-item vertical bit-vectors"""

    def __init__(self, items, transactions):
        if not transactions:
            raise EmptyDatabase()

        self.items = items
        self.transactions = tuple(make_itemset(t) for t in transactions)
        self.n = len(self.transactions)
        self.columns = self._build_columns()

    @classmethod
    def from_rows(cls, rows):
        """Build a database from rows of item labels; empty rows are kept"""
        items = ItemDictionary()
        transactions = []
        for row in rows:
            transactions.append(make_itemset(items.intern(label) for label in row))
        return cls(items, transactions)

    def _build_columns(self):
        n_bytes = (self.n + 7) // 8
        columns = np.zeros((len(self.items), n_bytes), dtype=np.uint8)
        for tid, transaction in enumerate(self.transactions):
            if transaction:
                # big-endian bit order, the same layout np.packbits uses
                columns[list(transaction), tid >> 3] |= np.uint8(0x80 >> (tid & 7))
        columns.setflags(write=False)
        return columns

    @property
    def n_items(self):
        return len(self.items)

    def check_itemset(self, itemset):
        for item_id in itemset:
            if not 0 <= item_id < self.n_items:
                raise UnknownItem(item_id)

    def vector(self, itemset):
        """Occurrence bit-vector of a non-empty itemset"""
        if len(itemset) == 1:
            return self.columns[itemset[0]]
        return np.bitwise_and.reduce(self.columns[list(itemset)], axis=0)

    def item_counts(self):
        """Occurrence count of every single item, indexed by id"""
        return np.bitwise_count(self.columns).sum(axis=1, dtype=np.int64)


def popcount(vector):
    return int(np.bitwise_count(vector).sum(dtype=np.int64))


def _split_line(line, delimiter):
    if delimiter == "comma":
        tokens = (token.strip() for token in line.split(","))
        return [token for token in tokens if token]
    return line.split()


def load_basket(source, delimiter="ws"):
    """Read one transaction per non-empty, non-comment line"""
    if delimiter not in DELIMITERS:
        raise InvalidParameter(f"delimiter must be one of {DELIMITERS}, got {delimiter!r}")

    items = ItemDictionary()
    transactions = []
    skipped = 0
    for line in source:
        if line.startswith('#'):
            continue
        line = line.strip()
        if not line:
            continue

        tokens = _split_line(line, delimiter)
        if not tokens:
            skipped += 1
            continue
        # dict.fromkeys keeps first occurrence order while dropping repeats
        transactions.append(make_itemset(items.intern(t) for t in dict.fromkeys(tokens)))

    if skipped:
        logging.debug(f"Skipped {skipped} lines holding only delimiters")
    if not transactions:
        raise EmptyDatabase()

    logging.info(f"Loaded {len(transactions)} transactions over {len(items)} items")
    return TransactionDatabase(items, transactions)


def dump_basket(db, delimiter="ws"):
    """Serialize a database back to basket text, items in id order.

    A line must not begin with '#', so the first label not starting with '#'
    leads; transactions with no such label are dropped.
    """
    separator = "," if delimiter == "comma" else " "
    lines = []
    dropped = 0
    for transaction in db.transactions:
        labels = db.items.labels(transaction)
        lead = next((i for i, label in enumerate(labels) if not label.startswith('#')), None)
        if lead is None:
            dropped += 1
            continue
        labels.insert(0, labels.pop(lead))
        lines.append(separator.join(labels))

    if dropped:
        logging.warning(f"Dropped {dropped} transactions that cannot be written in basket format")
    return "\n".join(lines) + "\n"


def support_count(db, x):
    """Number of transactions containing every item of x"""
    db.check_itemset(x)
    if not x:
        return db.n
    return popcount(db.vector(x))


def support(db, x):
    return Fraction(support_count(db, x), db.n)


def _check_pair(a, b, form):
    require_non_empty(a, "a")
    require_non_empty(b, "b")
    if set(a) & set(b):
        raise OverlappingItemsets(a, b)
    if not form.is_negative:
        raise InvalidParameter(f"{form.value} is not a negated form")


def negated_count(n, count_a, count_b, count_ab, form):
    """Inclusion-exclusion count of the literal conjunction of a negated form"""
    if form is RuleForm.A_NOT_B:
        return count_a - count_ab
    if form is RuleForm.NOT_A_B:
        return count_b - count_ab
    if form is RuleForm.NOT_A_NOT_B:
        return n - count_a - count_b + count_ab
    raise InvalidParameter(f"{form.value} is not a negated form")


def negated_support(db, a, b, form):
    """
    Support of A and not B, not A and B, or not A and not B, from three plain
    counts. "not S" means the transaction does not contain all of S.
    """
    _check_pair(a, b, form)
    count_a = support_count(db, a)
    count_b = support_count(db, b)
    count_ab = support_count(db, make_itemset(a + b))
    return Fraction(negated_count(db.n, count_a, count_b, count_ab, form), db.n)


def negated_support_direct(db, a, b, form):
    """Same value as negated_support, by testing every transaction literally"""
    _check_pair(a, b, form)
    db.check_itemset(a)
    db.check_itemset(b)

    want_a = not form.negates_antecedent
    want_b = not form.negates_consequent
    set_a, set_b = set(a), set(b)
    hits = 0
    for transaction in db.transactions:
        row = set(transaction)
        if set_a.issubset(row) == want_a and set_b.issubset(row) == want_b:
            hits += 1
    return Fraction(hits, db.n)


def contingency(db, a, b):
    """The four quadrant counts of a 2x2 table for a and b"""
    require_non_empty(a, "a")
    require_non_empty(b, "b")
    count_a = support_count(db, a)
    count_b = support_count(db, b)
    count_ab = support_count(db, make_itemset(a + b))
    return {
        'a_b': count_ab,
        'a_not_b': count_a - count_ab,
        'not_a_b': count_b - count_ab,
        'not_a_not_b': db.n - count_a - count_b + count_ab,
    }


class SupportTable:
    """Exact occurrence count per itemset over a fixed denominator n"""

    def __init__(self, n, entries=None):
        self.n = n
        self.entries = dict(entries or {})

    def __len__(self):
        return len(self.entries)

    def __contains__(self, itemset):
        return not itemset or itemset in self.entries

    def add(self, itemset, count):
        self.entries[itemset] = count

    def count(self, itemset):
        if not itemset:
            return self.n
        try:
            return self.entries[itemset]
        except KeyError:
            raise UnknownItem(itemset) from None

    def support(self, itemset):
        return Fraction(self.count(itemset), self.n)

    def itemsets(self):
        """Stored itemsets ordered by size, then by ids"""
        return sorted(self.entries, key=lambda s: (len(s), s))


def generate_basket(seed, n_items, n_transactions, density):
    """Seeded pseudo-random basket text; identical parameters give identical bytes"""
    if n_items < 1 or n_transactions < 1:
        raise InvalidParameter("items and transactions must be positive")
    density = float(density)
    if not 0 < density < 1:
        raise InvalidParameter(f"density must lie in (0, 1), got {density}")

    rng = np.random.default_rng(seed)
    matrix = rng.random((n_transactions, n_items)) < density

    # every line needs at least one item, otherwise the loader skips it
    empty_rows = np.flatnonzero(~matrix.any(axis=1))
    if empty_rows.size:
        matrix[empty_rows, rng.integers(0, n_items, size=empty_rows.size)] = True

    width = len(str(n_items - 1))
    labels = [f"i{j:0{width}d}" for j in range(n_items)]

    lines = [f"# negmine gen seed={seed} items={n_items} transactions={n_transactions} density={density:g}"]
    for row in matrix:
        lines.append(" ".join(labels[j] for j in np.flatnonzero(row)))
    return "\n".join(lines) + "\n"
