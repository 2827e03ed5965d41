"""
Level-wise frequent itemset mining and negative candidate generation.

Candidates of size k come from joining two frequent (k-1)-itemsets that share
their first k-2 items; a candidate is counted only when all of its (k-1)-subsets
are frequent. Counting intersects the parent's bit-vector with one more column.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

import numpy as np

from errors import EmptyDatabase
from models import Itemset, make_itemset
from transactions import negated_count, popcount

# Work below this size is never split across threads
MIN_BATCH = 64


def minimum_count(minsprt, n):
    """Smallest count c with c/n >= minsprt"""
    return max(0, math.ceil(minsprt * n))


def run_batches(fn, items, threads=1):
    """Apply fn to every item, optionally over disjoint batches in a thread pool.

    Results come back in input order whatever the scheduling.
    """
    items = list(items)
    if threads <= 1 or len(items) < 2 * MIN_BATCH:
        return [fn(item) for item in items]

    size = max(MIN_BATCH, math.ceil(len(items) / threads))
    batches = [items[i:i + size] for i in range(0, len(items), size)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = pool.map(lambda batch: [fn(item) for item in batch], batches)
        return [value for batch in results for value in batch]


class FrequentSet:
    """Frequent itemsets grouped by size, with exact counts"""

    def __init__(self, n, by_size):
        self.n = n
        self.by_size = [sorted(level) for level in by_size]
        self.lookup = {
            itemset: count for level in self.by_size for itemset, count in level
        }

    def __len__(self):
        return len(self.lookup)

    def __contains__(self, itemset):
        return itemset in self.lookup

    def count(self, itemset):
        if not itemset:
            return self.n
        return self.lookup[itemset]

    def support(self, itemset):
        return Fraction(self.count(itemset), self.n)

    def level(self, size):
        if 1 <= size <= len(self.by_size):
            return self.by_size[size - 1]
        return []

    def itemsets(self):
        """All members, by size then ids"""
        return [itemset for level in self.by_size for itemset, _ in level]

    def is_downward_closed(self):
        for itemset in self.lookup:
            if len(itemset) < 2:
                continue
            for i in range(len(itemset)):
                if itemset[:i] + itemset[i + 1:] not in self.lookup:
                    return False
        return True


@dataclass(frozen=True)
class NegativeCandidate:
    a: Itemset
    b: Itemset
    union_count: int

    # counts of the two parts, both frequent by construction
    a_count: int
    b_count: int

    @property
    def union(self):
        return make_itemset(self.a + self.b)


def _join_level(previous):
    """Prefix-join sorted (k-1)-itemsets; returns (candidate, parent) pairs after pruning"""
    known = set(previous)
    joined = []
    for i, left in enumerate(previous):
        prefix = left[:-1]
        for right in previous[i + 1:]:
            if right[:-1] != prefix:
                break
            candidate = left + (right[-1],)
            # the two subsets dropping either of the last two items are the parents
            if all(candidate[:j] + candidate[j + 1:] in known for j in range(len(candidate) - 2)):
                joined.append((candidate, left))
    return joined


def _count_candidate(db, vectors, task):
    candidate, parent = task
    vector = np.bitwise_and(vectors[parent], db.columns[candidate[-1]])
    return candidate, popcount(vector), vector


def mine_frequent(db, config):
    """Every itemset S with 1 <= |S| <= max_len and support(S) >= minsprt"""
    if db.n < 1:
        raise EmptyDatabase()

    min_count = minimum_count(config.minsprt, db.n)
    counts = db.item_counts()

    level = [((item,), int(count)) for item, count in enumerate(counts) if count >= min_count]
    vectors = {itemset: db.columns[itemset[0]] for itemset, _ in level}
    levels = [level]
    logging.debug(f"Level 1: {len(level)} frequent of {db.n_items} items")

    for size in range(2, config.max_len + 1):
        previous = [itemset for itemset, _ in levels[-1]]
        joined = _join_level(previous)
        if not joined:
            break

        counted = run_batches(partial(_count_candidate, db, vectors), joined, config.threads)

        level = []
        next_vectors = {}
        for candidate, count, vector in counted:
            if count >= min_count:
                level.append((candidate, count))
                next_vectors[candidate] = vector
        logging.debug(f"Level {size}: {len(joined)} candidates, {len(level)} frequent")

        if not level:
            break
        levels.append(level)
        vectors = next_vectors

    frequent = FrequentSet(db.n, levels)
    logging.info(f"Mined {len(frequent)} frequent itemsets (minsprt={config.minsprt}, max_len={config.max_len})")
    return frequent


class UnionCounter:
    """Lazily counted supports of candidate unions, cached by canonical itemset"""

    def __init__(self, db, frequent):
        self.db = db
        self.cache = dict(frequent.lookup)

    def prefetch(self, unions, threads=1):
        missing = sorted({u for u in unions if u not in self.cache})
        if not missing:
            return
        counted = run_batches(lambda u: (u, popcount(self.db.vector(u))), missing, threads)
        self.cache.update(counted)
        logging.debug(f"Counted {len(missing)} infrequent unions")

    def count(self, union):
        if union not in self.cache:
            self.cache[union] = popcount(self.db.vector(union))
        return self.cache[union]


def generate_negative_candidates(frequent, db, config):
    """All ordered pairs (A, B) of disjoint frequent itemsets with |A|+|B| <= max_len"""
    members = frequent.itemsets()
    member_sets = {itemset: frozenset(itemset) for itemset in members}

    pairs = []
    for a in members:
        set_a = member_sets[a]
        room = config.max_len - len(a)
        for b in members:
            if len(b) > room:
                # members are ordered by size
                break
            if set_a.isdisjoint(member_sets[b]):
                pairs.append((a, b, make_itemset(a + b)))

    counter = UnionCounter(db, frequent)
    counter.prefetch((union for _, _, union in pairs), config.threads)

    candidates = []
    for a, b, union in pairs:
        if config.infrequent_unions_only and union in frequent:
            continue
        candidates.append(NegativeCandidate(
            a=a,
            b=b,
            union_count=counter.count(union),
            a_count=frequent.count(a),
            b_count=frequent.count(b),
        ))

    candidates.sort(key=lambda c: (c.a, c.b))
    logging.info(f"Generated {len(candidates)} negative candidates from {len(members)} frequent itemsets")
    return candidates


@dataclass(frozen=True)
class SearchSpaceReport:
    frequent_itemsets: int
    positive_partitions: int
    candidate_pairs: int
    candidate_pairs_condition3: int
    rules_emitted: int

    # after/before for the negated-support stage
    candidate_retention: Fraction
    # rules per examined rule site
    rule_yield: Fraction

    def stage_counts(self):
        return {
            'frequent_itemsets': self.frequent_itemsets,
            'positive_partitions': self.positive_partitions,
            'candidate_pairs': self.candidate_pairs,
            'candidate_pairs_condition3': self.candidate_pairs_condition3,
            'rules_emitted': self.rules_emitted,
        }


def _ratio(part, whole):
    return Fraction(part, whole) if whole else Fraction(1)


def passes_condition3(candidate, n, min_count, config):
    """Does some enabled negated form reach minsprt on this pair"""
    return any(
        negated_count(n, candidate.a_count, candidate.b_count, candidate.union_count, form) >= min_count
        for form in config.negative_forms
    )


def build_search_space_report(stage_counts):
    examined = stage_counts['positive_partitions'] + stage_counts['candidate_pairs']
    return SearchSpaceReport(
        candidate_retention=_ratio(stage_counts['candidate_pairs_condition3'], stage_counts['candidate_pairs']),
        rule_yield=_ratio(stage_counts['rules_emitted'], examined),
        **stage_counts,
    )


def search_space_report(frequent, candidates, emitted_rules, config):
    """Stage sizes of one mining run and how much each stage pruned"""
    min_count = minimum_count(config.minsprt, frequent.n)
    partitions = sum(2 ** len(itemset) - 2 for itemset in frequent.lookup if len(itemset) >= 2)
    after = sum(1 for c in candidates if passes_condition3(c, frequent.n, min_count, config))

    return build_search_space_report({
        'frequent_itemsets': len(frequent),
        'positive_partitions': partitions,
        'candidate_pairs': len(candidates),
        'candidate_pairs_condition3': after,
        'rules_emitted': int(emitted_rules),
    })
