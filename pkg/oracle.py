"""
Brute-force reference miner.

Counts every itemset up to max_len by scanning transactions, then tests every
ordered pair of disjoint itemsets against the rule conditions literally. It
shares no counting or candidate code with mining.py or rules.py.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List

from errors import UniverseTooLarge
from models import RuleForm, RuleRecord, sort_rules
from transactions import SupportTable, negated_support_direct

# Largest item universe the oracle will enumerate
MAX_ORACLE_ITEMS = 20


@dataclass
class OracleResult:
    supports: SupportTable
    rules: List[RuleRecord] = field(default_factory=list)
    stage_counts: Dict[str, int] = field(default_factory=dict)


def oracle_supports(db, max_len):
    """Count every itemset of size 1..max_len by direct transaction scans"""
    if db.n_items > MAX_ORACLE_ITEMS:
        raise UniverseTooLarge(f"oracle handles at most {MAX_ORACLE_ITEMS} items, database has {db.n_items}")

    rows = [frozenset(t) for t in db.transactions]
    table = SupportTable(db.n)
    for size in range(1, max_len + 1):
        for itemset in combinations(range(db.n_items), size):
            wanted = frozenset(itemset)
            table.add(itemset, sum(1 for row in rows if wanted <= row))
    return table


def oracle_rules(db, config):
    """Apply the positive and negative rule conditions to every eligible pair"""
    table = oracle_supports(db, config.max_len)
    n = db.n
    sprt = {itemset: Fraction(count, n) for itemset, count in table.entries.items()}
    itemsets = table.itemsets()

    frequent = [s for s in itemsets if sprt[s] >= config.minsprt]
    negative_forms = [f for f in RuleForm if f.is_negative and f in config.rule_forms]

    rules = set()
    partitions = candidates = passing = 0
    for x in itemsets:
        for y in itemsets:
            if len(x) + len(y) > config.max_len or set(x) & set(y):
                continue
            union = tuple(sorted(x + y))
            s_union, s_x, s_y = sprt[union], sprt[x], sprt[y]

            # positive rule X -> Y
            if s_union >= config.minsprt:
                partitions += 1
                if (RuleForm.POS in config.rule_forms
                        and abs(s_union - s_x * s_y) >= config.mininterest
                        and s_union / s_x >= config.minconf):
                    rules.add(RuleRecord(
                        form=RuleForm.POS,
                        antecedent=x,
                        consequent=y,
                        support=s_union,
                        confidence=s_union / s_x,
                        leverage=s_union - s_x * s_y,
                        interest_ratio=s_union / (s_x * s_y),
                    ))

            # negated forms need both parts frequent
            if s_x < config.minsprt or s_y < config.minsprt:
                continue
            if config.infrequent_unions_only and s_union >= config.minsprt:
                continue
            candidates += 1

            reached = False
            for form in negative_forms:
                literal = negated_support_direct(db, x, y, form)
                if literal >= config.minsprt:
                    reached = True
                if form.negates_antecedent and s_x == 1:
                    continue

                left = 1 - s_x if form.negates_antecedent else s_x
                right = 1 - s_y if form.negates_consequent else s_y
                lev = literal - left * right
                gap = abs(lev) if config.use_abs_interest_for_negative else lev
                if literal >= config.minsprt and gap >= config.mininterest and literal / left >= config.minconf:
                    rules.add(RuleRecord(
                        form=form,
                        antecedent=x,
                        consequent=y,
                        support=literal,
                        confidence=literal / left,
                        leverage=lev,
                        interest_ratio=literal / (left * right) if left * right else None,
                    ))
            if reached:
                passing += 1

    ordered = sort_rules(rules)
    stage_counts = {
        'frequent_itemsets': len(frequent),
        'positive_partitions': partitions,
        'candidate_pairs': candidates,
        'candidate_pairs_condition3': passing,
        'rules_emitted': len(ordered),
    }
    logging.info(f"Oracle found {len(ordered)} rules: {stage_counts}")
    return OracleResult(supports=table, rules=ordered, stage_counts=stage_counts)
