"""
Interest measures and extraction of positive and negative rules of interest.

A rule X -> Y is of interest when its support reaches minsprt, its confidence
reaches minconf, and it departs from independence by at least mininterest:
|sprt(X and Y) - sprt(X) sprt(Y)| for positive rules, the signed difference
against the negated marginals for A -> ~B, ~A -> B and ~A -> ~B.
"""
import logging
from fractions import Fraction
from itertools import combinations

from errors import DivisionUndefined, InvalidParameter, InvalidThreshold, TooSmall
from mining import run_batches
from models import (
    Classification,
    DegenerateAntecedent,
    RuleForm,
    RuleRecord,
    Verdict,
    make_itemset,
    require_non_empty,
    sort_rules,
)
from transactions import negated_count, support_count
from utils import format_rational

ONE = Fraction(1)


def confidence(sprt_union, sprt_antecedent):
    """conf(X -> Y) = sprt(X and Y) / sprt(X)"""
    if sprt_antecedent == 0:
        raise DivisionUndefined("confidence is undefined for an antecedent with zero support")
    return Fraction(sprt_union) / Fraction(sprt_antecedent)


def leverage(sprt_union, sprt_x, sprt_y):
    """Signed distance from independence: sprt(X and Y) - sprt(X) sprt(Y)"""
    return Fraction(sprt_union) - Fraction(sprt_x) * Fraction(sprt_y)


def interest_ratio(sprt_union, sprt_x, sprt_y):
    """sprt(X and Y) / (sprt(X) sprt(Y)); 1 means X and Y are independent"""
    if sprt_x == 0 or sprt_y == 0:
        raise DivisionUndefined("interest ratio is undefined when a marginal support is zero")
    return Fraction(sprt_union) / (Fraction(sprt_x) * Fraction(sprt_y))


def mininterest_upper_bound(minsprt):
    """minsprt - minsprt^2, the largest useful mininterest for a given minsprt"""
    minsprt = Fraction(minsprt)
    return minsprt - minsprt * minsprt


def interest_deviation(rule):
    """|Interest - 1| of a rule, None when the ratio is undefined"""
    if rule.interest_ratio is None:
        return None
    return abs(rule.interest_ratio - ONE)


def check_thresholds(config):
    """Raise on thresholds outside their ranges"""
    if not 0 < config.minsprt <= 1:
        raise InvalidThreshold(f"minsprt must lie in (0, 1], got {format_rational(config.minsprt)}")
    if not 0 < config.minconf <= 1:
        raise InvalidThreshold(f"minconf must lie in (0, 1], got {format_rational(config.minconf)}")
    if config.mininterest <= 0:
        raise InvalidThreshold(f"mininterest must be > 0, got {format_rational(config.mininterest)}")
    if config.max_len < 2:
        raise InvalidThreshold(f"max_len must be >= 2, got {config.max_len}")
    if config.threads < 1:
        raise InvalidParameter(f"threads must be >= 1, got {config.threads}")


def validate_config(config, db=None):
    """Reject out-of-range thresholds; return the config plus advisory warnings"""
    check_thresholds(config)

    warnings = []
    bound = mininterest_upper_bound(config.minsprt)
    if config.mininterest > bound:
        warnings.append(
            f"mininterest {format_rational(config.mininterest)} exceeds bound "
            f"{format_rational(bound)} (minsprt - minsprt^2); rules at minimal support cannot qualify"
        )

    if db is not None:
        top = max((int(c) for c in db.item_counts()), default=0)
        top_support = Fraction(top, db.n)
        if config.mininterest > top_support:
            warnings.append(
                f"mininterest {format_rational(config.mininterest)} exceeds every item support "
                f"(largest {format_rational(top_support)}); no rule can qualify on this data"
            )

    for message in warnings:
        logging.warning(message)
    return config, warnings


def _marginals(form, s_a, s_b):
    x = ONE - s_a if form.negates_antecedent else s_a
    y = ONE - s_b if form.negates_consequent else s_b
    return x, y


def evaluate_rule(form, a, b, count_a, count_b, count_ab, n, config):
    """
    Test one rule of the given form on base itemsets a and b.

    Returns (record or None, degenerate). degenerate is True when a ~A form
    was skipped because A occurs in every transaction.
    """
    s_a = Fraction(count_a, n)
    s_b = Fraction(count_b, n)

    if form is RuleForm.POS:
        literal = Fraction(count_ab, n)
    else:
        if s_a < config.minsprt or s_b < config.minsprt:
            return None, False
        if form.negates_antecedent and count_a == n:
            return None, True
        literal = Fraction(negated_count(n, count_a, count_b, count_ab, form), n)

    if literal < config.minsprt:
        return None, False

    margin_x, margin_y = _marginals(form, s_a, s_b)
    lev = literal - margin_x * margin_y
    if form is RuleForm.POS or config.use_abs_interest_for_negative:
        interesting = abs(lev) >= config.mininterest
    else:
        interesting = lev >= config.mininterest
    if not interesting:
        return None, False

    conf = literal / margin_x
    if conf < config.minconf:
        return None, False

    product = margin_x * margin_y
    record = RuleRecord(
        form=form,
        antecedent=a,
        consequent=b,
        support=literal,
        confidence=conf,
        leverage=lev,
        interest_ratio=literal / product if product else None,
    )
    return record, False


def enumerate_partitions(q):
    """All ordered (X, Y) with X, Y non-empty, disjoint, X | Y = q"""
    if len(q) < 2:
        raise TooSmall(f"need at least 2 items to partition, got {len(q)}")

    partitions = []
    for size in range(1, len(q)):
        for x in combinations(q, size):
            chosen = set(x)
            y = tuple(item for item in q if item not in chosen)
            partitions.append((x, y))
    return partitions


def _positive_rules_for(frequent, config, q):
    found = []
    count_q = frequent.count(q)
    for x, y in enumerate_partitions(q):
        record, _ = evaluate_rule(RuleForm.POS, x, y, frequent.count(x), frequent.count(y),
                                  count_q, frequent.n, config)
        if record is not None:
            found.append(record)
    return found


def extract_positive_rules(db, frequent, config):
    """Positive rules of interest from every 2-partition of every frequent itemset"""
    if RuleForm.POS not in config.rule_forms:
        return []

    targets = [q for q in frequent.itemsets() if len(q) >= 2]
    batches = run_batches(lambda q: _positive_rules_for(frequent, config, q), targets, config.threads)
    rules = sort_rules(rule for batch in batches for rule in batch)
    logging.info(f"Extracted {len(rules)} positive rules from {len(targets)} frequent itemsets")
    return rules


def _negative_rules_for(n, config, candidate):
    found, degenerate = [], []
    for form in config.negative_forms:
        record, skipped = evaluate_rule(form, candidate.a, candidate.b, candidate.a_count,
                                        candidate.b_count, candidate.union_count, n, config)
        if skipped:
            degenerate.append(DegenerateAntecedent(form, candidate.a, candidate.b))
        elif record is not None:
            found.append(record)
    return found, degenerate


def extract_negative_rules(db, candidates, config, diagnostics=None):
    """Negative rules of interest over the candidate pairs, one test per enabled form"""
    if not config.negative_forms:
        return []

    results = run_batches(lambda c: _negative_rules_for(db.n, config, c), candidates, config.threads)

    rules = []
    skipped = 0
    for found, degenerate in results:
        rules.extend(found)
        for diagnostic in degenerate:
            skipped += 1
            logging.debug(diagnostic.describe(db.items))
            if diagnostics is not None:
                diagnostics.append(diagnostic)

    if skipped:
        logging.warning(f"Skipped {skipped} negated-antecedent tests whose antecedent occurs in every transaction")

    rules = sort_rules(rules)
    logging.info(f"Extracted {len(rules)} negative rules from {len(candidates)} candidates")
    return rules


def classify_itemset(db, q, config):
    """Positive-of-interest, negative-of-interest or uninteresting, with witnesses"""
    require_non_empty(q, "q")
    db.check_itemset(q)
    q = make_itemset(q)
    if len(q) < 2:
        return Classification(q, Verdict.UNINTERESTING, ())

    counts = {}

    def count(itemset):
        if itemset not in counts:
            counts[itemset] = support_count(db, itemset)
        return counts[itemset]

    count_q = count(q)
    union_frequent = Fraction(count_q, db.n) >= config.minsprt
    negative_forms = config.negative_forms
    if config.infrequent_unions_only and union_frequent:
        negative_forms = []

    positives, negatives = [], []
    for x, y in enumerate_partitions(q):
        if RuleForm.POS in config.rule_forms:
            record, _ = evaluate_rule(RuleForm.POS, x, y, count(x), count(y), count_q, db.n, config)
            if record is not None:
                positives.append(record)
        for form in negative_forms:
            record, _ = evaluate_rule(form, x, y, count(x), count(y), count_q, db.n, config)
            if record is not None:
                negatives.append(record)

    if positives:
        verdict = Verdict.POSITIVE
    elif negatives:
        verdict = Verdict.NEGATIVE
    else:
        verdict = Verdict.UNINTERESTING
    return Classification(q, verdict, tuple(sort_rules(positives + negatives)))


def itemsets_of_interest(rules):
    """Label every base union Q of the emitted rules; a positive witness wins"""
    verdicts = {}
    for rule in rules:
        union = rule.union
        if rule.form is RuleForm.POS:
            verdicts[union] = Verdict.POSITIVE
        else:
            verdicts.setdefault(union, Verdict.NEGATIVE)
    return sorted(verdicts.items(), key=lambda item: (len(item[0]), item[0]))
