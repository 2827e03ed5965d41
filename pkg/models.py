from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Optional, Tuple

from errors import EmptyItemset, InvalidParameter, UnknownItem
from utils import format_rational, parse_rational

# An itemset is a strictly ascending tuple of interned item ids
Itemset = Tuple[int, ...]

DEFAULT_MAX_LEN = 6


def make_itemset(ids):
    """Canonical form of a collection of item ids"""
    return tuple(sorted(set(ids)))


def require_non_empty(itemset, name="itemset"):
    if not itemset:
        raise EmptyItemset(f"{name} must not be empty")


class ItemDictionary:
    """Bijection between item labels and dense integer ids, in first-seen order"""

    def __init__(self, labels=()):
        self.name_to_id = {}
        self.id_to_name = []
        for label in labels:
            self.intern(label)

    def __len__(self):
        return len(self.id_to_name)

    def __contains__(self, label):
        return label in self.name_to_id

    def intern(self, label):
        """Return the id of a label, assigning the next free id on first sight"""
        item_id = self.name_to_id.get(label)
        if item_id is None:
            item_id = len(self.id_to_name)
            self.name_to_id[label] = item_id
            self.id_to_name.append(label)
        return item_id

    def label(self, item_id):
        if not 0 <= item_id < len(self.id_to_name):
            raise UnknownItem(item_id)
        return self.id_to_name[item_id]

    def labels(self, itemset):
        return [self.label(i) for i in itemset]

    def itemset(self, labels):
        """Look up an itemset by labels; labels must already be interned"""
        ids = []
        for label in labels:
            if label not in self.name_to_id:
                raise UnknownItem(label)
            ids.append(self.name_to_id[label])
        return make_itemset(ids)


class RuleForm(enum.Enum):
    """The four rule shapes: X->Y and the negated A->~B, ~A->B, ~A->~B"""
    POS = "pos"
    A_NOT_B = "a_not_b"
    NOT_A_B = "not_a_b"
    NOT_A_NOT_B = "not_a_not_b"

    @property
    def order(self):
        return _FORM_ORDER[self]

    @property
    def negates_antecedent(self):
        return self in (RuleForm.NOT_A_B, RuleForm.NOT_A_NOT_B)

    @property
    def negates_consequent(self):
        return self in (RuleForm.A_NOT_B, RuleForm.NOT_A_NOT_B)

    @property
    def is_negative(self):
        return self is not RuleForm.POS

    def render(self, antecedent, consequent):
        """Human readable rule text, e.g. 'soy -> ~salt'"""
        lhs = f"~{antecedent}" if self.negates_antecedent else antecedent
        rhs = f"~{consequent}" if self.negates_consequent else consequent
        return f"{lhs} -> {rhs}"

    @classmethod
    def parse_many(cls, text):
        """Parse --forms: 'pos', 'neg', 'all' or a comma list of form names"""
        forms = set()
        for token in (t.strip().lower() for t in text.split(",")):
            if not token:
                continue
            if token == "all":
                forms.update(cls)
            elif token == "neg":
                forms.update(NEGATIVE_FORMS)
            else:
                try:
                    forms.add(cls(token))
                except ValueError:
                    raise InvalidParameter(f"unknown rule form: {token!r}") from None
        return frozenset(forms)


_FORM_ORDER = {form: index for index, form in enumerate(RuleForm)}
NEGATIVE_FORMS = frozenset(f for f in RuleForm if f.is_negative)
ALL_FORMS = frozenset(RuleForm)


@dataclass(frozen=True)
class MiningConfig:
    minsprt: Fraction
    minconf: Fraction
    mininterest: Fraction
    max_len: int = DEFAULT_MAX_LEN
    rule_forms: FrozenSet[RuleForm] = ALL_FORMS

    # Negative-rule interest is one-sided unless this is set
    use_abs_interest_for_negative: bool = False
    # Drop negative candidates whose union is itself frequent
    infrequent_unions_only: bool = False
    threads: int = 1

    def __post_init__(self):
        # thresholds given as "0.2" or 0.2 become exact fractions
        for name in ('minsprt', 'minconf', 'mininterest'):
            object.__setattr__(self, name, parse_rational(getattr(self, name), name))
        object.__setattr__(self, 'rule_forms', frozenset(self.rule_forms))

    @property
    def negative_forms(self):
        return sorted((f for f in self.rule_forms if f.is_negative), key=lambda f: f.order)

    def echo(self):
        """Plain representation used by reports; threads is not echoed"""
        return {
            'minsprt': format_rational(self.minsprt),
            'minconf': format_rational(self.minconf),
            'mininterest': format_rational(self.mininterest),
            'max_len': self.max_len,
            'rule_forms': [f.value for f in sorted(self.rule_forms, key=lambda f: f.order)],
            'use_abs_interest_for_negative': self.use_abs_interest_for_negative,
            'infrequent_unions_only': self.infrequent_unions_only,
        }


@dataclass(frozen=True)
class RuleRecord:
    form: RuleForm
    antecedent: Itemset
    consequent: Itemset

    # Support of the rule's literal conjunction, e.g. sprt(A and not B)
    support: Fraction
    confidence: Fraction
    leverage: Fraction
    interest_ratio: Optional[Fraction]

    @property
    def sort_key(self):
        return (self.form.order, self.antecedent, self.consequent)

    @property
    def union(self):
        return make_itemset(self.antecedent + self.consequent)


def sort_rules(rules):
    """Canonical rule order: form, antecedent ids, consequent ids"""
    return sorted(rules, key=lambda r: r.sort_key)


class Verdict(enum.Enum):
    POSITIVE = "positive-of-interest"
    NEGATIVE = "negative-of-interest"
    UNINTERESTING = "uninteresting"


@dataclass(frozen=True)
class Classification:
    itemset: Itemset
    verdict: Verdict
    witnesses: Tuple[RuleRecord, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class DegenerateAntecedent:
    """Diagnostic: a ~A form was skipped because A occurs in every transaction"""
    form: RuleForm
    antecedent: Itemset
    consequent: Itemset

    def describe(self, items=None):
        if items is not None:
            a = " ".join(items.labels(self.antecedent))
            b = " ".join(items.labels(self.consequent))
        else:
            a, b = self.antecedent, self.consequent
        return f"DegenerateAntecedent: {self.form.value} skipped for ({a}) / ({b}), antecedent support is 1"
