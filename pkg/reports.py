"""Run reports: construction, JSON/CSV rendering, loading and diffing."""
import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List

from errors import MalformedReport
from models import Verdict
from utils import format_duration, rational_payload

REPORT_VERSION = 1
RULE_COLUMNS = ['form', 'antecedent', 'consequent', 'support', 'confidence', 'leverage', 'interest_ratio']
REQUIRED_KEYS = ('config', 'stats', 'stage_counts', 'rules', 'warnings')


def rule_payload(rule, items):
    return {
        'form': rule.form.value,
        'antecedent': items.labels(rule.antecedent),
        'consequent': items.labels(rule.consequent),
        'support': rational_payload(rule.support),
        'confidence': rational_payload(rule.confidence),
        'leverage': rational_payload(rule.leverage),
        'interest_ratio': rational_payload(rule.interest_ratio),
    }


def build_run_report(db, config, rules, stage_counts, ratios, warnings, diagnostics, itemsets,
                     timings=None, source="miner"):
    """Assemble a RunReport dict with a fixed key order"""
    report = {
        'version': REPORT_VERSION,
        'source': source,
        'config': config.echo(),
        'stats': {
            'transactions': db.n,
            'items': db.n_items,
        },
        'stage_counts': dict(stage_counts),
        'ratios': {name: rational_payload(value) for name, value in ratios.items()},
        'rules': [rule_payload(rule, db.items) for rule in rules],
        'itemsets': [
            {'items': db.items.labels(itemset), 'verdict': verdict.value}
            for itemset, verdict in itemsets
        ],
        'warnings': list(warnings),
        'diagnostics': list(diagnostics),
    }
    if timings is not None:
        report['timings'] = {stage: format_duration(seconds) for stage, seconds in timings.items()}
    return report


def render_json(report):
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _cell(payload):
    return "" if payload is None else payload['value']


def render_csv(report):
    """One rule per row; itemsets are space-joined labels"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RULE_COLUMNS)
    for rule in report['rules']:
        writer.writerow([
            rule['form'],
            " ".join(rule['antecedent']),
            " ".join(rule['consequent']),
            _cell(rule['support']),
            _cell(rule['confidence']),
            _cell(rule['leverage']),
            _cell(rule['interest_ratio']),
        ])
    return buffer.getvalue()


def load_report(source):
    """Parse and check a JSON RunReport from a text stream"""
    try:
        report = json.load(source)
    except json.JSONDecodeError as e:
        raise MalformedReport(f"report is not valid JSON: {e}") from None

    if not isinstance(report, dict):
        raise MalformedReport("report must be a JSON object")
    missing = [key for key in REQUIRED_KEYS if key not in report]
    if missing:
        raise MalformedReport(f"report is missing keys: {', '.join(missing)}")
    if not isinstance(report['rules'], list):
        raise MalformedReport("report rules must be a list")
    for key in ('config', 'stats', 'stage_counts'):
        if not isinstance(report[key], dict):
            raise MalformedReport(f"report {key} must be an object")
    for stage, count in report['stage_counts'].items():
        # bool is an int subclass but never a count
        if not isinstance(count, int) or isinstance(count, bool):
            raise MalformedReport(f"stage count {stage} must be an integer, got {count!r}")

    for rule in report['rules']:
        if not isinstance(rule, dict) or any(column not in rule for column in RULE_COLUMNS):
            raise MalformedReport(f"malformed rule entry: {rule!r}")
    return report


def _rule_key(rule):
    """Exact identity of a rule entry: labels plus numerator/denominator pairs"""
    def exact(payload):
        return None if payload is None else (payload['num'], payload['den'])

    return (
        rule['form'],
        tuple(rule['antecedent']),
        tuple(rule['consequent']),
        exact(rule['support']),
        exact(rule['confidence']),
        exact(rule['leverage']),
        exact(rule['interest_ratio']),
    )


@dataclass
class ReportDiff:
    added: List[Dict[str, object]] = field(default_factory=list)
    removed: List[Dict[str, object]] = field(default_factory=list)
    stage_deltas: Dict[str, int] = field(default_factory=dict)
    config_deltas: Dict[str, Dict[str, object]] = field(default_factory=dict)

    @property
    def identical_rules(self):
        return not self.added and not self.removed

    def as_dict(self):
        return {
            'identical_rules': self.identical_rules,
            'added': self.added,
            'removed': self.removed,
            'stage_deltas': self.stage_deltas,
            'config_deltas': self.config_deltas,
        }


def diff_reports(left, right):
    """Rules only in right are 'added', rules only in left are 'removed'"""
    try:
        left_rules = {_rule_key(rule): rule for rule in left['rules']}
        right_rules = {_rule_key(rule): rule for rule in right['rules']}
    except (KeyError, TypeError) as e:
        raise MalformedReport(f"rule entry lacks exact fields: {e}") from None

    diff = ReportDiff()
    diff.added = [right_rules[key] for key in sorted(right_rules.keys() - left_rules.keys(), key=repr)]
    diff.removed = [left_rules[key] for key in sorted(left_rules.keys() - right_rules.keys(), key=repr)]

    for stage in sorted(set(left['stage_counts']) | set(right['stage_counts'])):
        before = left['stage_counts'].get(stage, 0)
        after = right['stage_counts'].get(stage, 0)
        if before != after:
            diff.stage_deltas[stage] = after - before

    for key in sorted(set(left['config']) | set(right['config'])):
        before = left['config'].get(key)
        after = right['config'].get(key)
        if before != after:
            diff.config_deltas[key] = {'left': before, 'right': after}

    logging.info(f"Report diff: {len(diff.added)} added, {len(diff.removed)} removed")
    return diff


def classification_payload(classification, items, quadrants=None):
    payload = {
        'itemset': items.labels(classification.itemset),
        'verdict': classification.verdict.value,
        'witnesses': [rule_payload(rule, items) for rule in classification.witnesses],
    }
    if quadrants is not None:
        payload['contingency'] = quadrants
    return payload


def render_classification_text(classification, items):
    lines = [f"{' '.join(items.labels(classification.itemset))}: {classification.verdict.value}"]
    if classification.verdict is Verdict.UNINTERESTING:
        return "\n".join(lines) + "\n"

    for rule in classification.witnesses:
        text = rule.form.render(" ".join(items.labels(rule.antecedent)), " ".join(items.labels(rule.consequent)))
        payload = rule_payload(rule, items)
        lines.append(
            f"  {text}  support={payload['support']['value']} confidence={payload['confidence']['value']} "
            f"leverage={payload['leverage']['value']}"
        )
    return "\n".join(lines) + "\n"
