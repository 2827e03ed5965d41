"""
Command line front end.

    negmine mine DATA [--minsprt 0.3 --minconf 0.52 --mininterest 0.05 --forms neg ...]
    negmine classify DATA soy salt [...]
    negmine gen --seed 7 --items 10 --transactions 200 --density 0.3
    negmine report LEFT.json RIGHT.json

Exit codes: 0 success, 1 reports differ, 2 configuration/input error, 3 I/O error.
"""
import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List

from app import configure_logging, load_settings
from errors import InputError
from mining import build_search_space_report, generate_negative_candidates, mine_frequent, search_space_report
from models import DegenerateAntecedent, MiningConfig, RuleForm, RuleRecord, sort_rules
from oracle import oracle_rules
from reports import (
    build_run_report,
    classification_payload,
    diff_reports,
    load_report,
    render_classification_text,
    render_csv,
    render_json,
)
from rules import (
    check_thresholds,
    classify_itemset,
    extract_negative_rules,
    extract_positive_rules,
    itemsets_of_interest,
    validate_config,
)
from transactions import contingency, generate_basket, load_basket

EXIT_OK = 0
EXIT_DIFFERENT = 1
EXIT_CONFIG = 2
EXIT_IO = 3


@dataclass
class MiningRun:
    rules: List[RuleRecord]
    stage_counts: Dict[str, int]
    ratios: Dict[str, object]
    warnings: List[str] = field(default_factory=list)
    diagnostics: List[DegenerateAntecedent] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)


def run_pipeline(db, config):
    """load -> mine_frequent -> candidates -> positive and negative extraction"""
    config, warnings = validate_config(config, db)
    timings = {}

    started = time.perf_counter()
    frequent = mine_frequent(db, config)
    timings['mine_frequent'] = time.perf_counter() - started

    started = time.perf_counter()
    candidates = generate_negative_candidates(frequent, db, config)
    timings['negative_candidates'] = time.perf_counter() - started

    started = time.perf_counter()
    diagnostics = []
    positive = extract_positive_rules(db, frequent, config)
    negative = extract_negative_rules(db, candidates, config, diagnostics)
    rules = sort_rules(positive + negative)
    timings['extract_rules'] = time.perf_counter() - started

    space = search_space_report(frequent, candidates, len(rules), config)
    return MiningRun(
        rules=rules,
        stage_counts=space.stage_counts(),
        ratios={'candidate_retention': space.candidate_retention, 'rule_yield': space.rule_yield},
        warnings=warnings,
        diagnostics=diagnostics,
        timings=timings,
    )


def run_oracle(db, config):
    config, warnings = validate_config(config, db)
    started = time.perf_counter()
    result = oracle_rules(db, config)
    space = build_search_space_report(result.stage_counts)
    return MiningRun(
        rules=result.rules,
        stage_counts=result.stage_counts,
        ratios={'candidate_retention': space.candidate_retention, 'rule_yield': space.rule_yield},
        warnings=warnings,
        timings={'oracle': time.perf_counter() - started},
    )


def _read_database(path, delimiter):
    if path == "-":
        return load_basket(sys.stdin, delimiter)
    with open(path, "r", encoding="utf-8") as source:
        return load_basket(source, delimiter)


def _write_output(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="") as target:
        target.write(text)


def _config_from_args(args):
    return MiningConfig(
        minsprt=args.minsprt,
        minconf=args.minconf,
        mininterest=args.mininterest,
        max_len=args.max_len,
        rule_forms=RuleForm.parse_many(args.forms),
        use_abs_interest_for_negative=args.abs_neg_interest,
        infrequent_unions_only=args.infrequent_only,
        threads=args.threads,
    )


def cmd_mine(args):
    config = _config_from_args(args)
    check_thresholds(config)
    db = _read_database(args.input, args.delimiter)

    run = run_oracle(db, config) if args.oracle else run_pipeline(db, config)

    report = build_run_report(
        db,
        config,
        run.rules,
        run.stage_counts,
        run.ratios,
        run.warnings,
        [d.describe(db.items) for d in run.diagnostics],
        itemsets_of_interest(run.rules),
        timings=run.timings if args.timings else None,
        source="oracle" if args.oracle else "miner",
    )
    text = render_csv(report) if args.format == "csv" else render_json(report)
    _write_output(text, args.output)
    return EXIT_OK


def cmd_classify(args):
    config = _config_from_args(args)
    validate_config(config)
    db = _read_database(args.input, args.delimiter)

    itemset = db.items.itemset(args.items)
    classification = classify_itemset(db, itemset, config)

    if args.format == "text":
        text = render_classification_text(classification, db.items)
    else:
        quadrants = None
        if len(itemset) == 2:
            quadrants = contingency(db, itemset[:1], itemset[1:])
        text = render_json(classification_payload(classification, db.items, quadrants))
    _write_output(text, args.output)
    return EXIT_OK


def cmd_gen(args):
    text = generate_basket(args.seed, args.items, args.transactions, args.density)
    _write_output(text, args.output)
    return EXIT_OK


def cmd_report(args):
    with open(args.left, "r", encoding="utf-8") as source:
        left = load_report(source)
    with open(args.right, "r", encoding="utf-8") as source:
        right = load_report(source)

    diff = diff_reports(left, right)
    _write_output(render_json(diff.as_dict()), args.output)
    return EXIT_OK if diff.identical_rules else EXIT_DIFFERENT


def _add_threshold_flags(parser, settings):
    parser.add_argument('--minsprt', default="0.1", help='minimum support, decimal or fraction (default 0.1)')
    parser.add_argument('--minconf', default="0.5", help='minimum confidence (default 0.5)')
    parser.add_argument('--mininterest', default="0.01", help='minimum interest (default 0.01)')
    parser.add_argument('--max-len', type=int, default=settings.max_len, dest='max_len',
                        help='cap on |X|+|Y| (default from NEGMINE_MAX_LEN or 6)')
    parser.add_argument('--forms', default="all", help="pos, neg, all or a comma list of pos,a_not_b,not_a_b,not_a_not_b")
    parser.add_argument('--delimiter', choices=['ws', 'comma'], default='ws', help='basket item delimiter')
    parser.add_argument('--threads', type=int, default=settings.threads,
                        help='counting workers (default from NEGMINE_THREADS or 1)')
    parser.add_argument('--abs-neg-interest', action='store_true', dest='abs_neg_interest',
                        help='use |leverage| for negative rules as well')
    parser.add_argument('--infrequent-only', action='store_true', dest='infrequent_only',
                        help='only consider negative pairs whose union is infrequent')
    parser.add_argument('-o', '--output', default=None, help='write to this file instead of standard output')


def build_parser(settings=None):
    settings = settings or load_settings()
    parser = argparse.ArgumentParser(prog='negmine', description='positive and negative association rule miner')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug logging')
    commands = parser.add_subparsers(dest='command', required=True)

    mine = commands.add_parser('mine', help='mine rules from a basket file')
    mine.add_argument('input', help="basket file, '-' for standard input")
    _add_threshold_flags(mine, settings)
    mine.add_argument('--format', choices=['json', 'csv'], default='json')
    mine.add_argument('--oracle', action='store_true', help='use the brute-force reference miner')
    mine.add_argument('--timings', action='store_true', help='include wall time per stage')
    mine.set_defaults(handler=cmd_mine)

    classify = commands.add_parser('classify', help='classify one itemset')
    classify.add_argument('input', help="basket file, '-' for standard input")
    classify.add_argument('items', nargs='+', help='item labels of the itemset')
    _add_threshold_flags(classify, settings)
    classify.add_argument('--format', choices=['json', 'text'], default='json')
    classify.set_defaults(handler=cmd_classify)

    gen = commands.add_parser('gen', help='generate a seeded synthetic basket file')
    gen.add_argument('--seed', type=int, default=7)
    gen.add_argument('--items', type=int, default=10)
    gen.add_argument('--transactions', type=int, default=200)
    gen.add_argument('--density', type=float, default=0.3)
    gen.add_argument('-o', '--output', default=None)
    gen.set_defaults(handler=cmd_gen)

    report = commands.add_parser('report', help='diff two JSON run reports')
    report.add_argument('left')
    report.add_argument('right')
    report.add_argument('-o', '--output', default=None)
    report.set_defaults(handler=cmd_report)

    return parser


def main(argv=None):
    settings = load_settings()
    parser = build_parser(settings)
    args = parser.parse_args(argv)
    configure_logging(settings.log_level, args.verbose)

    try:
        return args.handler(args)
    except InputError as e:
        logging.debug(f"{type(e).__name__} in {args.command}", exc_info=True)
        print(f"[ERROR] {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, UnicodeDecodeError) as e:
        print(f"[ERROR] {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_IO
