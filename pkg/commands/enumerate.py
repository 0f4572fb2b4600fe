"""enumerate: points of bounded naive or canonical height."""
import json
import logging

from codec import encode_point, real
from commands import CommandResult
from commands.bound import report_payload
from data_processing import points_frame
from enumerate_points import SearchConfig, enumerate_bounded, points_below_canonical
from errors import InputError
from fetch_data import fetch_curve
from settings import get_settings

logger = logging.getLogger(__name__)

NAME = "enumerate"
HELP = "search J(Q) for points of small height"


def add_arguments(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--naive-bound", type=int, help="N: all points with max |x1|, |x2|, |x3| <= N")
    group.add_argument("--canonical-bound", type=float, help="all points with h-hat at most this")
    parser.add_argument("--sieve", type=str, default=None, help="comma separated sieve primes")
    parser.add_argument("--stream", action="store_true", help="print one JSON object per point")


def _sieve(text):
    if text is None:
        return get_settings().sieve_primes
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise InputError(f"bad sieve prime list {text!r}") from exc


def point_payload(fp, digits):
    return {
        "kummer": [str(c) for c in fp.kummer],
        "lifts": [encode_point(P) for P in fp.lifts],
        "hprime": real(fp.hprime, digits),
        "hhat": real(fp.hhat, digits),
    }


def run(args):
    model, hints, _, _ = fetch_curve(args.curve)
    cfg = get_settings()
    digits = cfg.default_digits
    primes = _sieve(args.sieve)
    warnings = []
    results = {}
    if args.naive_bound is not None:
        search = enumerate_bounded(model, SearchConfig(args.naive_bound, primes, cfg.jobs))
    else:
        search, report = points_below_canonical(model, args.canonical_bound, digits, hints,
                                                primes, cfg.jobs)
        results["bound"] = report_payload(report, digits)
        warnings.extend(report.warnings)
    if args.stream:
        for fp in search.points:
            print(json.dumps(point_payload(fp, digits), sort_keys=True), flush=True)
    results.update({
        "points": [point_payload(fp, digits) for fp in search.points],
        "triples_tried": search.triples_tried,
        "triples_sieved": search.triples_sieved,
        "notes": list(search.notes),
    })
    return CommandResult(results, [("points", points_frame(search.points))], warnings,
                         inputs={"sieve": list(primes)})
