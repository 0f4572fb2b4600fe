"""height: canonical height of one point."""
import logging

import mpmath

from codec import encode_kummer, exact, real
from commands import CommandResult
from data_processing import finite_part_frame, height_frame, qt_height_frame
from errors import ValidationFailure
from fetch_data import fetch_curve, fetch_point
from fields import Base
from global_height import canonical_height, canonical_height_qt, finite_part_simple, height_of_kummer
from jacobian import MumfordPoint, mumford_to_kummer
from settings import get_settings

logger = logging.getLogger(__name__)

NAME = "height"
HELP = "canonical height of a point, split into naive, finite and archimedean parts"


def add_arguments(parser):
    parser.add_argument("--point", required=True, help="point JSON (Mumford a, b or Kummer coordinates)")
    parser.add_argument("--method", choices=("fast", "period"), default="fast",
                        help="local algorithm over Q(t)")
    parser.add_argument("--cross-check", action="store_true",
                        help="recompute the finite part modulo a power of the discriminant")


def finite_part_payload(finite):
    B, M, m = finite.bounds
    return {
        "terms": [{"q": str(q), "mu": exact(mu)} for q, mu in finite.terms],
        "g": [str(g) for g in finite.g],
        "bounds": {"B": B, "M": M, "m": m},
    }


def _run_qt(model, x, args, mu_hints):
    if isinstance(x, MumfordPoint):
        x = mumford_to_kummer(x, model)
    result = canonical_height_qt(x, model, args.method, mu_hints)
    results = {
        "kummer": encode_kummer(x),
        "naive": result.naive,
        "places": [{"place": label, "degree": deg, "mu": exact(mu)} for label, deg, mu in result.places],
        "mu_infinity": exact(result.mu_infinity),
        "hhat": exact(result.hhat),
    }
    return CommandResult(results, [("local corrections", qt_height_frame(result))])


def run(args):
    model, _, _, mu_hints = fetch_curve(args.curve)
    x = fetch_point(args.point, model)
    if model.base == Base.QT:
        return _run_qt(model, x, args, mu_hints)
    digits = get_settings().default_digits
    if isinstance(x, MumfordPoint):
        decomp = canonical_height(x, model, digits)
    else:
        decomp = height_of_kummer(x, model.completed_square(), digits)
    results = {
        "kummer": [str(c) for c in decomp.kummer],
        "naive_h": real(decomp.naive_h, digits),
        "finite_part": finite_part_payload(decomp.finite_part),
        "arch_part": real(decomp.arch_part, digits),
        "hhat": real(decomp.hhat, digits),
    }
    if args.cross_check and decomp.kummer != (0, 0, 0, 1):
        simple = finite_part_simple(decomp.kummer, model.completed_square(), digits)
        with mpmath.workdps(digits):
            gap = abs(simple - decomp.finite_part.value())
            if gap > mpmath.mpf(10) ** (-(digits // 2)):
                raise ValidationFailure(f"finite parts disagree by {mpmath.nstr(gap, 5)}")
        results["finite_part_simple"] = real(simple, digits)
        logger.info("finite part cross-check passed")
    tables = [("height", height_frame(decomp)), ("finite part", finite_part_frame(decomp.finite_part))]
    return CommandResult(results, tables)
