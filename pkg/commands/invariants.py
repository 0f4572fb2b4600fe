"""invariants: Igusa invariants, fiber classes and reduction types at the bad primes."""
import logging

import pandas as pd
import sympy

from codec import exact
from commands import CommandResult
from curve import UNKNOWN_TYPE, bad_primes, classify_special_fiber, igusa_invariants, infer_reduction_type
from data_processing import invariants_frame
from errors import InputError, NonIntegralPart
from fetch_data import fetch_curve
from fields import Base
from places import LocalPlace
from point_counting import torsion_bound

logger = logging.getLogger(__name__)

NAME = "invariants"
HELP = "Igusa invariants, reduction types per bad prime and a torsion bound"


def add_arguments(parser):
    parser.add_argument("--torsion-primes", type=int, default=40,
                        help="count points modulo good primes up to this bound")


def prime_rows(model, hints, warnings):
    inv = igusa_invariants(model)
    rows = []
    for p in bad_primes(model):
        place = LocalPlace.prime(p)
        vdelta = place.valuation(inv.J10)
        fiber = classify_special_fiber(inv, place).value
        if p in hints:
            label = hints[p]
        else:
            try:
                label = str(infer_reduction_type(inv, place))
            except NonIntegralPart:
                label = str(UNKNOWN_TYPE)
            if label == str(UNKNOWN_TYPE):
                msg = f"p={p}: reduction type could not be inferred"
                logger.warning(msg)
                warnings.append(msg)
        rows.append({"p": p, "v(Delta)": vdelta, "fiber": fiber, "type": label})
    return rows


def run(args):
    model, hints, _, _ = fetch_curve(args.curve)
    if model.base != Base.Q:
        raise InputError("invariants are reported for curves over Q")
    inv = igusa_invariants(model)
    warnings = []
    rows = prime_rows(model, hints, warnings)
    primes = [p for p in sympy.primerange(3, args.torsion_primes + 1)]
    bound, used = torsion_bound(model, primes)
    results = {
        "igusa": {k: exact(v) for k, v in inv.as_dict().items()},
        "fiber_over_Q": classify_special_fiber(inv).value,
        "bad_primes": rows,
        "torsion_bound": bound,
        "torsion_primes": list(used),
    }
    igusa = pd.DataFrame([{"invariant": k, "value": exact(v)} for k, v in inv.as_dict().items()])
    tables = [("Igusa invariants", igusa), ("bad primes", invariants_frame(rows)),
              ("torsion", pd.DataFrame([{"bound": bound, "primes": " ".join(map(str, used))}]))]
    return CommandResult(results, tables, warnings)
