"""pairing: height pairing matrix, regulator and an LLL-reduced basis."""
import pandas as pd

from codec import real
from commands import CommandResult
from data_processing import gram_frame
from errors import InputError
from fetch_data import fetch_curve, fetch_points
from fields import Base
from global_height import height_pairing
from lattice import index_bound, lll_reduce, successive_minima
from settings import get_settings

NAME = "pairing"
HELP = "Gram matrix of the canonical height pairing on a list of points"


def add_arguments(parser):
    parser.add_argument("--points", required=True, help="JSON list of Mumford points")
    parser.add_argument("--reduce", action="store_true", help="LLL-reduce the Gram matrix")
    parser.add_argument("--index-bound", type=float, default=None, metavar="B",
                        help="bound the index of the span, given no point has h-hat below B")


def run(args):
    model, _, _, _ = fetch_curve(args.curve)
    if model.base != Base.Q:
        raise InputError("the pairing is computed over Q")
    points = fetch_points(args.points, model)
    if not points:
        raise InputError("no points given")
    digits = get_settings().default_digits
    pairing = height_pairing(points, model, digits)
    r = len(points)
    results = {
        "heights": [real(h, digits) for h in pairing.heights],
        "gram": [[real(pairing.gram[i, j], digits) for j in range(r)] for i in range(r)],
        "regulator": real(pairing.regulator, digits),
    }
    tables = [("Gram matrix", gram_frame(pairing)),
              ("regulator", pd.DataFrame([{"regulator": real(pairing.regulator, digits)}]))]
    warnings = []
    if args.reduce or args.index_bound is not None:
        reduced = lll_reduce(pairing.gram)
        results["reduced_norms"] = [real(n, digits) for n in reduced.norms]
        results["transform"] = [list(row) for row in reduced.transform]
        tables.append(("reduced norms", pd.DataFrame({"norm": [real(n, 12) for n in reduced.norms]})))
        if args.index_bound is not None:
            minima = successive_minima(pairing.gram)
            results["successive_minima"] = [real(m, digits) for m in minima]
            results["index_bound"] = index_bound(pairing.regulator, minima, args.index_bound)
    return CommandResult(results, tables, warnings)
