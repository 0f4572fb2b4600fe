"""mu: the local correction at one place."""
import pandas as pd

from codec import encode_kummer, exact, real
from commands import CommandResult
from fetch_data import fetch_curve, fetch_point
from fields import Base
from global_height import default_mu_hints
from jacobian import MumfordPoint, mumford_to_kummer
from local_arch import mu_arch
from local_nonarch import lambda_hat, local_mu, mu_at_infinity
from places import LocalPlace, PlaceKind
from settings import get_settings

NAME = "mu"
HELP = "local correction mu_v(P) at a prime, a place of Q(t) or infinity"


def add_arguments(parser):
    parser.add_argument("--point", required=True)
    parser.add_argument("--place", required=True, help='a prime "p", a polynomial "t-a" or "inf"')
    parser.add_argument("--method", choices=("fast", "period"), default="fast")


def run(args):
    model, _, _, mu_hints = fetch_curve(args.curve)
    work = model.completed_square()
    x = fetch_point(args.point, model)
    if isinstance(x, MumfordPoint):
        x = mumford_to_kummer(x, model)
    place = LocalPlace.parse(args.place)
    inputs = {"place": place.label, "method": args.method}
    if place.kind == PlaceKind.INFINITY and model.base == Base.Q:
        digits = get_settings().default_digits
        value = mu_arch(x, work, digits)
        results = {"kummer": encode_kummer(x), "place": "inf", "mu": real(value, digits)}
        table = pd.DataFrame([{"place": "inf", "mu": real(value, digits)}])
        return CommandResult(results, [("archimedean correction", table)], inputs=inputs)
    hints = mu_hints.get(place.label)
    if hints is None and place.kind == PlaceKind.PRIME:
        hints = default_mu_hints(work, place)
    if place.kind == PlaceKind.INFINITY:
        result = mu_at_infinity(x, work, args.method, hints)
        lam = None
    else:
        result = local_mu(x, place, work, args.method, hints)
        lam = lambda_hat(x, place, work, args.method, hints)
    B, M, m = result.bounds_used
    results = {
        "kummer": encode_kummer(x),
        "place": place.label,
        "mu": exact(result.mu),
        "lambda_hat": exact(lam),
        "eps_trace": list(result.eps_trace),
        "method": result.method.value,
        "bounds_used": {"B": B, "M": M, "m": m},
    }
    table = pd.DataFrame([{"place": place.label, "mu": exact(result.mu), "method": result.method.value,
                           "eps": " ".join(str(e) for e in result.eps_trace[:12])}])
    return CommandResult(results, [("local correction", table)], inputs=inputs)
