"""bound: the height-difference bound h'(P) <= h-hat(P) + beta~."""
from codec import exact, real
from commands import CommandResult
from data_processing import bound_frame, bound_summary
from fetch_data import fetch_curve
from global_height import height_difference_bound
from settings import get_settings

NAME = "bound"
HELP = "bound on the difference between naive and canonical height"


def add_arguments(parser):
    parser.add_argument("--iterations", type=int, default=None, help="phi-iteration depth")


def report_payload(report, digits):
    return {
        "places": [{
            "p": e.p,
            "content_exponent": e.content_exponent,
            "reduction_type": e.reduction_type,
            "v_delta": e.vdelta,
            "beta": exact(e.beta),
            "shift": e.shift,
            "gamma": exact(e.gamma),
            "provenance": e.provenance,
            "group_exponent": e.group_exponent,
        } for e in report.entries],
        "arch_beta": real(report.arch_beta, digits),
        "single_step": real(report.single_step, digits),
        "finite_sum": real(report.finite_sum(), digits),
        "content_term": real(report.content_term, digits),
        "unfactored": str(report.unfactored),
        "total": real(report.total, digits),
        "height_lower_bound": real(report.height_lower_bound, digits),
    }


def run(args):
    model, hints, rationality, _ = fetch_curve(args.curve)
    digits = get_settings().default_digits
    report = height_difference_bound(model, hints=hints, rationality=rationality, digits=digits,
                                     iterations=args.iterations)
    tables = [("finite places", bound_frame(report)), ("summary", bound_summary(report))]
    return CommandResult(report_payload(report, digits), tables, list(report.warnings))
