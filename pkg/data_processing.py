import mpmath
import numpy as np
import pandas as pd

from codec import exact, real


# Tables shown by the CLI; the same rows feed the JSON payloads.

def bound_frame(report, digits=10):
    rows = []
    for e in report.entries:
        rows.append({
            'p': e.p,
            'e_p': e.content_exponent,
            'type': e.reduction_type,
            'v(Delta)': e.vdelta,
            'beta': exact(e.beta),
            'shift': e.shift,
            'gamma': exact(e.gamma),
            'provenance': e.provenance,
            'exponent': e.group_exponent,
            'term': float(mpmath.mpf(e.total.numerator) / e.total.denominator * mpmath.log(e.p)),
        })
    df = pd.DataFrame(rows, columns=['p', 'e_p', 'type', 'v(Delta)', 'beta', 'shift', 'gamma',
                                     'provenance', 'exponent', 'term'])
    df['exponent'] = df['exponent'].astype('Int64')
    return df


def bound_summary(report, digits=10):
    return pd.DataFrame([
        {'part': 'archimedean', 'value': real(report.arch_beta, digits)},
        {'part': 'single step', 'value': real(report.single_step, digits)},
        {'part': 'finite places', 'value': real(report.finite_sum(), digits)},
        {'part': 'log content', 'value': real(report.content_term, digits)},
        {'part': 'unfactored', 'value': str(report.unfactored)},
        {'part': 'total', 'value': real(report.total, digits)},
    ])


def finite_part_frame(finite):
    rows = [{'q': str(q), 'mu': exact(mu),
             'mu log q': float(mpmath.mpf(mu.numerator) / mu.denominator * mpmath.log(q))}
            for q, mu in finite.terms]
    return pd.DataFrame(rows, columns=['q', 'mu', 'mu log q'])


def height_frame(decomp):
    digits = decomp.digits
    return pd.DataFrame([
        {'part': 'naive h', 'value': real(decomp.naive_h, digits)},
        {'part': 'finite mu', 'value': real(decomp.finite_part.value(), digits)},
        {'part': 'archimedean mu', 'value': real(decomp.arch_part, digits)},
        {'part': 'h-hat', 'value': real(decomp.hhat, digits)},
    ])


def qt_height_frame(result):
    rows = [{'place': label, 'degree': deg, 'mu': exact(mu)} for label, deg, mu in result.places]
    rows.append({'place': 'inf', 'degree': 1, 'mu': exact(result.mu_infinity)})
    return pd.DataFrame(rows, columns=['place', 'degree', 'mu'])


def invariants_frame(rows):
    """One row per bad prime: valuation of the discriminant, fiber class and inferred type."""
    return pd.DataFrame(rows, columns=['p', 'v(Delta)', 'fiber', 'type'])


def gram_frame(pairing, digits=10):
    r = len(pairing.heights)
    values = np.array([[float(pairing.gram[i, j]) for j in range(r)] for i in range(r)])
    labels = [f'P{i + 1}' for i in range(r)]
    return pd.DataFrame(values.round(digits), index=labels, columns=labels)


def points_frame(points, digits=10):
    rows = []
    for fp in points:
        rows.append({
            'kummer': ' '.join(str(c) for c in fp.kummer),
            'lifts': len(fp.lifts),
            "h'": real(fp.hprime, digits),
            'h-hat': real(fp.hhat, digits),
        })
    return pd.DataFrame(rows, columns=['kummer', 'lifts', "h'", 'h-hat'])


def render(df, index=False):
    if df.empty:
        return '(no rows)'
    return df.to_string(index=index)
