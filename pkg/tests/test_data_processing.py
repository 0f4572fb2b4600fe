from fractions import Fraction

import mpmath
import pandas as pd

from data_processing import bound_frame, bound_summary, finite_part_frame, invariants_frame, render
from global_height import FinitePart, HeightBoundReport, PlaceBound


def sample_report():
    entries = [PlaceBound(2, 0, "[I_{10-9-8}]", 27, Fraction(1145, 242), 2, Fraction(27), "Geometric", 242),
               PlaceBound(3, 0, "I0-IV-0", 5, Fraction(2, 3), 0, Fraction(8, 3), "KodairaHint")]
    return HeightBoundReport(entries=entries, arch_beta=mpmath.mpf("-19.27"), content_term=mpmath.mpf(0),
                             total=mpmath.mpf("-12.3"), single_step=mpmath.mpf(1))


def test_bound_frame():
    df = bound_frame(sample_report())
    assert list(df['p']) == [2, 3]
    assert df.loc[0, 'beta'] == "1145/242"
    assert df.loc[0, 'exponent'] == 242
    assert pd.isna(df.loc[1, 'exponent'])
    assert abs(df.loc[1, 'term'] - 2 / 3 * 1.0986122886681098) < 1e-12


def test_bound_summary():
    df = bound_summary(sample_report())
    assert list(df['part'])[-1] == 'total'
    assert df.set_index('part').loc['unfactored', 'value'] == '1'


def test_finite_part_frame():
    df = finite_part_frame(FinitePart(terms=((3, Fraction(2)), (5, Fraction(1, 2)))))
    assert list(df['q']) == ['3', '5']
    assert list(df['mu']) == ['2', '1/2']
    assert finite_part_frame(FinitePart()).empty


def test_render():
    assert render(invariants_frame([])) == '(no rows)'
    text = render(invariants_frame([{'p': 5, 'v(Delta)': 9, 'fiber': 'ThreeNodes', 'type': '[I_{4-3-2}]'}]))
    assert 'ThreeNodes' in text
