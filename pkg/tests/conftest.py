import pytest

from maxwell_bec.poly import DDPair, Poly, regular


def poly_from(terms):
    """{power: coeff} -> Poly."""
    c = [0.0] * (max(terms) + 1)
    for k, v in terms.items():
        c[k] = v
    return Poly(c)


REG36 = regular(3, 6)
REG24 = regular(2, 4)
REG34 = regular(3, 4)
DOUBLE_JUMP = DDPair(poly_from({1: 0.3, 2: 0.3, 13: 0.4}), Poly.monomial(6))
STCO = DDPair(poly_from({1: 0.4, 6: 0.6}), Poly.monomial(6))
BPLEQMAP = DDPair(poly_from({1: 3 / 20, 2: 3 / 20, 50: 14 / 20}), Poly.monomial(15))

TABLE_ROWS = [
    # lambda, rho, eps_bp, eps_map_upper
    (poly_from({1: 1.0}), poly_from({5: 0.4, 6: 0.6}), 0.1786, 0.1786),
    (poly_from({2: 0.7, 3: 0.2, 4: 0.1}), poly_from({5: 0.4, 6: 0.6}), 0.4236, 0.4948),
    (poly_from({1: 0.2857, 2: 0.306147, 9: 0.408153}), Poly.monomial(6), 0.4804, 0.4935),
    (poly_from({2: 0.771429, 7: 0.228571}), Poly.monomial(4), 0.5955, 0.6979),
    (poly_from({2: 0.9, 7: 0.1}), Poly.monomial(7), 0.3440, 0.3899),
]


@pytest.fixture
def reg36():
    return REG36


@pytest.fixture
def double_jump():
    return DOUBLE_JUMP


@pytest.fixture
def stco():
    return STCO
