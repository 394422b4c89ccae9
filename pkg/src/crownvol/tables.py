"""Known closed-form volumes, frozen as verification targets.

These exact values are the oracles the verify suite and the test suite
compare computed volumes against.  They are transcribed by hand and never
derived from the code paths they check.
"""

from __future__ import annotations

from fractions import Fraction

from .ring import GradedMonomial, SymbolicValue


def _t(num: int, den: int, pi: int = 0, log2: int = 0, zeta: int = 0) -> SymbolicValue:
    mono = GradedMonomial.make(pi_exp=pi, log2_exp=log2,
                               zeta={zeta: 1} if zeta else {})
    return SymbolicValue.monomial(mono, Fraction(num, den))


#: Exact Mirzakhani volumes of moduli spaces of ideal n-gons, n <= 8.
NGON_VOLUMES: dict[int, SymbolicValue] = {
    3: SymbolicValue.rational(1),
    4: SymbolicValue.rational(1),
    5: _t(1, 6, pi=2),
    6: _t(1, 3, pi=2),
    7: _t(3, 40, pi=4),
    8: _t(8, 45, pi=4),
}


#: Exact volumes of moduli spaces of (a1, a2)-annuli with free neck.
ANNULUS_VOLUMES: dict[tuple[int, int], SymbolicValue] = {
    (1, 1): _t(1, 1, log2=1),
    (1, 2): _t(7, 4, zeta=3),
    (1, 3): _t(1, 2, pi=2, log2=1) + _t(9, 4, zeta=3),
    (1, 4): _t(7, 6, pi=2, zeta=3) + _t(31, 8, zeta=5),
    (1, 5): _t(3, 8, pi=4, log2=1) + _t(15, 8, pi=2, zeta=3) + _t(75, 16, zeta=5),
    (1, 6): _t(14, 15, pi=4, zeta=3) + _t(31, 8, pi=2, zeta=5) + _t(381, 64, zeta=7),
    (1, 7): (_t(5, 16, pi=6, log2=1) + _t(259, 160, pi=4, zeta=3)
             + _t(175, 32, pi=2, zeta=5) + _t(441, 64, zeta=7)),
    (1, 8): (_t(4, 5, pi=6, zeta=3) + _t(217, 60, pi=4, zeta=5)
             + _t(127, 16, pi=2, zeta=7) + _t(511, 64, zeta=9)),
    (1, 9): (_t(35, 128, pi=8, log2=1) + _t(3229, 2240, pi=6, zeta=3)
             + _t(705, 128, pi=4, zeta=5) + _t(1323, 128, pi=2, zeta=7)
             + _t(2295, 256, zeta=9)),
    (1, 10): (_t(32, 45, pi=8, zeta=3) + _t(1271, 378, pi=6, zeta=5)
              + _t(1651, 192, pi=4, zeta=7) + _t(2555, 192, pi=2, zeta=9)
              + _t(10235, 1024, zeta=11)),
    (1, 11): (_t(63, 256, pi=10, log2=1) + _t(117469, 89600, pi=8, zeta=3)
              + _t(86405, 16128, pi=6, zeta=5) + _t(30723, 2560, pi=4, zeta=7)
              + _t(8415, 512, pi=2, zeta=9) + _t(11253, 1024, zeta=11)),
    (1, 12): (_t(64, 99, pi=10, zeta=3) + _t(14849, 4725, pi=8, zeta=5)
              + _t(17653, 2016, pi=6, zeta=7) + _t(15841, 960, pi=4, zeta=9)
              + _t(10235, 512, pi=2, zeta=11) + _t(24573, 2048, zeta=13)),
    (2, 2): _t(6, 1, zeta=3),
    (2, 3): _t(7, 8, pi=2, zeta=3) + _t(93, 8, zeta=5),
    (2, 4): _t(4, 1, pi=2, zeta=3) + _t(20, 1, zeta=5),
    (2, 5): (_t(21, 32, pi=4, zeta=3) + _t(155, 16, pi=2, zeta=5)
             + _t(1905, 64, zeta=7)),
    (3, 3): _t(1, 4, pi=4, log2=1) + _t(9, 4, pi=2, zeta=3) + _t(225, 8, zeta=5),
    (3, 4): (_t(7, 12, pi=4, zeta=3) + _t(155, 16, pi=2, zeta=5)
             + _t(1905, 32, zeta=7)),
}
