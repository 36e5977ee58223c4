"""Shared comparison helpers for the test suite."""

import math


def within_sig_digits(x: float, ref: float, digits: int = 5) -> bool:
    """True if ``x`` is within one unit of the last quoted digit of ``ref``.

    ``ref = 1.6471e-5`` quotes five significant digits, so the allowed error
    is ``1e-9``.  Covers both rounded and truncated references.
    """
    unit = 10.0 ** (math.floor(math.log10(abs(ref))) - (digits - 1))
    return abs(x - ref) <= unit * (1 + 1e-9)


# Values frozen from an independent 50-digit mpmath computation
# (defining equations solved by plain bisection, no shared code).
ORACLE_A_C = {
    (3, 3, 3): 1.9106332362490185563,
    (3, 7, 29): 0.14267197883468663676,
    (3, 9, 16): 0.14269820454518661387,
    (4, 4, 28): 0.22300020026116028137,
    (5, 5, 9): 0.22302822712640375938,
    (3, 11, 13): 0.060256581903552873894,
    (3, 7, 41): 0.030382378942708325329,
    (3, 5, 7): 0.86961752512037778812,
    (3, 3, 5, 7): 0.22634619726782778429,
    (3, 3, 3, 41): 0.1529122847197027011,
    (3, 3, 3, 3, 3): 1.107148717794090503,
    (3, 4, 4, 4): 0.73097951193638563231,
    (3, 4, 4, 5): 0.45166741938321689839,
    (4, 4, 4): 1.2309594173407746821,
    (3, 4, 5): 1.2309594173407746821,
}
ORACLE_LOCAL_AREA = {
    (3, 11, 13): 0.083755215601905783914,
    (3, 7, 41): 0.12823754063974799901,
}
ORACLE_GAP_FIRST = 1.6472697232091060916e-5
ORACLE_GAP_SECOND = 1.7916109682533737258e-5
ORACLE_J16_DEFICIT = 0.2567764409514261325
ORACLE_GAMMA_AREA = 0.20960588434751183229

# (criterion, ok, detail) lines collected by test_acceptance
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []
