"""SI <-> natural-unit conversion (c = 1, times in seconds).

Lengths become light-seconds and accelerations become inverse seconds.
Angular frequencies and times are unchanged.
"""

C_SI = 299_792_458.0  # m/s, exact


def length_to_natural(meters):
    return meters / C_SI


def length_to_si(light_seconds):
    return light_seconds * C_SI


def accel_to_natural(m_per_s2):
    return m_per_s2 / C_SI


def accel_to_si(per_second):
    return per_second * C_SI
