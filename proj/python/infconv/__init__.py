"""Hopf-Lax semigroup, hypercontractivity and log-Sobolev deficits."""

from ._infconv import (
    Family,
    NegativeDeficitError,
    deficit,
    deficit_radial,
    gauss_sharpness_constant,
    hc_optimal_constant,
    hc_quadratic_constant,
    hc_sharpness_constant,
    hopf_lax_1d,
    hopf_lax_at,
    hopf_lax_radial,
    lsi_optimal_constant,
    lsi_quadratic_constant,
    lsi_sharpness_constant,
    run_experiment,
)


def parse_record(text):
    """Parse `key = value` lines into a dict; numeric values become floats."""
    out = {}
    for line in text.splitlines():
        if "=" not in line:
            continue
        k, v = (s.strip() for s in line.split("=", 1))
        try:
            out[k] = float(v)
        except ValueError:
            out[k] = v
    return out


__all__ = [
    "Family",
    "NegativeDeficitError",
    "deficit",
    "deficit_radial",
    "gauss_sharpness_constant",
    "hc_optimal_constant",
    "hc_quadratic_constant",
    "hc_sharpness_constant",
    "hopf_lax_1d",
    "hopf_lax_at",
    "hopf_lax_radial",
    "lsi_optimal_constant",
    "lsi_quadratic_constant",
    "lsi_sharpness_constant",
    "parse_record",
    "run_experiment",
]
