"""Convolutional McEliece over F_q: keys, streaming encryption and attack analysis."""

from fractions import Fraction

from ._convmce import (
    DecodeFailure,
    Field,
    FormatError,
    ParameterError,
    PublicKey,
    SchemeParams,
    SecretKey,
    UsageError,
    count_delta,
    count_s_keys,
    decrypt,
    decrypt_bytes,
    encrypt,
    encrypt_bytes,
    keygen,
    keyspace_report,
    max_truncated_errors,
    partition_count,
    sample_error,
    truncated_rank,
    validate_error,
)
from . import _convmce


def stern_success_probability(n, k, ell, mu, nu, t, p=0, m=0):
    """Exact single-iteration Stern success probability as a Fraction."""
    return Fraction(_convmce._stern_success_probability(n, k, ell, mu, nu, t, p, m))


def stern_search_time(n, k, ell, mu, nu, t, p=0, m=0):
    return Fraction(_convmce._stern_search_time(n, k, ell, mu, nu, t, p, m))


def stern_attack(n, k, ell, mu, nu, t, p=0, m=0):
    rep = _convmce._stern_attack(n, k, ell, mu, nu, t, p, m)
    rep["probability"] = Fraction(rep["probability"])
    rep["iteration_cost"] = Fraction(rep["iteration_cost"])
    return rep


def truncated_recovery_probability(pk, s, model="prange", p=0, m=0):
    return Fraction(_convmce._truncated_recovery_probability(pk, s, model, p, m))


__all__ = [name for name in dir() if not name.startswith("_")]
