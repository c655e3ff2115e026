from fractions import Fraction

import pytest

import convmce


@pytest.fixture(scope="module")
def small_keys():
    return convmce.keygen(convmce.SchemeParams.small(), 7)


def test_field_inverse():
    f = convmce.Field.with_order(256)
    for a in range(1, 256):
        assert f.mul(a, f.inv(a)) == 1


def test_bytes_roundtrip(small_keys):
    pk, sk = small_keys
    msg = bytes(i % 8 for i in range(50))
    ct = convmce.encrypt_bytes(pk, msg, seed=3)
    assert convmce.decrypt_bytes(sk, ct) == msg


def test_reference_roundtrip():
    pk, sk = convmce.keygen(convmce.SchemeParams.reference(), 11)
    msg = bytes(range(256)) * 4
    assert convmce.decrypt_bytes(sk, convmce.encrypt_bytes(pk, msg, seed=5)) == msg


def test_polynomial_roundtrip(small_keys):
    pk, sk = small_keys
    u = [[1, 2, 3], [4, 5, 6], [7, 0, 1]]
    e = convmce.sample_error(pk, len(u) + pk.mu + pk.nu, seed=9)
    assert convmce.validate_error(e, pk.t, pk.mu) is None
    assert convmce.decrypt(sk, convmce.encrypt(pk, u, e)) == u


def test_key_serialization(small_keys):
    pk, sk = small_keys
    assert convmce.PublicKey.from_bytes(pk.to_bytes(sk.params)) == pk
    sk2 = convmce.SecretKey.from_bytes(sk.to_bytes())
    assert sk2 == sk
    assert sk2.public_key() == pk


def test_counting():
    assert convmce.count_s_keys(2, 1, 0, 3) == (6, 8)
    assert convmce.partition_count(0, 0, 0) == 1


def test_stern_exact():
    assert convmce.stern_success_probability(2, 1, 1, 0, 1, 1) == Fraction(2, 3)
    rep = convmce.stern_attack(32, 16, 128, 2, 6, 8, 4, 16)
    assert rep["probability"] == Fraction(708203371121103981312, 7184931393584242331363)


def test_truncated(small_keys):
    pk, _ = small_keys
    k_s, t_s = convmce.truncated_rank(pk, 2)
    assert t_s == convmce.max_truncated_errors(2, pk.t, pk.mu, pk.n)
    assert 0 <= k_s <= 3 * pk.k
    assert 0 <= convmce.truncated_recovery_probability(pk, 2) <= 1


def test_errors(small_keys):
    pk, sk = small_keys
    with pytest.raises(convmce.FormatError):
        convmce.PublicKey.from_bytes(b"not a key")
    with pytest.raises(convmce.FormatError):
        convmce.encrypt_bytes(pk, bytes([200]), seed=1)
    with pytest.raises(convmce.ParameterError):
        convmce.SchemeParams(256, 32, 40, 2, 6)
