import math

import pytest

from hassettkit import errors
from hassettkit.arithmetic import F0_GRAM
from hassettkit.gramio import gram_digest
from hassettkit.hassett import (
    ZCertificate,
    check_certificate,
    cm_in_cd,
    dm_quotient,
    hassett_up_to,
    k_lattice,
    lift_form,
    quotient_basis,
    verify_z_membership,
    yang_yu_check,
)
from hassettkit.lattice import determinant, gram_in_basis, validate

from conftest import F0, M0_GRAM
from oracles import box

E1 = (1, 0, 0, 0, 0)


def test_quotient_basis():
    assert quotient_basis((1, 0, 0)) == ((0, 1, 0), (0, 0, 1))
    B = quotient_basis((2, 3))
    assert abs(determinant([[2, 3], list(B[0])])) == 1
    with pytest.raises(ValueError):
        quotient_basis((2, 4))


def test_dm_m0(m0):
    assert dm_quotient(m0, E1).gram == F0_GRAM


def test_dm_k8(k8):
    assert dm_quotient(k8, (1, 0)).gram == ((8,),)


def test_dm_requires_distinguished(m0):
    with pytest.raises(errors.NotDistinguished):
        dm_quotient(m0, (0, 0, 1, 0, 0))
    with pytest.raises(errors.NotDistinguished):
        dm_quotient(validate([[3, 0], [0, 1]]), (1, 0))


def test_dm_values_are_span_discriminants(m0):
    D = dm_quotient(m0, E1)
    for c in box(4, 2):
        v = (0, *c)
        assert D.norm(c) == 3 * m0.norm(v) - m0.pair(E1, v) ** 2


def test_lift_examples():
    r = lift_form([[8]])
    assert r.lattice.gram == ((3, 1), (1, 3))
    assert r.parity_flag == 1
    r = lift_form([[12]])
    assert r.lattice.gram == ((3, 0), (0, 4))
    assert r.parity_flag == 0


def test_lift_m0_round_trip():
    r = lift_form(F0)
    assert r.lattice.gram == tuple(map(tuple, M0_GRAM))
    assert dm_quotient(r.lattice, r.distinguished).gram == F0_GRAM


@pytest.mark.parametrize("gram, value", [([[4]], 4), ([[2]], 2), ([[6]], 6), ([[9]], 9)])
def test_lift_rejects(gram, value):
    with pytest.raises(errors.NotSupportedInH) as exc:
        lift_form(gram)
    w = exc.value.witness
    F = validate(gram)
    assert F.norm(w) == exc.value.value
    assert not (exc.value.value > 6 and exc.value.value % 6 in (0, 2))


def test_lift_rejects_pairing_zero_mod_3():
    # u - w and u + w both have norm 4 mod 6
    with pytest.raises(errors.NotSupportedInH) as exc:
        lift_form([[8, 3], [3, 8]])
    assert exc.value.value == 22


def test_lift_rejects_bad_pairing():
    # both basis norms fine, pairing not divisible by 3
    F = [[8, 1], [1, 12]]
    with pytest.raises(errors.NotSupportedInH) as exc:
        lift_form(F)
    w = exc.value.witness
    assert validate(F).norm(w) == exc.value.value
    assert exc.value.value % 6 not in (0, 2) or exc.value.value in (2, 6)


def test_lift_needs_normalization():
    # basis norms 8, 8 (both 2 mod 6): the lift changes basis first
    F = validate([[8, 2], [2, 8]])
    r = lift_form(F)
    assert dm_quotient(r.lattice, r.distinguished).gram == gram_in_basis(F, r.basis)
    assert abs(determinant(list(map(list, r.basis)))) == 1


@pytest.mark.parametrize("d", [8, 12, 14, 18, 20, 24, 26, 30, 296, 300])
def test_k_lattice(d):
    K = k_lattice(d)
    assert determinant(K) == d
    assert dm_quotient(K, (1, 0)).gram == ((d,),)
    rep = yang_yu_check(K)
    assert rep.passes and rep.codimension == 1


def test_k_lattice_rejects():
    with pytest.raises(errors.NotInHassett):
        k_lattice(10)


def test_yang_yu(m0, k8):
    rep = yang_yu_check(m0)
    assert rep.passes and rep.codimension == 4
    assert rep.distinguished == E1
    assert yang_yu_check(k8).codimension == 1
    bad = yang_yu_check(validate([[2, 1], [1, 2]]))
    assert not bad.passes and bad.roots and bad.distinguished is None


def test_yang_yu_rank_limits():
    with pytest.raises(errors.RankOutOfRange):
        yang_yu_check(validate([[3]]))


def test_yang_yu_large_l():
    # 3 + 2*I_19 has rank 20 and l = 19: rank + l > 20
    g = [[0] * 20 for _ in range(20)]
    g[0][0] = 3
    for i in range(1, 20):
        g[i][i] = 4
    rep = yang_yu_check(validate(g))
    assert rep.distinguished is not None and not rep.roots
    assert not rep.passes


def test_cm_in_cd(k8, m0):
    assert cm_in_cd(k8, (1, 0), 8) == (1,)
    assert cm_in_cd(k8, (1, 0), 12) is None
    v = cm_in_cd(m0, E1, 14)
    assert validate(F0).norm(v) == 14 and math.gcd(*v) == 1


def test_verify_z_m0(m0):
    cert = verify_z_membership(m0, E1, 500)
    assert sorted(cert.witnesses) == hassett_up_to(500)
    assert check_certificate(m0, cert)
    proof = verify_z_membership(m0, E1, 500, mode="proof")
    assert sorted(proof.witnesses) == sorted(cert.witnesses)
    assert check_certificate(m0, proof)


def test_verify_z_single_witness(m0):
    cert = verify_z_membership(m0, E1, 8)
    assert cert.witnesses == {8: (1, 0, 0, 0)}


def test_verify_z_missing(k8):
    with pytest.raises(errors.MissingDiscriminants) as exc:
        verify_z_membership(k8, (1, 0), 20)
    assert exc.value.missing == [12, 14, 18, 20]


def test_verify_z_proof_mode_needs_f0(k8):
    with pytest.raises(errors.ProofModeUnavailable):
        verify_z_membership(k8, (1, 0), 20, mode="proof")


def test_verify_z_bad_args(m0):
    with pytest.raises(ValueError):
        verify_z_membership(m0, E1, 7)
    with pytest.raises(ValueError):
        verify_z_membership(m0, E1, 100, mode="guess")


def test_verify_z_workers(m0):
    a = verify_z_membership(m0, E1, 300, mode="proof", workers=2)
    b = verify_z_membership(m0, E1, 300, mode="proof")
    assert a == b


def test_certificate_json_round_trip(m0):
    cert = verify_z_membership(m0, E1, 100)
    again = ZCertificate.from_json(cert.to_json())
    assert again == cert
    assert cert.digest == gram_digest(m0)


def test_check_certificate_catches_tampering(m0, k8):
    cert = verify_z_membership(m0, E1, 100)
    assert not check_certificate(k8, cert)
    w = dict(cert.witnesses)
    w[8] = (2, 0, 0, 0)
    assert not check_certificate(m0, ZCertificate(cert.digest, cert.distinguished, cert.bound, cert.mode, w))
    del w[8]
    assert not check_certificate(m0, ZCertificate(cert.digest, cert.distinguished, cert.bound, cert.mode, w))
