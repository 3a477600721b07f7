import copy
import json
import random

import pytest

from thetacert.corpus import load_corpus
from thetacert.prover import (IdentityStatement, NormalizationError, StaleCertificateError,
                              combine_terms,
                              certificate_json, normalize, prove, verify_certificate)
from thetacert.thetaprod import EProduct, format_eproduct, parse_eproduct, parse_pochhammer

CORPUS = {e.tag: e for e in load_corpus()}


def normalized_texts(tag):
    return [format_eproduct(t) for t in combine_terms(normalize(CORPUS[tag].statement()))]


def test_normalized_840m361():
    assert normalized_texts("840m+361") == [
        "105: 1", "105: E22 / E43", "-1 * 105: E13 / E43", "105: E8 / E43",
        "-1 * 105: E7 E8 E13 E15 E20 E22 E27 E28 E35 E42 E48 E50 / "
        "E4 E9 E11 E16 E19 E24 E26 E31 E39 E44 E46 E51"]


def test_normalized_level20():
    assert normalized_texts("tri-minus-5tri") == [
        "20: 1", "-1 * 20: E2 E6 / E4 E8", "-1 * 20: E1 E6 E9 E10 / E3 E4 E7 E8"]


def test_normalized_level24():
    assert normalized_texts("48m+1") == [
        "24: 1", "24: E5 / E11", "-1 * 24: E2 E6 E8 E10 / E1 E7 E9 E11"]


def test_trivial_statement():
    p = parse_eproduct("20: E1 E3 / E4")
    stmt = IdentityStatement("trivial", [p], p)
    assert [format_eproduct(t) for t in normalize(stmt)] == ["20: 1", "-1 * 20: 1"]
    assert combine_terms(normalize(stmt)) == []
    cert = prove(stmt)
    assert cert["verdict"] == {"status": "proven"}


def test_eta_must_cancel():
    stmt = IdentityStatement("eta", [parse_eproduct("20: E1")], EProduct(20, {1: 1}, 1, 0, 1))
    with pytest.raises(NormalizationError):
        normalize(stmt)
    assert prove(stmt)["verdict"]["status"] == "not-applicable"


def test_840m361_proven_with_bound():
    cert = prove(CORPUS["840m+361"].statement())
    assert cert["verdict"] == {"status": "proven"}
    assert cert["bound"] == 148
    assert cert["verified_range"] == [0, 148]
    assert dict(cert["cusps"])["27/35"] == 0


def test_level20_bound_covers_constant_term():
    cert = prove(CORPUS["tri-minus-5tri"].statement())
    assert cert["bound"] == 4
    assert cert["verdict"]["status"] == "proven"


def test_sign_mutation_is_refuted():
    stmt = CORPUS["840m+361"].statement()
    lhs = list(stmt.lhs_terms)
    lhs[1] = -lhs[1]
    cert = prove(IdentityStatement("mutant", lhs, stmt.rhs))
    assert cert["verdict"] == {"status": "refuted", "exponent": 4, "grid": [4, 1], "coefficient": -2}


def test_rhs_theta_mutation_is_not_proven():
    # moving the numerator theta from q^6 to q^5 (paired with q^2) breaks modularity
    stmt = CORPUS["840m+361"].statement()
    rhs = parse_pochhammer("(q^2,q^5,q^7;q^7) / (q,q^4;q^5)").to_eproduct()
    cert = prove(IdentityStatement("mutant", stmt.lhs_terms, rhs))
    assert cert["verdict"]["status"] == "not-applicable"
    assert cert["verdict"]["non_modular"]


def test_refutation_on_fractional_grid():
    # q^(1/2) offsets: the reported exponent comes with its grid denominator
    p = parse_eproduct("8: E1 E2 / E3")
    stmt = IdentityStatement("scaled", [p], p.scale(2))
    cert = prove(stmt)
    v = cert["verdict"]
    assert v["status"] == "refuted"
    assert v["exponent"] == 0 and v["grid"][0] == 0 and v["grid"][1] >= 1


def mutate(stmt, rng):
    """Change one exponent of one factor of one product by +-1."""
    idx = rng.randrange(len(stmt.lhs_terms) + 1)
    terms = list(stmt.lhs_terms) + [stmt.rhs]
    t = terms[idx]
    half = t.level // 2 if t.level % 2 else t.level // 2 - 1
    g = rng.randint(1, max(1, half))
    f = t.factor_map
    f[g] = f.get(g, 0) + rng.choice([1, -1])
    terms[idx] = EProduct(t.level, f, t.scalar, t.qpower, t.eta)
    return IdentityStatement(stmt.name + "*", terms[:-1], terms[-1])


@pytest.mark.parametrize("tag", sorted(CORPUS))
def test_mutations_never_proven(tag):
    rng = random.Random(tag)
    stmt = CORPUS[tag].statement()
    for _ in range(3):
        cert = prove(mutate(stmt, rng))
        assert cert["verdict"]["status"] in ("refuted", "not-applicable")


# -- certificates ------------------------------------------------------------


def test_certificate_roundtrip():
    stmt = CORPUS["tri-minus-5tri"].statement()
    cert = json.loads(certificate_json(prove(stmt)))
    assert verify_certificate(cert, stmt)


def test_tampered_bound():
    stmt = CORPUS["840m+361"].statement()
    cert = prove(stmt)
    bad = copy.deepcopy(cert)
    bad["bound"] = 147
    assert not verify_certificate(bad, stmt)


def test_tampered_cusp_minimum():
    stmt = CORPUS["840m+361"].statement()
    cert = prove(stmt)
    bad = copy.deepcopy(cert)
    bad["cusps"][0][1] = -1
    assert not verify_certificate(bad, stmt)


def test_tampered_verdict():
    stmt = CORPUS["tri-minus-5tri"].statement()
    bad = prove(stmt)
    bad["verdict"] = {"status": "refuted", "exponent": 1, "grid": [1, 1], "coefficient": 1}
    assert not verify_certificate(bad, stmt)


def test_stale_certificate():
    cert = prove(CORPUS["tri-minus-5tri"].statement())
    with pytest.raises(StaleCertificateError):
        verify_certificate(cert, CORPUS["tri-plus-5tri"].statement())


def test_certificate_json_is_stable():
    stmt = CORPUS["48m+1"].statement()
    a, b = certificate_json(prove(stmt)), certificate_json(prove(stmt))
    assert a == b
    assert list(json.loads(a)) == ["format", "statement", "level", "normalization", "modularity",
                                   "cusps", "order_sum", "bound", "verified_range", "verdict"]
