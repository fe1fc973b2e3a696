import random
from fractions import Fraction

import pytest

from braidrep.catalog import (
    builtin_catalog,
    bn_family,
    burau,
    enumerate_families,
    expected_family_count,
    f_rep,
    mvb_family,
    mwb_family,
    swap_block,
    trivial_family,
)
from braidrep.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidChoice,
    UnknownFamily,
    UnknownName,
)
from braidrep.localrep import (
    LocalRepSpec,
    embed_block,
    rep_image,
    verify_relations,
    verify_representation,
    word_image,
)
from braidrep.matrix import Matrix
from braidrep.presentations import Generator, build_presentation, word
from braidrep.symalg import Polynomial, RationalFunction, as_rf


def rf(num: str) -> RationalFunction:
    # tiny parser for test fixtures: "x^-1" or "b" or integers
    if num.lstrip("-").isdigit():
        return as_rf(int(num))
    if "^" in num:
        name, power = num.split("^")
        return as_rf(Polynomial.variable(name, int(power)))
    return as_rf(Polynomial.variable(num))


class TestEmbedBlock:
    def test_swap_at_one(self):
        b = swap_block("x")
        m = embed_block(b, 1, 3)
        assert m == Matrix([
            [0, rf("x"), 0],
            [rf("x^-1"), 0, 0],
            [0, 0, 1],
        ])

    def test_identity_block_gives_identity(self):
        for i in (1, 2, 3):
            assert embed_block(Matrix.identity(2), i, 4).is_identity()

    def test_interior_position(self):
        b, c = Polynomial.variable("b"), Polynomial.variable("c")
        blk = Matrix([[1 - b * c, b], [c, 0]])
        m = embed_block(blk, 2, 4)
        assert m.entry(0, 0) == as_rf(1)
        assert m.entry(1, 1) == as_rf(1 - b * c)
        assert m.entry(1, 2) == as_rf(b)
        assert m.entry(2, 1) == as_rf(c)
        assert m.entry(2, 2).is_zero()
        assert m.entry(3, 3) == as_rf(1)

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            embed_block(Matrix.identity(2), 0, 3)
        with pytest.raises(IndexOutOfRange):
            embed_block(Matrix.identity(2), 3, 3)

    def test_rejects_wrong_block_shape(self):
        with pytest.raises(DimensionMismatch):
            embed_block(Matrix.identity(3), 1, 4)


class TestRepImage:
    def test_beta7_sigma(self):
        spec = builtin_catalog("beta7", 4)
        img = rep_image(spec, Generator("s", 1))
        b, c = Polynomial.variable("b"), Polynomial.variable("c")
        assert img.entry(0, 1) == as_rf(b)
        assert img.entry(1, 0) == as_rf(c)
        assert img.entry(0, 0).is_zero()
        assert img.entry(2, 2) == as_rf(1)

    def test_trivial_family_everything_identity(self):
        spec = builtin_catalog("beta1", 5)
        for g in (Generator("s", 2), Generator("r", 1, 0), Generator("r", 4, 1)):
            assert rep_image(spec, g).is_identity()

    def test_zeta4_sigma(self):
        spec = builtin_catalog("zeta4", 3)
        img = rep_image(spec, Generator("s", 1))
        b = Polynomial.variable("b")
        d = Polynomial.variable("d")
        assert img.entry(0, 1) == as_rf(b)
        assert img.entry(1, 1) == as_rf(d)
        assert img.entry(1, 0) == RationalFunction(1 - d, b)

    def test_unknown_family(self):
        spec = builtin_catalog("beta2", 3)
        with pytest.raises(UnknownFamily):
            rep_image(spec, Generator("r", 1, 2))

    def test_locality_outside_window(self):
        spec = builtin_catalog("beta6", 6)
        img = rep_image(spec, Generator("r", 3, 1))
        for r in range(6):
            for c in range(6):
                if 2 <= r <= 3 and 2 <= c <= 3:
                    continue
                expected = as_rf(1 if r == c else 0)
                assert img.entry(r, c) == expected

    def test_inverse_image_is_matrix_inverse(self):
        spec = builtin_catalog("beta3", 4)
        for g in (Generator("s", 2), Generator("r", 1, 0)):
            m = rep_image(spec, g)
            w = word((g, 1), (g, -1))
            assert word_image(spec, w).is_identity()
            assert (m * m.inverse()).is_identity()


class TestCatalogNames:
    def test_constructor_matches_alias(self):
        made = mvb_family(3, 2, "s3", ("swap", "swap"))
        assert made.name == "beta7"
        assert made == builtin_catalog("beta7", 3)

    def test_zeta_constructor_matches_alias(self):
        made = mwb_family(3, 2, "a1", ("bswap", "id"))
        assert made.name == "zeta2"
        assert made == builtin_catalog("zeta2", 3)

    def test_generated_names_roundtrip(self):
        for spec in enumerate_families("MkVB", 3, 3):
            again = builtin_catalog(spec.name, 3)
            assert again == spec
        for spec in enumerate_families("MkWB", 3, 3):
            again = builtin_catalog(spec.name, 3)
            assert again == spec

    def test_family_counts(self):
        assert expected_family_count("MkVB", 2) == 9
        assert expected_family_count("MkVB", 3) == 17
        assert expected_family_count("MkVB", 4) == 33
        assert expected_family_count("MkWB", 2) == 7
        assert expected_family_count("MkWB", 3) == 13
        assert expected_family_count("MkWB", 4) == 25
        for group in ("MkVB", "MkWB"):
            for k in (2, 3, 4):
                fams = enumerate_families(group, k, 3)
                assert len(fams) == expected_family_count(group, k)
                assert len({f.name for f in fams}) == len(fams)

    def test_unknown_name(self):
        with pytest.raises(UnknownName):
            builtin_catalog("beta10", 3)
        with pytest.raises(UnknownName):
            builtin_catalog("mvb-k3-s9-xss", 3)

    def test_invalid_choices(self):
        with pytest.raises(InvalidChoice):
            mvb_family(3, 2, "s2", ("id", "swap"))
        with pytest.raises(InvalidChoice):
            mwb_family(3, 2, "a1", ("swap", "id"))
        with pytest.raises(InvalidChoice):
            mwb_family(3, 2, "a2", ("bswap", "id"))
        with pytest.raises(InvalidChoice):
            mwb_family(3, 2, "a1", ("bswap", "swap"))
        with pytest.raises(InvalidChoice):
            builtin_catalog("beta7", 3, k=3)

    def test_beta_parameter_letters_match_printed_tables(self):
        spec = builtin_catalog("beta6", 3)
        assert spec.variables() == ("b", "c", "q", "x")
        spec3 = mvb_family(3, 3, "s3", ("swap", "id", "swap"))
        assert spec3.variables() == ("b", "c", "x0", "x2")


class TestVerification:
    def test_burau_passes(self):
        for n in range(3, 7):
            pres = build_presentation("B", n)
            report = verify_representation(builtin_catalog("burau", n), pres)
            assert report.ok, f"burau failed at n={n}"

    def test_f_rep_passes(self):
        for n in range(3, 6):
            pres = build_presentation("B", n)
            report = verify_representation(f_rep(n), pres)
            assert report.ok, f"f_rep failed at n={n}"

    def test_bn_families_pass(self):
        pres = build_presentation("B", 5)
        for which in (1, 2, 3):
            report = verify_representation(bn_family(which, 5), pres)
            assert report.ok

    def test_all_beta_families_pass_mvb(self):
        for n in (3, 4):
            pres = build_presentation("MkVB", n, 2)
            for spec in enumerate_families("MkVB", 2, n):
                report = verify_representation(spec, pres)
                assert report.ok, f"{spec.name} failed at n={n}"

    def test_all_zeta_families_pass_mwb(self):
        for n in (3, 4):
            pres = build_presentation("MkWB", n, 2)
            for spec in enumerate_families("MkWB", 2, n):
                report = verify_representation(spec, pres)
                assert report.ok, f"{spec.name} failed at n={n}"

    def test_k3_spot_check(self):
        pres = build_presentation("MkVB", 3, 3)
        spec = mvb_family(3, 3, "s4", ("swap", "id", "swap"))
        assert verify_representation(spec, pres).ok
        pres_w = build_presentation("MkWB", 3, 3)
        spec_w = mwb_family(3, 3, "a3", ("bswap", "bswap", "id"))
        assert verify_representation(spec_w, pres_w).ok

    def test_failing_spec_reports_first_violation(self):
        bad = LocalRepSpec(
            "shear", 3, 2,
            Matrix([[1, 1], [0, 1]]),
            (swap_block("x"), Matrix.identity(2)),
        )
        pres = build_presentation("MkVB", 3, 2)
        report = verify_representation(bad, pres)
        assert not report.ok
        assert report.first_violation is not None
        assert report.first_violation.tag == "braid"
        # the shear never satisfies the braid relation, detour is fine
        verdicts = {v.relation.tag: v.ok for v in report.verdicts}
        assert verdicts["detour"] is True

    def test_forbidden_relations_give_deterministic_report(self):
        pres = build_presentation("MkWB", 3, 2)
        spec = builtin_catalog("zeta2", 3)
        report = verify_relations(spec, pres.forbidden)
        tags = [v.relation.tag for v in report.verdicts]
        assert "F2" in tags and "F1" not in tags
        again = verify_relations(spec, pres.forbidden)
        assert [v.ok for v in report.verdicts] == [v.ok for v in again.verdicts]

    def test_dimension_mismatch(self):
        pres = build_presentation("MkVB", 4, 2)
        with pytest.raises(DimensionMismatch):
            verify_representation(builtin_catalog("beta2", 3), pres)

    def test_explicit_rep_missing_generator(self):
        pres = build_presentation("MkVB", 3, 2)
        with pytest.raises(UnknownFamily):
            verify_representation(f_rep(3), pres)

    def test_threaded_matches_serial(self):
        pres = build_presentation("MkVB", 4, 2)
        spec = builtin_catalog("beta9", 4)
        serial = verify_representation(spec, pres, threads=1)
        threaded = verify_representation(spec, pres, threads=4)
        assert [v.ok for v in serial.verdicts] == [v.ok for v in threaded.verdicts]

    def test_env_var_thread_cap(self, monkeypatch):
        monkeypatch.setenv("BRAIDREP_THREADS", "3")
        pres = build_presentation("MkVB", 3, 2)
        spec = builtin_catalog("beta2", 3)
        assert verify_representation(spec, pres).ok

    def test_substituted_spec_still_passes(self):
        spec = builtin_catalog("beta3", 4)
        numeric = spec.substitute({
            "b": as_rf(2), "c": as_rf(3), "x": as_rf(5), "q": as_rf(7),
        })
        pres = build_presentation("MkVB", 4, 2)
        assert verify_representation(numeric, pres).ok

    def test_random_samples_keep_passing(self):
        rng = random.Random(20260819)
        pres = build_presentation("MkWB", 3, 2)
        for spec in enumerate_families("MkWB", 2, 3):
            for _ in range(3):
                assignment = {}
                for v in spec.variables():
                    val = Fraction(0)
                    while val == 0 or (v == "d" and val == 1):
                        val = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                    assignment[v] = as_rf(val)
                assert verify_representation(
                    spec.substitute(assignment), pres
                ).ok


class TestSpecSerialization:
    def test_local_spec_json(self):
        spec = builtin_catalog("beta2", 3)
        data = spec.to_json()
        assert data["name"] == "beta2"
        assert data["group"] == "MkVB"
        assert data["n"] == 3 and data["k"] == 2
        assert set(data["blocks"]) == {"sigma", "rho^0", "rho^1"}
        assert "b*c" in data["side_conditions"]

    def test_explicit_rep_json(self):
        rep = f_rep(3)
        data = rep.to_json()
        assert data["dim"] == 4
        assert set(data["images"]) == {"s1", "s2"}

    def test_side_conditions_survive_valid_substitution(self):
        spec = builtin_catalog("beta2", 3)
        numeric = spec.substitute({"b": as_rf(1), "c": as_rf(2), "x": as_rf(3)})
        assert all(not c.is_zero() for c in numeric.side_conditions)

    def test_substitution_killing_condition_rejected(self):
        spec = builtin_catalog("beta2", 3)
        with pytest.raises(ValueError):
            spec.substitute({"b": as_rf(0), "c": as_rf(2), "x": as_rf(3)})
