"""Invariant vectors, diagonal conjugation, span-closure tests, witnesses."""

import random
from fractions import Fraction

import pytest

from braidrep.analysis import (
    BurnsideVerdict,
    DiagonalConjugator,
    WitnessCertificate,
    burnside_irreducible,
    conjugate_spec,
    find_invariant_vector,
    forbidden_audit,
    generic_irreducibility,
    kernel_witness,
    sample_parameters,
    spec_generators,
)
from braidrep.catalog import builtin_catalog
from braidrep.errors import DenominatorVanishes, DimensionMismatch, SingularConjugator
from braidrep.localrep import ExplicitRep, LocalRepSpec, rep_image, verify_representation
from braidrep.matrix import Matrix
from braidrep.presentations import Generator, build_presentation, word_str
from braidrep.symalg import Polynomial, RationalFunction, as_rf

P = Polynomial.variable
ONE = RationalFunction.one()


def rf(name: str) -> RationalFunction:
    return as_rf(P(name))


def fixes(spec, vector) -> bool:
    col = Matrix([[e] for e in vector])
    return all(rep_image(spec, g) * col == col for g in spec_generators(spec))


class TestInvariantVector:
    def test_all_swaps_at_one_gives_constant_vector(self):
        spec = builtin_catalog("beta8", 3).substitute({"x": ONE, "q": ONE})
        v = find_invariant_vector(spec)
        assert v is not None
        assert [str(e) for e in v] == ["1", "1", "1"]
        assert fixes(spec, v)

    def test_numeric_miss(self):
        spec = builtin_catalog("beta3", 3).substitute(
            {k: RationalFunction.constant(Fraction(v)) for k, v in
             {"b": 2, "c": 1, "x": 3}.items()}
        )
        assert find_invariant_vector(spec) is None

    def test_geometric_vector_with_symbolic_ratio(self):
        # all families swap with the same parameter: (x^2, x, 1) is fixed
        spec = builtin_catalog("beta8", 3).substitute({"q": rf("x")})
        v = find_invariant_vector(spec)
        assert v is not None
        assert [str(e) for e in v] == ["x^2", "x", "1"]
        assert fixes(spec, v)

    def test_trivial_spec_gets_constant_vector(self):
        v = find_invariant_vector(builtin_catalog("beta1", 4))
        assert v is not None
        assert [str(e) for e in v] == ["1", "1", "1", "1"]


class TestConjugation:
    def test_identity_keeps_spec(self):
        spec = builtin_catalog("beta6", 3)
        same = conjugate_spec(spec, DiagonalConjugator.identity(3))
        assert same.to_json() == spec.to_json()

    def test_geometric_ladder_twists_blocks(self):
        spec = builtin_catalog("beta6", 3)
        conj = conjugate_spec(spec, DiagonalConjugator.geometric(rf("c"), 3))
        assert isinstance(conj, LocalRepSpec)
        assert str(conj.sigma_block) == "[1 - b*c, b*c; 1, 0]"
        assert str(conj.rho_blocks[0]) == "[0, c*x; c^-1*x^-1, 0]"

    def test_conjugated_spec_still_verifies(self):
        spec = builtin_catalog("beta6", 3)
        conj = conjugate_spec(spec, DiagonalConjugator.geometric(rf("c"), 3))
        pres = build_presentation("MkVB", 3, 2)
        assert verify_representation(conj, pres).ok

    def test_uneven_diagonal_returns_explicit_images(self):
        spec = builtin_catalog("beta2", 3)
        T = DiagonalConjugator((ONE, ONE, rf("c")))
        conj = conjugate_spec(spec, T)
        assert isinstance(conj, ExplicitRep)
        assert verify_representation(conj, build_presentation("MkVB", 3, 2)).ok

    def test_verdicts_survive_conjugation(self):
        # a spec that breaks the braid relation keeps breaking exactly it
        shear = LocalRepSpec("shear", 3, 0, Matrix([[ONE, ONE], [RationalFunction.zero(), ONE]]))
        pres = build_presentation("B", 3)
        before = [(str(v.relation), v.ok) for v in verify_representation(shear, pres).verdicts]
        rng = random.Random(5)
        entries = tuple(RationalFunction.constant(Fraction(rng.randint(1, 9))) for _ in range(3))
        conj = conjugate_spec(shear, DiagonalConjugator(entries))
        after = [(str(v.relation), v.ok) for v in verify_representation(conj, pres).verdicts]
        assert before == after
        assert not all(ok for _, ok in before)

    def test_zero_entry_rejected(self):
        with pytest.raises(SingularConjugator):
            DiagonalConjugator((ONE, RationalFunction.zero()))

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatch):
            conjugate_spec(builtin_catalog("beta2", 3), DiagonalConjugator.identity(4))

    def test_braid_block_ladder_reaches_invariant_vector(self):
        # the two reducible braid-only block shapes admit a symbolic invariant
        # vector after the c-ladder change of basis, checked at six strands:
        # constant for the first shape, ratio 1-d for the second
        conj1 = conjugate_spec(
            builtin_catalog("bn-beta1", 6), DiagonalConjugator.geometric(rf("c"), 6)
        )
        v1 = find_invariant_vector(conj1)
        assert v1 is not None
        assert all(str(e) == "1" for e in v1)
        conj2 = conjugate_spec(
            builtin_catalog("bn-beta2", 6), DiagonalConjugator.geometric(rf("c"), 6)
        )
        v2 = find_invariant_vector(conj2)
        assert v2 is not None
        assert str(v2[-2]) == "1 - d"
        assert fixes(conj2, v2)

    def test_swap_ladder_constant_vector_at_six_strands(self):
        spec = builtin_catalog("beta6", 6)
        conj = conjugate_spec(spec, DiagonalConjugator.geometric(rf("c"), 6))
        inv_c = rf("c").inverse()
        pinned = conj.substitute({"x": inv_c, "q": inv_c})
        v = find_invariant_vector(pinned)
        assert v is not None
        assert all(str(e) == "1" for e in v)
        assert fixes(pinned, v)


class TestBurnside:
    def test_irreducible_sample(self):
        verdict = burnside_irreducible(
            builtin_catalog("beta3", 3),
            {"b": Fraction(2), "c": Fraction(1), "x": Fraction(3)},
        )
        assert verdict.kind == "Irreducible"
        assert verdict.dimension == 9

    def test_irreducible_sample_four_strands(self):
        verdict = burnside_irreducible(
            builtin_catalog("beta7", 4),
            {"b": Fraction(2), "c": Fraction(1), "x": Fraction(3), "q": Fraction(5)},
        )
        assert verdict.kind == "Irreducible"
        assert verdict.dimension == 16

    def test_all_ones_reducible(self):
        verdict = burnside_irreducible(
            builtin_catalog("beta7", 3),
            {"b": Fraction(1), "c": Fraction(1), "x": Fraction(1), "q": Fraction(1)},
        )
        assert verdict.kind == "Reducible"
        assert verdict.subspace == ((Fraction(1), Fraction(1), Fraction(1)),)

    def test_trivial_reducible_on_axis(self):
        verdict = burnside_irreducible(builtin_catalog("beta1", 3), {})
        assert verdict.kind == "Reducible"
        assert verdict.dimension == 1
        assert verdict.subspace == ((Fraction(1), Fraction(0), Fraction(0)),)

    def test_rotation_block_is_inconclusive(self):
        # irreducible over C but reducible over no rational subspace we probe
        rot = Matrix([
            [RationalFunction.zero(), -ONE],
            [ONE, RationalFunction.zero()],
        ])
        rep = ExplicitRep("rotation", 2, 0, {Generator("s", 1): rot})
        verdict = burnside_irreducible(rep, {})
        assert verdict.kind == "Inconclusive"
        assert verdict.dimension == 2

    def test_sample_killing_side_condition_rejected(self):
        with pytest.raises(DenominatorVanishes):
            burnside_irreducible(
                builtin_catalog("beta3", 3),
                {"b": Fraction(0), "c": Fraction(1), "x": Fraction(3)},
            )

    def test_sample_leaving_variables_rejected(self):
        with pytest.raises(DenominatorVanishes):
            burnside_irreducible(builtin_catalog("beta3", 3), {"b": Fraction(2)})

    def test_irreducible_sample_has_no_invariant_vector(self):
        sample = {"b": Fraction(2), "c": Fraction(1), "x": Fraction(3)}
        spec = builtin_catalog("beta3", 3)
        assert burnside_irreducible(spec, sample).kind == "Irreducible"
        numeric = spec.substitute(
            {v: RationalFunction.constant(x) for v, x in sample.items()}
        )
        assert find_invariant_vector(numeric) is None

    def test_generic_verdict_aggregates(self):
        verdict = generic_irreducibility(builtin_catalog("beta3", 3), samples=5, seed=0)
        assert verdict.kind == "Irreducible"
        assert verdict.agree
        assert verdict.samples == 5
        assert verdict.label == "generic (sampled)"

    def test_sampling_is_deterministic(self):
        spec = builtin_catalog("beta7", 3)
        a = sample_parameters(spec, random.Random(3))
        b = sample_parameters(spec, random.Random(3))
        assert a == b
        assert set(a) == {"b", "c", "x", "q"}


class TestKernelWitness:
    def test_identity_family_certified_by_full_permutations(self):
        pres = build_presentation("MkVB", 3, 2)
        spec = builtin_catalog("beta2", 3)
        cert = kernel_witness(spec, pres)
        assert cert is not None and cert.certified
        assert cert.to_json() == {
            "word": "r1^1",
            "image": "identity",
            "quotient": "PermAll",
            "value": "(1 2)",
        }
        assert cert.validate(spec, pres)

    def test_sigma_rho_collision_certified_on_rho_permutations(self):
        pres = build_presentation("MkVB", 3, 2)
        spec = builtin_catalog("beta7", 3).substitute(
            {"x": rf("b"), "c": rf("b").inverse()}
        )
        cert = kernel_witness(spec, pres)
        assert cert is not None and cert.certified
        assert word_str(cert.word) == "s1 r1^0^-1"
        assert cert.quotient == "PermRhoOnly"
        assert cert.validate(spec, pres)

    def test_generic_parameters_give_nothing(self):
        pres = build_presentation("MkVB", 3, 2)
        cert = kernel_witness(builtin_catalog("beta7", 3), pres, length=3, budget=400)
        assert cert is None

    def test_matching_family_parameters_flagged_uncertified(self):
        pres = build_presentation("MkVB", 3, 2)
        spec = builtin_catalog("beta6", 3).substitute({"q": rf("x")})
        cert = kernel_witness(spec, pres, length=2, budget=300)
        assert cert is not None and not cert.certified
        assert word_str(cert.word) == "r1^0 r1^1^-1"
        assert cert.note
        assert cert.validate(spec, pres)

    def test_tampered_certificate_fails_validation(self):
        pres = build_presentation("MkVB", 3, 2)
        spec = builtin_catalog("beta2", 3)
        cert = kernel_witness(spec, pres)
        wrong = WitnessCertificate(cert.word, cert.image, cert.quotient, (0, 1, 2))
        assert not wrong.validate(spec, pres)
        empty = WitnessCertificate((), cert.image, None, None)
        assert not empty.validate(spec, pres)


class TestForbiddenAudit:
    def test_welded_family_satisfies_first_forbidden_move(self):
        # the F1 move is a defining relation on the welded side, so a welded
        # family audited against the virtual presentation must satisfy it
        pres = build_presentation("MkVB", 3, 2)
        audit = forbidden_audit(builtin_catalog("zeta2", 3), pres)
        assert audit.verdict_for("F1") is True
        assert "F1" in audit.satisfied_tags

    def test_trivial_family_satisfies_everything(self):
        pres = build_presentation("MkVB", 3, 2)
        audit = forbidden_audit(builtin_catalog("beta1", 3), pres)
        assert all(v.ok for v in audit.verdicts)

    def test_virtual_family_breaks_first_forbidden_move(self):
        # beta2's sigma block demands the b-balanced swap on the welded side,
        # so with a free swap parameter the F1 move must fail
        pres = build_presentation("MkVB", 3, 2)
        audit = forbidden_audit(builtin_catalog("beta2", 3), pres)
        assert audit.verdict_for("F1") is False

    def test_json_shape(self):
        pres = build_presentation("MkVB", 3, 2)
        payload = forbidden_audit(builtin_catalog("beta1", 3), pres).to_json()
        assert payload["name"] == "beta1"
        assert all(set(item) == {"tag", "relation", "satisfied"} for item in payload["forbidden"])
