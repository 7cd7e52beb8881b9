import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tubevol.errors import DomainError, NonLoxodromicError, ParseError
from tubevol.kleinian import (
    INFINITY,
    GeodesicLine,
    GroupPresentation,
    H3Point,
    MobiusClass,
    MobiusTransform,
    axis,
    classify,
    complex_length,
    evaluate_word,
    is_infinity,
    line_distance,
    line_distance_oracle,
    point_distance,
    read_presentation,
    tube_radius_upper_bound,
)

LN2 = math.log(2.0)


def translation_matrix(s: float) -> MobiusTransform:
    """Translation by s along the geodesic with endpoints -1 and 1."""
    return MobiusTransform(
        math.cosh(s / 2.0), math.sinh(s / 2.0), math.sinh(s / 2.0), math.cosh(s / 2.0)
    )


finite_complex = st.complex_numbers(
    max_magnitude=3.0, allow_nan=False, allow_infinity=False
)

conjugators = (
    st.tuples(finite_complex, finite_complex, finite_complex, finite_complex)
    .filter(lambda t: abs(t[0] * t[3] - t[1] * t[2]) > 0.1)
    .map(lambda t: MobiusTransform(*t))
)

loxodromics = st.tuples(
    st.floats(min_value=0.1, max_value=2.5),
    st.floats(min_value=-3.0, max_value=3.0),
    conjugators,
).map(
    lambda t: t[2]
    @ MobiusTransform(cmath.exp((t[0] + 1j * t[1]) / 2.0), 0, 0, cmath.exp(-(t[0] + 1j * t[1]) / 2.0))
    @ t[2].inverse()
)


class TestMobiusTransform:
    def test_normalizes_determinant(self):
        m = MobiusTransform(2.0, 0.0, 0.0, 2.0)
        assert abs(m.a * m.d - m.b * m.c - 1.0) < 1e-12

    def test_singular_rejected(self):
        with pytest.raises(DomainError):
            MobiusTransform(1.0, 1.0, 1.0, 1.0)

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            MobiusTransform(math.inf, 0.0, 0.0, 1.0)

    def test_inverse_composes_to_identity(self):
        m = MobiusTransform(1.0 + 2.0j, 0.5, -0.25j, 1.0)
        prod = m @ m.inverse()
        assert abs(prod.a - 1.0) < 1e-12 and abs(prod.b) < 1e-12
        assert abs(prod.c) < 1e-12 and abs(prod.d - 1.0) < 1e-12

    def test_apply_points(self):
        m = MobiusTransform(1.0, 1.0, 0.0, 1.0)  # z + 1
        assert m.apply(0.0 + 0j) == 1.0
        assert is_infinity(m.apply(INFINITY))
        inv = MobiusTransform(0.0, 1.0, 1.0, 0.0)  # 1/z
        assert is_infinity(inv.apply(0j))
        assert inv.apply(INFINITY) == 0.0


class TestClassify:
    def test_loxodromic(self):
        r = math.sqrt(2.0)
        assert classify(MobiusTransform(r, 0.0, 0.0, 1.0 / r)) is MobiusClass.LOXODROMIC

    def test_parabolic(self):
        assert classify(MobiusTransform(1.0, 1.0, 0.0, 1.0)) is MobiusClass.PARABOLIC

    def test_elliptic(self):
        t = math.pi / 4.0
        m = MobiusTransform(math.cos(t), -math.sin(t), math.sin(t), math.cos(t))
        assert classify(m) is MobiusClass.ELLIPTIC

    def test_identity_both_signs(self):
        assert classify(MobiusTransform(1.0, 0.0, 0.0, 1.0)) is MobiusClass.IDENTITY
        assert classify(MobiusTransform(-1.0, 0.0, 0.0, -1.0)) is MobiusClass.IDENTITY

    def test_complex_trace_is_loxodromic(self):
        m = MobiusTransform(cmath.exp(0.2 + 0.9j), 0.0, 0.0, cmath.exp(-0.2 - 0.9j))
        assert classify(m) is MobiusClass.LOXODROMIC


class TestComplexLength:
    def test_real_translation(self):
        m = MobiusTransform(math.exp(0.25), 0.0, 0.0, math.exp(-0.25))
        assert complex_length(m) == pytest.approx(0.5 + 0.0j, abs=1e-14)

    def test_with_rotation(self):
        lam = 0.3 + 0.7j
        m = MobiusTransform(cmath.exp(lam / 2.0), 0.0, 0.0, cmath.exp(-lam / 2.0))
        assert complex_length(m) == pytest.approx(lam, abs=1e-13)

    @given(loxodromics, conjugators)
    @settings(max_examples=150)
    def test_conjugation_invariant(self, m, conj):
        lam = complex_length(m)
        lam_conj = complex_length(conj @ m @ conj.inverse())
        assert lam_conj.real == pytest.approx(lam.real, abs=1e-10)
        # rotation angle matches up to sign of the chosen eigenvalue branch
        assert min(
            abs(lam_conj.imag - lam.imag), abs(lam_conj.imag + lam.imag)
        ) == pytest.approx(0.0, abs=1e-9)

    @given(loxodromics)
    @settings(max_examples=150)
    def test_trace_round_trip(self, m):
        lam = complex_length(m)
        assert lam.real > 0.0
        assert -math.pi < lam.imag <= math.pi
        tr = 2.0 * cmath.cosh(lam / 2.0)
        assert min(abs(tr - m.trace()), abs(tr + m.trace())) < 1e-10

    def test_rejects_non_loxodromic(self):
        with pytest.raises(NonLoxodromicError):
            complex_length(MobiusTransform(1.0, 1.0, 0.0, 1.0))


class TestAxis:
    def test_diagonal(self):
        line = axis(MobiusTransform(2.0, 0.0, 0.0, 0.5))
        assert is_infinity(line.p)
        assert line.q == 0.0

    def test_translated(self):
        shift = MobiusTransform(1.0, 1.0, 0.0, 1.0)  # z + 1
        m = shift @ MobiusTransform(2.0, 0.0, 0.0, 0.5) @ shift.inverse()
        line = axis(m)
        assert is_infinity(line.p)
        assert line.q == pytest.approx(1.0, abs=1e-12)

    def test_invariant_under_own_action(self):
        m = translation_matrix(1.3)
        line = axis(m)
        assert m.apply_to_line(line).same_line(line)

    @given(loxodromics)
    @settings(max_examples=100)
    def test_axis_fixed_setwise(self, m):
        line = axis(m)
        assert m.apply_to_line(line).same_line(line, tol=1e-6)

    def test_rejects_non_loxodromic(self):
        with pytest.raises(NonLoxodromicError):
            axis(MobiusTransform(1.0, 0.0, 0.0, 1.0))


class TestGeodesicLine:
    def test_unordered(self):
        assert GeodesicLine(1.0, 2.0) == GeodesicLine(2.0, 1.0)
        assert GeodesicLine(INFINITY, 0.0) == GeodesicLine(0.0, INFINITY)

    def test_distinct_endpoints_required(self):
        with pytest.raises(DomainError):
            GeodesicLine(1.0, 1.0)
        with pytest.raises(DomainError):
            GeodesicLine(INFINITY, INFINITY)

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            GeodesicLine(complex(math.nan, 0.0), 1.0)


class TestPointDistance:
    def test_vertical_axis(self):
        assert point_distance(H3Point(0j, 1.0), H3Point(0j, math.e)) == pytest.approx(
            1.0, rel=1e-14
        )

    def test_zero_iff_equal(self):
        p = H3Point(1.0 + 1.0j, 0.7)
        assert point_distance(p, p) == 0.0

    @given(
        st.tuples(finite_complex, st.floats(min_value=0.1, max_value=5.0)),
        st.tuples(finite_complex, st.floats(min_value=0.1, max_value=5.0)),
        st.tuples(finite_complex, st.floats(min_value=0.1, max_value=5.0)),
    )
    def test_symmetry_and_triangle(self, t1, t2, t3):
        p1, p2, p3 = (H3Point(w, h) for w, h in (t1, t2, t3))
        d12 = point_distance(p1, p2)
        assert d12 == pytest.approx(point_distance(p2, p1), rel=1e-12)
        assert d12 <= point_distance(p1, p3) + point_distance(p3, p2) + 1e-12

    def test_bad_height(self):
        with pytest.raises(DomainError):
            point_distance(H3Point(0j, 0.0), H3Point(0j, 1.0))


def well_separated_lines():
    pts = st.lists(
        st.tuples(
            st.floats(min_value=-3.0, max_value=3.0),
            st.floats(min_value=-3.0, max_value=3.0),
        ),
        min_size=4,
        max_size=4,
    ).map(lambda ps: [complex(x, y) for x, y in ps])

    def separated(ps):
        return all(
            abs(a - b) > 0.35 for i, a in enumerate(ps) for b in ps[i + 1 :]
        )

    return pts.filter(separated).map(
        lambda ps: (GeodesicLine(ps[0], ps[1]), GeodesicLine(ps[2], ps[3]))
    )


class TestLineDistance:
    def test_perpendicular_intersection(self):
        cd = line_distance(GeodesicLine(0j, INFINITY), GeodesicLine(1.0, -1.0))
        assert cd.d == 0.0
        assert abs(cd.phi) == pytest.approx(math.pi / 2.0, abs=1e-12)

    def test_translation_construction(self):
        # (1/3, 3) is the ln2-translate of (0, inf) along the (-1, 1) axis
        m = translation_matrix(LN2)
        assert m.apply(0j) == pytest.approx(1.0 / 3.0, abs=1e-15)
        assert m.apply(INFINITY) == pytest.approx(3.0, abs=1e-15)
        cd = line_distance(GeodesicLine(0j, INFINITY), GeodesicLine(1.0 / 3.0, 3.0))
        assert cd.d == pytest.approx(LN2, abs=1e-12)

    def test_asymptotic(self):
        cd = line_distance(GeodesicLine(0j, INFINITY), GeodesicLine(1.0, INFINITY))
        assert cd.d == 0.0
        assert not cd.same_line

    def test_same_line_flag(self):
        cd = line_distance(GeodesicLine(0j, INFINITY), GeodesicLine(INFINITY, 0j))
        assert cd.same_line
        assert cd.d == 0.0 and cd.phi == 0.0

    @given(well_separated_lines())
    @settings(max_examples=100)
    def test_symmetric_and_normalized(self, lines):
        g1, g2 = lines
        cd = line_distance(g1, g2)
        assert cd.d == pytest.approx(line_distance(g2, g1).d, abs=1e-11)
        assert cd.d >= 0.0
        assert -math.pi < cd.phi <= math.pi

    @given(well_separated_lines(), conjugators)
    @settings(max_examples=100)
    def test_invariant_under_mobius(self, lines, m):
        g1, g2 = lines
        d = line_distance(g1, g2).d
        d_moved = line_distance(m.apply_to_line(g1), m.apply_to_line(g2)).d
        assert d_moved == pytest.approx(d, abs=1e-9)

    @given(well_separated_lines())
    @settings(max_examples=30, deadline=None)
    def test_matches_oracle(self, lines):
        g1, g2 = lines
        assert line_distance(g1, g2).d == pytest.approx(
            line_distance_oracle(g1, g2), abs=1e-6
        )


class TestLineDistanceOracle:
    def test_ln2_construction(self):
        d = line_distance_oracle(
            GeodesicLine(0j, INFINITY), GeodesicLine(1.0 / 3.0, 3.0)
        )
        assert d == pytest.approx(LN2, abs=1e-9)

    def test_intersecting(self):
        d = line_distance_oracle(GeodesicLine(0j, INFINITY), GeodesicLine(1.0, -1.0))
        assert d == pytest.approx(0.0, abs=1e-5)

    def test_refinement_monotone(self):
        g1 = GeodesicLine(-1.2 + 0.3j, 2.0 - 0.4j)
        g2 = GeodesicLine(0.5 + 1.8j, -2.2 - 1.1j)
        # 2^k + 1 point grids over the same span nest, so the coarse
        # minimum can only decrease
        coarse = [
            line_distance_oracle(g1, g2, grid=g, refine=False) for g in (17, 33, 65, 129)
        ]
        assert all(a >= b for a, b in zip(coarse, coarse[1:]))

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            line_distance_oracle(GeodesicLine(0j, INFINITY), GeodesicLine(1.0, 2.0), grid=1)


class TestWordEvaluation:
    def test_letters_and_inverses(self):
        g = MobiusTransform(2.0, 0.0, 0.0, 0.5)
        h = translation_matrix(LN2)
        word = evaluate_word((g, h), "aB")
        direct = g @ h.inverse()
        assert abs(word.a - direct.a) < 1e-12

    def test_bad_letter(self):
        g = MobiusTransform(2.0, 0.0, 0.0, 0.5)
        with pytest.raises(DomainError):
            evaluate_word((g,), "b")
        with pytest.raises(DomainError):
            evaluate_word((g,), "a1")
        with pytest.raises(DomainError):
            evaluate_word((g,), "")


class TestTubeRadius:
    def fixture_presentation(self):
        g = MobiusTransform(2.0, 0.0, 0.0, 0.5)
        h = translation_matrix(LN2)
        return GroupPresentation((g, h), "a")

    def test_two_generator_fixture(self):
        result = tube_radius_upper_bound(self.fixture_presentation(), 1)
        assert result.radius == pytest.approx(0.5 * LN2, abs=1e-12)
        assert result.witness == "b"

    def test_single_generator_no_lift(self):
        pres = GroupPresentation((MobiusTransform(2.0, 0.0, 0.0, 0.5),), "a")
        result = tube_radius_upper_bound(pres, 5)
        assert math.isinf(result.radius)
        assert result.witness is None

    def test_nonincreasing_in_word_length(self):
        pres = self.fixture_presentation()
        radii = [tube_radius_upper_bound(pres, k).radius for k in (1, 2, 3)]
        assert all(a >= b for a, b in zip(radii, radii[1:]))

    def test_radius_halves_witness_distance(self):
        pres = self.fixture_presentation()
        result = tube_radius_upper_bound(pres, 2)
        core_axis = axis(pres.core())
        moved = evaluate_word(pres.generators, result.witness).apply_to_line(core_axis)
        assert 2.0 * result.radius == pytest.approx(
            line_distance(core_axis, moved).d, abs=1e-15
        )

    def test_never_exceeds_any_candidate(self):
        pres = self.fixture_presentation()
        result = tube_radius_upper_bound(pres, 3)
        core_axis = axis(pres.core())
        for word in ("b", "B", "ba", "bb", "aab"):
            moved = evaluate_word(pres.generators, word).apply_to_line(core_axis)
            cd = line_distance(core_axis, moved)
            if not cd.same_line:
                assert result.radius <= 0.5 * cd.d + 1e-12

    def test_discrete_free_group_anchor(self):
        # discrete free group on [[1,1],[1,2]] and [[1,-1],[-1,2]]: the
        # closest length-1 translate of the core axis has endpoint
        # cross-ratio 4/9, so cosh(distance) = 13/5, i.e. distance is
        # exactly ln 5 (verified symbolically)
        a = MobiusTransform(1.0, 1.0, 1.0, 2.0)
        b = MobiusTransform(1.0, -1.0, -1.0, 2.0)
        result = tube_radius_upper_bound(GroupPresentation((a, b), "a"), 1)
        assert result.radius == pytest.approx(0.5 * math.log(5.0), abs=1e-12)
        assert result.witness in ("b", "B")  # both translates sit at ln 5

    def test_presentation_conjugation_invariance(self):
        a = MobiusTransform(1.0, 1.0, 1.0, 2.0)
        b = MobiusTransform(1.0, -1.0, -1.0, 2.0)
        base = tube_radius_upper_bound(GroupPresentation((a, b), "a"), 2)
        c = MobiusTransform(1.1 + 0.3j, -0.2 + 0.7j, 0.4 - 0.1j, 0.8 + 0.2j)
        moved = GroupPresentation((c @ a @ c.inverse(), c @ b @ c.inverse()), "a")
        conj = tube_radius_upper_bound(moved, 2)
        assert conj.radius == pytest.approx(base.radius, abs=1e-9)

    def test_validation(self):
        with pytest.raises(DomainError):
            GroupPresentation((), "a")
        with pytest.raises(NonLoxodromicError):
            GroupPresentation((MobiusTransform(1.0, 1.0, 0.0, 1.0),), "a")
        with pytest.raises(DomainError):
            tube_radius_upper_bound(self.fixture_presentation(), 0)


class TestPresentationFile:
    def test_read_fixture(self, data_dir):
        pres = read_presentation(data_dir / "two_gen.txt")
        assert len(pres.generators) == 2
        assert pres.core_word == "a"
        result = tube_radius_upper_bound(pres, 1)
        assert result.radius == pytest.approx(0.5 * LN2, abs=1e-12)

    def test_read_single(self, data_dir):
        pres = read_presentation(data_dir / "single_gen.txt")
        assert len(pres.generators) == 1

    def test_missing_core(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 0 0 0 0 0 0.5 0\n")
        with pytest.raises(ParseError):
            read_presentation(path)

    def test_wrong_field_count(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 0 0 0\ncore: a\n")
        with pytest.raises(ParseError, match="line 1"):
            read_presentation(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 0 x 0 0 0 0.5 0\ncore: a\n")
        with pytest.raises(ParseError):
            read_presentation(path)
