use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::*;
use super::*;
use crate::algebra::Presentation;
use crate::expr::parse_element;
use crate::grading::standard_order;
use crate::scalar::Rational;

type Q = Rational;

fn alg(p: Presentation) -> Arc<Algebra<Q>> {
    Algebra::new(p)
}

fn el(a: &Arc<Algebra<Q>>, s: &str) -> AlgebraElement<Q> {
    parse_element(a, s).unwrap()
}

fn mat(a: &Arc<Algebra<Q>>, degree: Degree, ranks: &RankVector, rows: &[&[&str]]) -> GradedMatrix<Q> {
    let entries = rows.iter().map(|r| r.iter().map(|s| el(a, s)).collect()).collect();
    GradedMatrix::new(a, degree, ranks.clone(), ranks.clone(), entries).unwrap()
}

fn z(n: usize) -> Degree {
    Degree::zero(n)
}

#[test]
fn construction_checks_block_rule() {
    let g = alg(Presentation::grassmann(2).unwrap());
    let r = ranks(1, &[1, 1]);
    mat(&g, z(1), &r, &[&["1", "t1"], &["t2", "1"]]);
    let bad = GradedMatrix::new(
        &g,
        z(1),
        r.clone(),
        r.clone(),
        vec![vec![el(&g, "t1"), el(&g, "0")], vec![el(&g, "0"), el(&g, "1")]],
    );
    assert!(matches!(bad, Err(MatrixError::DegreeViolation { row: 0, col: 0, .. })));
    let short = GradedMatrix::new(&g, z(1), r.clone(), r, vec![vec![el(&g, "1")]]);
    assert!(matches!(short, Err(MatrixError::Dimension { .. })));

    let h = alg(Presentation::quaternion());
    let id = GradedMatrix::identity(&h, &ranks(3, &[1, 0, 0, 0, 0, 0, 0, 1]));
    assert_eq!(id.nrows(), 2);
}

#[test]
fn quaternion_one_by_one_product() {
    let h = alg(Presentation::quaternion());
    let r = ranks(3, &[1, 0, 0, 0, 0, 0, 0, 0]);
    let i = mat(&h, Degree::parse("011").unwrap(), &r, &[&["i"]]);
    let j = mat(&h, Degree::parse("101").unwrap(), &r, &[&["j"]]);
    let k = mat(&h, Degree::parse("110").unwrap(), &r, &[&["k"]]);
    let ij = i.checked_mul(&j).unwrap();
    assert_eq!(ij, k);
    assert_eq!(ij.degree(), Degree::parse("110").unwrap());
    assert_eq!(i.checked_mul(&GradedMatrix::identity(&h, &r)).unwrap(), i);
}

#[test]
fn add_requires_matching_degree() {
    let h = alg(Presentation::quaternion());
    let r = ranks(3, &[1, 0, 0, 0, 0, 0, 0, 0]);
    let i = mat(&h, Degree::parse("011").unwrap(), &r, &[&["i"]]);
    let j = mat(&h, Degree::parse("101").unwrap(), &r, &[&["j"]]);
    assert!(matches!(i.checked_add(&j), Err(MatrixError::DegreeMismatch(..))));
    assert!(i.checked_sub(&i).unwrap().is_zero());
}

#[test]
fn scalar_mul_signs() {
    let g = alg(Presentation::grassmann(1).unwrap());
    let r = ranks(1, &[1, 1]);
    let id = GradedMatrix::identity(&g, &r);
    let t = el(&g, "t1");
    let got = id.scalar_mul(&t).unwrap();
    assert_eq!(got, mat(&g, Degree::ones(1), &r, &[&["t1", "0"], &["0", "-t1"]]));
    assert_eq!(id.scalar_mul(&el(&g, "1")).unwrap(), id);

    // n = 2, a of degree (1,1): row signs follow ⟨(1,1), γᵤ⟩ over the standard order
    let p = Presentation::new(
        2,
        vec![crate::algebra::GeneratorSpec::new("a", Degree::parse("11").unwrap(), 1)],
    )
    .unwrap();
    let a2 = alg(p);
    let r2 = ranks(2, &[1, 1, 1, 1]);
    let got = GradedMatrix::identity(&a2, &r2).scalar_mul(&el(&a2, "a")).unwrap();
    let signs: Vec<_> = (0..4).map(|i| got.get(i, i).clone()).collect();
    assert_eq!(signs, vec![el(&a2, "a"), el(&a2, "a"), el(&a2, "-a"), el(&a2, "-a")]);
}

#[test]
fn super_transpose_two_by_two() {
    let g = alg(Presentation::grassmann(2).unwrap());
    let r = ranks(1, &[1, 1]);
    let t = mat(&g, z(1), &r, &[&["2", "t1"], &["t2", "3"]]);
    assert_eq!(t.graded_transpose(), mat(&g, z(1), &r, &[&["2", "t2"], &["-t1", "3"]]));
    let id = GradedMatrix::identity(&g, &r);
    assert_eq!(id.graded_transpose(), id);
}

/// Textbook supertranspose on the (even | odd) partition.
fn textbook_supertranspose(t: &GradedMatrix<Q>) -> GradedMatrix<Q> {
    let rows = t.row_ranks();
    let odd_matrix = t.degree().is_odd();
    GradedMatrix::from_fn(t.algebra(), t.degree(), t.col_ranks().clone(), rows.clone(), |i, j| {
        // result (i, j) comes from original (j, i)
        let e = t.get(j, i).clone();
        let src_row_odd = rows.block_of(j) == 1;
        let src_col_odd = t.col_ranks().block_of(i) == 1;
        let negate = match (src_row_odd, src_col_odd) {
            (false, true) => !odd_matrix,
            (true, false) => odd_matrix,
            _ => false,
        };
        if negate {
            -e
        } else {
            e
        }
    })
    .unwrap()
}

#[test]
fn n1_transpose_matches_textbook() {
    let g = alg(Presentation::grassmann(3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for sizes in [[1, 1], [2, 1], [1, 2]] {
        let r = ranks(1, &sizes);
        for d in standard_order(1) {
            let t = random_matrix(&g, d, &r, &r, &mut rng);
            assert_eq!(t.graded_transpose(), textbook_supertranspose(&t));
        }
    }
}

#[test]
fn trace_of_identity() {
    let g = alg(Presentation::grassmann(1).unwrap());
    for (p, q, want) in [(1, 1, 0), (2, 1, 1), (3, 2, 1)] {
        let id = GradedMatrix::identity(&g, &ranks(1, &[p, q]));
        assert_eq!(id.graded_trace().unwrap(), AlgebraElement::from_i64(&g, want));
    }
    let h = alg(Presentation::quaternion());
    let id = GradedMatrix::identity(&h, &ranks(3, &[1, 2, 0, 1, 0, 0, 0, 0]));
    assert_eq!(id.graded_trace().unwrap(), AlgebraElement::from_i64(&h, 4));
}

#[test]
fn trace_rejects_non_square() {
    let g = alg(Presentation::grassmann(1).unwrap());
    let m = GradedMatrix::zero(&g, z(1), ranks(1, &[1, 0]), ranks(1, &[1, 1]));
    assert!(matches!(m.graded_trace(), Err(MatrixError::NotSquare { .. })));
}

#[test]
fn commutator_examples() {
    let g = alg(Presentation::grassmann(3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = ranks(1, &[2, 1]);
    let t = random_matrix(&g, Degree::ones(1), &r, &r, &mut rng);
    let tt = t.checked_mul(&t).unwrap();
    assert_eq!(t.graded_commutator(&t).unwrap(), tt.checked_add(&tt).unwrap());
    let id = GradedMatrix::identity(&g, &r);
    assert!(t.graded_commutator(&id).unwrap().is_zero());
}

#[test]
fn invert_examples() {
    let g = alg(Presentation::grassmann(2).unwrap());
    let r = ranks(1, &[1, 1]);
    let id = GradedMatrix::identity(&g, &r);
    assert_eq!(id.invert().unwrap(), id);
    let t = mat(&g, z(1), &r, &[&["1", "t1"], &["t2", "1"]]);
    let inv = t.invert().unwrap();
    // (1 + N)⁻¹ = 1 − N + N² − … with N the off-diagonal part
    let expected = mat(&g, z(1), &r, &[&["1 + t1*t2", "-t1"], &["-t2", "1 + t2*t1"]]);
    assert_eq!(inv, expected);

    let h = alg(Presentation::quaternion());
    let rq = ranks(3, &[1, 1, 0, 0, 0, 0, 0, 0]);
    let t = mat(&h, z(3), &rq, &[&["1", "i"], &["i", "1"]]);
    let inv = t.invert().unwrap();
    assert_eq!(t.checked_mul(&inv).unwrap(), GradedMatrix::identity(&h, &rq));
    let singular = mat(&h, z(3), &rq, &[&["1", "0"], &["0", "0"]]);
    assert_eq!(singular.invert(), Err(MatrixError::NotInvertible));
}

#[test]
fn generators_are_deterministic_and_shaped() {
    let h = alg(Presentation::quaternion());
    let r = ranks(3, &[1, 1, 1, 0, 0, 0, 0, 0]);
    let a = random_block_diagonal(&h, &r, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
    let b = random_block_diagonal(&h, &r, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
    assert_eq!(a, b);
    assert!(a.is_block_diagonal());
    let u = random_unitriangular(&h, &r, true, &mut ChaCha8Rng::seed_from_u64(5));
    assert!(u.is_block_unitriangular(true));
    let l = random_unitriangular(&h, &r, false, &mut ChaCha8Rng::seed_from_u64(5));
    assert!(l.is_block_unitriangular(false));
}

fn algebra_for(n: usize) -> Arc<Algebra<Q>> {
    match n {
        1 => alg(Presentation::grassmann(3).unwrap()),
        2 => {
            let g =
                |name: &str, bits: &str, sq| crate::algebra::GeneratorSpec::new(name, Degree::parse(bits).unwrap(), sq);
            alg(Presentation::new(2, vec![g("a", "11", -1), g("b", "01", 0), g("c", "10", 0)]).unwrap())
        }
        _ => alg(Presentation::quaternion()),
    }
}

fn ranks_for(n: usize) -> RankVector {
    match n {
        1 => ranks(1, &[2, 1]),
        2 => ranks(2, &[1, 1, 1, 0]),
        _ => ranks(3, &[1, 1, 0, 0, 1, 0, 0, 0]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transpose_reverses_products(seed in any::<u64>(), n in 1usize..=3, ds in (0u32..8, 0u32..8)) {
        let a = algebra_for(n);
        let r = ranks_for(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s_deg, t_deg) = (Degree::from_mask(n, ds.0 % (1 << n)), Degree::from_mask(n, ds.1 % (1 << n)));
        let s = random_matrix(&a, s_deg, &r, &r, &mut rng);
        let t = random_matrix(&a, t_deg, &r, &r, &mut rng);
        let lhs = s.checked_mul(&t).unwrap().graded_transpose();
        let mut rhs = t.graded_transpose().checked_mul(&s.graded_transpose()).unwrap();
        if s_deg.dot(t_deg) {
            rhs = rhs.neg();
        }
        prop_assert_eq!(&lhs, &rhs);
        lhs.validate().unwrap();
        s.scalar_mul(&random_element(&a, t_deg, &mut rng)).unwrap().validate().unwrap();

        let c = s.graded_commutator(&t).unwrap();
        prop_assert!(c.graded_trace().unwrap().is_zero());
        let tc = c.graded_transpose();
        let ct = s.graded_transpose().graded_commutator(&t.graded_transpose()).unwrap().neg();
        prop_assert_eq!(tc, ct);
    }

    #[test]
    fn scalar_action_is_associative(seed in any::<u64>(), n in 1usize..=3, ds in (0u32..8, 0u32..8, 0u32..8)) {
        let a = algebra_for(n);
        let r = ranks_for(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deg = |m: u32| Degree::from_mask(n, m % (1 << n));
        let t = random_matrix(&a, deg(ds.0), &r, &r, &mut rng);
        let x = random_element(&a, deg(ds.1), &mut rng);
        let y = random_element(&a, deg(ds.2), &mut rng);
        if !x.is_zero() && !y.is_zero() {
            let lhs = t.scalar_mul(&(&x * &y)).unwrap();
            let rhs = t.scalar_mul(&y).unwrap().scalar_mul(&x).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>(), n in 1usize..=3) {
        let a = algebra_for(n);
        let r = ranks_for(n);
        let t = random_decomposable(&a, &r, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let inv = t.invert().unwrap();
        let id = GradedMatrix::identity(&a, &r);
        prop_assert_eq!(t.checked_mul(&inv).unwrap(), id.clone());
        prop_assert_eq!(inv.checked_mul(&t).unwrap(), id);
    }
}
