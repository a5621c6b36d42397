use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use polycomm::ratcore::{
    count_unit_circle_roots, cyclotomic, cyclotomic_index, euler_phi, format_rational, hnf,
    minimal_polynomial, parse_rational, rat, sqrt_upper_bound, Lattice, LatticeIndex, QMatrix,
    QPolynomial, QVector, Rational,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn matrix(n: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |e| {
        let rows: Vec<&[i64]> = e.chunks(n).collect();
        QMatrix::from_ints(&rows)
    })
}

fn int_rows(n: usize) -> impl Strategy<Value = Vec<QVector>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, n), 1..=4)
        .prop_map(|rows| rows.iter().map(|r| QVector::from_ints(r)).collect())
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rationals_round_trip(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn sqrt_bound_is_tight(p in 0i64..=400, q in 1i64..=9, d in 1u64..=8) {
        let x = rat(p, q);
        let s = sqrt_upper_bound(&x, d);
        prop_assert!(&s * &s >= x);
        let below = &s - rat(1, d as i64);
        prop_assert!(below < Rational::zero() || &below * &below < x);
    }

    #[test]
    fn inverse_and_determinant(a in matrix(3), b in matrix(3)) {
        let (da, db) = (a.determinant().unwrap(), b.determinant().unwrap());
        prop_assert_eq!((&a * &b).determinant().unwrap(), &da * &db);
        if !da.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_identity());
        } else {
            prop_assert!(a.inverse().is_err());
        }
    }

    #[test]
    fn nullspace_has_complementary_dimension(a in matrix(3)) {
        let ns = a.nullspace();
        prop_assert_eq!(ns.len() + a.rank(), 3);
        for v in &ns {
            prop_assert!(a.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn minimal_polynomial_is_minimal(a in matrix(3)) {
        let p = minimal_polynomial(&a);
        prop_assert_eq!(p.leading().cloned(), Some(Rational::one()));
        prop_assert!(p.eval_matrix(&a).rows().iter().all(QVector::is_zero));
        let d = p.degree().unwrap();
        let powers: Vec<QVector> = (0..d).map(|k| a.pow(k as u64).flatten()).collect();
        prop_assert_eq!(QMatrix::from_columns(&powers, 9).unwrap().rank(), d);
    }

    #[test]
    fn circle_roots_of_products(ks in prop::collection::vec(1u64..=12, 0..=3), rs in prop::collection::vec(2i64..=5, 0..=2), inv in prop::bool::ANY) {
        let mut p = QPolynomial::one();
        let mut expected = 0usize;
        for &k in &ks {
            p = p.mul(&cyclotomic(k));
            expected += euler_phi(k) as usize;
        }
        for &r in &rs {
            let root = if inv { rat(1, r) } else { rat(-r, 1) };
            p = p.mul(&QPolynomial::linear_root(&root));
        }
        // x^2 - 2x + 2 has roots 1 ± i, off the circle.
        p = p.mul(&QPolynomial::from_ints(&[2, -2, 1]));
        let c = count_unit_circle_roots(&p);
        prop_assert_eq!(c.on_circle, expected);
        prop_assert!(!c.all_on_circle);
        prop_assert_eq!(c.degree, p.degree().unwrap());
    }

    #[test]
    fn hnf_contains_its_generators(rows in int_rows(3)) {
        let l = hnf(&rows).unwrap();
        for r in &rows {
            prop_assert!(l.contains(r));
        }
        let span = QMatrix::from_rows(rows.clone(), 3).unwrap().rank();
        prop_assert_eq!(l.rank(), span);
    }

    #[test]
    fn intersection_is_conjunction(a in int_rows(2), b in int_rows(2)) {
        let (la, lb) = (hnf(&a).unwrap(), hnf(&b).unwrap());
        let both = la.intersect(&lb).unwrap();
        for x in -8..=8 {
            for y in -8..=8 {
                let v = QVector::from_ints(&[x, y]);
                prop_assert_eq!(both.contains(&v), la.contains(&v) && lb.contains(&v));
            }
        }
    }
}

#[test]
fn cyclotomic_products_give_x_n_minus_one() {
    for n in 1..=30u64 {
        let prod = divisors(n).iter().fold(QPolynomial::one(), |acc, &d| acc.mul(&cyclotomic(d)));
        assert_eq!(prod, QPolynomial::x_pow_minus_one(n as usize), "n = {n}");
        assert_eq!(cyclotomic(n).degree(), Some(euler_phi(n) as usize));
        assert_eq!(cyclotomic_index(&cyclotomic(n).scale(&rat(-3, 2))), Some(n));
    }
}

#[test]
fn scaled_lattices_have_power_index() {
    for n in 1..=4 {
        for k in 1..=5 {
            let idx = Lattice::scaled(n, k).index_in(&Lattice::standard(n)).unwrap();
            assert_eq!(idx, LatticeIndex::Finite(BigInt::from(k).pow(n as u32)));
        }
    }
    let line = hnf(&[QVector::from_ints(&[2, 4])]).unwrap();
    assert_eq!(line.index_in(&Lattice::standard(2)).unwrap(), LatticeIndex::Infinite);
}
