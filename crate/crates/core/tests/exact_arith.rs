mod common;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;
use rqn::exact_arith::*;

fn point(x: &Rational, y: &Rational, z: &Rational) -> BTreeMap<String, Rational> {
    assignment(&[("x", x.clone()), ("y", y.clone()), ("z", z.clone())])
}

/// Horner evaluation of `Σ coeffs[i]·t^i`.
fn horner(coeffs: &[Rational], t: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t.clone() + c.clone())
}

/// Leibniz expansion over all permutations.
fn leibniz_det(m: &Matrix<Rational>) -> Rational {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.rows();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let prod = (0..n).fold(Rational::one(), |acc, i| acc * m.get(i, p[i]).clone());
            if inversions % 2 == 0 {
                prod
            } else {
                -prod
            }
        })
        .fold(Rational::zero(), |a, b| a + b)
}

#[test]
fn canonical_form_collects_and_orders() {
    let a = p("n1*n3 + n1^2 - n1*n2");
    assert_eq!(a.to_string(), "n1^2 - n1*n2 + n1*n3");
    assert_eq!(p("x + y - x"), p("y"));
    assert!(p("x*y - y*x").is_zero());
    assert_eq!(p("(x+1)^2"), p("x^2 + 2*x + 1"));
    assert_eq!(p("3/6*x").to_string(), "1/2*x");
    assert_eq!(p("-(x - y)"), p("y - x"));
}

#[test]
fn variables_order_naturally() {
    assert_eq!(p("n10 + n2 + n1").to_string(), "n1 + n2 + n10");
    assert_eq!(natural_cmp("n2", "n10"), std::cmp::Ordering::Less);
    assert_eq!(natural_cmp("a11", "a3"), std::cmp::Ordering::Greater);
}

#[test]
fn parse_errors_are_reported() {
    assert!(matches!(parse_poly("x +"), Err(ArithError::Parse { .. })));
    assert!(matches!(parse_poly("(x"), Err(ArithError::Parse { .. })));
    assert!(matches!(parse_poly("x $ y"), Err(ArithError::Parse { .. })));
    assert!(matches!(parse_poly("x^"), Err(ArithError::Parse { .. })));
    assert!(matches!(parse_poly("1/0"), Err(ArithError::Parse { .. })));
    assert!(matches!(parse_poly("x/y"), Err(ArithError::Parse { .. })));
    assert!(matches!(parse_rational("x"), Err(ArithError::Parse { .. })));
    assert_eq!(parse_rational("-3/4").unwrap(), qq(-3, 4));
}

#[test]
fn fractions_parse_and_compare_by_cross_multiplication() {
    let f = pf("c23^2/c24");
    assert_eq!(f.num(), &p("c23^2"));
    assert_eq!(f.den(), &p("c24"));
    assert_eq!(pf("x/y") * pf("y"), pf("x"));
    assert_eq!(pf("x/y") + pf("1"), pf("(x + y)/y"));
    assert_eq!(frac_to_poly(&pf("x/2")), Some(p("1/2*x")));
    assert_eq!(frac_to_poly(&pf("x/y")), None);
    let a = assignment(&[("x", q(3)), ("y", q(2))]);
    assert_eq!(eval_frac(&pf("x/y"), &a).unwrap(), Some(qq(3, 2)));
    assert_eq!(eval_frac(&pf("x/(y - 2)"), &a).unwrap(), None);
    assert!(pf("0").inv().is_none());
}

#[test]
fn eval_and_substitute() {
    let a = assignment(&[("n1", q(2)), ("n2", qq(1, 3))]);
    assert_eq!(poly_eval(&p("n1^2 - 3*n2"), &a).unwrap(), q(3));
    assert_eq!(poly_eval(&p("n3"), &a), Err(ArithError::MissingVariable("n3".into())));
    let sub = BTreeMap::from([("x".to_string(), p("y + 1"))]);
    assert_eq!(p("x^2 + z").substitute(&sub), p("y^2 + 2*y + 1 + z"));
}

#[test]
fn remainder_by_a_single_polynomial() {
    assert!(p("n2^2 - n1^2").rem_by(&p("n2 - n1")).is_zero());
    assert!(!p("n2 + n1").rem_by(&p("n2 - n1")).is_zero());
    assert_eq!(p("x^2 + 1").rem_by(&Poly::zero()), p("x^2 + 1"));
}

#[test]
fn poly_arith_dispatch() {
    let (a, b) = (p("x + 1"), p("x - 1"));
    assert_eq!(poly_arith(&a, &b, PolyOp::Add), p("2*x"));
    assert_eq!(poly_arith(&a, &b, PolyOp::Sub), p("2"));
    assert_eq!(poly_arith(&a, &b, PolyOp::Mul), p("x^2 - 1"));
}

#[test]
fn matrix_algebra() {
    let a = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(4)]]).unwrap();
    let b = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
    assert_eq!(&a * &b, Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(4), q(3)]]).unwrap());
    assert_eq!(a.transpose().get(0, 1), &q(3));
    assert_eq!(a.apply(&[q(1), q(1)]), vec![q(3), q(7)]);
    assert_eq!(a.op(Some(&b), MatOp::Add).unwrap(), a.checked_add(&b).unwrap());
    assert_eq!(a.op(None, MatOp::Transpose).unwrap(), a.transpose());
    assert_eq!(a.op(None, MatOp::ScalarMul(q(2))).unwrap(), a.scale(&q(2)));
    let wide = Matrix::<Rational>::zeros(2, 3);
    assert!(matches!(wide.checked_mul(&wide), Err(ArithError::DimensionMismatch(_))));
    assert!(matches!(a.checked_add(&wide), Err(ArithError::DimensionMismatch(_))));
    assert!(Matrix::from_rows(vec![vec![q(1)], vec![q(1), q(2)]]).is_err());
    assert!(Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(-1), q(0)]]).unwrap().is_antisymmetric());
}

#[test]
fn linear_algebra_on_small_cases() {
    let a = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]).unwrap();
    assert_eq!(rank(&a), 1);
    assert_eq!(determinant(&a), q(0));
    assert!(inverse(&a).is_none());
    let ns = nullspace(&a);
    assert_eq!(ns.len(), 1);
    assert!(a.apply(&ns[0]).iter().all(Zero::is_zero));
    let sys = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(-1)]]).unwrap();
    let x = solve_linear_exact(&sys, &[p("2*n1"), p("2*n2")]).unwrap().unwrap();
    assert_eq!(x, vec![p("n1 + n2"), p("n1 - n2")]);
    assert_eq!(solve_linear_exact(&a, &[p("1"), p("0")]).unwrap(), None);
    assert!(solve_linear_exact(&a, &[p("1")]).is_err());
}

#[test]
fn fraction_field_elimination() {
    let m = Matrix::from_rows(vec![vec![pf("x"), pf("1")], vec![pf("1"), pf("y")]]).unwrap();
    let inv = inverse(&m).unwrap();
    assert_eq!(&m * &inv, Matrix::identity(2));
    assert_eq!(determinant(&m), pf("x*y - 1"));
}

fn square(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(prop_oneof![Just(q(0)), common::small_int()], n * n)
        .prop_map(move |v| Matrix::from_fn(n, n, |i, j| v[i * n + j].clone()))
}

proptest! {
    #[test]
    fn ring_axioms(a in common::poly(), b in common::poly(), c in common::poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
        prop_assert_eq!(&a + &Poly::zero(), a);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        a in common::poly(), b in common::poly(),
        x in common::rational(), y in common::rational(), z in common::rational()
    ) {
        let pt = point(&x, &y, &z);
        let (ea, eb) = (a.eval(&pt).unwrap(), b.eval(&pt).unwrap());
        prop_assert_eq!((&a + &b).eval(&pt).unwrap(), ea.clone() + eb.clone());
        prop_assert_eq!((&a * &b).eval(&pt).unwrap(), ea * eb);
    }

    #[test]
    fn univariate_eval_matches_horner(coeffs in prop::collection::vec(common::rational(), 0..7), t in common::rational()) {
        let poly = coeffs.iter().enumerate().fold(Poly::zero(), |acc, (i, c)| &acc + &Poly::var("t").pow(i as u32).scale(c));
        prop_assert_eq!(poly.eval(&assignment(&[("t", t.clone())])).unwrap(), horner(&coeffs, &t));
    }

    #[test]
    fn display_parse_round_trip(a in common::poly()) {
        prop_assert_eq!(parse_poly(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn multiples_leave_no_remainder(a in common::poly(), g in common::poly()) {
        prop_assume!(!g.is_zero());
        prop_assert!((&a * &g).rem_by(&g).is_zero());
    }

    #[test]
    fn substitution_commutes_with_evaluation(a in common::poly(), s in common::poly(), x in common::rational(), y in common::rational(), z in common::rational()) {
        let pt = point(&x, &y, &z);
        let sub = BTreeMap::from([("x".to_string(), s.clone())]);
        let mut pt2 = pt.clone();
        pt2.insert("x".into(), s.eval(&pt).unwrap());
        prop_assert_eq!(a.substitute(&sub).eval(&pt).unwrap(), a.eval(&pt2).unwrap());
    }

    #[test]
    fn determinant_matches_leibniz(m in square(4)) {
        prop_assert_eq!(determinant(&m), leibniz_det(&m));
    }

    #[test]
    fn inverse_and_rank_agree_with_determinant(m in square(4)) {
        let det = determinant(&m);
        match inverse(&m) {
            Some(inv) => {
                prop_assert!(!det.is_zero());
                prop_assert_eq!(&m * &inv, Matrix::identity(4));
                prop_assert_eq!(rank(&m), 4);
            }
            None => {
                prop_assert!(det.is_zero());
                prop_assert!(rank(&m) < 4);
            }
        }
    }

    #[test]
    fn nullspace_is_a_kernel_basis(m in square(4)) {
        let ns = nullspace(&m);
        prop_assert_eq!(ns.len() + rank(&m), 4);
        for v in &ns {
            prop_assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        if !ns.is_empty() {
            let basis = Matrix::from_columns(ns.clone()).unwrap();
            prop_assert_eq!(rank(&basis), ns.len());
        }
    }
}
