#![allow(dead_code)]

use proptest::prelude::*;
use rqn::cochains::KCochain;
use rqn::exact_arith::{qq, Matrix, Poly, Rational};
use rqn::structures::{Bivector, Endo};

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| qq(n, d))
}

pub fn small_int() -> impl Strategy<Value = Rational> {
    (-3i64..=3).prop_map(|n| qq(n, 1))
}

/// Sum of up to five terms `c·x^a·y^b·z^c` with small exponents.
pub fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((rational(), 0u32..3, 0u32..3, 0u32..2), 0..5).prop_map(|terms| {
        terms.into_iter().fold(Poly::from(qq(0, 1)), |acc, (c, a, b, e)| {
            let m = &(&Poly::var("x").pow(a) * &Poly::var("y").pow(b)) * &Poly::var("z").pow(e);
            &acc + &m.scale(&c)
        })
    })
}

pub fn constant(c: Rational) -> Poly {
    Poly::from(c)
}

/// Cochain of the given degree with random polynomial components.
pub fn poly_cochain(dim: usize, degree: usize) -> impl Strategy<Value = KCochain<Poly>> {
    let count = rqn::cochains::ascending_tuples(dim, degree).len();
    prop::collection::vec(poly(), count).prop_map(move |vals| {
        let mut c = KCochain::zero(dim, degree);
        for (idx, v) in rqn::cochains::ascending_tuples(dim, degree).into_iter().zip(vals) {
            c.set(&idx, v);
        }
        c
    })
}

/// Sparse rational bivector: each upper entry is zero with probability ~1/2.
pub fn bivector(dim: usize) -> impl Strategy<Value = Bivector<Rational>> {
    prop::collection::vec(prop_oneof![Just(qq(0, 1)), small_int()], dim * (dim - 1) / 2).prop_map(move |vals| {
        let mut it = vals.into_iter();
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = it.next().expect("enough entries");
                m.set(j, i, -v.clone());
                m.set(i, j, v);
            }
        }
        Bivector::new(m).expect("antisymmetric by construction")
    })
}

pub fn endo(dim: usize) -> impl Strategy<Value = Endo<Poly>> {
    prop::collection::vec(prop_oneof![Just(qq(0, 1)), rational()], dim * dim).prop_map(move |vals| {
        Endo::new(Matrix::from_fn(dim, dim, |i, j| constant(vals[i * dim + j].clone()))).expect("square")
    })
}

pub fn lift_bivector(r: &Bivector<Rational>) -> Bivector<Poly> {
    r.map(|x| constant(x.clone()))
}
