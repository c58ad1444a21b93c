mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rqn::catalog::Catalog;
use rqn::cochains::*;
use rqn::exact_arith::*;
use rqn::lie_core::*;
use rqn::structures::Endo;

fn cat() -> &'static Catalog {
    Catalog::builtin()
}

fn alg(name: &str) -> LieAlgebra<Poly> {
    cat().algebra(name).unwrap().clone()
}

fn term(i: usize, j: usize, k: usize, c: &str) -> BracketTerm<Poly> {
    BracketTerm { i, j, k, c: p(c) }
}

fn e(dim: usize, i: usize) -> Vec<Poly> {
    (0..dim).map(|k| if k == i { p("1") } else { p("0") }).collect()
}

fn form(dim: usize, degree: usize, terms: &[(&[usize], &str)]) -> KCochain<Poly> {
    KCochain::from_terms(dim, degree, terms.iter().map(|(i, c)| (i.to_vec(), p(c))).collect()).unwrap()
}

/// `Σ_{a<b} (-1)^{a+b} c([v_a, v_b], v_0..v̂_a..v̂_b..)` on arbitrary vectors.
fn coboundary_on(l: &LieAlgebra<Poly>, c: &KCochain<Poly>, vs: &[Vec<Poly>]) -> Poly {
    let mut acc = p("0");
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            let mut args = vec![l.bracket(&vs[a], &vs[b]).unwrap()];
            args.extend(vs.iter().enumerate().filter(|(i, _)| *i != a && *i != b).map(|(_, v)| v.clone()));
            let t = c.eval_on(&args);
            acc = if (a + b) % 2 == 0 { &acc + &t } else { &acc - &t };
        }
    }
    acc
}

#[test]
fn catalog_algebras_match_their_definitions() {
    let a41 = alg("A4_1");
    assert_eq!(a41.dim(), 4);
    assert_eq!(a41.bracket_basis(1, 3), e(4, 0));
    assert_eq!(a41.bracket_basis(2, 3), e(4, 1));
    assert_eq!(a41.bracket_basis(3, 1), vec![p("-1"), p("0"), p("0"), p("0")]);
    assert!(a41.bracket_basis(0, 3).iter().all(|x| x.is_zero()));
    let h = alg("II_plus_R");
    assert_eq!(h.bracket_basis(1, 2), e(4, 0));
    assert_eq!(h.brackets().len(), 1);
    assert!(alg("abelian4").is_abelian());
    for l in cat().algebras() {
        assert!(l.check_jacobi().is_ok(), "{}", l.name());
    }
}

#[test]
fn construction_rejects_bad_input() {
    let bad = vec![term(1, 2, 1, "1"), term(2, 3, 2, "1"), term(1, 3, 3, "1")];
    assert!(matches!(LieAlgebra::new("bad", 3, vec![], bad.clone()), Err(LieError::JacobiViolation { .. })));
    assert!(LieAlgebra::new_unchecked("bad", 3, vec![], bad).is_ok());
    assert!(matches!(LieAlgebra::new("x", 3, vec![], vec![term(2, 1, 3, "1")]), Err(LieError::Schema(_))));
    assert!(matches!(LieAlgebra::new("x", 3, vec![], vec![term(1, 4, 3, "1")]), Err(LieError::Schema(_))));
    assert!(matches!(LieAlgebra::<Poly>::new("x", 0, vec![], vec![]), Err(LieError::Schema(_))));
    assert!(matches!(load_lie_algebra("{\"name\": 1}"), Err(LieError::Schema(_))));
    let doc = r#"{"name":"h","dim":3,"brackets":[{"i":1,"j":2,"k":3,"c":"2 +"}]}"#;
    assert!(matches!(load_lie_algebra(doc), Err(LieError::Arith(_))));
}

#[test]
fn documents_round_trip() {
    for l in cat().algebras() {
        let doc = LieAlgebraDoc::from_algebra(l);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(&load_lie_algebra(&text).unwrap(), l);
    }
}

#[test]
fn parameterized_algebra_is_jacobi_checked_symbolically() {
    let ok = LieAlgebra::new("book", 3, vec!["t".into()], vec![term(1, 2, 2, "1"), term(1, 3, 3, "t")]).unwrap();
    assert_eq!(ok.params(), ["t".to_string()]);
    assert!(ok.to_rational().is_none());
    assert!(alg("A4_1").to_rational().is_some());
}

#[test]
fn adjoint_data_and_coadjoint() {
    let l = alg("A4_1");
    let ad = adjoint_matrices(&l);
    assert_eq!(ad.x[1].get(3, 0), &p("-1"));
    assert_eq!(ad.y[0].get(1, 3), &p("-1"));
    assert_eq!(ad.y[0].get(3, 1), &p("1"));
    let x4 = e(4, 3);
    assert_eq!(l.coadjoint(&x4).unwrap(), -&l.ad(&x4).transpose());
    assert!(l.coadjoint(&[p("1")]).is_err());
    assert!(l.bracket(&[p("1")], &x4).is_err());
}

#[test]
fn coadjoint_pairing_identity_on_every_algebra() {
    for l in cat().algebras() {
        let n = l.dim();
        for x in 0..n {
            let adx = l.ad(&e(n, x));
            let co = l.coadjoint(&e(n, x)).unwrap();
            for a in 0..n {
                for y in 0..n {
                    // ⟨ad*_x X^a, X_y⟩ + ⟨X^a, ad_x X_y⟩
                    let s = co.get(y, a).clone() + adx.get(a, y).clone();
                    assert!(s.is_zero(), "{} x={x} a={a} y={y}", l.name());
                }
            }
        }
    }
}

#[test]
fn sklyanin_bracket_matches_coadjoint_formula() {
    let l = alg("A4_1");
    let r = rqn::structures::Bivector::from_terms(4, &[(1, 2, p("c12")), (1, 3, p("c13")), (2, 3, p("c23"))]).unwrap();
    let d = sklyanin_bracket(&l, &r);
    for i in 0..4 {
        for j in 0..4 {
            let (a, b) = (e(4, i), e(4, j));
            let lhs = d.bracket(&a, &b);
            let t1 = l.coadjoint(&r.sharp(&a)).unwrap().apply(&b);
            let t2 = l.coadjoint(&r.sharp(&b)).unwrap().apply(&a);
            let rhs: Vec<Poly> = t1.iter().zip(&t2).map(|(x, y)| x - y).collect();
            assert_eq!(lhs, rhs, "i={i} j={j}");
        }
    }
    assert!(sklyanin_bracket(&alg("abelian4"), &r).is_abelian());
}

#[test]
fn sklyanin_bracket_of_catalog_families_is_lie() {
    let ids: Vec<String> = cat()
        .fixtures()
        .iter()
        .filter(|f| f.id.starts_with("T1.") && !f.id.ends_with(".out"))
        .map(|f| f.id.clone())
        .collect();
    assert_eq!(ids.len(), 12);
    for id in ids {
        let (l, r) = cat().fixture_bivector_frac(&id).unwrap();
        let dual = sklyanin_bracket(&l, &r).as_algebra("dual");
        assert!(dual.check_jacobi().is_ok(), "{id}");
    }
}

#[test]
fn sorting_signs_and_tuples() {
    assert_eq!(sort_with_sign(&[2, 0, 1]), Some((1, vec![0, 1, 2])));
    assert_eq!(sort_with_sign(&[1, 0, 2]), Some((-1, vec![0, 1, 2])));
    assert_eq!(sort_with_sign(&[1, 1]), None);
    assert_eq!(ascending_tuples(4, 2).len(), 6);
    assert_eq!(ascending_tuples(4, 3)[0], vec![0, 1, 2]);
    assert_eq!(ascending_tuples(3, 0), vec![Vec::<usize>::new()]);
    assert!(ascending_tuples(2, 3).is_empty());
}

#[test]
fn cochain_construction_and_values() {
    let c = form(4, 3, &[(&[1, 3, 4], "n1"), (&[2, 3, 4], "2")]);
    assert_eq!(c.value(&[0, 2, 3]), p("n1"));
    assert_eq!(c.value(&[2, 0, 3]), p("-n1"));
    assert_eq!(c.value(&[0, 0, 3]), p("0"));
    assert_eq!(c.components().count(), 2);
    assert!(matches!(KCochain::from_terms(4, 2, vec![(vec![2, 1], p("1"))]), Err(CochainError::BadIndex(..))));
    assert!(matches!(KCochain::from_terms(4, 2, vec![(vec![1, 5], p("1"))]), Err(CochainError::BadIndex(..))));
    let doc = CochainDoc::from_cochain(&c);
    assert_eq!(doc.build(4).unwrap(), c);
    assert!(c.add(&c.scale(&p("-1"))).is_zero());
}

#[test]
fn x134_is_exact_on_a41() {
    let l = alg("A4_1");
    let x12 = form(4, 2, &[(&[1, 2], "1")]);
    assert_eq!(coboundary(&l, &x12), form(4, 3, &[(&[1, 3, 4], "1")]));
    let target = form(4, 3, &[(&[1, 3, 4], "1")]);
    let theta = solve_coboundary(&l, &target).unwrap().expect("exact");
    assert_eq!(coboundary(&l, &theta), target);
}

#[test]
fn a4_8_theta_coboundary() {
    let l = alg("A4_8");
    let theta = form(4, 2, &[(&[1, 4], "1/2*n2*n5"), (&[2, 3], "-1/2*n2*n5")]);
    assert_eq!(coboundary(&l, &theta), form(4, 3, &[(&[2, 3, 4], "-1/2*n2*n5")]));
    let target = form(4, 3, &[(&[2, 3, 4], "-n2*n5")]);
    let found = solve_coboundary(&l, &target).unwrap().expect("exact");
    assert_eq!(coboundary(&l, &found), target);
}

#[test]
fn non_exact_forms_are_reported() {
    // On the abelian algebra only 0 is exact.
    let l = alg("abelian4");
    assert_eq!(solve_coboundary(&l, &form(4, 3, &[(&[1, 2, 3], "x")])).unwrap(), None);
    // On A4_1 the exact 3-forms are spanned by X^134 and X^234.
    let a41 = alg("A4_1");
    assert_eq!(coboundary(&a41, &form(4, 2, &[(&[1, 3], "1")])), form(4, 3, &[(&[2, 3, 4], "1")]));
    assert_eq!(solve_coboundary(&a41, &form(4, 3, &[(&[1, 2, 4], "n1")])).unwrap(), None);
    assert_eq!(solve_coboundary(&a41, &form(4, 3, &[(&[1, 2, 3], "1"), (&[1, 3, 4], "1")])).unwrap(), None);
}

#[test]
fn cohomology_of_catalog_algebras() {
    let betti = |name: &str| -> Vec<usize> { (0..=4).map(|k| cohomology_dims(&alg(name), k).unwrap().betti).collect() };
    // Binomial for abelian, Künneth heis3 ⊗ line for II⊕ℝ.
    assert_eq!(betti("abelian4"), vec![1, 4, 6, 4, 1]);
    assert_eq!(betti("II_plus_R"), vec![1, 3, 4, 3, 1]);
    let three = cohomology_dims(&alg("abelian4"), 3).unwrap();
    assert_eq!((three.cochains, three.coboundaries), (4, 0));
    // b1 = dim of g/[g,g]; nilpotent or unimodular algebras satisfy Poincaré duality
    // and have Euler characteristic zero.
    for (name, derived) in [("A4_1", 2), ("A4_8", 3)] {
        let b = betti(name);
        assert_eq!(b[1], 4 - derived, "{name}");
        assert_eq!(b[0], 1);
        assert_eq!((b[0], b[1]), (b[4], b[3]), "{name}");
        assert_eq!(b[0] + b[2] + b[4], b[1] + b[3], "{name}");
    }
    assert!(matches!(cohomology_dims(&alg("A4_1"), 5), Err(CochainError::DegreeOutOfRange(5, 4))));
    let book = LieAlgebra::new("book", 2, vec!["t".into()], vec![term(1, 2, 2, "t")]).unwrap();
    assert!(matches!(cohomology_dims(&book, 1), Err(CochainError::ParameterizedAlgebra(_))));
}

#[test]
fn slices_reject_non_alternating_input() {
    let mut s = phi_slices(&form(4, 3, &[(&[1, 2, 3], "1")]));
    let v = s.mats[0].get(1, 2).clone();
    s.mats[0].set(1, 2, &v + &p("1"));
    assert!(matches!(slices_to_cochain(&s), Err(CochainError::InconsistentSlices(_))));
}

fn catalog_algebra() -> impl Strategy<Value = LieAlgebra<Poly>> {
    let algs: Vec<LieAlgebra<Poly>> = cat().algebras().cloned().collect();
    prop::sample::select(algs)
}

fn algebra_with_cochain(max_degree: usize) -> impl Strategy<Value = (LieAlgebra<Poly>, KCochain<Poly>)> {
    catalog_algebra().prop_flat_map(move |l| {
        let n = l.dim();
        (1..=max_degree.min(n - 1)).prop_flat_map(move |k| (Just(l.clone()), common::poly_cochain(n, k)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coboundary_squares_to_zero((l, c) in algebra_with_cochain(3)) {
        prop_assert!(coboundary(&l, &coboundary(&l, &c)).is_zero());
    }

    #[test]
    fn coboundary_agrees_with_first_principles_on_vectors(
        (l, c) in algebra_with_cochain(2),
        raw in prop::collection::vec(common::small_int(), 15)
    ) {
        let n = l.dim();
        let k = c.degree();
        let vs: Vec<Vec<Poly>> = (0..=k).map(|a| (0..n).map(|i| common::constant(raw[(a * n + i) % raw.len()].clone())).collect()).collect();
        prop_assert_eq!(coboundary(&l, &c).eval_on(&vs), coboundary_on(&l, &c, &vs));
    }

    #[test]
    fn slices_round_trip(c in common::poly_cochain(4, 3)) {
        prop_assert_eq!(slices_to_cochain(&phi_slices(&c)).unwrap(), c);
    }

    #[test]
    fn interior_product_is_a_derivation_sum(c in common::poly_cochain(4, 3), n in common::endo(4)) {
        let i = interior_n(&c, &n).unwrap();
        let cols: Vec<Vec<Poly>> = (0..4).map(|j| n.apply(&e(4, j))).collect();
        for t in ascending_tuples(4, 3) {
            let b: Vec<Vec<Poly>> = t.iter().map(|&j| e(4, j)).collect();
            let mut want = p("0");
            for slot in 0..3 {
                let mut args = b.clone();
                args[slot] = cols[t[slot]].clone();
                want = &want + &c.eval_on(&args);
            }
            prop_assert_eq!(i.value(&t), want);
        }
    }

    #[test]
    fn solved_primitives_integrate(l in catalog_algebra(), seed in common::poly_cochain(4, 2)) {
        let target = coboundary(&l, &seed);
        let theta = solve_coboundary(&l, &target).unwrap().expect("a coboundary is exact");
        prop_assert_eq!(coboundary(&l, &theta), target);
    }
}

#[test]
fn interior_product_checks_dimensions() {
    let c = form(4, 3, &[(&[1, 2, 3], "1")]);
    assert!(interior_n(&c, &Endo::<Poly>::identity(3)).is_err());
    // i_Id on a k-form multiplies by k.
    assert_eq!(interior_n(&c, &Endo::identity(4)).unwrap(), c.scale(&p("3")));
}
