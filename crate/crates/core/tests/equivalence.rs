mod common;

use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;
use rqn::catalog::Catalog;
use rqn::equivalence::*;
use rqn::exact_arith::*;
use rqn::structures::{verify_rqn, RqnStructure};

fn cat() -> &'static Catalog {
    Catalog::builtin()
}

fn family() -> &'static AutoFamily {
    cat().family("A4_1_aut").unwrap()
}

fn base() -> RqnStructure<Poly> {
    cat().fixture_data("T2a.r4").unwrap().structure()
}

fn point(vals: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
    assignment(vals)
}

/// a11 = 1, a16 = 1, a3 = a7 = 0 with the three free shifts.
fn shift_witness(a4: i64, a8: i64, a12: i64) -> Witness {
    Witness {
        family: "A4_1_aut".into(),
        assignment: point(&[
            ("a3", q(0)),
            ("a4", q(a4)),
            ("a7", q(0)),
            ("a8", q(a8)),
            ("a11", q(1)),
            ("a12", q(a12)),
            ("a16", q(1)),
        ]),
    }
}

fn substitute_all(s: &RqnStructure<Poly>, sub: &BTreeMap<String, Poly>) -> RqnStructure<Poly> {
    s.map(|x| x.substitute(sub))
}

/// The base structure with n4, n5, n6 moved by the shift formulas.
fn shifted(s: &RqnStructure<Poly>, a4: i64, a8: i64, a12: i64) -> RqnStructure<Poly> {
    let (a4, a8, a12) = (Poly::from(q(a4)), Poly::from(q(a8)), Poly::from(q(a12)));
    let d = p("n3 - n2");
    let sub = BTreeMap::from([
        ("n4".to_string(), &(&p("n4") - &(&a12 * &d)) - &(&a4 * &p("n1"))),
        ("n5".to_string(), &p("n5") - &(&a8 * &p("n1 + n3 - n2"))),
        ("n6".to_string(), &(&p("n6") - &(&a12 * &d)) - &(&a4 * &p("n1"))),
    ]);
    substitute_all(s, &sub)
}

fn same_up_to_sign(a: &Poly, b: &Poly) -> bool {
    a == b || *a == -b.clone()
}

fn param_sub(vals: &BTreeMap<String, Rational>) -> BTreeMap<String, Poly> {
    vals.iter().map(|(k, v)| (k.clone(), Poly::from(v.clone()))).collect()
}

#[test]
fn r_constraints_of_the_base_structure() {
    let s = base();
    let a = &family().matrix;
    let moved = &(a * s.r.matrix()) * &a.transpose();
    let diff = &moved - s.r.matrix();
    let entries: Vec<Poly> = diff.entries().iter().filter(|e| !e.is_zero()).cloned().collect();
    let expected = [p("a11^2*a16^3 + a3*a11*a16 - a7^2*a16 - 1"), p("a7*a11*a16"), p("a11^2*a16 - 1")];
    for e in &expected {
        assert!(entries.iter().any(|x| same_up_to_sign(x, e)), "missing {e}");
    }
    for x in &entries {
        assert!(expected.iter().any(|e| same_up_to_sign(x, e)), "unexpected {x}");
    }
    let all = equivalence_constraints(family(), &s, &s, PhiAction::FifthStep).unwrap();
    for e in &expected {
        assert!(all.iter().any(|x| same_up_to_sign(x, e)), "constraint list lacks {e}");
    }
}

#[test]
fn r_constraints_vanish_on_the_solved_branch() {
    let s = base();
    let a = &family().matrix;
    for a11 in [q(2), q(-3), qq(1, 2), qq(-5, 7)] {
        let a11_4 = a11.clone() * a11.clone() * a11.clone() * a11.clone();
        let a3 = (a11_4 - q(1)) / (a11.clone() * a11.clone() * a11.clone());
        let a16 = q(1) / (a11.clone() * a11.clone());
        let vals = point(&[
            ("a3", a3.clone()),
            ("a4", q(1)),
            ("a7", q(0)),
            ("a8", q(2)),
            ("a11", a11.clone()),
            ("a12", q(-1)),
            ("a16", a16),
        ]);
        let sub = param_sub(&vals);
        let inst = a.map(|x| x.substitute(&sub));
        let diff = &(&(&inst * s.r.matrix()) * &inst.transpose()) - s.r.matrix();
        assert!(diff.is_zero(), "a11 = {a11}");
        // Off a11^4 = 1 the n-equation keeps a multiple of (a11^4 - 1) n1.
        let n_res = &(&inst * s.n.matrix()) - &(s.n.matrix() * &inst);
        let a3_n1 = &Poly::from(a3.clone()) * &p("n1");
        let n1_only = n_res.entries().iter().any(|e| same_up_to_sign(e, &a3_n1));
        assert!(n1_only, "a11 = {a11}: {:?}", n_res.entries());
        assert!(!a3.is_zero());
    }
}

#[test]
fn shifts_are_realized_under_the_diagram_action() {
    let s = base();
    let w = shift_witness(2, -1, 3);
    let t = apply_auto(&family().instance(&w.assignment).unwrap(), &s, PhiAction::Diagram).unwrap();
    assert_eq!(t.r, s.r);
    assert_eq!(t.phi, s.phi);
    assert_eq!(t, shifted(&s, 2, -1, 3));
    assert!(verify_equivalence(family(), &w, &s, &shifted(&s, 2, -1, 3), PhiAction::Diagram).unwrap());
    assert!(!verify_equivalence(family(), &shift_witness(1, -1, 3), &s, &shifted(&s, 2, -1, 3), PhiAction::Diagram)
        .unwrap());
    assert!(verify_rqn(&t).pass);
}

#[test]
fn shifts_under_the_fifth_step_action() {
    let s = base();
    // With φ ≠ 0 the slice rule only stays alternating when a4 = a12 = 0.
    let err = apply_auto(&family().instance(&shift_witness(2, -1, 3).assignment).unwrap(), &s, PhiAction::FifthStep);
    assert!(matches!(err, Err(EquivError::InconsistentSlices(_))));
    assert!(verify_equivalence(family(), &shift_witness(0, -1, 0), &s, &shifted(&s, 0, -1, 0), PhiAction::FifthStep)
        .unwrap());
    let bare = RqnStructure { phi: rqn::cochains::KCochain::zero(4, 3), ..s };
    assert!(verify_equivalence(
        family(),
        &shift_witness(2, -1, 3),
        &bare,
        &shifted(&bare, 2, -1, 3),
        PhiAction::FifthStep
    )
    .unwrap());
}

#[test]
fn the_negative_branch() {
    let s = base();
    let w = Witness {
        family: "A4_1_aut".into(),
        assignment: point(&[
            ("a3", q(0)),
            ("a4", q(0)),
            ("a7", q(0)),
            ("a8", q(0)),
            ("a11", q(-1)),
            ("a12", q(0)),
            ("a16", q(1)),
        ]),
    };
    let a = family().instance(&w.assignment).unwrap();
    assert_eq!(
        a,
        Matrix::from_fn(4, 4, |i, j| if i != j {
            q(0)
        } else if i == 3 {
            q(1)
        } else {
            q(-1)
        })
    );
    let t = apply_auto(&a, &s, PhiAction::Diagram).unwrap();
    assert_eq!(t.r, s.r);
    assert!(verify_rqn(&t).pass);
    assert!(verify_equivalence(family(), &w, &s, &t, PhiAction::Diagram).unwrap());
    // Mixed signs on the diagonal scale the slices of φ unevenly.
    assert!(matches!(apply_auto(&a, &s, PhiAction::FifthStep), Err(EquivError::InconsistentSlices(_))));
}

#[test]
fn witnesses_zero_the_constraints() {
    let s = base();
    for (w, action) in [(shift_witness(2, -1, 3), PhiAction::Diagram), (shift_witness(0, 4, 0), PhiAction::FifthStep)] {
        let t = apply_auto(&family().instance(&w.assignment).unwrap(), &s, action).unwrap();
        let cs = equivalence_constraints(family(), &s, &t, action).unwrap();
        let sub = param_sub(&w.assignment);
        for c in cs {
            assert!(c.substitute(&sub).is_zero(), "{c}");
        }
    }
}

#[test]
fn sample_search_is_seeded_and_sound() {
    let s = base();
    let w = sample_search(family(), &s, &s, PhiAction::FifthStep, 10, 7).unwrap();
    assert_eq!(family().instance(&w.assignment).unwrap(), Matrix::identity(4));
    assert_eq!(sample_search(family(), &s, &s, PhiAction::FifthStep, 10, 7), Some(w));
    let target = shifted(&s, 2, -1, 3);
    if let Some(found) = sample_search(family(), &s, &target, PhiAction::Diagram, 64, 7) {
        assert!(verify_equivalence(family(), &found, &s, &target, PhiAction::Diagram).unwrap());
    }
    // r = X1∧X2 - X2∧X3 cannot be moved onto r = 0.
    let zero = RqnStructure::zero(s.algebra.clone());
    assert_eq!(sample_search(family(), &s, &zero, PhiAction::Diagram, 16, 1), None);
}

#[test]
fn automorphism_checks_and_family_errors() {
    let l = cat().algebra("A4_1").unwrap();
    for f in cat().families() {
        assert!(is_automorphism(cat().algebra(&f.algebra).unwrap(), &f.matrix), "{}", f.name);
    }
    assert!(is_automorphism(l, &Matrix::identity(4)));
    let swap =
        Matrix::from_fn(
            4,
            4,
            |i, j| if (i, j) == (0, 1) || (i, j) == (1, 0) || (i == j && i > 1) { p("1") } else { p("0") },
        );
    assert!(!is_automorphism(l, &swap));
    assert!(matches!(AutoFamily::new("bad", l, vec![], swap, vec![]), Err(EquivError::NotAutomorphism(_))));
    let mut missing = shift_witness(0, 0, 0).assignment;
    missing.remove("a8");
    assert_eq!(family().instance(&missing), Err(EquivError::MissingParameter("a8".into())));
    let mut vanishing = shift_witness(0, 0, 0).assignment;
    vanishing.insert("a11".into(), q(0));
    assert!(matches!(family().instance(&vanishing), Err(EquivError::Vanishing(_))));
    let singular = Matrix::<Rational>::zeros(4, 4);
    assert_eq!(apply_auto(&singular, &base(), PhiAction::Diagram), Err(EquivError::NotInvertible));
    let other = RqnStructure::zero(cat().algebra("A4_8").unwrap().clone());
    assert!(matches!(
        verify_equivalence(family(), &shift_witness(0, 0, 0), &base(), &other, PhiAction::Diagram),
        Err(EquivError::AlgebraMismatch(..))
    ));
    let doc = AutoFamilyDoc::from_family(family());
    assert_eq!(&doc.build(l).unwrap(), family());
    for f in cat().families() {
        let id = f.identity_assignment().unwrap();
        assert_eq!(f.instance(&id).unwrap(), Matrix::identity(f.matrix.rows()), "{}", f.name);
    }
}

#[test]
fn phi_action_names() {
    assert_eq!("fifth-step".parse::<PhiAction>().unwrap(), PhiAction::FifthStep);
    assert_eq!("diagram".parse::<PhiAction>().unwrap(), PhiAction::Diagram);
    assert!("pushforward".parse::<PhiAction>().is_err());
    assert_eq!(PhiAction::default().to_string(), "fifth-step");
    assert_eq!(PhiAction::Diagram.to_string(), "diagram");
}

fn nonzero() -> impl Strategy<Value = Rational> {
    common::rational().prop_filter("nonzero", |x| !x.is_zero())
}

fn a41_instance() -> impl Strategy<Value = Matrix<Rational>> {
    (
        common::small_int(),
        common::small_int(),
        common::small_int(),
        common::small_int(),
        nonzero(),
        common::small_int(),
        nonzero(),
    )
        .prop_map(|(a3, a4, a7, a8, a11, a12, a16)| {
            family()
                .instance(&point(&[
                    ("a3", a3),
                    ("a4", a4),
                    ("a7", a7),
                    ("a8", a8),
                    ("a11", a11),
                    ("a12", a12),
                    ("a16", a16),
                ]))
                .unwrap()
        })
}

fn a41_structures() -> impl Strategy<Value = RqnStructure<Poly>> {
    let ids = cat()
        .fixtures()
        .iter()
        .filter(|f| f.algebra == "A4_1" && f.checks.contains(&rqn::catalog::Check::Rqn))
        .map(|f| f.id.clone())
        .collect::<Vec<_>>();
    (prop::sample::select(ids), prop::collection::vec(common::small_int(), 9)).prop_map(|(id, vals)| {
        let pt: BTreeMap<String, Rational> =
            vals.iter().enumerate().map(|(i, v)| (format!("n{}", i + 1), v.clone())).collect();
        let s = cat().fixture_data(&id).unwrap().structure();
        // Fix the n's and keep any other parameters symbolic.
        substitute_all(&s, &param_sub(&pt))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diagram_action_is_a_group_action(a in a41_instance(), b in a41_instance(), s in a41_structures()) {
        prop_assert_eq!(apply_auto(&Matrix::identity(4), &s, PhiAction::Diagram).unwrap(), s.clone());
        let ab = &a * &b;
        let step = apply_auto(&a, &apply_auto(&b, &s, PhiAction::Diagram).unwrap(), PhiAction::Diagram).unwrap();
        prop_assert_eq!(apply_auto(&ab, &s, PhiAction::Diagram).unwrap(), step);
    }

    #[test]
    fn verdicts_are_invariant_under_the_diagram_action(a in a41_instance(), s in a41_structures(), mutate in any::<bool>()) {
        let s = if mutate {
            let mut m = s.n.matrix().clone();
            let v = m.get(1, 2).clone();
            m.set(1, 2, &v + &p("1"));
            RqnStructure { n: rqn::structures::Endo::new(m).unwrap(), ..s }
        } else {
            s
        };
        let t = apply_auto(&a, &s, PhiAction::Diagram).unwrap();
        prop_assert_eq!(verify_rqn(&s).pass, verify_rqn(&t).pass);
    }
}
