use super::*;
use crate::presets::{make_preset, preset_orbit, PresetId};
use crate::scalars::FieldAut;
use proptest::prelude::*;

fn cuts_orbit() -> Arc<Orbit> {
    let p = Arc::new(make_preset(&PresetId::Cuts, Some(Field::cyclotomic(8))).unwrap());
    preset_orbit(&p, "0, 0", 8).unwrap()
}

fn uq_orbit(n: u32, mu: &str, alpha: &str) -> Arc<Orbit> {
    let p = Arc::new(make_preset(&PresetId::uqsl2_root(n, 1).unwrap(), None).unwrap());
    preset_orbit(&p, &format!("{mu}, {alpha}"), 64).unwrap()
}

fn poly(o: &Orbit, coeffs: &[Scalar], laurent: bool) -> SkewPoly {
    SkewPoly::from_coeffs(o.field(), coeffs, FieldAut::Identity, laurent)
}

/// Image of the basis vector `from` at weight i under X or Y, by label.
fn image(m: &WeightModule, op: char, i: i64, from: &str) -> Vec<(String, Scalar)> {
    let o = m.orbit();
    let (mat, j) = if op == 'X' { (m.x_at(i), o.succ(i)) } else { (m.y_at(i), o.pred(i)) };
    let Some(mat) = mat else { return vec![] };
    let c = m.labels_at(i).iter().position(|l| l == from).unwrap();
    (0..mat.rows())
        .filter(|&r| !mat.get(r, c).is_zero())
        .map(|r| (m.labels_at(j)[r].clone(), mat.get(r, c).clone()))
        .collect()
}

fn second_kind_example() -> (WeightModule, Scalar, Scalar) {
    let o = cuts_orbit();
    let k = o.field().clone();
    let a1 = k.int(2) + k.imag_unit().unwrap();
    let a2 = k.ratio(1, 3) - k.root_of_unity(8, 1).unwrap();
    let f = poly(&o, &[a1.clone(), a2.clone(), k.one()], false);
    let d = Descriptor::new(o, Family::SecondKind { word: "xxyy".parse().unwrap(), f });
    (build_relaxed(&d, None).unwrap(), a1, a2)
}

#[test]
fn second_kind_action_table() {
    let (m, a1, a2) = second_kind_example();
    let k = m.field().clone();
    assert_eq!(m.total_dim(), 8);
    assert_eq!(m.labels_at(0), &["e21", "e22", "e41", "e42"]);
    assert_eq!(m.labels_at(1), &["e11", "e12", "e31", "e32"]);
    let one = k.one();
    let at = |l: &str| if l.starts_with("e1") || l.starts_with("e3") { 1 } else { 0 };
    let x = |l: &str| image(&m, 'X', at(l), l);
    let y = |l: &str| image(&m, 'Y', at(l), l);
    for s in ["1", "2"] {
        assert_eq!(x(&format!("e1{s}")), vec![(format!("e2{s}"), one.clone())]);
        assert!(x(&format!("e2{s}")).is_empty());
        assert!(x(&format!("e3{s}")).is_empty());
        assert!(y(&format!("e1{s}")).is_empty());
        assert!(y(&format!("e2{s}")).is_empty());
        assert_eq!(y(&format!("e3{s}")), vec![(format!("e2{s}"), one.clone())]);
        assert_eq!(y(&format!("e4{s}")), vec![(format!("e3{s}"), one.clone())]);
    }
    assert_eq!(x("e41"), vec![("e12".to_string(), one.clone())]);
    assert_eq!(x("e42"), vec![("e11".to_string(), -&a1), ("e12".to_string(), -&a2)]);
    assert!(m.check_relations().ok());
}

#[test]
fn second_kind_dual_table() {
    let (m, a1, a2) = second_kind_example();
    let d = dual(&m).unwrap();
    let one = m.field().one();
    let at = |l: &str| if l.starts_with("e1") || l.starts_with("e3") { 1 } else { 0 };
    let x = |l: &str| image(&d, 'X', at(l), &format!("{l}#"));
    let y = |l: &str| image(&d, 'Y', at(l), &format!("{l}#"));
    for s in ["1", "2"] {
        assert!(x(&format!("e1{s}")).is_empty());
        assert_eq!(x(&format!("e2{s}")), vec![(format!("e3{s}#"), one.clone())]);
        assert_eq!(x(&format!("e3{s}")), vec![(format!("e4{s}#"), one.clone())]);
        assert!(x(&format!("e4{s}")).is_empty());
        assert_eq!(y(&format!("e2{s}")), vec![(format!("e1{s}#"), one.clone())]);
        assert!(y(&format!("e3{s}")).is_empty());
        assert!(y(&format!("e4{s}")).is_empty());
    }
    assert_eq!(y("e11"), vec![("e42#".to_string(), -a1.conj())]);
    assert_eq!(y("e12"), vec![("e41#".to_string(), one.clone()), ("e42#".to_string(), -a2.conj())]);
    assert!(d.check_relations().ok());
}

#[test]
fn dual_pairing_contract() {
    let (m, _, _) = second_kind_example();
    let d = dual(&m).unwrap();
    let (gx, gy) = m.global_maps();
    let (dx, dy) = d.global_maps();
    // ⟨X♯φ, v⟩ = ⟨φ, Yv⟩ with ⟨e♯_a, c·e_b⟩ = c̄ δ_ab: conj(Y)ᵀ = X♯ as matrices.
    assert_eq!(dx, gy.adjoint());
    assert_eq!(dy, gx.adjoint());
}

#[test]
fn second_kind_dual_matches_sharp() {
    let (m, a1, a2) = second_kind_example();
    let k = m.field().clone();
    let fs = poly(m.orbit(), &[k.one(), a2.conj(), a1.conj()], false);
    let target = build_relaxed(&Descriptor::new(m.orbit().clone(), Family::SecondKind { word: "xxyy".parse().unwrap(), f: fs }), None).unwrap();
    let d = dual(&m).unwrap();
    let iso = is_isomorphic(&d, &target).unwrap().expect("witness");
    assert!(iso.intertwines(&d, &target));
    // Unrelated f gives no isomorphism.
    let other = poly(m.orbit(), &[k.int(5), k.one(), k.one()], false);
    let wrong = build_relaxed(&Descriptor::new(m.orbit().clone(), Family::SecondKind { word: "xxyy".parse().unwrap(), f: other }), None).unwrap();
    assert!(is_isomorphic(&d, &wrong).unwrap().is_none());
}

#[test]
fn first_kind_epsilon_chain() {
    let o = cuts_orbit();
    let d = Descriptor::new(o.clone(), Family::FirstKind { index: 0, word: Word::empty() });
    let m = build(&d, None).unwrap();
    assert_eq!(m.dims().values().cloned().collect::<Vec<_>>(), vec![1, 0]);
    assert!(m.check_relations().ok());
    assert_eq!(m.arrows().len(), 0);
    let uq = uq_orbit(6, "1", "0");
    assert_eq!(uq.num_breaks(), 2);
    let d = Descriptor::new(uq.clone(), Family::FirstKind { index: 0, word: Word::empty() });
    let m = build(&d, None).unwrap();
    assert!(m.check_relations().ok());
    // Off the breaks X is invertible along the chain.
    for i in m.support() {
        if !uq.is_break(i).unwrap() && m.dim_at(uq.succ(i)) > 0 {
            assert!(m.x_at(i).unwrap().is_invertible());
        }
    }
}

#[test]
fn no_breaks_module_over_uqsl2() {
    let o = uq_orbit(4, "1", "1");
    assert_eq!(o.num_breaks(), 0);
    let k = o.field().clone();
    let a = k.ratio(3, 5);
    let d = Descriptor::new(o.clone(), Family::NoBreaks { f: poly(&o, &[-&a, k.one()], true) });
    let m = build(&d, None).unwrap();
    assert_eq!(m.total_dim(), 2);
    assert!(m.check_relations().ok());
    for i in m.spaces() {
        assert!(m.x_at(i).unwrap().is_invertible());
        assert!(m.y_at(i).unwrap().is_invertible());
    }
}

#[test]
fn relation_faults_are_reported() {
    let o = uq_orbit(4, "1", "1");
    let k = o.field().clone();
    let f = poly(&o, &[k.int(-2), k.one()], true);
    let mut m = build(&Descriptor::new(o.clone(), Family::NoBreaks { f }), None).unwrap();
    let mut x = m.x_at(1).unwrap().clone();
    let v = x.get(0, 0) + &k.one();
    x.set(0, 0, v);
    m.set_x(1, x).unwrap();
    let r = m.check_relations();
    // X on V_1 enters YX on V_1 and XY on V_0.
    assert!([0, 1].contains(&r.violation.unwrap().index));
    // In the 8-dimensional module this entry is invisible: YX and XY vanish there.
    let (mut m8, _, _) = second_kind_example();
    let mut x = m8.x_at(1).unwrap().clone();
    x.set(0, 0, m8.field().int(2));
    m8.set_x(1, x).unwrap();
    assert!(m8.check_relations().ok());
    let o = cuts_orbit();
    let zero = WeightModule::from_parts(o, BTreeMap::new(), BTreeMap::new(), BTreeMap::new(), None, (false, false)).unwrap();
    assert!(zero.check_relations().ok());
    assert_eq!(zero.total_dim(), 0);
}

#[test]
fn point_module_is_self_dual() {
    let o = cuts_orbit();
    let dims: BTreeMap<i64, usize> = [(0, 1), (1, 0)].into_iter().collect();
    let m = WeightModule::from_parts(o, dims, BTreeMap::new(), BTreeMap::new(), None, (false, false)).unwrap();
    assert!(m.check_relations().ok());
    let d = dual(&m).unwrap();
    assert_eq!(d.global_maps(), m.global_maps());
    assert!(is_isomorphic(&m, &d).unwrap().is_some());
}

#[test]
fn isomorphism_examples() {
    let o = uq_orbit(4, "1", "2");
    let k = o.field().clone();
    let a = k.int(3) + k.imag_unit().unwrap();
    let f = linear_power_laurent(&o, &a, 2);
    let c = k.ratio(-2, 7);
    let m = build(&Descriptor::new(o.clone(), Family::NoBreaks { f: f.clone() }), None).unwrap();
    let n = build(&Descriptor::new(o.clone(), Family::NoBreaks { f: f.scale_left(&c) }), None).unwrap();
    let iso = is_isomorphic(&m, &n).unwrap().expect("unit multiple");
    assert!(iso.intertwines(&m, &n));
    let back = iso.inverse().unwrap();
    assert!(back.intertwines(&n, &m));

    let b = cuts_orbit();
    let fx = build(&Descriptor::new(b.clone(), Family::FirstKind { index: 0, word: "x".parse().unwrap() }), None).unwrap();
    let fy = build(&Descriptor::new(b.clone(), Family::FirstKind { index: 0, word: "y".parse().unwrap() }), None).unwrap();
    assert!(is_isomorphic(&fx, &fy).unwrap().is_none());
    assert!(matches!(is_isomorphic(&fx, &m), Err(ModuleError::OrbitMismatch)));
}

fn linear_power_laurent(o: &Orbit, a: &Scalar, d: u32) -> SkewPoly {
    crate::skewpoly::linear_power(o.field(), a, d, FieldAut::Identity, true)
}

#[test]
fn no_breaks_dual_matches_sharp_laurent() {
    let o = uq_orbit(4, "1", "2");
    let k = o.field().clone();
    let a = k.ratio(1, 2) + k.imag_unit().unwrap();
    let f = linear_power_laurent(&o, &a, 2);
    let m = build(&Descriptor::new(o.clone(), Family::NoBreaks { f: f.clone() }), None).unwrap();
    let fs = crate::skewpoly::sharp_laurent(&f, &o.t_product()).unwrap();
    let n = build(&Descriptor::new(o.clone(), Family::NoBreaks { f: fs }), None).unwrap();
    assert!(is_isomorphic(&dual(&m).unwrap(), &n).unwrap().is_some());
}

#[test]
fn supportive_modules_on_usl2() {
    let p = Arc::new(make_preset(&PresetId::USl2, None).unwrap());
    let o = preset_orbit(&p, "2, 0", 12).unwrap();
    // V(2): breaks at 0 and at −3 (the lowest weight −N is at index −N).
    assert!(o.is_break(0).unwrap());
    assert!(o.is_break(-3).unwrap());
    let d = Descriptor::new(o.clone(), Family::Supportive { lo: Some(-2), hi: Some(0), ix: BTreeSet::new() });
    let m = build(&d, None).unwrap();
    assert_eq!(m.total_dim(), 3);
    assert!(m.check_relations().ok());
    // Unbounded above needs a window; truncated modules report skipped relations.
    let up = Descriptor::new(o.clone(), Family::Supportive { lo: Some(1), hi: None, ix: BTreeSet::new() });
    assert_eq!(build(&up, None).unwrap_err(), ModuleError::WindowRequired);
    let w = build(&up, Some((1, 8))).unwrap();
    let r = w.check_relations();
    assert!(r.ok());
    assert!(r.skipped_at_boundary > 0);
    assert!(matches!(dual(&w), Err(ModuleError::InfiniteSupport)));
    let bad = Descriptor::new(o, Family::Supportive { lo: Some(-1), hi: Some(0), ix: BTreeSet::new() });
    assert!(build(&bad, None).is_err());
}

#[test]
fn omega_window_over_kleinian() {
    let p = Arc::new(make_preset(&PresetId::KleinianA { t: "H^2 + 1".into() }, None).unwrap());
    let o = preset_orbit(&p, "0", 20).unwrap();
    let d = Descriptor::new(o, Family::Omega);
    assert_eq!(build(&d, None).unwrap_err(), ModuleError::WindowRequired);
    let m = build(&d, Some((-5, 5))).unwrap();
    assert_eq!(m.total_dim(), 11);
    assert!(m.check_relations().ok());
    assert!(m.is_truncated());
}

#[test]
fn diagram_outputs() {
    let (m, _, _) = second_kind_example();
    let arrows = m.arrows();
    let xs = arrows.iter().filter(|a| a.op == 'X').count();
    let ys = arrows.iter().filter(|a| a.op == 'Y').count();
    assert_eq!((xs, ys), (5, 4));
    assert!(m.to_dot().starts_with("digraph"));
    assert!(m.to_ascii().contains("e41@0 --> e12@1"));
    let json = serde_json::to_value(&m).unwrap();
    assert_eq!(json["total_dim"], 8);
}

#[test]
fn descriptor_specs_round_trip() {
    let o = cuts_orbit();
    let k = o.field().clone();
    let mut params = BTreeMap::new();
    params.insert("a1".to_string(), k.int(2));
    params.insert("a2".to_string(), k.imag_unit().unwrap());
    let spec = DescriptorSpec::Wf { word: "xxyy".parse().unwrap(), f: "a1 + a2*x + x^2".into() };
    let text = toml::to_string(&spec).unwrap();
    assert_eq!(toml::from_str::<DescriptorSpec>(&text).unwrap(), spec);
    let d = spec.resolve(&o, &params).unwrap();
    let again = d.to_spec().resolve(&o, &BTreeMap::new()).unwrap();
    assert_eq!(d, again);
}

fn word_strategy() -> impl Strategy<Value = Word> {
    proptest::collection::vec(prop_oneof![Just(Letter::X), Just(Letter::Y)], 0..6).prop_map(Word)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn first_kind_breaks_follow_the_word(w in word_strategy(), index in 0usize..2) {
        let o = cuts_orbit();
        let m = build(&Descriptor::new(o.clone(), Family::FirstKind { index, word: w.clone() }), None).unwrap();
        prop_assert!(m.check_relations().ok());
        for i in m.support() {
            for (c, l) in m.labels_at(i).iter().enumerate() {
                let k: usize = l[1..].parse().unwrap();
                let killed = m.x_at(i).map_or(true, |x| (0..x.rows()).all(|r| x.get(r, c).is_zero()));
                let moves = k < w.len() && w.z(k + 1) == Letter::X;
                prop_assert_eq!(killed, !moves);
            }
        }
        let dd = dual(&dual(&m).unwrap()).unwrap();
        prop_assert!(is_isomorphic(&m, &dd).unwrap().is_some());
    }

    #[test]
    fn isomorphism_is_symmetric(w1 in word_strategy(), w2 in word_strategy()) {
        let o = cuts_orbit();
        let a = build(&Descriptor::new(o.clone(), Family::FirstKind { index: 0, word: w1 }), None).unwrap();
        let b = build(&Descriptor::new(o.clone(), Family::FirstKind { index: 0, word: w2 }), None).unwrap();
        prop_assert_eq!(is_isomorphic(&a, &b).unwrap().is_some(), is_isomorphic(&b, &a).unwrap().is_some());
        let d = dual(&a).unwrap();
        prop_assert_eq!(d.dims(), a.dims());
        prop_assert_eq!(d.support(), a.support());
    }
}
