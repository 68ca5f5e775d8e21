//! Reproduction suite: end-to-end checks of the dual and form machinery on
//! the worked examples, each with a wall-clock budget.

use crate::classify::{decide_pu, dual_descriptor, is_simple, Decision};
use crate::forms::{adjoint, closed_form_diagonal, closed_form_gram, form_from_iso, hermitian_inertia, s_gap_signature, signature};
use crate::gwa::Orbit;
use crate::linalg::Matrix;
use crate::presets::{cuts_dual_iso, make_preset, preset_orbit, uqsl2_q_value, uqsl2_xi, PresetId};
use crate::scalars::{Field, FieldAut, Scalar, Sign};
use crate::skewpoly::{double_sharp_closed_form, linear_power, sharp_poly, SkewPoly};
use crate::wmodule::{build, build_relaxed, dual, inner_breaks, is_isomorphic, Descriptor, Family, WeightModule};
use crate::words::{is_nonperiodic_mword, sharp_word, Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

// Pinned tolerances for the approximate-backend check.
pub const APPROX_EPS: f64 = 1e-9;
pub const LIMACON_ON_CURVE_MAX: f64 = 1e-6;
pub const LIMACON_OFF_CURVE_MIN: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub budget_ms: Option<u128>,
}

type Check = Result<String, String>;

/// Modules built along the way, re-used by the double-dual criterion.
#[derive(Default)]
pub struct Collected {
    pub modules: Vec<WeightModule>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run_one(id: u8, name: &'static str, budget: Option<u64>, f: impl FnOnce() -> Check) -> CriterionResult {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let budget = budget.map(Duration::from_secs);
    let over = budget.map_or(false, |b| elapsed > b);
    let (passed, mut detail) = match outcome {
        Ok(d) => (!over, d),
        Err(d) => (false, d),
    };
    if over {
        detail = format!("{detail}; over budget");
    }
    CriterionResult { id, name, passed, detail, elapsed_ms: elapsed.as_millis(), budget_ms: budget.map(|b| b.as_millis()) }
}

/// Run all criteria in order.
pub fn run_all() -> Vec<CriterionResult> {
    let mut c = Collected::default();
    vec![
        run_one(1, "second-kind example end to end", Some(5), || criterion_1(&mut c)),
        run_one(2, "no-breaks dual vs sharp transform", Some(30), || criterion_2(&mut c)),
        run_one(3, "second-kind dual vs sharp transform", Some(60), || criterion_3(&mut c)),
        run_one(4, "double sharp closed form", Some(5), criterion_4),
        run_one(5, "index of a diagonal form", Some(2), criterion_5),
        run_one(6, "sl2 finite-dimensional positivity", Some(2), criterion_6),
        run_one(7, "first-kind dictionary", Some(30), || criterion_7(&mut c)),
        run_one(8, "supportive intervals", Some(30), || criterion_8(&mut c)),
        run_one(9, "double dual", None, || criterion_9(&c)),
        run_one(10, "xi and q consistency", Some(5), criterion_10),
        run_one(11, "limacon degeneracy (approximate)", Some(2), criterion_11),
    ]
}

/// Run a single criterion; 9 first rebuilds the modules it needs.
pub fn run_criterion(id: u8) -> Option<CriterionResult> {
    if id == 9 {
        let mut c = Collected::default();
        for f in [criterion_1, criterion_2, criterion_3, criterion_7, criterion_8] {
            let _ = f(&mut c);
        }
        return Some(run_one(9, "double dual", None, || criterion_9(&c)));
    }
    run_all().into_iter().find(|r| r.id == id)
}

// ---- orbits ----

fn cuts_orbit(field: Field) -> Result<Arc<Orbit>, String> {
    let p = Arc::new(make_preset(&PresetId::Cuts, Some(field)).map_err(err)?);
    preset_orbit(&p, "0, 0", 8).map_err(err)
}

fn uq_orbit(n: u32, mu: &Scalar, alpha: &Scalar) -> Result<Arc<Orbit>, String> {
    let p = Arc::new(make_preset(&PresetId::uqsl2_root(n, 1).map_err(err)?, None).map_err(err)?);
    let pt = p.point(vec![mu.clone(), alpha.clone()]).map_err(err)?;
    Ok(Arc::new(crate::gwa::orbit_of(&p, &pt, 64).map_err(err)?))
}

fn uq_field(n: u32) -> Field {
    use num_integer::Integer;
    Field::cyclotomic(n.lcm(&4))
}

fn poly(field: &Field, coeffs: &[Scalar], laurent: bool) -> SkewPoly {
    SkewPoly::from_coeffs(field, coeffs, FieldAut::Identity, laurent)
}

fn random_word<R: Rng>(rng: &mut R, len: usize) -> Word {
    Word((0..len).map(|_| if rng.gen_bool(0.5) { Letter::X } else { Letter::Y }).collect())
}

fn nonzero<R: Rng>(field: &Field, rng: &mut R, bound: i64) -> Scalar {
    loop {
        let a = field.random(rng, bound);
        if !a.is_zero() {
            return a;
        }
    }
}

fn iso_found(a: &WeightModule, b: &WeightModule) -> Result<bool, String> {
    Ok(is_isomorphic(a, b).map_err(err)?.is_some())
}

// ---- criteria ----

fn cuts_wf(o: &Arc<Orbit>, a1: &Scalar, a2: &Scalar) -> Descriptor {
    let k = o.field();
    Descriptor::new(o.clone(), Family::SecondKind { word: Word(vec![Letter::X, Letter::X, Letter::Y, Letter::Y]), f: poly(k, &[a1.clone(), a2.clone(), k.one()], false) })
}

pub fn criterion_1(c: &mut Collected) -> Check {
    let o = cuts_orbit(Field::cyclotomic(8))?;
    let k = o.field().clone();
    let z = k.root_of_unity(8, 1).map_err(err)?;
    let i = k.imag_unit().map_err(err)?;
    for (a1, a2) in [(k.one(), k.one()), (&z * &z, z.clone())] {
        let m = build_relaxed(&cuts_wf(&o, &a1, &a2), None).map_err(err)?;
        // The dual is V(ω, xxyy, 1 + ā₂x + ā₁x²).
        let fs = poly(&k, &[k.one(), a2.conj(), a1.conj()], false);
        let target = build_relaxed(&Descriptor::new(o.clone(), Family::SecondKind { word: Word(vec![Letter::X, Letter::X, Letter::Y, Letter::Y]), f: fs }), None).map_err(err)?;
        let d = dual(&m).map_err(err)?;
        let iso = is_isomorphic(&d, &target).map_err(err)?.ok_or_else(|| format!("no witness for ({a1}, {a2})"))?;
        ensure(iso.intertwines(&d, &target), || "witness does not intertwine".into())?;
        c.modules.push(m);
    }
    let z3 = z.pow(3).map_err(err)?;
    let inside = [
        (k.one(), k.one()),
        (&z * &z, z.clone()),
        (k.int(-1), &i * &k.ratio(3, 2)),
        (z.pow(6).map_err(err)?, &z3 * &k.int(-2)),
        (k.one(), k.int(-5)),
        (z.clone(), k.zero()),
    ];
    let outside = [
        (k.int(2), k.one()),
        (k.one(), i.clone()),
        (z.clone(), k.one()),
        (i.clone(), k.one()),
        (k.ratio(1, 2), k.zero()),
        (k.int(-1), k.one()),
    ];
    let mut agree = 0;
    for (want, pts) in [(true, &inside), (false, &outside)] {
        for (a1, a2) in pts.iter() {
            let in_e = a1 == &a1.conj().inv().map_err(err)? && a2 == &a2.conj().div(&a1.conj()).map_err(err)?;
            ensure(in_e == want, || format!("({a1}, {a2}) misclassified by the set test"))?;
            let d = cuts_wf(&o, a1, a2);
            let v = decide_pu(&d).map_err(err)?;
            ensure((v.decision == Decision::Yes) == want, || format!("decide_pu wrong at ({a1}, {a2})"))?;
            let m = build_relaxed(&d, None).map_err(err)?;
            let self_dual = iso_found(&m, &dual(&m).map_err(err)?)?;
            ensure(self_dual == want, || format!("brute force disagrees at ({a1}, {a2})"))?;
            agree += 1;
        }
    }
    Ok(format!("2 dual witnesses; {agree}/12 verdicts agree with the set and with brute force"))
}

pub fn criterion_2(c: &mut Collected) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    while done < 50 {
        let n = if rng.gen_bool(0.5) { 4 } else { 6 };
        let k = uq_field(n);
        let cond = k.conductor().unwrap() as i64;
        let mu = k.root_of_unity(cond as u32, rng.gen_range(0..cond)).map_err(err)?;
        let alpha = k.ratio(rng.gen_range(-12..=12), rng.gen_range(1..=3));
        let o = uq_orbit(n, &mu, &alpha)?;
        if o.num_breaks() > 0 || !o.is_real() {
            continue;
        }
        let xi = o.t_product();
        let a = nonzero(&k, &mut rng, 3);
        let d = rng.gen_range(1..=3);
        let f = linear_power(&k, &a, d, FieldAut::Identity, true);
        let m = build(&Descriptor::new(o.clone(), Family::NoBreaks { f: f.clone() }), None).map_err(err)?;
        let fs = crate::skewpoly::sharp_laurent(&f, &xi).map_err(err)?;
        let target = build_relaxed(&Descriptor::new(o.clone(), Family::NoBreaks { f: fs }), None).map_err(err)?;
        ensure(iso_found(&dual(&m).map_err(err)?, &target)?, || format!("no witness for f = {f} at ({mu}, {alpha})"))?;
        c.modules.push(m);
        done += 1;
    }
    Ok(format!("{done}/50 witnesses found"))
}

fn breaks_orbits() -> Result<Vec<Arc<Orbit>>, String> {
    let mut out = vec![cuts_orbit(Field::cyclotomic(8))?];
    for (n, k) in [(4, 0), (4, 1), (6, 0), (6, 1), (6, 2)] {
        let f = uq_field(n);
        let mu = f.root_of_unity(f.conductor().unwrap(), k).map_err(err)?;
        let o = uq_orbit(n, &mu, &f.zero())?;
        if o.num_breaks() > 0 && o.is_real() {
            out.push(o);
        }
    }
    Ok(out)
}

pub fn criterion_3(c: &mut Collected) -> Check {
    let orbits = breaks_orbits()?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    let mut y_first = 0;
    while done < 25 {
        let o = &orbits[done % orbits.len()];
        let k = o.field().clone();
        let m = o.num_breaks();
        let len = m * rng.gen_range(1..=2);
        let w0 = random_word(&mut rng, len);
        let w = w0.concat(&sharp_word(&w0));
        if !is_nonperiodic_mword(&w, m) {
            continue;
        }
        let d = rng.gen_range(1..=2usize);
        let mut coeffs: Vec<Scalar> = (0..d).map(|_| k.random(&mut rng, 3)).collect();
        coeffs[0] = nonzero(&k, &mut rng, 3);
        coeffs.push(k.one());
        let f = poly(&k, &coeffs, false);
        let desc = Descriptor::new(o.clone(), Family::SecondKind { word: w.clone(), f: f.clone() });
        let module = build_relaxed(&desc, None).map_err(err)?;
        let dd = dual_descriptor(&desc).map_err(err)?;
        let dd = dd.known().ok_or_else(|| format!("no dual descriptor for {w}"))?;
        if w.z(1) == Letter::X {
            // x-first words use the transform verbatim.
            let fs = sharp_poly(&f, &o.q_value(), w0.len() / m, &FieldAut::Identity).map_err(err)?;
            ensure(dd.family == Family::SecondKind { word: w.clone(), f: fs }, || format!("dual descriptor differs for {w}"))?;
        } else {
            y_first += 1;
        }
        let target = build_relaxed(dd, None).map_err(err)?;
        ensure(iso_found(&dual(&module).map_err(err)?, &target)?, || format!("no witness for w = {w}, f = {f}"))?;
        c.modules.push(module);
        done += 1;
    }
    Ok(format!("{done}/25 witnesses over {} orbits ({y_first} y-first words, q inverted)", orbits.len()))
}

pub fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let k = Field::cyclotomic(4);
    for case in 0..100 {
        let d = rng.gen_range(1..=4usize);
        let mut coeffs: Vec<Scalar> = (0..=d).map(|_| k.random(&mut rng, 4)).collect();
        coeffs[0] = nonzero(&k, &mut rng, 4);
        coeffs[d] = nonzero(&k, &mut rng, 4);
        let f = poly(&k, &coeffs, false);
        let q = k.ratio(rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=5));
        let l = rng.gen_range(1..=2usize);
        let tau = FieldAut::Identity;
        let fss = sharp_poly(&sharp_poly(&f, &q, l, &tau).map_err(err)?, &q, l, &tau).map_err(err)?;
        let closed = double_sharp_closed_form(&f, &q, l, &tau).map_err(err)?;
        ensure(fss == closed, || format!("case {case}: f## = {fss} but closed form gives {closed}"))?;
        ensure(fss.similar(&f).map_err(err)?, || format!("case {case}: f## not similar to f = {f}"))?;
    }
    Ok("100/100 coefficientwise and similar".into())
}

pub fn criterion_5() -> Check {
    let pm = |s: &str| -> Vec<Sign> { s.chars().map(|c| if c == '+' { Sign::Pos } else { Sign::Neg }).collect() };
    let example = pm("++-++--");
    let k = Field::cyclotomic(1);
    let diag_of = |signs: &[Sign], rng: &mut ChaCha8Rng| -> Matrix {
        let n = signs.len();
        let mut h = Matrix::zeros(&k, n, n);
        let mut acc = k.one();
        for (i, s) in signs.iter().enumerate() {
            let mag = k.int(rng.gen_range(1..=7));
            acc = &acc * &if *s == Sign::Pos { mag } else { -mag };
            h.set(i, i, acc.clone());
        }
        h
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sig = hermitian_inertia(&diag_of(&example, &mut rng)).map_err(err)?;
    ensure(sig.triple() == (3, 4, 0), || format!("pivoting gives {:?}", sig.triple()))?;
    ensure(s_gap_signature(&example) == (3, 4), || "s-gap formula disagrees on the example".into())?;
    for _ in 0..50 {
        let n = rng.gen_range(1..=9);
        let signs: Vec<Sign> = (0..n).map(|_| if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg }).collect();
        let sig = hermitian_inertia(&diag_of(&signs, &mut rng)).map_err(err)?;
        ensure((sig.plus, sig.minus) == s_gap_signature(&signs), || format!("mismatch on {signs:?}"))?;
    }
    Ok("example (3,4,0); 50/50 random sequences agree".into())
}

pub fn criterion_6() -> Check {
    let p = Arc::new(make_preset(&PresetId::USl2, None).map_err(err)?);
    for n in 0..=6i64 {
        let o = preset_orbit(&p, &format!("{n}, 0"), 24).map_err(err)?;
        let d = Descriptor::new(o, Family::Supportive { lo: Some(-n), hi: Some(0), ix: BTreeSet::new() });
        let m = build(&d, None).map_err(err)?;
        let k = m.field().clone();
        let diag = closed_form_diagonal(&d, &k.one(), None).map_err(err)?;
        for (i, v, _) in &diag {
            let j = -i;
            let want: i64 = (1..=j).map(|q| q * (n - q + 1)).product();
            ensure(*v == k.int(want), || format!("N = {n}, entry {j}: {v} != {want}"))?;
        }
        let g = closed_form_gram(&m, &d, &k.one(), None).map_err(err)?;
        let sig = signature(&g).map_err(err)?;
        ensure(sig.triple() == (n as usize + 1, 0, 0), || format!("N = {n}: signature {:?}", sig.triple()))?;
    }
    Ok("N = 0..6 positive definite with product entries".into())
}

pub fn criterion_7(c: &mut Collected) -> Check {
    let k = uq_field(6);
    let o = uq_orbit(6, &k.one(), &k.zero())?;
    let m = o.num_breaks();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..30 {
        let j = rng.gen_range(0..m);
        let len = if case == 0 { 0 } else { rng.gen_range(0..=5) };
        let w = random_word(&mut rng, len);
        let desc = Descriptor::new(o.clone(), Family::FirstKind { index: j, word: w.clone() });
        let module = build(&desc, None).map_err(err)?;
        let target = build(&Descriptor::new(o.clone(), Family::FirstKind { index: j, word: sharp_word(&w) }), None).map_err(err)?;
        let d = dual(&module).map_err(err)?;
        ensure(iso_found(&d, &target)?, || format!("no witness for ({j}, {w})"))?;
        let yes = decide_pu(&desc).map_err(err)?.decision == Decision::Yes;
        ensure(yes == w.is_empty(), || format!("verdict wrong for ({j}, {w})"))?;
        ensure(iso_found(&module, &d)? == yes, || format!("brute force disagrees for ({j}, {w})"))?;
        c.modules.push(module);
    }
    Ok(format!("30/30 over an orbit with {m} breaks"))
}

pub fn criterion_8(c: &mut Collected) -> Check {
    let p = Arc::new(make_preset(&PresetId::KleinianA { t: "H*(H - 1)*(H - 3)*(H - 6)".into() }, None).map_err(err)?);
    let o = preset_orbit(&p, "0", 32).map_err(err)?;
    let breaks: Vec<i64> = o.break_indices().to_vec();
    let mut count = 0;
    for &b in &breaks {
        let lo = b + 1;
        for &hi in breaks.iter().filter(|&&h| h >= lo && h - lo < 8) {
            let inner: Vec<i64> = inner_breaks(&o, Some(lo), Some(hi)).map_err(err)?.into_iter().collect();
            for mask in 0..(1u32 << inner.len()) {
                let ix: BTreeSet<i64> = inner.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, b)| *b).collect();
                let rest: BTreeSet<i64> = inner.iter().filter(|b| !ix.contains(b)).cloned().collect();
                let desc = Descriptor::new(o.clone(), Family::Supportive { lo: Some(lo), hi: Some(hi), ix });
                let module = build(&desc, None).map_err(err)?;
                let target = build(&Descriptor::new(o.clone(), Family::Supportive { lo: Some(lo), hi: Some(hi), ix: rest }), None).map_err(err)?;
                let d = dual(&module).map_err(err)?;
                ensure(iso_found(&d, &target)?, || format!("no witness for S = [{lo}, {hi}], mask {mask}"))?;
                let yes = decide_pu(&desc).map_err(err)?.decision == Decision::Yes;
                ensure(yes == inner.is_empty(), || format!("verdict wrong for S = [{lo}, {hi}]"))?;
                ensure(yes == is_simple(&desc).map_err(err)?, || format!("simplicity disagrees for S = [{lo}, {hi}]"))?;
                ensure(iso_found(&module, &d)? == yes, || format!("brute force disagrees for S = [{lo}, {hi}]"))?;
                let dd = dual_descriptor(&desc).map_err(err)?;
                ensure(dd.known() == Some(&Descriptor::new(o.clone(), target_family(&desc, &inner))), || "dual descriptor differs".into())?;
                c.modules.push(module);
                count += 1;
            }
        }
    }
    Ok(format!("{count} (S, I_X) pairs"))
}

fn target_family(desc: &Descriptor, inner: &[i64]) -> Family {
    let Family::Supportive { lo, hi, ix } = &desc.family else { unreachable!() };
    Family::Supportive { lo: *lo, hi: *hi, ix: inner.iter().filter(|b| !ix.contains(b)).cloned().collect() }
}

pub fn criterion_9(c: &Collected) -> Check {
    ensure(!c.modules.is_empty(), || "no modules collected".into())?;
    for (i, m) in c.modules.iter().enumerate() {
        let dd = dual(&dual(m).map_err(err)?).map_err(err)?;
        ensure(iso_found(&dd, m)?, || format!("module {i}: no witness"))?;
    }
    Ok(format!("{}/{} modules", c.modules.len(), c.modules.len()))
}

pub fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let orbit_products = |n: u32, mu: &Scalar, alpha: &Scalar| -> Result<(Scalar, Scalar, usize), String> {
        let pres = make_preset(&PresetId::uqsl2_root(n, 1).map_err(err)?, None).map_err(err)?;
        let pt = pres.point(vec![mu.clone(), alpha.clone()]).map_err(err)?;
        let k = pres.field.clone();
        // Walk σ until the point recurs.
        let mut period = 0;
        let mut cur = pt.clone();
        loop {
            cur = pres.sigma_point(&cur).map_err(err)?;
            period += 1;
            if cur == pt || period > 64 {
                break;
            }
        }
        let mut xi = k.one();
        let mut q = k.one();
        for j in 1..=period as i64 {
            let v = pres.sigma_pow_t(j, &pt).map_err(err)?;
            if !v.is_zero() {
                q = &q * &v;
            }
            xi = &xi * &v;
        }
        Ok((xi, q, period))
    };
    for _ in 0..20 {
        let n = [4u32, 6, 8][rng.gen_range(0..3)];
        let k = uq_field(n);
        let PresetId::UqSl2 { q } = PresetId::uqsl2_root(n, 1).map_err(err)? else { unreachable!() };
        let cond = k.conductor().unwrap();
        let mu = k.root_of_unity(cond, rng.gen_range(0..cond as i64)).map_err(err)?;
        let alpha = k.ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        let (xi, _, _) = orbit_products(n, &mu, &alpha)?;
        let closed = uqsl2_xi(&q, &mu, &alpha).map_err(err)?;
        ensure(xi == closed, || format!("xi mismatch at q = {q}, mu = {mu}, alpha = {alpha}"))?;
        let (_, qv, _) = orbit_products(n, &mu, &k.zero())?;
        let closed = uqsl2_q_value(&q, &mu).map_err(err)?;
        ensure(qv == closed, || format!("Q mismatch at q = {q}, mu = {mu}: {qv} vs {closed}"))?;
        ensure(closed == closed.conj(), || format!("Q not real at mu = {mu}"))?;
    }
    let k = uq_field(4);
    let o = uq_orbit(4, &k.one(), &k.int(2))?;
    ensure(o.t_product() == k.int(4), || "xi != 4 at (i, 1, 2)".into())?;
    let verdict = |a: Scalar| -> Result<Decision, String> {
        let f = linear_power(&k, &a, 1, FieldAut::Identity, true);
        Ok(decide_pu(&Descriptor::new(o.clone(), Family::NoBreaks { f })).map_err(err)?.decision)
    };
    ensure(verdict(k.ratio(1, 2))? == Decision::Yes, || "x - 1/2 should be PU".into())?;
    ensure(verdict(k.one())? == Decision::No, || "x - 1 should not be PU".into())?;
    Ok("20/20 xi and Q samples; xi = 4 verdicts correct".into())
}

pub fn criterion_11() -> Check {
    let k = Field::approx(APPROX_EPS);
    let o = cuts_orbit(k.clone())?;
    let det_at = |z: &Scalar| -> Result<f64, String> {
        let a2 = &k.one() - z;
        let a1 = a2.div(&(&k.one() - &z.conj())).map_err(err)?;
        let m = build_relaxed(&cuts_wf(&o, &a1, &a2), None).map_err(err)?;
        let phi = cuts_dual_iso(&m, &a1, &a2).map_err(err)?;
        let f = form_from_iso(&m, &phi).map_err(err)?;
        Ok(f.add(&adjoint(&f)).det().magnitude())
    };
    let mut worst_on: f64 = 0.0;
    let mut best_off = f64::INFINITY;
    for s in 0..12 {
        let theta = 0.1 + s as f64 * (2.0 * std::f64::consts::PI / 12.0);
        let r = 1.0 + 2.0 * theta.cos();
        let on = k.complex(r * theta.cos(), r * theta.sin()).map_err(err)?;
        worst_on = worst_on.max(det_at(&on)?);
        // |z| ≤ 3 on the whole curve, so |z| = 4 is off it.
        let off = k.complex(4.0 * theta.cos(), 4.0 * theta.sin()).map_err(err)?;
        best_off = best_off.min(det_at(&off)?);
    }
    ensure(worst_on < LIMACON_ON_CURVE_MAX, || format!("on-curve |det| up to {worst_on:e}"))?;
    ensure(best_off > LIMACON_OFF_CURVE_MIN, || format!("off-curve |det| down to {best_off:e}"))?;
    Ok(format!("max on-curve |det| {worst_on:.1e}, min off-curve |det| {best_off:.1e}"))
}
