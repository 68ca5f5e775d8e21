//! Admissible forms on weight modules over real orbits.
//!
//! A form is stored as its Gram matrix G[a][c] = F(e_a, e_c) in the module's
//! global basis. F is linear in the first argument and conjugate-linear in
//! the second, so F(v, w) = vᵀ·G·w̄ and admissibility reads
//! XᵀG = G·conj(Y), YᵀG = G·conj(X).

use crate::linalg::Matrix;
use crate::scalars::{Field, Scalar, ScalarError, Sign};
use crate::wmodule::{dual, inner_breaks, Descriptor, Family, ModuleError, ModuleIso, WeightModule};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormError {
    #[error("the map is not a module morphism into the dual")]
    NotAMorphism,
    #[error("form is not symmetric (F differs from its adjoint)")]
    NotSymmetric,
    #[error("a pivot is not real: {0}")]
    NotReal(String),
    #[error("no closed form for this descriptor: {0}")]
    IneligibleDescriptor(String),
    #[error("Gram matrix does not fit the module")]
    ShapeMismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramForm {
    /// (offset, dim) of each weight space in the global basis.
    layout: BTreeMap<i64, (usize, usize)>,
    gram: Matrix,
}

fn layout_of(m: &WeightModule) -> BTreeMap<i64, (usize, usize)> {
    m.offsets().into_iter().map(|(i, o)| (i, (o, m.dim_at(i)))).collect()
}

impl GramForm {
    pub fn new(m: &WeightModule, gram: Matrix) -> Result<GramForm, FormError> {
        let n = m.total_dim();
        if gram.rows() != n || gram.cols() != n {
            return Err(FormError::ShapeMismatch);
        }
        Ok(GramForm { layout: layout_of(m), gram })
    }

    /// Block-diagonal form from per-weight blocks.
    pub fn from_blocks(m: &WeightModule, blocks: &BTreeMap<i64, Matrix>) -> Result<GramForm, FormError> {
        let layout = layout_of(m);
        let n = m.total_dim();
        let mut g = Matrix::zeros(m.field(), n, n);
        for (i, b) in blocks {
            let &(o, d) = layout.get(i).ok_or(FormError::ShapeMismatch)?;
            if b.rows() != d || b.cols() != d {
                return Err(FormError::ShapeMismatch);
            }
            for r in 0..d {
                for c in 0..d {
                    g.set(o + r, o + c, b.get(r, c).clone());
                }
            }
        }
        Ok(GramForm { layout, gram: g })
    }

    pub fn zero(m: &WeightModule) -> GramForm {
        let n = m.total_dim();
        GramForm { layout: layout_of(m), gram: Matrix::zeros(m.field(), n, n) }
    }

    pub fn field(&self) -> &Field {
        self.gram.field()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_mut(&mut self) -> &mut Matrix {
        &mut self.gram
    }

    pub fn block(&self, i: i64) -> Option<Matrix> {
        let &(o, d) = self.layout.get(&i)?;
        let rows = (0..d).map(|r| (0..d).map(|c| self.gram.get(o + r, o + c).clone()).collect()).collect();
        Some(Matrix::from_rows(self.field(), rows))
    }

    pub fn blocks(&self) -> BTreeMap<i64, Matrix> {
        self.layout.keys().filter(|i| self.layout[i].1 > 0).map(|&i| (i, self.block(i).unwrap())).collect()
    }

    pub fn add(&self, other: &GramForm) -> GramForm {
        GramForm { layout: self.layout.clone(), gram: self.gram.add(&other.gram) }
    }

    pub fn sub(&self, other: &GramForm) -> GramForm {
        GramForm { layout: self.layout.clone(), gram: self.gram.sub(&other.gram) }
    }

    pub fn scale(&self, c: &Scalar) -> GramForm {
        GramForm { layout: self.layout.clone(), gram: self.gram.scale(c) }
    }

    /// Blockwise determinants are nonzero (and off-diagonal blocks vanish).
    pub fn is_nondegenerate(&self) -> bool {
        self.blocks().values().all(|b| !b.det().is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.gram == self.gram.adjoint()
    }

    pub fn det(&self) -> Scalar {
        self.gram.det()
    }
}

impl Serialize for GramForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let blocks: Vec<serde_json::Value> = self
            .blocks()
            .iter()
            .map(|(i, b)| {
                let rows: Vec<Vec<String>> = b.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                serde_json::json!({"index": i, "block": rows})
            })
            .collect();
        blocks.serialize(s)
    }
}

/// F(v, w) = Φ(v)(w): G[a][c] is the coefficient of e♯_c in Φ(e_a).
pub fn form_from_iso(m: &WeightModule, iso: &ModuleIso) -> Result<GramForm, FormError> {
    let d = dual(m)?;
    if !iso.intertwines(m, &d) {
        return Err(FormError::NotAMorphism);
    }
    let blocks: BTreeMap<i64, Matrix> = iso.blocks.iter().map(|(i, t)| (*i, t.transpose())).collect();
    GramForm::from_blocks(m, &blocks)
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub checked: usize,
    /// First failing pair (a, c) and which axiom.
    pub violation: Option<(usize, usize, String)>,
}

impl AdmissibilityReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Check F(Xv, w) = F(v, Yw), F(Yv, w) = F(v, Xw) and weight orthogonality
/// on basis pairs. Pairs touching a truncated edge are skipped.
pub fn check_admissible(m: &WeightModule, f: &GramForm) -> AdmissibilityReport {
    let g = &f.gram;
    let (x, y) = m.global_maps();
    let n = m.total_dim();
    let mut weight = vec![0i64; n];
    for (&i, &(o, d)) in &f.layout {
        for k in 0..d {
            weight[o + k] = i;
        }
    }
    let (cut_lo, cut_hi) = m.cuts();
    let first = m.spaces().first().cloned();
    let last = m.spaces().last().cloned();
    let edge = |a: usize| (cut_lo && Some(weight[a]) == first) || (cut_hi && Some(weight[a]) == last);
    let lhs1 = x.transpose().mul(g);
    let rhs1 = g.mul(&y.conj());
    let lhs2 = y.transpose().mul(g);
    let rhs2 = g.mul(&x.conj());
    let mut report = AdmissibilityReport { checked: 0, violation: None };
    for a in 0..n {
        for c in 0..n {
            if weight[a] != weight[c] && !g.get(a, c).is_zero() {
                report.violation.get_or_insert((a, c, "weight orthogonality".into()));
            }
        }
    }
    for a in 0..n {
        for c in 0..n {
            if edge(a) || edge(c) {
                continue;
            }
            report.checked += 1;
            if lhs1.get(a, c) != rhs1.get(a, c) {
                report.violation.get_or_insert((a, c, "F(Xv,w) = F(v,Yw)".into()));
            }
            if lhs2.get(a, c) != rhs2.get(a, c) {
                report.violation.get_or_insert((a, c, "F(Yv,w) = F(v,Xw)".into()));
            }
        }
    }
    report
}

/// F♯(v, w) = conj F(w, v): the conjugate transpose.
pub fn adjoint(f: &GramForm) -> GramForm {
    GramForm { layout: f.layout.clone(), gram: f.gram.adjoint() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Signature {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.plus, self.minus, self.zero)
    }
}

/// Inertia of a Hermitian matrix by congruence diagonalization.
pub fn hermitian_inertia(h: &Matrix) -> Result<Signature, FormError> {
    if *h != h.adjoint() {
        return Err(FormError::NotSymmetric);
    }
    let mut g = h.to_rows();
    let mut sig = Signature { plus: 0, minus: 0, zero: 0 };
    let mut live: Vec<usize> = (0..h.rows()).collect();
    while !live.is_empty() {
        let pivot = live.iter().cloned().find(|&i| !g[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let pair = live.iter().flat_map(|&i| live.iter().map(move |&j| (i, j))).find(|&(i, j)| !g[i][j].is_zero());
                let Some((i, j)) = pair else { break };
                // e_i ← e_i + c·e_j with c = G_ij makes G_ii = 2|G_ij|².
                let c = g[i][j].clone();
                let cc = c.conj();
                let n = g.len();
                for k in 0..n {
                    let v = &g[i][k] + &(&c * &g[j][k]);
                    g[i][k] = v;
                }
                for k in 0..n {
                    let v = &g[k][i] + &(&cc * &g[k][j]);
                    g[k][i] = v;
                }
                i
            }
        };
        let d = g[p][p].clone();
        if !d.is_real() {
            return Err(FormError::NotReal(d.to_string()));
        }
        match d.real_sign()? {
            Sign::Pos => sig.plus += 1,
            Sign::Neg => sig.minus += 1,
            Sign::Zero => unreachable!("nonzero pivot"),
        }
        let dinv = d.inv()?;
        live.retain(|&k| k != p);
        for &j in &live {
            let f = &g[j][p] * &dinv;
            if f.is_zero() {
                continue;
            }
            let fc = f.conj();
            for &k in live.iter().chain(std::iter::once(&p)) {
                let v = &g[j][k] - &(&f * &g[p][k]);
                g[j][k] = v;
            }
            for &k in live.iter().chain(std::iter::once(&p)) {
                let v = &g[k][j] - &(&fc * &g[k][p]);
                g[k][j] = v;
            }
        }
    }
    sig.zero = h.rows() - sig.plus - sig.minus;
    Ok(sig)
}

/// Signature summed over weight blocks. Needs F = F♯.
pub fn signature(f: &GramForm) -> Result<Signature, FormError> {
    if !f.is_symmetric() {
        return Err(FormError::NotSymmetric);
    }
    let mut total = Signature { plus: 0, minus: 0, zero: 0 };
    for b in f.blocks().values() {
        let s = hermitian_inertia(b)?;
        total.plus += s.plus;
        total.minus += s.minus;
        total.zero += s.zero;
    }
    Ok(total)
}

/// Index of diag(a₀, a₀a₁, …, a₀⋯a_{p−1}) from the positions of the
/// negative a_i: (Σ (s_{2i+1} − s_{2i}), Σ (s_{2i} − s_{2i−1})).
pub fn s_gap_signature(signs: &[Sign]) -> (usize, usize) {
    assert!(signs.iter().all(|s| *s != Sign::Zero), "signs must be nonzero");
    let p = signs.len() as i64;
    let neg: Vec<i64> = signs.iter().enumerate().filter(|(_, s)| **s == Sign::Neg).map(|(i, _)| i as i64).collect();
    let r = neg.len() as i64;
    let s = |i: i64| -> i64 {
        if i <= 0 {
            0
        } else if i > r {
            p
        } else {
            neg[(i - 1) as usize]
        }
    };
    let (mut plus, mut minus) = (0, 0);
    for i in 0..=(r / 2 + 1) {
        plus += s(2 * i + 1) - s(2 * i);
        if i >= 1 {
            minus += s(2 * i) - s(2 * i - 1);
        }
    }
    (plus as usize, minus as usize)
}

// ---- closed forms ----

/// Diagonal entries Ψ_λ(e, e) on the cyclic basis of the closed-form
/// families, as (orbit index, value, c) where the cyclic vector equals
/// c times the corresponding built basis vector.
pub fn closed_form_diagonal(
    desc: &Descriptor,
    lambda: &Scalar,
    window: Option<(i64, i64)>,
) -> Result<Vec<(i64, Scalar, Scalar)>, FormError> {
    let o = &desc.orbit;
    let field = o.field().clone();
    let one = field.one();
    let t = |i: i64| -> Result<Scalar, FormError> { Ok(o.t_at(i).map_err(ModuleError::from)?.clone()) };
    let mut out = Vec::new();
    match &desc.family {
        Family::Omega => {
            let (a, b) = window.ok_or(ModuleError::WindowRequired)?;
            // e_n = X^n e_0 for n ≥ 0, e_n = Y^{|n|} e_0 for n < 0.
            for n in a..=b {
                let (val, c) = if n >= 0 {
                    let prod = (0..n).try_fold(one.clone(), |acc, j| t(j).map(|x| acc * x))?;
                    (&prod * lambda, prod)
                } else {
                    let prod = (1..=-n).try_fold(one.clone(), |acc, j| t(-j).map(|x| acc * x))?;
                    (&prod * lambda, one.clone())
                };
                out.push((n, val, c));
            }
        }
        Family::Supportive { lo, hi, ix } => {
            if !ix.is_empty() || !inner_breaks(o, *lo, *hi)?.is_empty() {
                return Err(FormError::IneligibleDescriptor("needs I(S) = ∅".into()));
            }
            match (lo, hi) {
                (_, Some(h)) => {
                    // e_{−n} = Y^n e_0 with e_0 at the maximal element.
                    let low = match (lo, window) {
                        (Some(l), Some((wa, _))) => (*l).max(wa),
                        (Some(l), None) => *l,
                        (None, Some((wa, _))) => wa,
                        (None, None) => return Err(ModuleError::WindowRequired.into()),
                    };
                    let mut acc = one.clone();
                    for n in 0..=(h - low) {
                        if n > 0 {
                            acc = &acc * &t(h - n)?;
                        }
                        out.push((h - n, &acc * lambda, one.clone()));
                    }
                    out.reverse();
                }
                (Some(l), None) => {
                    // e_n = X^n e_0 with e_0 at the minimal element.
                    let (_, wb) = window.ok_or(ModuleError::WindowRequired)?;
                    let mut acc = one.clone();
                    for n in 0..=(wb - l) {
                        if n > 0 {
                            acc = &acc * &t(l + n - 1)?;
                        }
                        out.push((l + n, &acc * lambda, acc.clone()));
                    }
                }
                (None, None) => return Err(FormError::IneligibleDescriptor("S has no extremal element".into())),
            }
        }
        Family::FirstKind { index, word } if word.is_empty() => {
            // v_k = Y^k v_0 at σ^{−k}(𝔪_j), k = 0..p_j − 1.
            let b = o.break_at(*index);
            let pj = o.gaps()[(*index + o.num_breaks() - 1) % o.num_breaks()] as i64;
            let mut acc = one.clone();
            for k in 0..pj {
                if k > 0 {
                    acc = &acc * &t(b - k)?;
                }
                out.push((o.canon(b - k), &acc * lambda, one.clone()));
            }
            out.reverse();
        }
        _ => return Err(FormError::IneligibleDescriptor(format!("{} modules have no closed form here", desc.kind()))),
    }
    Ok(out)
}

/// The closed-form Gram matrix on the built module of `desc`.
pub fn closed_form_gram(m: &WeightModule, desc: &Descriptor, lambda: &Scalar, window: Option<(i64, i64)>) -> Result<GramForm, FormError> {
    let field = m.field().clone();
    let mut blocks = BTreeMap::new();
    for (i, val, c) in closed_form_diagonal(desc, lambda, window)? {
        if m.dim_at(i) == 0 {
            continue;
        }
        let norm = &c * &c.conj();
        blocks.insert(i, Matrix::from_rows(&field, vec![vec![val.div(&norm)?]]));
    }
    GramForm::from_blocks(m, &blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{cuts_dual_iso, make_preset, preset_orbit, PresetId};
    use crate::scalars::FieldAut;
    use crate::skewpoly::SkewPoly;
    use crate::wmodule::{build, build_relaxed, is_isomorphic};
    use proptest::prelude::*;
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn signs(s: &str) -> Vec<Sign> {
        s.chars().map(|c| if c == '+' { Sign::Pos } else { Sign::Neg }).collect()
    }

    #[test]
    fn index_example() {
        assert_eq!(s_gap_signature(&signs("++-++--")), (3, 4));
        let k = Field::cyclotomic(4);
        let vals = [1, 2, -1, 3, 1, -2, -5];
        let mut acc = k.one();
        let diag: Vec<Scalar> = vals
            .iter()
            .map(|v| {
                acc = &acc * &k.int(*v);
                acc.clone()
            })
            .collect();
        let mut h = Matrix::zeros(&k, 7, 7);
        for (i, d) in diag.into_iter().enumerate() {
            h.set(i, i, d);
        }
        assert_eq!(hermitian_inertia(&h).unwrap().triple(), (3, 4, 0));
    }

    #[test]
    fn small_signatures() {
        let k = Field::cyclotomic(4);
        assert_eq!(hermitian_inertia(&Matrix::identity(&k, 4)).unwrap().triple(), (4, 0, 0));
        let d = Matrix::from_rows(&k, vec![vec![k.one(), k.zero()], vec![k.zero(), k.int(-1)]]);
        assert_eq!(hermitian_inertia(&d).unwrap().triple(), (1, 1, 0));
        // Zero diagonal with a complex off-diagonal entry: a hyperbolic plane.
        let i = k.imag_unit().unwrap();
        let h = Matrix::from_rows(&k, vec![vec![k.zero(), i.clone()], vec![-&i, k.zero()]]);
        assert_eq!(hermitian_inertia(&h).unwrap().triple(), (1, 1, 0));
        let z = Matrix::zeros(&k, 3, 3);
        assert_eq!(hermitian_inertia(&z).unwrap().triple(), (0, 0, 3));
        let ns = Matrix::from_rows(&k, vec![vec![k.zero(), k.one()], vec![k.zero(), k.zero()]]);
        assert_eq!(hermitian_inertia(&ns), Err(FormError::NotSymmetric));
    }

    #[test]
    fn adjoint_examples() {
        let k = Field::cyclotomic(4);
        let o = preset_orbit(&Arc::new(make_preset(&PresetId::Cuts, None).unwrap()), "0, 0", 4).unwrap();
        let dims: BTreeMap<i64, usize> = [(0, 2), (1, 0)].into_iter().collect();
        let m = WeightModule::from_parts(o, dims, BTreeMap::new(), BTreeMap::new(), None, (false, false)).unwrap();
        let b = Matrix::from_rows(&k, vec![vec![k.zero(), k.one()], vec![k.zero(), k.zero()]]);
        let f = GramForm::from_blocks(&m, &[(0, b.clone())].into_iter().collect()).unwrap();
        assert_eq!(adjoint(&f).block(0).unwrap(), b.transpose());
        assert_eq!(adjoint(&adjoint(&f)), f);
        let lam = k.int(2) + k.imag_unit().unwrap();
        let dims1: BTreeMap<i64, usize> = [(0, 1), (1, 0)].into_iter().collect();
        let m1 = WeightModule::from_parts(m.orbit().clone(), dims1, BTreeMap::new(), BTreeMap::new(), None, (false, false)).unwrap();
        let iso = ModuleIso { blocks: [(0, Matrix::scalar(&k, 1, &lam)), (1, Matrix::zeros(&k, 0, 0))].into_iter().collect() };
        let f1 = form_from_iso(&m1, &iso).unwrap();
        assert_eq!(f1.block(0).unwrap(), Matrix::scalar(&k, 1, &lam));
        assert_eq!(adjoint(&f1).block(0).unwrap(), Matrix::scalar(&k, 1, &lam.conj()));
    }

    fn cuts_module(a1: &Scalar, a2: &Scalar) -> WeightModule {
        let field = a1.field();
        let o = preset_orbit(&Arc::new(make_preset(&PresetId::Cuts, Some(field.clone())).unwrap()), "0, 0", 4).unwrap();
        let f = SkewPoly::from_coeffs(&field, &[a1.clone(), a2.clone(), field.one()], FieldAut::Identity, false);
        build_relaxed(&Descriptor::new(o, Family::SecondKind { word: "xxyy".parse().unwrap(), f }), None).unwrap()
    }

    #[test]
    fn second_kind_form_from_explicit_iso() {
        let k = Field::cyclotomic(8);
        let zeta = k.root_of_unity(8, 1).unwrap();
        let (a1, a2) = (&zeta * &zeta, &zeta * &k.ratio(3, 2));
        let m = cuts_module(&a1, &a2);
        let phi = cuts_dual_iso(&m, &a1, &a2).unwrap();
        let f = form_from_iso(&m, &phi).unwrap();
        assert!(check_admissible(&m, &f).ok());
        assert!(f.is_nondegenerate());
        // Φ̂(e31, e11) = f31(e11) = b2 = −ā2/ā1.
        let off = m.offsets();
        let pos = |i: i64, l: &str| off[&i] + m.labels_at(i).iter().position(|x| x == l).unwrap();
        let b2 = -(a2.conj().div(&a1.conj()).unwrap());
        assert_eq!(f.gram().get(pos(1, "e31"), pos(1, "e11")), &b2);
        assert_eq!(f.gram().get(pos(1, "e31"), pos(1, "e12")), &k.one());
        let sym = f.add(&adjoint(&f));
        assert!(check_admissible(&m, &sym).ok());
        let skew = f.sub(&adjoint(&f)).scale(&k.imag_unit().unwrap());
        assert!(check_admissible(&m, &skew).ok());
        assert!(signature(&sym).is_ok());
        // Off the set E the explicit map is not a morphism.
        let m2 = cuts_module(&k.int(2), &k.one());
        let phi2 = cuts_dual_iso(&m2, &k.int(2), &k.one()).unwrap();
        assert_eq!(form_from_iso(&m2, &phi2), Err(FormError::NotAMorphism));
    }

    #[test]
    fn admissibility_faults() {
        let k = Field::cyclotomic(8);
        let m = cuts_module(&k.one(), &k.one());
        let zero = GramForm::zero(&m);
        assert!(check_admissible(&m, &zero).ok());
        assert!(!zero.is_nondegenerate());
        let mut bad = zero.clone();
        bad.gram_mut().set(0, 7, k.one());
        let r = check_admissible(&m, &bad);
        assert_eq!(r.violation.unwrap().2, "weight orthogonality");
    }

    #[test]
    fn usl2_finite_dimensional_positivity() {
        let p = Arc::new(make_preset(&PresetId::USl2, None).unwrap());
        for n in 0..=4i64 {
            let o = preset_orbit(&p, &format!("{n}, 0"), 16).unwrap();
            let d = Descriptor::new(o, Family::Supportive { lo: Some(-n), hi: Some(0), ix: BTreeSet::new() });
            let m = build(&d, None).unwrap();
            let k = m.field().clone();
            let diag = closed_form_diagonal(&d, &k.one(), None).unwrap();
            for (i, v, _) in &diag {
                let j = -i;
                let want = (1..=j).fold(1i64, |acc, q| acc * q * (n - q + 1));
                assert_eq!(*v, k.int(want));
            }
            let g = closed_form_gram(&m, &d, &k.one(), None).unwrap();
            assert!(check_admissible(&m, &g).ok());
            assert_eq!(signature(&g).unwrap().triple(), (n as usize + 1, 0, 0));
        }
    }

    #[test]
    fn windowed_omega_form() {
        let p = Arc::new(make_preset(&PresetId::KleinianA { t: "H^2 - 2*H + 5".into() }, None).unwrap());
        let o = preset_orbit(&p, "0", 20).unwrap();
        let d = Descriptor::new(o, Family::Omega);
        let m = build(&d, Some((-4, 4))).unwrap();
        let k = m.field().clone();
        let g = closed_form_gram(&m, &d, &k.int(-3), Some((-4, 4))).unwrap();
        assert!(check_admissible(&m, &g).ok());
        assert_eq!(signature(&g).unwrap().triple(), (0, 9, 0));
        let diag = closed_form_diagonal(&d, &k.one(), Some((-4, 4))).unwrap();
        assert_eq!(diag[4].1, k.one());
        // n = 1: t at the base, H = 0 gives 5.
        assert_eq!(diag[5].1, k.int(5));
    }

    #[test]
    fn first_kind_epsilon_form() {
        let pu = Arc::new(make_preset(&PresetId::uqsl2_root(6, 1).unwrap(), None).unwrap());
        let o = preset_orbit(&pu, "1, 0", 16).unwrap();
        for j in 0..o.num_breaks() {
            let d = Descriptor::new(o.clone(), Family::FirstKind { index: j, word: crate::words::Word::empty() });
            let m = build(&d, None).unwrap();
            let k = m.field().clone();
            let g = closed_form_gram(&m, &d, &k.one(), None).unwrap();
            assert!(check_admissible(&m, &g).ok());
            assert!(g.is_nondegenerate());
            // Matches the form of an explicit isomorphism to the dual.
            let iso = is_isomorphic(&m, &dual(&m).unwrap()).unwrap().unwrap();
            let f = form_from_iso(&m, &iso).unwrap();
            assert!(check_admissible(&m, &f).ok());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn s_gap_agrees_with_pivoting(bits in proptest::collection::vec(any::<bool>(), 1..10)) {
            let k = Field::cyclotomic(1);
            let sg: Vec<Sign> = bits.iter().map(|b| if *b { Sign::Pos } else { Sign::Neg }).collect();
            let mut acc = k.one();
            let n = sg.len();
            let mut h = Matrix::zeros(&k, n, n);
            for (i, s) in sg.iter().enumerate() {
                acc = &acc * &k.int(if *s == Sign::Pos { 2 } else { -3 });
                h.set(i, i, acc.clone());
            }
            let sig = hermitian_inertia(&h).unwrap();
            prop_assert_eq!((sig.plus, sig.minus), s_gap_signature(&sg));
        }
    }
}
