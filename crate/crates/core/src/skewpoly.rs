//! Skew polynomial rings K[x; τ] and skew Laurent rings K[x, x⁻¹; τ].
//!
//! Multiplication follows x·a = τ(a)·x. Coefficients are written on the left.

use crate::expr::{Expr, ExprError};
use crate::linalg::Matrix;
pub use crate::scalars::FieldAut;
use crate::scalars::{Field, Scalar, ScalarError};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SkewError {
    #[error("operands live in different rings (twist or Laurent flag differ)")]
    TwistMismatch,
    #[error("operation needs the identity twist")]
    UnsupportedTwist,
    #[error("xi must be nonzero")]
    ZeroXi,
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("bad normalization: {0}")]
    BadNormalization(String),
    #[error("negative exponent in a polynomial (non-Laurent) ring")]
    NegativeExponent,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Clone)]
pub struct SkewPoly {
    field: Field,
    coeffs: BTreeMap<i64, Scalar>,
    twist: FieldAut,
    laurent: bool,
}

impl SkewPoly {
    pub fn new(
        field: &Field,
        coeffs: impl IntoIterator<Item = (i64, Scalar)>,
        twist: FieldAut,
        laurent: bool,
    ) -> Result<SkewPoly, SkewError> {
        let mut map: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (k, c) in coeffs {
            let c = field.adopt(&c)?;
            let s = match map.remove(&k) {
                Some(old) => old + c,
                None => c,
            };
            if !s.is_zero() {
                map.insert(k, s);
            }
        }
        if !laurent && map.keys().any(|&k| k < 0) {
            return Err(SkewError::NegativeExponent);
        }
        Ok(SkewPoly { field: field.clone(), coeffs: map, twist: twist.normalized(field), laurent })
    }

    /// From coefficients α₀, α₁, … (lowest degree first).
    pub fn from_coeffs(field: &Field, coeffs: &[Scalar], twist: FieldAut, laurent: bool) -> SkewPoly {
        SkewPoly::new(field, coeffs.iter().cloned().enumerate().map(|(k, c)| (k as i64, c)), twist, laurent)
            .expect("nonnegative exponents")
    }

    pub fn zero_like(&self) -> SkewPoly {
        SkewPoly { field: self.field.clone(), coeffs: BTreeMap::new(), twist: self.twist.clone(), laurent: self.laurent }
    }

    pub fn monomial(&self, c: Scalar, k: i64) -> SkewPoly {
        let mut p = self.zero_like();
        if !c.is_zero() {
            p.coeffs.insert(k, c);
        }
        p
    }

    /// Parse polynomial text in the variable `x`; other names come from `params`.
    /// Division by a constant multiplies by its inverse on the left.
    pub fn parse(
        field: &Field,
        src: &str,
        twist: FieldAut,
        laurent: bool,
        params: &BTreeMap<String, Scalar>,
    ) -> Result<SkewPoly, SkewError> {
        let e = Expr::parse(src)?;
        let zero = SkewPoly { field: field.clone(), coeffs: BTreeMap::new(), twist: twist.normalized(field), laurent };
        eval_skew(&e, &zero, params)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn twist(&self) -> &FieldAut {
        &self.twist
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().cloned()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().cloned()
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.values().next_back()
    }

    /// α₀..α_d of a polynomial with nonnegative exponents.
    pub fn dense(&self) -> Vec<Scalar> {
        match self.degree() {
            None => vec![],
            Some(d) => (0..=d).map(|k| self.coeff(k)).collect(),
        }
    }

    fn same_ring(&self, other: &SkewPoly) -> Result<(), SkewError> {
        if self.laurent == other.laurent && self.twist.same(&other.twist, &self.field) {
            Ok(())
        } else {
            Err(SkewError::TwistMismatch)
        }
    }

    pub fn add(&self, other: &SkewPoly) -> Result<SkewPoly, SkewError> {
        self.same_ring(other)?;
        SkewPoly::new(&self.field, self.coeffs.clone().into_iter().chain(other.coeffs.clone()), self.twist.clone(), self.laurent)
    }

    pub fn neg(&self) -> SkewPoly {
        SkewPoly { coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &SkewPoly) -> Result<SkewPoly, SkewError> {
        self.add(&other.neg())
    }

    /// Twisted product: (a x^i)(b x^j) = a τ^i(b) x^{i+j}.
    pub fn mul(&self, other: &SkewPoly) -> Result<SkewPoly, SkewError> {
        self.same_ring(other)?;
        let mut terms = Vec::new();
        for (i, a) in &self.coeffs {
            let aut = self.twist.pow(*i, &self.field)?;
            for (j, b) in &other.coeffs {
                terms.push((i + j, a * &aut.apply(b)?));
            }
        }
        SkewPoly::new(&self.field, terms, self.twist.clone(), self.laurent)
    }

    /// c·f.
    pub fn scale_left(&self, c: &Scalar) -> SkewPoly {
        let terms: Vec<(i64, Scalar)> = self.coeffs.iter().map(|(k, a)| (*k, c * a)).collect();
        SkewPoly::new(&self.field, terms, self.twist.clone(), self.laurent).expect("same exponents")
    }

    /// f·c = Σ α_k τ^k(c) x^k.
    pub fn scale_right(&self, c: &Scalar) -> Result<SkewPoly, SkewError> {
        let mut terms = Vec::new();
        for (k, a) in &self.coeffs {
            terms.push((*k, a * &self.twist.apply_pow(*k, c)?));
        }
        SkewPoly::new(&self.field, terms, self.twist.clone(), self.laurent)
    }

    /// Apply an automorphism to every coefficient.
    pub fn map_coeffs(&self, aut: &FieldAut) -> Result<SkewPoly, SkewError> {
        let mut terms = Vec::new();
        for (k, a) in &self.coeffs {
            terms.push((*k, aut.apply(a)?));
        }
        SkewPoly::new(&self.field, terms, self.twist.clone(), self.laurent)
    }

    /// x^{−val}·f for Laurent f; identity for polynomials.
    pub fn strip_valuation(&self) -> Result<SkewPoly, SkewError> {
        let v = self.valuation().unwrap_or(0);
        if !self.laurent || v == 0 {
            return Ok(self.clone());
        }
        let unit = self.monomial(self.field.one(), -v);
        unit.mul(self)
    }

    /// c⁻¹·f with c the leading coefficient.
    pub fn monic(&self) -> Result<SkewPoly, SkewError> {
        let c = self.leading().ok_or_else(|| SkewError::BadNormalization("zero polynomial".into()))?;
        Ok(self.scale_left(&c.inv()?))
    }

    /// Remove a common left unit: strip the valuation (Laurent) and make monic.
    pub fn normalized(&self) -> Result<SkewPoly, SkewError> {
        self.strip_valuation()?.monic()
    }

    /// Is P/Pf indecomposable? Identity twist only.
    pub fn is_indecomposable(&self) -> Result<bool, SkewError> {
        if !self.twist.is_identity(&self.field) {
            return Err(SkewError::UnsupportedTwist);
        }
        if self.is_zero() {
            return Ok(false);
        }
        let g = self.normalized()?;
        let d = g.degree().unwrap();
        if d == 0 {
            return Ok(false);
        }
        if g.coeffs.len() == 1 {
            return Ok(true);
        }
        let a = -(g.coeff(d - 1).div(&self.field.int(d))?);
        Ok(g == linear_power(&self.field, &a, d as u32, g.twist.clone(), g.laurent))
    }

    /// Irreducible over the algebraic closure: degree one after normalization.
    pub fn is_irreducible(&self) -> Result<bool, SkewError> {
        if !self.twist.is_identity(&self.field) {
            return Err(SkewError::UnsupportedTwist);
        }
        Ok(!self.is_zero() && self.normalized()?.degree() == Some(1))
    }

    /// Does P/Pf ≅ P/Pg hold as left modules?
    pub fn similar(&self, other: &SkewPoly) -> Result<bool, SkewError> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.is_zero() && other.is_zero());
        }
        let f = self.normalized()?;
        let g = other.normalized()?;
        if self.twist.is_identity(&self.field) {
            return Ok(f == g);
        }
        semilinear_similar(&f, &g)
    }
}

/// (x − a)^d.
pub fn linear_power(field: &Field, a: &Scalar, d: u32, twist: FieldAut, laurent: bool) -> SkewPoly {
    let lin = SkewPoly::from_coeffs(field, &[-a, field.one()], twist.clone(), laurent);
    let mut acc = SkewPoly::from_coeffs(field, &[field.one()], twist, laurent);
    for _ in 0..d {
        acc = acc.mul(&lin).expect("same ring");
    }
    acc
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &SkewPoly) -> bool {
        self.laurent == other.laurent && self.twist.same(&other.twist, &self.field) && self.coeffs == other.coeffs
    }
}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let simple = !cs[1..].contains([' ', '+', '-', '*', '/']) || (cs.starts_with('-') && cs[1..].chars().all(|ch| ch.is_ascii_digit()));
            let cs = if simple { cs } else { format!("({cs})") };
            match *k {
                0 => write!(f, "{cs}")?,
                _ => {
                    let xs = if *k == 1 { "x".to_string() } else { format!("x^{k}") };
                    if c.is_one() {
                        write!(f, "{xs}")?
                    } else {
                        write!(f, "{cs}*{xs}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for SkewPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn eval_skew(e: &Expr, zero: &SkewPoly, params: &BTreeMap<String, Scalar>) -> Result<SkewPoly, SkewError> {
    let field = &zero.field;
    let lookup = |n: &str| params.get(n).cloned();
    if !e.variables().contains("x") {
        let c = e.eval(field, &lookup)?;
        return Ok(zero.monomial(c, 0));
    }
    Ok(match e {
        Expr::Var(_) => zero.monomial(field.one(), 1),
        Expr::Add(a, b) => eval_skew(a, zero, params)?.add(&eval_skew(b, zero, params)?)?,
        Expr::Sub(a, b) => eval_skew(a, zero, params)?.sub(&eval_skew(b, zero, params)?)?,
        Expr::Mul(a, b) => eval_skew(a, zero, params)?.mul(&eval_skew(b, zero, params)?)?,
        Expr::Neg(a) => eval_skew(a, zero, params)?.neg(),
        Expr::Div(a, b) => {
            if b.variables().contains("x") {
                return Err(SkewError::BadNormalization("division by a polynomial".into()));
            }
            let c = b.eval(field, &lookup)?.inv()?;
            eval_skew(a, zero, params)?.scale_left(&c)
        }
        Expr::Pow(a, k) => {
            let base = eval_skew(a, zero, params)?;
            if *k < 0 {
                if !zero.laurent {
                    return Err(SkewError::NegativeExponent);
                }
                if base.coeffs.len() != 1 || !base.leading().unwrap().is_one() {
                    return Err(SkewError::BadNormalization("only monomials x^k may have negative powers".into()));
                }
                let d = base.degree().unwrap();
                zero.monomial(field.one(), d * k)
            } else {
                let mut acc = zero.monomial(field.one(), 0);
                for _ in 0..*k {
                    acc = acc.mul(&base)?;
                }
                acc
            }
        }
        _ => unreachable!("leaf without x"),
    })
}

/// {k} = base·τ(base)···τ^{k−1}(base).
pub fn pochhammer(base: &Scalar, twist: &FieldAut, k: usize) -> Result<Scalar, SkewError> {
    let field = base.field();
    let mut acc = field.one();
    let mut cur = base.clone();
    for _ in 0..k {
        acc = &acc * &cur;
        cur = twist.apply(&cur)?;
    }
    Ok(acc)
}

fn check_ends(f: &SkewPoly) -> Result<(Vec<Scalar>, usize), SkewError> {
    let v = f.valuation().ok_or_else(|| SkewError::BadNormalization("zero polynomial".into()))?;
    if v != 0 {
        return Err(SkewError::BadNormalization("constant term must be nonzero".into()));
    }
    let a = f.dense();
    let d = a.len() - 1;
    Ok((a, d))
}

/// f♯ = Σ_k {k}_ξ · τ^k(conj α_{d−k}) · x^k for f in the skew Laurent ring.
/// A nonzero valuation is stripped first (multiplying by a unit).
pub fn sharp_laurent(f: &SkewPoly, xi: &Scalar) -> Result<SkewPoly, SkewError> {
    if xi.is_zero() {
        return Err(SkewError::ZeroXi);
    }
    let g = f.strip_valuation()?;
    let (a, d) = check_ends(&g)?;
    let tau = &g.twist;
    let mut terms = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let c = pochhammer(xi, tau, k)? * tau.apply_pow(k as i64, &a[d - k].conj())?;
        terms.push((k as i64, c));
    }
    SkewPoly::new(&g.field, terms, g.twist.clone(), g.laurent)
}

/// f♯ = Σ_k {2lk}_{q,τ} · τ^{(2k+1)l}(conj α_{d−k}) · x^k for f in K[x; τ^{2l}].
pub fn sharp_poly(f: &SkewPoly, q: &Scalar, l: usize, tau: &FieldAut) -> Result<SkewPoly, SkewError> {
    if q.is_zero() {
        return Err(SkewError::ZeroQ);
    }
    let field = &f.field;
    if !tau.pow(2 * l as i64, field)?.same(&f.twist, field) {
        return Err(SkewError::TwistMismatch);
    }
    let (a, d) = check_ends(f)?;
    let mut terms = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let c = pochhammer(q, tau, 2 * l * k)? * tau.apply_pow(((2 * k + 1) * l) as i64, &a[d - k].conj())?;
        terms.push((k as i64, c));
    }
    SkewPoly::new(field, terms, f.twist.clone(), false)
}

/// Closed form of f♯♯ for sharp_poly with real q:
/// {(2d+1)l} · τ^{2l(d+1)}(f) · {l}⁻¹.
pub fn double_sharp_closed_form(f: &SkewPoly, q: &Scalar, l: usize, tau: &FieldAut) -> Result<SkewPoly, SkewError> {
    let d = f.degree().ok_or_else(|| SkewError::BadNormalization("zero polynomial".into()))? as usize;
    let field = &f.field;
    let shifted = f.map_coeffs(&tau.pow((2 * l * (d + 1)) as i64, field)?)?;
    let left = pochhammer(q, tau, (2 * d + 1) * l)?;
    let right = pochhammer(q, tau, l)?.inv()?;
    shifted.scale_left(&left).scale_right(&right)
}

/// Companion matrix of a normalized f: subdiagonal ones, last column −α_i/α_d.
pub fn companion(f: &SkewPoly) -> Result<Matrix, SkewError> {
    let a = f.dense();
    let d = a.len() - 1;
    let field = &f.field;
    let lead = a[d].inv()?;
    let mut m = Matrix::zeros(field, d, d);
    for i in 0..d {
        if i + 1 < d {
            m.set(i + 1, i, field.one());
        }
        m.set(i, d - 1, -(&a[i] * &lead));
    }
    Ok(m)
}

/// Similarity under a nontrivial twist: find invertible T with
/// T·C_f = C_g·τ̂(T), solved over ℚ (a subfield of the fixed field).
fn semilinear_similar(f: &SkewPoly, g: &SkewPoly) -> Result<bool, SkewError> {
    let field = &f.field;
    let phi = field.degree().ok_or(SkewError::UnsupportedTwist)?;
    let (df, dg) = (f.degree().unwrap(), g.degree().unwrap());
    if df != dg {
        return Ok(false);
    }
    let d = df as usize;
    if d == 0 {
        return Ok(true);
    }
    let cf = companion(f)?;
    let cg = companion(g)?;
    let tau = &f.twist;
    let q = Field::cyclotomic(1);
    let n_unk = d * d * phi;
    let basis: Vec<Scalar> = (0..phi).map(|j| field.root_of_unity(field.conductor().unwrap(), j as i64)).collect::<Result<_, _>>()?;
    let tau_basis: Vec<Scalar> = basis.iter().map(|b| tau.apply(b)).collect::<Result<_, _>>()?;
    // Column for unknown (a, b, j): contribution of T_{ab} = ζ^j to equation (r, c).
    let mut eqs = vec![vec![field.zero(); n_unk]; d * d];
    for a in 0..d {
        for b in 0..d {
            for j in 0..phi {
                let col = (a * d + b) * phi + j;
                for c in 0..d {
                    let v = &basis[j] * cf.get(b, c);
                    let e = &mut eqs[a * d + c][col];
                    *e = &*e + &v;
                }
                for r in 0..d {
                    let v = cg.get(r, a) * &tau_basis[j];
                    let e = &mut eqs[r * d + b][col];
                    *e = &*e - &v;
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(d * d * phi);
    for eq in &eqs {
        let coords: Vec<Vec<BigRational>> = eq.iter().map(|s| s.rational_coords().unwrap()).collect();
        for j in 0..phi {
            rows.push(coords.iter().map(|c| q.rational(&c[j])).collect());
        }
    }
    let sys = Matrix::from_rows(&q, rows);
    let kernel = sys.nullspace();
    if kernel.is_empty() {
        return Ok(false);
    }
    let build_t = |coef: &[BigRational]| -> Result<Matrix, SkewError> {
        let mut t = Matrix::zeros(field, d, d);
        for a in 0..d {
            for b in 0..d {
                let mut coords = vec![BigRational::zero(); phi];
                for (v, c) in kernel.iter().zip(coef) {
                    for j in 0..phi {
                        let x = v[(a * d + b) * phi + j].to_rational().unwrap();
                        coords[j] += &x * c;
                    }
                }
                t.set(a, b, field.from_rational_coords(&coords)?);
            }
        }
        Ok(t)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x51_1a);
    for _ in 0..32 {
        let coef: Vec<BigRational> = kernel
            .iter()
            .map(|_| BigRational::from_integer(rng.gen_range(-1000i64..=1000).into()))
            .collect();
        if !build_t(&coef)?.det().is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exponents present, for diagnostics.
pub fn support(f: &SkewPoly) -> BTreeSet<i64> {
    f.coeffs.keys().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k8() -> Field {
        Field::cyclotomic(8)
    }

    fn p(field: &Field, s: &str, laurent: bool) -> SkewPoly {
        SkewPoly::parse(field, s, FieldAut::Identity, laurent, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn multiplication() {
        let k = k8();
        let i = k.imag_unit().unwrap();
        let x = SkewPoly::parse(&k, "x", FieldAut::Conjugation, false, &BTreeMap::new()).unwrap();
        let a = x.monomial(i.clone(), 0);
        assert_eq!(x.mul(&a).unwrap(), x.monomial(-&i, 1));
        assert_eq!(p(&k, "(x - 1)*(x + 1)", false), p(&k, "x^2 - 1", false));
        let xi = SkewPoly::parse(&k, "x", FieldAut::Identity, false, &BTreeMap::new()).unwrap();
        assert_eq!(xi.mul(&xi.monomial(i.clone(), 0)).unwrap(), xi.monomial(i, 1));
    }

    #[test]
    fn indecomposability() {
        let k = k8();
        assert!(p(&k, "(x - 1)^2", false).is_indecomposable().unwrap());
        assert!(!p(&k, "(x - 1)*(x - 2)", false).is_indecomposable().unwrap());
        assert!(p(&k, "x^3", false).is_indecomposable().unwrap());
        assert!(p(&k, "x^-2*(x - i)^3", true).is_indecomposable().unwrap());
        let tw = SkewPoly::parse(&k, "x - 1", FieldAut::Conjugation, false, &BTreeMap::new()).unwrap();
        assert_eq!(tw.is_indecomposable(), Err(SkewError::UnsupportedTwist));
    }

    #[test]
    fn similarity() {
        let k = k8();
        let mut params = BTreeMap::new();
        params.insert("a".to_string(), k.ratio(3, 7) + k.imag_unit().unwrap());
        let q = |s: &str, l: bool| SkewPoly::parse(&k, s, FieldAut::Identity, l, &params).unwrap();
        assert!(q("2*x - 2*a", false).similar(&q("x - a", false)).unwrap());
        assert!(!q("x - 1", false).similar(&q("x - 2", false)).unwrap());
        assert!(q("x - a", true).similar(&q("x^2 - a*x", true)).unwrap());
        assert!(!q("x - a", false).similar(&q("x^2 - a*x", false)).unwrap());
    }

    #[test]
    fn pochhammer_values() {
        let k = k8();
        assert!(pochhammer(&k.int(5), &FieldAut::Identity, 0).unwrap().is_one());
        assert_eq!(pochhammer(&k.int(2), &FieldAut::Identity, 3).unwrap(), k.int(8));
        assert!(pochhammer(&k.one(), &FieldAut::Identity, 5).unwrap().is_one());
    }

    #[test]
    fn sharp_laurent_examples() {
        let k = k8();
        let i = k.imag_unit().unwrap();
        let a = k.one() + &i;
        let mut params = BTreeMap::new();
        params.insert("a".to_string(), a.clone());
        let f = SkewPoly::parse(&k, "(x - a)^2", FieldAut::Identity, true, &params).unwrap();
        let fs = sharp_laurent(&f, &k.one()).unwrap();
        let expected = linear_power(&k, &a.conj().inv().unwrap(), 2, FieldAut::Identity, true);
        assert!(fs.similar(&expected).unwrap());
        assert_eq!(fs.normalized().unwrap(), expected);
        // (x − a)^d ↦ (1 − āξx)^d exactly.
        let xi = k.int(3);
        let f3 = linear_power(&k, &a, 3, FieldAut::Identity, true);
        let one_minus = SkewPoly::from_coeffs(&k, &[k.one(), -(&a.conj() * &xi)], FieldAut::Identity, true);
        let cube = one_minus.mul(&one_minus).unwrap().mul(&one_minus).unwrap();
        assert_eq!(sharp_laurent(&f3, &xi).unwrap(), cube.scale_left(&k.int(-1)).scale_left(&k.int(-1)));
        let c = SkewPoly::from_coeffs(&k, &[i.clone()], FieldAut::Identity, true);
        assert_eq!(sharp_laurent(&c, &xi).unwrap(), c.monomial(-&i, 0));
        assert_eq!(sharp_laurent(&f, &k.zero()), Err(SkewError::ZeroXi));
    }

    #[test]
    fn sharp_poly_examples() {
        let k = k8();
        let a1 = k.ratio(2, 3) + k.root_of_unity(8, 1).unwrap();
        let a2 = k.imag_unit().unwrap() - k.int(5);
        let f = SkewPoly::from_coeffs(&k, &[a1.clone(), a2.clone(), k.one()], FieldAut::Identity, false);
        let fs = sharp_poly(&f, &k.one(), 1, &FieldAut::Identity).unwrap();
        assert_eq!(fs, SkewPoly::from_coeffs(&k, &[k.one(), a2.conj(), a1.conj()], FieldAut::Identity, false));
        let g = SkewPoly::from_coeffs(&k, &[a1.clone(), k.zero(), k.one()], FieldAut::Identity, false);
        let gs = sharp_poly(&g, &k.int(2), 1, &FieldAut::Identity).unwrap();
        assert_eq!(gs, SkewPoly::from_coeffs(&k, &[k.one(), k.zero(), &k.int(16) * &a1.conj()], FieldAut::Identity, false));
        let h = SkewPoly::from_coeffs(&k, &[a1.clone(), k.one()], FieldAut::Identity, false);
        let hs = sharp_poly(&h, &k.one(), 1, &FieldAut::Identity).unwrap();
        let target = SkewPoly::from_coeffs(&k, &[a1.conj().inv().unwrap(), k.one()], FieldAut::Identity, false);
        assert!(hs.similar(&target).unwrap());
    }

    #[test]
    fn double_sharp_with_galois_twist() {
        // τ = (ζ ↦ ζ²) on ℚ(ζ₅); the ring twist is τ² = conjugation; q real.
        let k = Field::cyclotomic(5);
        let tau = FieldAut::Galois(2);
        let z = k.root_of_unity(5, 1).unwrap();
        let q = &z + &z.conj() + k.int(3);
        let f = SkewPoly::from_coeffs(&k, &[k.int(2) + &z, k.ratio(1, 3) - &z * &z, k.int(7) * &z], FieldAut::Conjugation, false);
        let ss = sharp_poly(&sharp_poly(&f, &q, 1, &tau).unwrap(), &q, 1, &tau).unwrap();
        assert_eq!(ss, double_sharp_closed_form(&f, &q, 1, &tau).unwrap());
        assert!(ss.similar(&f).unwrap());
    }

    #[test]
    fn semilinear_similarity() {
        // Degree one in K[x; conj]: x − a ~ x − c̄·a·c⁻¹ for any nonzero c.
        let k = Field::cyclotomic(4);
        let i = k.imag_unit().unwrap();
        let mk = |a: &Scalar| SkewPoly::from_coeffs(&k, &[-a, k.one()], FieldAut::Conjugation, false);
        let a = k.int(2);
        let c = k.one() + &i;
        let b = &(&c.conj() * &a) * &c.inv().unwrap();
        assert!(mk(&a).similar(&mk(&b)).unwrap());
        assert!(!mk(&a).similar(&mk(&k.int(3))).unwrap());
    }

    #[test]
    fn display_round_trip() {
        let k = k8();
        let f = p(&k, "1/2 + (1 - i)*x + x^2 - 3*x^3", false);
        assert_eq!(p(&k, &f.to_string(), false), f);
        let g = p(&k, "x^-1 + 2", true);
        assert_eq!(p(&k, &g.to_string(), true), g);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
            proptest::collection::vec((-6i64..6, -6i64..6), 1..4)
        }

        fn build(k: &Field, raw: &[(i64, i64)], lead: (i64, i64)) -> SkewPoly {
            let i = k.imag_unit().unwrap();
            let mut cs: Vec<Scalar> = raw.iter().map(|(a, b)| k.int(*a) + &k.int(*b) * &i).collect();
            if cs[0].is_zero() {
                cs[0] = k.one();
            }
            let l = k.int(lead.0) + &k.int(lead.1) * &i;
            cs.push(if l.is_zero() { k.one() } else { l });
            SkewPoly::from_coeffs(k, &cs, FieldAut::Identity, true)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn similarity_is_an_equivalence(raw in coeffs(), lead in (-3i64..3, -3i64..3), u in 1i64..5, s in -3i64..3) {
                let k = Field::cyclotomic(4);
                let f = build(&k, &raw, lead);
                prop_assert!(f.similar(&f).unwrap());
                let g = f.monomial(k.int(u), s).mul(&f).unwrap();
                prop_assert!(f.similar(&g).unwrap());
                prop_assert!(g.similar(&f).unwrap());
                let h = g.scale_left(&k.imag_unit().unwrap());
                prop_assert!(f.similar(&h).unwrap());
            }

            #[test]
            fn double_sharp_is_similar(raw in coeffs(), lead in (-3i64..3, -3i64..3), xi in 1i64..6) {
                let k = Field::cyclotomic(4);
                let f = build(&k, &raw, lead);
                let xi = k.int(xi);
                let ss = sharp_laurent(&sharp_laurent(&f, &xi).unwrap(), &xi).unwrap();
                prop_assert!(ss.similar(&f).unwrap());
                let fp = SkewPoly::from_coeffs(&k, &f.dense(), FieldAut::Identity, false);
                let q = k.ratio(3, 2);
                let pp = sharp_poly(&sharp_poly(&fp, &q, 1, &FieldAut::Identity).unwrap(), &q, 1, &FieldAut::Identity).unwrap();
                prop_assert_eq!(pp.clone(), double_sharp_closed_form(&fp, &q, 1, &FieldAut::Identity).unwrap());
                prop_assert!(pp.similar(&fp).unwrap());
            }
        }
    }
}
