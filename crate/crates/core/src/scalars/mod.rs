//! Coefficient fields with conjugation.
//!
//! Two backends: exact arithmetic in the cyclotomic field ℚ(ζ_N), and complex
//! floating point with an absolute tolerance. A [`Field`] is fixed per session
//! and every [`Scalar`] carries a handle to it. Combining scalars from fields
//! with different conductors or backends panics; use [`Field::adopt`] to
//! validate scalars coming from elsewhere.

mod cyclo;
mod interval;

pub use cyclo::{cyclotomic_poly, Cyclotomic};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not real: {0}")]
    NotReal(String),
    #[error("scalar belongs to a different field ({0})")]
    FieldMismatch(String),
    #[error("unsupported in this backend: {0}")]
    Unsupported(String),
    #[error("sign could not be certified")]
    PrecisionExhausted,
}

/// Serializable description of a coefficient field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum FieldSpec {
    ExactCyclotomic { conductor: u32 },
    ApproxComplex { tolerance: f64 },
}

/// Handle to the coefficient field of a session.
#[derive(Clone, Debug)]
pub enum Field {
    Exact(Arc<Cyclotomic>),
    Approx(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }
}

#[derive(Clone)]
enum Repr {
    Exact { field: Arc<Cyclotomic>, num: Vec<BigInt>, den: BigInt },
    Approx { z: Complex64, tol: f64 },
}

/// An element of the session field.
#[derive(Clone)]
pub struct Scalar(Repr);

impl Field {
    pub fn new(spec: &FieldSpec) -> Field {
        match *spec {
            FieldSpec::ExactCyclotomic { conductor } => Field::cyclotomic(conductor),
            FieldSpec::ApproxComplex { tolerance } => Field::approx(tolerance),
        }
    }

    pub fn cyclotomic(n: u32) -> Field {
        Field::Exact(Arc::new(Cyclotomic::new(n)))
    }

    pub fn approx(tol: f64) -> Field {
        Field::Approx(tol)
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            Field::Exact(c) => FieldSpec::ExactCyclotomic { conductor: c.conductor() },
            Field::Approx(t) => FieldSpec::ApproxComplex { tolerance: *t },
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Field::Exact(_))
    }

    pub fn conductor(&self) -> Option<u32> {
        match self {
            Field::Exact(c) => Some(c.conductor()),
            Field::Approx(_) => None,
        }
    }

    /// Degree over ℚ (exact backend).
    pub fn degree(&self) -> Option<usize> {
        match self {
            Field::Exact(c) => Some(c.degree()),
            Field::Approx(_) => None,
        }
    }

    pub fn same_as(&self, other: &Field) -> bool {
        match (self, other) {
            (Field::Exact(a), Field::Exact(b)) => a.conductor() == b.conductor(),
            (Field::Approx(a), Field::Approx(b)) => a == b,
            _ => false,
        }
    }

    fn describe(&self) -> String {
        match self {
            Field::Exact(c) => format!("Q(zeta_{})", c.conductor()),
            Field::Approx(t) => format!("approx(eps={t})"),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> Scalar {
        self.rational(&BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(&self, p: i64, q: i64) -> Scalar {
        self.rational(&BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn rational(&self, r: &BigRational) -> Scalar {
        match self {
            Field::Exact(c) => {
                let mut num = vec![BigInt::zero(); c.degree()];
                num[0] = r.numer().clone();
                Scalar::exact(c.clone(), num, r.denom().clone())
            }
            Field::Approx(t) => {
                let v = r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN);
                Scalar(Repr::Approx { z: Complex64::new(v, 0.0), tol: *t })
            }
        }
    }

    /// The root of unity e^{2πik/order}; the exact backend needs order | N.
    pub fn root_of_unity(&self, order: u32, k: i64) -> Result<Scalar, ScalarError> {
        if order == 0 {
            return Err(ScalarError::Unsupported("zeta(0)".into()));
        }
        match self {
            Field::Exact(c) => {
                let n = c.conductor();
                if n % order != 0 {
                    return Err(ScalarError::Unsupported(format!(
                        "zeta({order}) is not in Q(zeta_{n})"
                    )));
                }
                let e = k * (n / order) as i64;
                Ok(Scalar::exact(c.clone(), c.power(e).to_vec(), BigInt::one()))
            }
            Field::Approx(t) => {
                let a = 2.0 * std::f64::consts::PI * (k as f64) / (order as f64);
                Ok(Scalar(Repr::Approx { z: Complex64::from_polar(1.0, a), tol: *t }))
            }
        }
    }

    pub fn imag_unit(&self) -> Result<Scalar, ScalarError> {
        self.root_of_unity(4, 1)
    }

    pub fn complex(&self, re: f64, im: f64) -> Result<Scalar, ScalarError> {
        match self {
            Field::Approx(t) => Ok(Scalar(Repr::Approx { z: Complex64::new(re, im), tol: *t })),
            Field::Exact(_) => Err(ScalarError::Unsupported("floating point value in exact field".into())),
        }
    }

    /// Element with the given rational coordinates in the power basis (exact backend).
    pub fn from_rational_coords(&self, coords: &[BigRational]) -> Result<Scalar, ScalarError> {
        match self {
            Field::Exact(c) => {
                let mut v = coords.to_vec();
                v.resize(c.degree(), BigRational::zero());
                let (num, den) = cyclo::from_rationals(&v);
                Ok(Scalar::exact(c.clone(), num, den))
            }
            Field::Approx(_) => Err(ScalarError::Unsupported("rational coordinates".into())),
        }
    }

    /// Check that `a` lives in this field.
    pub fn adopt(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        if a.field().same_as(self) {
            Ok(a.clone())
        } else {
            Err(ScalarError::FieldMismatch(format!("{} vs {}", a.field().describe(), self.describe())))
        }
    }

    /// A random element with small rational coordinates; never zero.
    pub fn random<R: Rng>(&self, rng: &mut R, bound: i64) -> Scalar {
        loop {
            let s = match self {
                Field::Exact(c) => {
                    let num: Vec<BigInt> =
                        (0..c.degree()).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
                    let den = BigInt::from(rng.gen_range(1..=bound.max(1)));
                    Scalar::exact(c.clone(), num, den)
                }
                Field::Approx(t) => {
                    let re = rng.gen_range(-bound..=bound) as f64 / rng.gen_range(1..=bound.max(1)) as f64;
                    let im = rng.gen_range(-bound..=bound) as f64 / rng.gen_range(1..=bound.max(1)) as f64;
                    Scalar(Repr::Approx { z: Complex64::new(re, im), tol: *t })
                }
            };
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// A random nonzero real element with small coordinates.
    pub fn random_real<R: Rng>(&self, rng: &mut R, bound: i64) -> Scalar {
        loop {
            let a = self.random(rng, bound);
            let r = &a + &a.conj();
            if !r.is_zero() {
                return r;
            }
        }
    }
}

impl Scalar {
    fn exact(field: Arc<Cyclotomic>, mut num: Vec<BigInt>, mut den: BigInt) -> Scalar {
        cyclo::normalize(&mut num, &mut den);
        Scalar(Repr::Exact { field, num, den })
    }

    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Exact { field, .. } => Field::Exact(field.clone()),
            Repr::Approx { tol, .. } => Field::Approx(*tol),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Exact { num, .. } => num.iter().all(|x| x.is_zero()),
            Repr::Approx { z, tol } => z.norm() <= *tol,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field().one()
    }

    pub fn conj(&self) -> Scalar {
        match &self.0 {
            Repr::Exact { field, num, den } => {
                let n = field.conductor() as i64;
                Scalar::exact(field.clone(), field.galois(num, n - 1), den.clone())
            }
            Repr::Approx { z, tol } => Scalar(Repr::Approx { z: z.conj(), tol: *tol }),
        }
    }

    /// Image under ζ ↦ ζ^e (exact backend; e must be a unit mod N).
    pub fn galois(&self, e: i64) -> Result<Scalar, ScalarError> {
        match &self.0 {
            Repr::Exact { field, num, den } => {
                let n = field.conductor() as i64;
                if e.rem_euclid(n).gcd(&n) != 1 && n > 1 {
                    return Err(ScalarError::Unsupported(format!("{e} is not a unit mod {n}")));
                }
                Ok(Scalar::exact(field.clone(), field.galois(num, e), den.clone()))
            }
            Repr::Approx { .. } => Err(ScalarError::Unsupported("Galois action on approximate values".into())),
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match &self.0 {
            Repr::Exact { field, num, den } => {
                let (inum, iden) = field.inverse(num).ok_or(ScalarError::DivisionByZero)?;
                let num: Vec<BigInt> = inum.into_iter().map(|x| x * den).collect();
                Ok(Scalar::exact(field.clone(), num, iden))
            }
            Repr::Approx { z, tol } => Ok(Scalar(Repr::Approx { z: z.inv(), tol: *tol })),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Scalar, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.field().one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Sign of a real scalar under the embedding ζ_N ↦ e^{2πi/N}.
    pub fn real_sign(&self) -> Result<Sign, ScalarError> {
        match &self.0 {
            Repr::Exact { field, num, den } => {
                if !self.is_real() {
                    return Err(ScalarError::NotReal(self.to_string()));
                }
                if self.is_zero() {
                    return Ok(Sign::Zero);
                }
                match interval::sign_of_real_part(field.conductor(), num, den) {
                    Some(Ordering::Greater) => Ok(Sign::Pos),
                    Some(Ordering::Less) => Ok(Sign::Neg),
                    _ => Err(ScalarError::PrecisionExhausted),
                }
            }
            Repr::Approx { z, tol } => {
                if z.im.abs() > *tol {
                    return Err(ScalarError::NotReal(self.to_string()));
                }
                if z.re.abs() <= *tol {
                    Ok(Sign::Zero)
                } else if z.re > 0.0 {
                    Ok(Sign::Pos)
                } else {
                    Ok(Sign::Neg)
                }
            }
        }
    }

    /// Floating point value under the distinguished embedding.
    pub fn to_complex(&self) -> Complex64 {
        match &self.0 {
            Repr::Exact { field, num, den } => {
                let n = field.conductor() as f64;
                let d = den.to_f64().unwrap_or(f64::NAN);
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, c) in num.iter().enumerate() {
                    if !c.is_zero() {
                        let a = 2.0 * std::f64::consts::PI * k as f64 / n;
                        acc += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN) / d, a);
                    }
                }
                acc
            }
            Repr::Approx { z, .. } => *z,
        }
    }

    /// Coordinates in the power basis (exact backend).
    pub fn rational_coords(&self) -> Option<Vec<BigRational>> {
        match &self.0 {
            Repr::Exact { num, den, .. } => {
                Some(num.iter().map(|x| BigRational::new(x.clone(), den.clone())).collect())
            }
            Repr::Approx { .. } => None,
        }
    }

    /// The value as a rational number, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Exact { num, den, .. } => {
                if num.iter().skip(1).all(|x| x.is_zero()) {
                    Some(BigRational::new(num[0].clone(), den.clone()))
                } else {
                    None
                }
            }
            Repr::Approx { .. } => None,
        }
    }

    /// Magnitude used for pivot selection in the approximate backend.
    pub fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    fn check_same(&self, other: &Scalar) {
        let ok = match (&self.0, &other.0) {
            (Repr::Exact { field: a, .. }, Repr::Exact { field: b, .. }) => a.conductor() == b.conductor(),
            (Repr::Approx { .. }, Repr::Approx { .. }) => true,
            _ => false,
        };
        if !ok {
            panic!(
                "mixed-field arithmetic: {} with {}",
                self.field().describe(),
                other.field().describe()
            );
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (&self.0, &other.0) {
            (Repr::Exact { field: f, num: a, den: da }, Repr::Exact { field: g, num: b, den: db }) => {
                f.conductor() == g.conductor() && da == db && a == b
            }
            (Repr::Approx { z: a, tol }, Repr::Approx { z: b, .. }) => (a - b).norm() <= *tol,
            _ => false,
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn fmt_ratio(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Exact { field, num, den } => {
                let n = field.conductor();
                let mut first = true;
                for (k, c) in num.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let r = BigRational::new(c.clone(), den.clone());
                    let neg = r.is_negative();
                    let a = r.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    first = false;
                    if k == 0 {
                        fmt_ratio(f, &a)?;
                        continue;
                    }
                    if !a.is_one() {
                        fmt_ratio(f, &a)?;
                        write!(f, "*")?;
                    }
                    if n % 4 == 0 && k as u32 == n / 4 {
                        write!(f, "i")?;
                    } else if k == 1 {
                        write!(f, "zeta({n})")?;
                    } else {
                        write!(f, "zeta({n})^{k}")?;
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
            Repr::Approx { z, .. } => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.im < 0.0 {
                    write!(f, "{}-{}*i", z.re, -z.im)
                } else {
                    write!(f, "{}+{}*i", z.re, z.im)
                }
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn add_impl(a: &Scalar, b: &Scalar, negate_b: bool) -> Scalar {
    a.check_same(b);
    match (&a.0, &b.0) {
        (Repr::Exact { field, num: x, den: dx }, Repr::Exact { num: y, den: dy, .. }) => {
            let num: Vec<BigInt> = if dx == dy {
                x.iter().zip(y).map(|(p, q)| if negate_b { p - q } else { p + q }).collect()
            } else {
                x.iter()
                    .zip(y)
                    .map(|(p, q)| {
                        let l = p * dy;
                        let r = q * dx;
                        if negate_b {
                            l - r
                        } else {
                            l + r
                        }
                    })
                    .collect()
            };
            let den = if dx == dy { dx.clone() } else { dx * dy };
            Scalar::exact(field.clone(), num, den)
        }
        (Repr::Approx { z: x, tol }, Repr::Approx { z: y, .. }) => {
            Scalar(Repr::Approx { z: if negate_b { x - y } else { x + y }, tol: *tol })
        }
        _ => unreachable!(),
    }
}

fn mul_impl(a: &Scalar, b: &Scalar) -> Scalar {
    a.check_same(b);
    match (&a.0, &b.0) {
        (Repr::Exact { field, num: x, den: dx }, Repr::Exact { num: y, den: dy, .. }) => {
            if a.is_zero() || b.is_zero() {
                return Scalar::exact(field.clone(), vec![BigInt::zero(); field.degree()], BigInt::one());
            }
            Scalar::exact(field.clone(), field.mul(x, y), dx * dy)
        }
        (Repr::Approx { z: x, tol }, Repr::Approx { z: y, .. }) => Scalar(Repr::Approx { z: x * y, tol: *tol }),
        _ => unreachable!(),
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                $body(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                $body(&self, rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| add_impl(a, b, false));
binop!(Sub, sub, |a, b| add_impl(a, b, true));
binop!(Mul, mul, mul_impl);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Exact { field, num, den } => Scalar(Repr::Exact {
                field: field.clone(),
                num: num.iter().map(|x| -x).collect(),
                den: den.clone(),
            }),
            Repr::Approx { z, tol } => Scalar(Repr::Approx { z: -z, tol: *tol }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Field automorphisms used as twists of skew polynomial rings and as
/// coefficient actions of point maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldAut {
    Identity,
    Conjugation,
    /// ζ ↦ ζ^e on ℚ(ζ_N).
    Galois(i64),
}

impl FieldAut {
    /// Canonical exponent on ℚ(ζ_N), or None for the approximate backend.
    fn exponent(&self, field: &Field) -> Option<i64> {
        let n = field.conductor()? as i64;
        Some(match self {
            FieldAut::Identity => 1,
            FieldAut::Conjugation => n - 1,
            FieldAut::Galois(e) => e.rem_euclid(n),
        }
        .rem_euclid(n.max(1)))
    }

    /// Canonical form: Identity / Conjugation when possible.
    pub fn normalized(&self, field: &Field) -> FieldAut {
        match self.exponent(field) {
            Some(e) => {
                let n = field.conductor().unwrap() as i64;
                if n <= 2 || e == 1 {
                    FieldAut::Identity
                } else if e == n - 1 {
                    FieldAut::Conjugation
                } else {
                    FieldAut::Galois(e)
                }
            }
            None => self.clone(),
        }
    }

    pub fn is_identity(&self, field: &Field) -> bool {
        self.normalized(field) == FieldAut::Identity
    }

    pub fn same(&self, other: &FieldAut, field: &Field) -> bool {
        self.normalized(field) == other.normalized(field)
    }

    pub fn apply(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        match self {
            FieldAut::Identity => Ok(a.clone()),
            FieldAut::Conjugation => Ok(a.conj()),
            FieldAut::Galois(e) => a.galois(*e),
        }
    }

    /// The k-th power (k may be negative).
    pub fn pow(&self, k: i64, field: &Field) -> Result<FieldAut, ScalarError> {
        match field.conductor() {
            Some(n) => {
                let n = n as i64;
                let e = self.exponent(field).unwrap();
                let base = if k < 0 { inverse_mod(e, n)? } else { e };
                let mut acc = 1i64.rem_euclid(n.max(1));
                for _ in 0..k.unsigned_abs() {
                    acc = (acc * base).rem_euclid(n.max(1));
                }
                Ok(FieldAut::Galois(acc).normalized(field))
            }
            None => match self {
                FieldAut::Identity => Ok(FieldAut::Identity),
                FieldAut::Conjugation => {
                    Ok(if k.rem_euclid(2) == 0 { FieldAut::Identity } else { FieldAut::Conjugation })
                }
                FieldAut::Galois(_) => Err(ScalarError::Unsupported("Galois action on approximate values".into())),
            },
        }
    }

    pub fn apply_pow(&self, k: i64, a: &Scalar) -> Result<Scalar, ScalarError> {
        self.pow(k, &a.field())?.apply(a)
    }
}

fn inverse_mod(e: i64, n: i64) -> Result<i64, ScalarError> {
    if n == 1 {
        return Ok(0);
    }
    let g = e.extended_gcd(&n);
    if g.gcd != 1 {
        return Err(ScalarError::Unsupported(format!("{e} is not a unit mod {n}")));
    }
    Ok(g.x.rem_euclid(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn conjugation_examples() {
        let k = Field::cyclotomic(8);
        let i = k.imag_unit().unwrap();
        assert_eq!(i.conj(), -&i);
        assert_eq!(k.ratio(3, 2).conj(), k.ratio(3, 2));
        let z = k.root_of_unity(8, 1).unwrap();
        assert_eq!(z.conj(), k.root_of_unity(8, 7).unwrap());
    }

    #[test]
    fn signs() {
        let k = Field::cyclotomic(3);
        assert_eq!(k.int(-2).real_sign().unwrap(), Sign::Neg);
        let z = k.root_of_unity(3, 1).unwrap();
        assert_eq!((&z + &z.conj()).real_sign().unwrap(), Sign::Neg);
        let k4 = Field::cyclotomic(4);
        assert!(matches!(k4.imag_unit().unwrap().real_sign(), Err(ScalarError::NotReal(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let k = Field::cyclotomic(12);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = k.random(&mut rng, 9);
            assert!((&a + &(-&a)).is_zero());
            assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        let k = Field::cyclotomic(5);
        assert_eq!(k.zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn mixed_conductors_panic() {
        let _ = Field::cyclotomic(4).one() + Field::cyclotomic(8).one();
    }

    #[test]
    fn adopt_rejects_foreign_scalars() {
        let a = Field::cyclotomic(4).one();
        assert!(Field::cyclotomic(8).adopt(&a).is_err());
        assert!(Field::cyclotomic(4).adopt(&a).is_ok());
    }

    #[test]
    fn display_forms() {
        let k = Field::cyclotomic(8);
        let i = k.imag_unit().unwrap();
        let z = k.root_of_unity(8, 1).unwrap();
        assert_eq!((k.ratio(1, 2) - &i).to_string(), "1/2 - i");
        assert_eq!((&z * &k.int(3)).to_string(), "3*zeta(8)");
        assert_eq!(k.zero().to_string(), "0");
    }

    #[test]
    fn approx_backend_basics() {
        let k = Field::approx(1e-9);
        let a = k.complex(1.0, 2.0).unwrap();
        assert_eq!(a.conj(), k.complex(1.0, -2.0).unwrap());
        assert_eq!(k.complex(1e-12, 0.0).unwrap().real_sign().unwrap(), Sign::Zero);
        assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn automorphism_powers() {
        let k = Field::cyclotomic(5);
        let g = FieldAut::Galois(2);
        assert_eq!(g.pow(2, &k).unwrap(), FieldAut::Conjugation);
        assert_eq!(g.pow(4, &k).unwrap(), FieldAut::Identity);
        assert_eq!(g.pow(-1, &k).unwrap(), FieldAut::Galois(3));
        let z = k.root_of_unity(5, 1).unwrap();
        assert_eq!(g.apply(&z).unwrap(), k.root_of_unity(5, 2).unwrap());
    }
}
