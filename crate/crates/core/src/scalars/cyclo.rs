//! Arithmetic in ℚ(ζ_N) on integer coefficient vectors with a shared denominator.
//!
//! An element is `num / den` where `num` holds the coordinates in the power
//! basis 1, ζ, …, ζ^(φ(N)−1). Representations are kept reduced modulo Φ_N and
//! normalized (gcd of all numerators and the denominator is 1, `den > 0`), so
//! equality of elements is equality of representations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Static data for the N-th cyclotomic field.
#[derive(Debug)]
pub struct Cyclotomic {
    n: u32,
    deg: usize,
    /// Φ_N, low degree first, monic.
    modulus: Vec<BigInt>,
    /// ζ^j reduced mod Φ_N for j in 0..N.
    powers: Vec<Vec<BigInt>>,
}

impl Cyclotomic {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let modulus = cyclotomic_poly(n);
        let deg = modulus.len() - 1;
        let mut field = Cyclotomic { n, deg, modulus, powers: Vec::new() };
        let mut powers = Vec::with_capacity(n as usize);
        for j in 0..n as usize {
            let mut p = vec![BigInt::zero(); j + 1];
            p[j] = BigInt::one();
            powers.push(field.reduce(p));
        }
        field.powers = powers;
        field
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    /// Reduce an integer polynomial of any length modulo Φ_N.
    pub fn reduce(&self, mut poly: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.deg;
        if poly.len() > d {
            for k in (d..poly.len()).rev() {
                if poly[k].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut poly[k]);
                for j in 0..d {
                    if !self.modulus[j].is_zero() {
                        poly[k - d + j] -= &c * &self.modulus[j];
                    }
                }
            }
            poly.truncate(d);
        }
        poly.resize(d, BigInt::zero());
        poly
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); 2 * self.deg];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce(out)
    }

    /// ζ^k reduced, for any integer k.
    pub fn power(&self, k: i64) -> &[BigInt] {
        let n = self.n as i64;
        &self.powers[k.rem_euclid(n) as usize]
    }

    /// Image under the automorphism ζ ↦ ζ^e.
    pub fn galois(&self, a: &[BigInt], e: i64) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.deg];
        for (k, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = self.power(k as i64 * e);
            for (o, q) in out.iter_mut().zip(p) {
                if !q.is_zero() {
                    *o += c * q;
                }
            }
        }
        out
    }

    /// Inverse of a nonzero integer vector, as (num, den) not yet normalized.
    pub fn inverse(&self, a: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
        let d = self.deg;
        // Column j of the multiplication matrix is a·ζ^j.
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut e = vec![BigInt::zero(); d];
            e[j] = BigInt::one();
            cols.push(self.mul(a, &e));
        }
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|r| {
                let mut row: Vec<BigRational> =
                    (0..d).map(|c| BigRational::from_integer(cols[c][r].clone())).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=d {
                        let t = &m[col][c] * &f;
                        m[r][c] -= t;
                    }
                }
            }
        }
        let sol: Vec<BigRational> = m.into_iter().map(|row| row[d].clone()).collect();
        Some(from_rationals(&sol))
    }
}

/// Common-denominator form of a rational vector.
pub fn from_rationals(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let num = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (num, den)
}

/// Divide out the content so the representation is canonical.
pub fn normalize(num: &mut [BigInt], den: &mut BigInt) {
    if num.iter().all(|x| x.is_zero()) {
        *den = BigInt::one();
        return;
    }
    let mut g = den.clone();
    for x in num.iter() {
        if g.is_one() {
            break;
        }
        g = g.gcd(x);
    }
    if den.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for x in num.iter_mut() {
            *x = &*x / &g;
        }
        *den = &*den / &g;
    }
}

fn poly_div_exact(num: &[BigInt], div: &[BigInt]) -> Vec<BigInt> {
    // div is monic
    let mut rem = num.to_vec();
    let dd = div.len() - 1;
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=dd {
            rem[k + j] -= &c * &div[j];
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    q
}

/// Φ_n with integer coefficients, low degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn powers_wrap() {
        let f = Cyclotomic::new(4);
        assert_eq!(f.power(2), &ints(&[-1, 0])[..]);
        assert_eq!(f.power(-1), &ints(&[0, -1])[..]);
    }
}
