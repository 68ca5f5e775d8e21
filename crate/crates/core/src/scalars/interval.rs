//! Fixed-point interval arithmetic used to certify signs of real cyclotomic numbers.
//!
//! Values are BigInt endpoints at scale 2^-prec with outward rounding, so every
//! computed interval contains the true real number.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug)]
struct Iv {
    lo: BigInt,
    hi: BigInt,
}

struct Fixed {
    one: BigInt,
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Fixed {
    fn new(prec: u32) -> Self {
        Fixed { one: BigInt::one() << prec }
    }

    fn point(&self, v: BigInt) -> Iv {
        Iv { lo: v.clone(), hi: v }
    }

    /// Enclosure of p/q with q > 0.
    fn ratio(&self, p: &BigInt, q: &BigInt) -> Iv {
        let s = p * &self.one;
        Iv { lo: s.div_floor(q), hi: ceil_div(&s, q) }
    }

    fn add(&self, a: &Iv, b: &Iv) -> Iv {
        Iv { lo: &a.lo + &b.lo, hi: &a.hi + &b.hi }
    }

    fn sub(&self, a: &Iv, b: &Iv) -> Iv {
        Iv { lo: &a.lo - &b.hi, hi: &a.hi - &b.lo }
    }

    fn mul(&self, a: &Iv, b: &Iv) -> Iv {
        let ps = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = ps.iter().min().unwrap();
        let max = ps.iter().max().unwrap();
        Iv { lo: min.div_floor(&self.one), hi: ceil_div(max, &self.one) }
    }

    /// Multiply by the rational p/q, q > 0.
    fn scale(&self, a: &Iv, p: &BigInt, q: &BigInt) -> Iv {
        let (x, y) = if p.is_negative() { (&a.hi * p, &a.lo * p) } else { (&a.lo * p, &a.hi * p) };
        Iv { lo: x.div_floor(q), hi: ceil_div(&y, q) }
    }

    fn atan_inv(&self, n: u32) -> Iv {
        let n = BigInt::from(n);
        let n2 = &n * &n;
        let mut pow = n.clone();
        let mut sum = self.point(BigInt::zero());
        let one = BigInt::one();
        let mut j: u32 = 0;
        loop {
            let den = BigInt::from(2 * j + 1) * &pow;
            let term = self.ratio(&one, &den);
            if term.hi <= BigInt::from(2) {
                // Alternating series with decreasing terms: tail bounded by this term.
                let r = Iv { lo: -term.hi.clone(), hi: term.hi };
                return self.add(&sum, &r);
            }
            sum = if j % 2 == 0 { self.add(&sum, &term) } else { self.sub(&sum, &term) };
            pow *= &n2;
            j += 1;
        }
    }

    fn pi(&self) -> Iv {
        let a = self.atan_inv(5);
        let b = self.atan_inv(239);
        let a16 = Iv { lo: a.lo * 16, hi: a.hi * 16 };
        let b4 = Iv { lo: b.lo * 4, hi: b.hi * 4 };
        self.sub(&a16, &b4)
    }

    /// cos on an interval inside [0, π].
    fn cos(&self, theta: &Iv) -> Iv {
        let t2 = self.mul(theta, theta);
        let mut term = self.point(self.one.clone());
        let mut sum = term.clone();
        let mut j: u64 = 1;
        loop {
            let m = self.mul(&term, &t2);
            let k = BigInt::from((2 * j - 1) * (2 * j));
            term = Iv { lo: m.lo.div_floor(&k), hi: ceil_div(&m.hi, &k) };
            if term.hi.abs() <= BigInt::from(2) && term.lo.abs() <= BigInt::from(2) {
                let r = term.hi.abs().max(term.lo.abs());
                return self.add(&sum, &Iv { lo: -r.clone(), hi: r });
            }
            sum = if j % 2 == 1 { self.sub(&sum, &term) } else { self.add(&sum, &term) };
            j += 1;
        }
    }
}

/// Sign of Σ num_k cos(2πk/n) / den. Returns `None` when precision runs out,
/// which only happens for a zero value (callers test exact zero first).
pub fn sign_of_real_part(n: u32, num: &[BigInt], den: &BigInt) -> Option<Ordering> {
    let mut prec: u32 = 64;
    while prec <= 1 << 16 {
        let fx = Fixed::new(prec + 16);
        let pi = fx.pi();
        let mut acc = fx.point(BigInt::zero());
        for (k, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let kk = (k as u32 % n).min(n - k as u32 % n);
            let theta = fx.scale(&pi, &BigInt::from(2 * kk), &BigInt::from(n));
            let cos = fx.cos(&theta);
            acc = fx.add(&acc, &fx.scale(&cos, c, den));
        }
        if acc.lo.is_positive() {
            return Some(Ordering::Greater);
        }
        if acc.hi.is_negative() {
            return Some(Ordering::Less);
        }
        prec *= 2;
    }
    None
}
