//! Built-in presentations and the quantities derived from them.

use crate::expr::Expr;
use crate::gwa::{orbit_of, GwaError, GwaPresentation, Orbit, PointMap};
use crate::linalg::Matrix;
use crate::scalars::{Field, FieldAut, Scalar, ScalarError};
use crate::wmodule::{ModuleError, ModuleIso, WeightModule};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PresetError {
    #[error("invalid preset parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Gwa(#[from] GwaError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Debug)]
pub enum PresetId {
    /// R = ℂ[H], σ(H) = H − 1, t = f(H) with f given as text in `H`.
    KleinianA { t: String },
    /// R = ℂ[h, t], σ(h) = h − 2, σ(t) = t + h.
    USl2,
    /// R = ℂ[K, K⁻¹, t], σ(K) = q⁻²K, σ(t) = t + (K − K⁻¹)/(q − q⁻¹).
    UqSl2 { q: Scalar },
    /// R = ℂ[u, t], σ(u) = 1 − u, σ(t) = t.
    Cuts,
    /// R = K a field with σ = τ on coefficients and constant t.
    FieldCase { t: Scalar, tau: FieldAut },
}

impl PresetId {
    /// q = ζ_n^k over ℚ(ζ_lcm(4, n)).
    pub fn uqsl2_root(n: u32, k: i64) -> Result<PresetId, PresetError> {
        use num_integer::Integer;
        let field = Field::cyclotomic(n.lcm(&4));
        Ok(PresetId::UqSl2 { q: field.root_of_unity(n, k)? })
    }

    pub fn name(&self) -> &'static str {
        match self {
            PresetId::KleinianA { .. } => "kleinian",
            PresetId::USl2 => "usl2",
            PresetId::UqSl2 { .. } => "uqsl2",
            PresetId::Cuts => "cuts",
            PresetId::FieldCase { .. } => "field",
        }
    }
}

fn exprs(src: &[&str]) -> Result<Vec<Expr>, GwaError> {
    src.iter().map(|s| Expr::parse(s).map_err(GwaError::from)).collect()
}

fn presentation(
    name: &str,
    field: Field,
    vars: &[&str],
    params: BTreeMap<String, Scalar>,
    sigma: &[&str],
    sigma_inv: &[&str],
    t: &str,
    star: &[&str],
) -> Result<GwaPresentation, PresetError> {
    Ok(GwaPresentation {
        name: name.to_string(),
        field,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        params,
        sigma: PointMap::new(exprs(sigma)?, FieldAut::Identity),
        sigma_inv: PointMap::new(exprs(sigma_inv)?, FieldAut::Identity),
        t: Expr::parse(t).map_err(GwaError::from)?,
        star: PointMap::new(exprs(star)?, FieldAut::Conjugation),
    })
}

/// Multiplicative order of `a` if it is a root of unity of order ≤ `bound`.
pub fn root_order(a: &Scalar, bound: u32) -> Option<u32> {
    let mut p = a.clone();
    for k in 1..=bound {
        if p.is_one() {
            return Some(k);
        }
        p = &p * a;
    }
    None
}

/// Build a preset. `field` defaults to ℚ(i) except where a parameter fixes it.
pub fn make_preset(id: &PresetId, field: Option<Field>) -> Result<GwaPresentation, PresetError> {
    let default = || field.clone().unwrap_or_else(|| Field::cyclotomic(4));
    let pres = match id {
        PresetId::KleinianA { t } => {
            let e = Expr::parse(t).map_err(GwaError::from)?;
            if e.variables().iter().any(|v| v != "H") {
                return Err(PresetError::InvalidParameter("t must be a polynomial in H".into()));
            }
            presentation("kleinian", default(), &["H"], BTreeMap::new(), &["H - 1"], &["H + 1"], t, &["H"])?
        }
        PresetId::USl2 => presentation(
            "usl2",
            default(),
            &["h", "t"],
            BTreeMap::new(),
            &["h - 2", "t + h"],
            &["h + 2", "t - h - 2"],
            "t",
            &["h", "t"],
        )?,
        PresetId::UqSl2 { q } => {
            let field = q.field();
            let n = field.conductor().ok_or_else(|| PresetError::InvalidParameter("U_q(sl2) needs an exact field".into()))?;
            if n % 4 != 0 {
                return Err(PresetError::InvalidParameter("the conductor must be divisible by 4".into()));
            }
            if q.is_zero() || q.is_one() || (q + &field.one()).is_zero() {
                return Err(PresetError::InvalidParameter("q must avoid -1, 0, 1".into()));
            }
            let p = root_order(&(q * q), 2 * n)
                .ok_or_else(|| PresetError::InvalidParameter("q^2 must be a root of unity".into()))?;
            if p <= 1 {
                return Err(PresetError::InvalidParameter("q^2 must have order > 1".into()));
            }
            let mut params = BTreeMap::new();
            params.insert("q".to_string(), q.clone());
            presentation(
                "uqsl2",
                field,
                &["K", "t"],
                params,
                &["q^-2*K", "t + (K - K^-1)/(q - q^-1)"],
                &["q^2*K", "t - (q^2*K - q^-2*K^-1)/(q - q^-1)"],
                "t",
                &["K^-1", "t"],
            )?
        }
        PresetId::Cuts => presentation("cuts", default(), &["u", "t"], BTreeMap::new(), &["1 - u", "t"], &["1 - u", "t"], "t", &["u", "t"])?,
        PresetId::FieldCase { t, tau } => {
            let field = t.field();
            let mut params = BTreeMap::new();
            params.insert("t0".to_string(), t.clone());
            let mut p = presentation("field", field.clone(), &[], params, &[], &[], "t0", &[])?;
            p.sigma.coefficient_aut = tau.normalized(&field);
            p.sigma_inv.coefficient_aut = tau.pow(-1, &field)?;
            p
        }
    };
    pres.validate()?;
    Ok(pres)
}

/// Orbit of the point given as text, e.g. `"0, 0"`.
pub fn preset_orbit(pres: &Arc<GwaPresentation>, seed: &str, max_steps: usize) -> Result<Arc<Orbit>, GwaError> {
    let p = pres.parse_point(seed)?;
    Ok(Arc::new(orbit_of(pres, &p, max_steps)?))
}

// ---- U_q(sl2) ----

fn q_order(q: &Scalar) -> Result<u32, PresetError> {
    let n = q.field().conductor().unwrap_or(1);
    root_order(&(q * q), 2 * n.max(1)).ok_or_else(|| PresetError::InvalidParameter("q^2 must be a root of unity".into()))
}

/// ξ = ∏_{k=0}^{p−1} (α + Σ_{i=0}^{k} (q^{−2i}μ − q^{2i}μ^{−1})/(q − q^{−1})).
pub fn uqsl2_xi(q: &Scalar, mu: &Scalar, alpha: &Scalar) -> Result<Scalar, PresetError> {
    let p = q_order(q)?;
    let field = q.field();
    let den = (q - &q.inv()?).inv()?;
    let mut acc = field.one();
    let mut partial = field.zero();
    for i in 0..p as i64 {
        partial = partial + &(&(&q.pow(-2 * i)? * mu) - &(&q.pow(2 * i)? * &mu.inv()?)) * &den;
        acc = &acc * &(alpha + &partial);
    }
    Ok(acc)
}

/// (a; s)_n with the factor at `skip` omitted.
fn shifted_factorial(a: &Scalar, s: &Scalar, n: u32, skip: Option<u32>) -> Result<Scalar, PresetError> {
    let field = a.field();
    let mut acc = field.one();
    for j in 0..n {
        if Some(j) == skip {
            continue;
        }
        acc = &acc * &(field.one() - a * &s.pow(j as i64)?);
    }
    Ok(acc)
}

/// The value Q = q of a U_q(sl2) orbit through the break (K − μ, t):
/// generic μ uses all factors, specific μ (μ² = q^{2r}) omits the r-th.
pub fn uqsl2_q_value(q: &Scalar, mu: &Scalar) -> Result<Scalar, PresetError> {
    let p = q_order(q)?;
    let q2 = q * q;
    let mu2 = mu * mu;
    let r = (0..=p.saturating_sub(2)).find(|&k| q2.pow(k as i64).map_or(false, |v| v == mu2));
    let base = mu * &(q * &(q - &q.inv()?).pow(2)?);
    let (skip, exp) = match r {
        Some(r) => (Some(r), p as i64 - 2),
        None => (None, p as i64 - 1),
    };
    let num = shifted_factorial(&q2, &q2, p - 1, skip)? * shifted_factorial(&mu2, &q2.inv()?, p - 1, skip)?;
    Ok(num.div(&base.pow(exp)?)?)
}

// ---- the second-kind example over the cuts preset ----

/// The isomorphism V → V♯ for V = V(ω, xxyy, a₁ + a₂x + x²) over the cuts
/// orbit at (0, 0), sending e_ks to f_ks with b₁ = −1/ā₁, b₂ = −ā₂/ā₁.
/// It is a module map exactly when a₁ = 1/ā₁ and a₂ = ā₂/ā₁.
pub fn cuts_dual_iso(m: &WeightModule, a1: &Scalar, a2: &Scalar) -> Result<ModuleIso, ModuleError> {
    let field = m.field().clone();
    let b1 = -(a1.conj().inv()?);
    let b2 = -(a2.conj().div(&a1.conj())?);
    let one = field.one();
    let c = &b1 + &(&b2 * &b2);
    // Coordinates of f_ks in the dual basis, keyed by label.
    let images: BTreeMap<&str, Vec<(&str, Scalar)>> = [
        ("e11", vec![("e31", one.clone())]),
        ("e21", vec![("e41", one.clone())]),
        ("e31", vec![("e11", b2.clone()), ("e12", one.clone())]),
        ("e41", vec![("e21", b2.clone()), ("e22", one.clone())]),
        ("e12", vec![("e31", b2.clone()), ("e32", one.clone())]),
        ("e22", vec![("e41", b2.clone()), ("e42", one.clone())]),
        ("e32", vec![("e11", c.clone()), ("e12", b2.clone())]),
        ("e42", vec![("e21", c.clone()), ("e22", b2.clone())]),
    ]
    .into_iter()
    .collect();
    let mut blocks = BTreeMap::new();
    for i in m.spaces() {
        let labels = m.labels_at(i);
        let d = labels.len();
        let mut t = Matrix::zeros(&field, d, d);
        for (col, l) in labels.iter().enumerate() {
            let img = images
                .get(l.as_str())
                .ok_or_else(|| ModuleError::Shape(format!("unexpected basis label {l}")))?;
            for (target, v) in img {
                let row = labels
                    .iter()
                    .position(|x| x == target)
                    .ok_or_else(|| ModuleError::Shape(format!("{target} is not at weight {i}")))?;
                t.set(row, col, v.clone());
            }
        }
        blocks.insert(i, t);
    }
    Ok(ModuleIso { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gwa::Period;

    #[test]
    fn presets_pass_invariants() {
        for id in [
            PresetId::KleinianA { t: "H*(H - 1)*(H - 3)*(H - 6)".into() },
            PresetId::USl2,
            PresetId::uqsl2_root(4, 1).unwrap(),
            PresetId::uqsl2_root(6, 1).unwrap(),
            PresetId::Cuts,
        ] {
            let p = make_preset(&id, None).unwrap();
            assert!(p.check_invariants(&p.sample_points(16, 3)).unwrap() > 0, "{}", id.name());
        }
        assert!(make_preset(&PresetId::KleinianA { t: "H^2 + i".into() }, None).is_err());
    }

    #[test]
    fn uqsl2_star_and_params() {
        let id = PresetId::uqsl2_root(4, 1).unwrap();
        let p = make_preset(&id, None).unwrap();
        let k = p.field.clone();
        let mu = k.ratio(1, 2) + k.imag_unit().unwrap();
        let pt = p.point(vec![mu.clone(), k.int(3) + k.imag_unit().unwrap()]).unwrap();
        let s = p.star_point(&pt).unwrap();
        assert_eq!(s.0[0], mu.conj().inv().unwrap());
        assert_eq!(s.0[1], k.int(3) - k.imag_unit().unwrap());
        let bad = PresetId::UqSl2 { q: k.int(-1) };
        assert!(make_preset(&bad, None).is_err());
        let bad = PresetId::UqSl2 { q: k.int(2) };
        assert!(make_preset(&bad, None).is_err());
    }

    #[test]
    fn cuts_orbits() {
        let p = Arc::new(make_preset(&PresetId::Cuts, None).unwrap());
        let o = preset_orbit(&p, "0, 0", 8).unwrap();
        assert_eq!(o.period(), Period::Finite(2));
        assert_eq!(o.break_indices(), &[0, 1]);
        assert!(o.is_real());
        let o = preset_orbit(&p, "1/2, 1", 8).unwrap();
        assert_eq!(o.period(), Period::Finite(1));
        assert_eq!(o.num_breaks(), 0);
        assert!(!preset_orbit(&p, "i, 0", 8).unwrap().is_real());
    }

    #[test]
    fn usl2_sigma_powers() {
        let p = make_preset(&PresetId::USl2, None).unwrap();
        let k = p.field.clone();
        let (mu, al) = (k.ratio(3, 2), k.int(-5));
        let pt = p.point(vec![mu.clone(), al.clone()]).unwrap();
        for n in -6i64..=6 {
            let want = -k.int(n * n) + &(&mu + &k.one()) * &k.int(n) + al.clone();
            assert_eq!(p.sigma_pow_t(n, &pt).unwrap(), want, "n = {n}");
        }
    }

    #[test]
    fn xi_values() {
        let PresetId::UqSl2 { q } = PresetId::uqsl2_root(4, 1).unwrap() else { unreachable!() };
        let k = q.field();
        for (al, want) in [(1, 1), (0, 0), (2, 4)] {
            assert_eq!(uqsl2_xi(&q, &k.one(), &k.int(al)).unwrap(), k.int(want));
        }
    }

    #[test]
    fn q_values() {
        let PresetId::UqSl2 { q } = PresetId::uqsl2_root(4, 1).unwrap() else { unreachable!() };
        let k = q.field();
        let i = k.imag_unit().unwrap();
        assert!(uqsl2_q_value(&q, &i).unwrap().is_one());
        assert!(uqsl2_q_value(&q, &k.one()).unwrap().is_one());
    }
}
