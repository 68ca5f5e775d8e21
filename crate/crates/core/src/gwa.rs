//! Presentations of A = R(σ, t) with involution in the point model.
//!
//! A maximal ideal is the point of affine parameter space where it vanishes.
//! `sigma` is given as the ring substitution (for example `h - 2` for
//! σ(h) = h − 2); evaluating σ(r) at P equals r evaluated at sigma(P).
//! Consequently the ideal σ(𝔪_P) is the ideal of the point sigma_inv(P), and
//! orbits are indexed by ideals: `point(i)` is the point of σ^i(𝔪(ω)).

use crate::expr::{Expr, ExprError};
use crate::scalars::{Field, FieldAut, FieldSpec, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GwaError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("presentation invariant violated: {0}")]
    InvariantViolated(String),
    #[error("sigma acts nontrivially on coefficients; the orbit is not torsion trivial in the point model")]
    NotTorsionTrivial,
    #[error("index {0} lies outside the materialized orbit window")]
    OutsideWindow(i64),
    #[error("malformed presentation: {0}")]
    Format(String),
}

/// A point of parameter space, standing for a maximal ideal.
#[derive(Clone, PartialEq)]
pub struct WeightPoint(pub Vec<Scalar>);

impl WeightPoint {
    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }
}

impl fmt::Display for WeightPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for WeightPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for WeightPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Tuple of rational expressions in the coordinates, followed by an
/// automorphism applied to every resulting coordinate.
#[derive(Clone, Debug)]
pub struct PointMap {
    pub exprs: Vec<Expr>,
    pub coefficient_aut: FieldAut,
}

impl PointMap {
    pub fn new(exprs: Vec<Expr>, coefficient_aut: FieldAut) -> PointMap {
        PointMap { exprs, coefficient_aut }
    }

    pub fn identity(vars: &[String], aut: FieldAut) -> PointMap {
        PointMap { exprs: vars.iter().map(|v| Expr::Var(v.clone())).collect(), coefficient_aut: aut }
    }
}

#[derive(Clone, Debug)]
pub struct GwaPresentation {
    pub name: String,
    pub field: Field,
    pub vars: Vec<String>,
    pub params: BTreeMap<String, Scalar>,
    pub sigma: PointMap,
    pub sigma_inv: PointMap,
    pub t: Expr,
    pub star: PointMap,
}

/// On-disk presentation format (TOML or JSON).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PresentationFile {
    pub name: Option<String>,
    pub dim: Option<usize>,
    pub vars: Vec<String>,
    pub field: Option<FieldSpec>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    pub sigma: Vec<String>,
    pub sigma_inv: Vec<String>,
    #[serde(default)]
    pub sigma_conjugates_coefficients: bool,
    pub t: String,
    pub star: StarFile,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StarFile {
    pub map: Vec<String>,
    #[serde(default = "yes")]
    pub conjugate_coefficients: bool,
}

fn yes() -> bool {
    true
}

impl PresentationFile {
    pub fn from_toml(src: &str) -> Result<PresentationFile, GwaError> {
        toml::from_str(src).map_err(|e| GwaError::Format(e.to_string()))
    }

    pub fn from_json(src: &str) -> Result<PresentationFile, GwaError> {
        serde_json::from_str(src).map_err(|e| GwaError::Format(e.to_string()))
    }

    fn exprs(src: &[String]) -> Result<Vec<Expr>, GwaError> {
        src.iter().map(|s| Expr::parse(s).map_err(GwaError::from)).collect()
    }

    /// Smallest conductor covering every literal in the file.
    pub fn required_conductor(&self) -> Result<u32, GwaError> {
        use num_integer::Integer;
        let bound = |v: &str| self.vars.iter().any(|x| x == v) || self.params.contains_key(v);
        let mut n = 1u32;
        let all = self
            .sigma
            .iter()
            .chain(&self.sigma_inv)
            .chain(&self.star.map)
            .chain(std::iter::once(&self.t))
            .chain(self.params.values());
        for s in all {
            n = n.lcm(&Expr::parse(s)?.required_conductor(&bound));
        }
        Ok(n)
    }

    pub fn build(&self, field: Option<Field>) -> Result<GwaPresentation, GwaError> {
        if let Some(d) = self.dim {
            if d != self.vars.len() {
                return Err(GwaError::Format(format!("dim = {d} but {} variables", self.vars.len())));
            }
        }
        let n = self.vars.len();
        if self.sigma.len() != n || self.sigma_inv.len() != n || self.star.map.len() != n {
            return Err(GwaError::Format("point maps must have one entry per variable".into()));
        }
        let field = match (field, &self.field) {
            (Some(f), _) => f,
            (None, Some(spec)) => Field::new(spec),
            (None, None) => Field::cyclotomic(self.required_conductor()?),
        };
        let mut params = BTreeMap::new();
        for (k, v) in &self.params {
            let val = Expr::parse(v)?.eval(&field, &|name| params_lookup(&params, name))?;
            params.insert(k.clone(), val);
        }
        let aut = |b: bool| if b { FieldAut::Conjugation } else { FieldAut::Identity };
        Ok(GwaPresentation {
            name: self.name.clone().unwrap_or_else(|| "custom".into()),
            field,
            vars: self.vars.clone(),
            params,
            sigma: PointMap::new(Self::exprs(&self.sigma)?, aut(self.sigma_conjugates_coefficients)),
            sigma_inv: PointMap::new(Self::exprs(&self.sigma_inv)?, aut(self.sigma_conjugates_coefficients)),
            t: Expr::parse(&self.t)?,
            star: PointMap::new(Self::exprs(&self.star.map)?, aut(self.star.conjugate_coefficients)),
        })
    }
}

fn params_lookup(params: &BTreeMap<String, Scalar>, name: &str) -> Option<Scalar> {
    params.get(name).cloned()
}

impl GwaPresentation {
    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    fn env<'a>(&'a self, p: &'a WeightPoint) -> impl Fn(&str) -> Option<Scalar> + 'a {
        move |name: &str| {
            if let Some(k) = self.vars.iter().position(|v| v == name) {
                return Some(p.0[k].clone());
            }
            self.params.get(name).cloned()
        }
    }

    fn apply(&self, map: &PointMap, p: &WeightPoint) -> Result<WeightPoint, GwaError> {
        let env = self.env(p);
        let mut out = Vec::with_capacity(map.exprs.len());
        for e in &map.exprs {
            let v = e.eval(&self.field, &env)?;
            out.push(map.coefficient_aut.apply(&v).map_err(ExprError::from)?);
        }
        Ok(WeightPoint(out))
    }

    /// The substitution map of σ.
    pub fn sigma_point(&self, p: &WeightPoint) -> Result<WeightPoint, GwaError> {
        self.apply(&self.sigma, p)
    }

    pub fn sigma_inv_point(&self, p: &WeightPoint) -> Result<WeightPoint, GwaError> {
        self.apply(&self.sigma_inv, p)
    }

    /// Point of the ideal σ(𝔪_P).
    pub fn ideal_succ(&self, p: &WeightPoint) -> Result<WeightPoint, GwaError> {
        self.sigma_inv_point(p)
    }

    /// Point of the ideal σ⁻¹(𝔪_P).
    pub fn ideal_pred(&self, p: &WeightPoint) -> Result<WeightPoint, GwaError> {
        self.sigma_point(p)
    }

    /// Point of the ideal 𝔪_P^∗.
    pub fn star_point(&self, p: &WeightPoint) -> Result<WeightPoint, GwaError> {
        self.apply(&self.star, p)
    }

    pub fn t_eval(&self, p: &WeightPoint) -> Result<Scalar, GwaError> {
        Ok(self.t.eval(&self.field, &self.env(p))?)
    }

    /// σ^k(t) evaluated at P, by iterating the substitution map.
    pub fn sigma_pow_t(&self, k: i64, p: &WeightPoint) -> Result<Scalar, GwaError> {
        let mut q = p.clone();
        for _ in 0..k.unsigned_abs() {
            q = if k > 0 { self.sigma_point(&q)? } else { self.sigma_inv_point(&q)? };
        }
        self.t_eval(&q)
    }

    pub fn point(&self, coords: Vec<Scalar>) -> Result<WeightPoint, GwaError> {
        if coords.len() != self.dim() {
            return Err(GwaError::Format(format!("expected {} coordinates, got {}", self.dim(), coords.len())));
        }
        Ok(WeightPoint(coords.iter().map(|c| self.field.adopt(c)).collect::<Result<_, _>>().map_err(ExprError::from)?))
    }

    /// Parse a comma-separated point such as `"0, 1/2"`.
    pub fn parse_point(&self, src: &str) -> Result<WeightPoint, GwaError> {
        let parts: Vec<&str> = if src.trim().is_empty() { vec![] } else { src.split(',').collect() };
        let coords = parts
            .iter()
            .map(|s| Expr::parse(s.trim())?.eval(&self.field, &|n| self.params.get(n).cloned()))
            .collect::<Result<Vec<_>, _>>()?;
        self.point(coords)
    }

    /// Random sample points with small Gaussian-rational coordinates.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<WeightPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = self.field.imag_unit().ok();
        (0..count)
            .map(|_| {
                WeightPoint(
                    (0..self.dim())
                        .map(|_| {
                            let re = self.field.ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
                            match &i {
                                Some(i) if rng.gen_bool(0.5) => re + i * &self.field.ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
                                _ => re,
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }

    /// Check the presentation axioms on the given sample points; points where
    /// some map is undefined are skipped.
    pub fn check_invariants(&self, samples: &[WeightPoint]) -> Result<usize, GwaError> {
        let mut checked = 0;
        for p in samples {
            let Ok(res) = self.check_at(p) else { continue };
            res?;
            checked += 1;
        }
        Ok(checked)
    }

    fn check_at(&self, p: &WeightPoint) -> Result<Result<(), GwaError>, GwaError> {
        let bad = |what: &str| Ok(Err(GwaError::InvariantViolated(format!("{what} fails at {p}"))));
        let s = self.sigma_point(p)?;
        if self.sigma_inv_point(&s)? != *p {
            return bad("sigma_inv(sigma(P)) = P");
        }
        if self.sigma_point(&self.sigma_inv_point(p)?)? != *p {
            return bad("sigma(sigma_inv(P)) = P");
        }
        let st = self.star_point(p)?;
        if self.star_point(&st)? != *p {
            return bad("star(star(P)) = P");
        }
        if self.sigma_point(&st)? != self.star_point(&s)? {
            return bad("sigma commutes with star");
        }
        if self.t_eval(&st)? != self.t_eval(p)?.conj() {
            return bad("t is self-adjoint");
        }
        Ok(Ok(()))
    }

    /// Run the invariant checks on 24 random points.
    pub fn validate(&self) -> Result<(), GwaError> {
        self.check_invariants(&self.sample_points(24, 0x5eed))?;
        Ok(())
    }
}

/// Certify that the point model applies: σ must fix coefficients, so that
/// σ^p induces the identity on residue fields.
pub fn residue_identify(pres: &GwaPresentation) -> Result<(), GwaError> {
    if pres.sigma.coefficient_aut.is_identity(&pres.field) && pres.sigma_inv.coefficient_aut.is_identity(&pres.field) {
        Ok(())
    } else {
        Err(GwaError::NotTorsionTrivial)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Period {
    Finite(usize),
    InfiniteWithin(usize),
}

/// A σ-orbit. Finite orbits store all p points; infinite ones a window
/// [−W, W] around the base.
#[derive(Clone, Debug)]
pub struct Orbit {
    pres: Arc<GwaPresentation>,
    period: Period,
    points: Vec<WeightPoint>,
    t_values: Vec<Scalar>,
    /// Index of `points[0]`.
    offset: i64,
    breaks: Vec<i64>,
    is_real: bool,
    is_symmetric: bool,
}

pub fn orbit_of(pres: &Arc<GwaPresentation>, seed: &WeightPoint, max_steps: usize) -> Result<Orbit, GwaError> {
    assert!(max_steps >= 1);
    let mut fwd = vec![seed.clone()];
    let mut period = Period::InfiniteWithin(max_steps);
    let mut cur = seed.clone();
    for step in 1..=max_steps {
        cur = pres.ideal_succ(&cur)?;
        if cur == *seed {
            period = Period::Finite(step);
            break;
        }
        fwd.push(cur.clone());
    }
    let (points, offset) = match period {
        Period::Finite(_) => {
            let t: Vec<Scalar> = fwd.iter().map(|p| pres.t_eval(p)).collect::<Result<_, _>>()?;
            let shift = t.iter().position(|x| x.is_zero()).unwrap_or(0);
            let mut pts = fwd;
            pts.rotate_left(shift);
            (pts, 0)
        }
        Period::InfiniteWithin(w) => {
            let mut back = Vec::with_capacity(w);
            let mut cur = seed.clone();
            for _ in 0..w {
                cur = pres.ideal_pred(&cur)?;
                back.push(cur.clone());
            }
            back.reverse();
            back.extend(fwd);
            (back, -(w as i64))
        }
    };
    let t_values: Vec<Scalar> = points.iter().map(|p| pres.t_eval(p)).collect::<Result<_, _>>()?;
    let breaks = t_values
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_zero())
        .map(|(k, _)| k as i64 + offset)
        .collect();
    let stars: Vec<WeightPoint> = points.iter().map(|p| pres.star_point(p)).collect::<Result<_, _>>()?;
    let is_real = stars.iter().zip(&points).all(|(s, p)| s == p);
    let base = &points[(-offset) as usize];
    let base_star = pres.star_point(base)?;
    let is_symmetric = points.contains(&base_star);
    Ok(Orbit { pres: pres.clone(), period, points, t_values, offset, breaks, is_real, is_symmetric })
}

impl Orbit {
    pub fn presentation(&self) -> &Arc<GwaPresentation> {
        &self.pres
    }

    pub fn field(&self) -> &Field {
        &self.pres.field
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.period, Period::Finite(_))
    }

    /// p for finite orbits.
    pub fn len(&self) -> Option<usize> {
        match self.period {
            Period::Finite(p) => Some(p),
            Period::InfiniteWithin(_) => None,
        }
    }

    /// Materialized index range (inclusive).
    pub fn window(&self) -> (i64, i64) {
        (self.offset, self.offset + self.points.len() as i64 - 1)
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_symmetric
    }

    pub fn base(&self) -> &WeightPoint {
        &self.points[(-self.offset) as usize]
    }

    /// Canonical representative of an index (reduced mod p on finite orbits).
    pub fn canon(&self, i: i64) -> i64 {
        match self.period {
            Period::Finite(p) => i.rem_euclid(p as i64),
            Period::InfiniteWithin(_) => i,
        }
    }

    pub fn succ(&self, i: i64) -> i64 {
        self.canon(i + 1)
    }

    pub fn pred(&self, i: i64) -> i64 {
        self.canon(i - 1)
    }

    fn slot(&self, i: i64) -> Result<usize, GwaError> {
        let k = self.canon(i) - self.offset;
        if k < 0 || k as usize >= self.points.len() {
            Err(GwaError::OutsideWindow(i))
        } else {
            Ok(k as usize)
        }
    }

    pub fn point(&self, i: i64) -> Result<&WeightPoint, GwaError> {
        Ok(&self.points[self.slot(i)?])
    }

    /// t evaluated at the point of σ^i(𝔪(ω)).
    pub fn t_at(&self, i: i64) -> Result<&Scalar, GwaError> {
        Ok(&self.t_values[self.slot(i)?])
    }

    pub fn contains(&self, i: i64) -> bool {
        self.slot(i).is_ok()
    }

    pub fn is_break(&self, i: i64) -> Result<bool, GwaError> {
        Ok(self.t_at(i)?.is_zero())
    }

    /// Break indices (in 0..p for finite orbits, within the window otherwise).
    pub fn break_indices(&self) -> &[i64] {
        &self.breaks
    }

    pub fn num_breaks(&self) -> usize {
        self.breaks.len()
    }

    /// Gaps p_1..p_m between consecutive breaks of a finite orbit.
    pub fn gaps(&self) -> Vec<usize> {
        let Some(p) = self.len() else { return vec![] };
        let b = &self.breaks;
        (0..b.len())
            .map(|k| if k + 1 < b.len() { (b[k + 1] - b[k]) as usize } else { (p as i64 - b[k] + b[0]) as usize })
            .collect()
    }

    /// j(𝔪) for a finite orbit with breaks: the unique j ∈ ℤ_m with
    /// 𝔪_{j−1} < 𝔪 ≤ 𝔪_j, where 𝔪_j is the break at `break_indices()[j]`.
    pub fn j_of(&self, i: i64) -> usize {
        let m = self.breaks.len();
        assert!(self.is_finite() && m > 0, "j(m) needs a finite orbit with breaks");
        let x = self.canon(i);
        match self.breaks.iter().position(|&b| b >= x) {
            Some(j) => j % m,
            None => 0,
        }
    }

    /// Index of the j-th break 𝔪_j.
    pub fn break_at(&self, j: usize) -> i64 {
        self.breaks[j % self.breaks.len()]
    }

    /// All stored indices in order.
    pub fn indices(&self) -> Vec<i64> {
        (0..self.points.len() as i64).map(|k| k + self.offset).collect()
    }

    /// Product of t over all points of a finite orbit (ξ of the break-free case).
    pub fn t_product(&self) -> Scalar {
        self.t_values.iter().fold(self.field().one(), |a, b| a * b)
    }

    /// Product of t over the non-break points of a finite orbit (q of the second kind).
    pub fn q_value(&self) -> Scalar {
        self.t_values.iter().filter(|t| !t.is_zero()).fold(self.field().one(), |a, b| a * b)
    }

    /// The index of the starred base point if it lies in the orbit.
    pub fn star_index(&self) -> Result<Option<i64>, GwaError> {
        let s = self.pres.star_point(self.base())?;
        Ok(self.points.iter().position(|p| *p == s).map(|k| k as i64 + self.offset))
    }
}

impl Serialize for Orbit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Orbit", 8)?;
        st.serialize_field("presentation", &self.pres.name)?;
        match self.period {
            Period::Finite(p) => st.serialize_field("period", &serde_json::json!({"finite": p}))?,
            Period::InfiniteWithin(b) => st.serialize_field("period", &serde_json::json!({"infinite_within": b}))?,
        }
        st.serialize_field("first_index", &self.offset)?;
        st.serialize_field("points", &self.points)?;
        st.serialize_field("t_values", &self.t_values)?;
        st.serialize_field("breaks", &self.breaks)?;
        st.serialize_field("gaps", &self.gaps())?;
        st.serialize_field("real", &self.is_real)?;
        st.serialize_field("symmetric", &self.is_symmetric)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kleinian() -> Arc<GwaPresentation> {
        let file = PresentationFile::from_toml(
            r#"
name = "kleinian"
vars = ["h"]
sigma = ["h - 1"]
sigma_inv = ["h + 1"]
t = "h^2 - 4"
star = { map = ["h"], conjugate_coefficients = true }
"#,
        )
        .unwrap();
        Arc::new(file.build(Some(Field::cyclotomic(4))).unwrap())
    }

    #[test]
    fn infinite_orbit_window() {
        let p = kleinian();
        p.validate().unwrap();
        let seed = p.parse_point("0").unwrap();
        let o = orbit_of(&p, &seed, 50).unwrap();
        assert_eq!(o.period(), Period::InfiniteWithin(50));
        assert_eq!(o.window(), (-50, 50));
        // points[i] is the point of σ^i(m): h + i.
        assert_eq!(o.point(3).unwrap().0[0], p.field.int(3));
        assert_eq!(o.break_indices(), &[-2, 2]);
        assert!(o.is_real());
    }

    #[test]
    fn sigma_power_matches_orbit_points() {
        let p = kleinian();
        let seed = p.parse_point("1/2").unwrap();
        let o = orbit_of(&p, &seed, 10).unwrap();
        for k in 0..8 {
            assert_eq!(&p.sigma_pow_t(k, &seed).unwrap(), o.t_at(-k).unwrap());
        }
    }

    #[test]
    fn conjugating_sigma_is_not_torsion_trivial() {
        let mut file = PresentationFile::from_toml(
            r#"
vars = []
sigma = []
sigma_inv = []
t = "2"
star = { map = [] }
"#,
        )
        .unwrap();
        assert!(residue_identify(&file.build(Some(Field::cyclotomic(4))).unwrap()).is_ok());
        file.sigma_conjugates_coefficients = true;
        assert_eq!(residue_identify(&file.build(Some(Field::cyclotomic(4))).unwrap()), Err(GwaError::NotTorsionTrivial));
    }

    #[test]
    fn broken_presentation_is_rejected() {
        let file = PresentationFile::from_toml(
            r#"
vars = ["h"]
sigma = ["h - 1"]
sigma_inv = ["h + 2"]
t = "h"
star = { map = ["h"] }
"#,
        )
        .unwrap();
        let p = file.build(Some(Field::cyclotomic(4))).unwrap();
        assert!(matches!(p.validate(), Err(GwaError::InvariantViolated(_))));
    }

    #[test]
    fn file_round_trip() {
        let src = r#"{"name":"k","dim":1,"vars":["h"],"field":null,"params":{},"sigma":["h - 1"],"sigma_inv":["h + 1"],"sigma_conjugates_coefficients":false,"t":"h","star":{"map":["h"],"conjugate_coefficients":true}}"#;
        let f = PresentationFile::from_json(src).unwrap();
        let back = serde_json::to_string(&f).unwrap();
        assert_eq!(PresentationFile::from_json(&back).unwrap(), f);
        let t = toml::to_string(&f).unwrap();
        assert_eq!(PresentationFile::from_toml(&t).unwrap(), f);
    }
}
