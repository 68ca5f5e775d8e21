//! Weight modules as matrix data over an orbit, the five module families,
//! relation checks, finitistic duals and isomorphism search.
//!
//! A module stores one weight space per orbit index. `X` maps V_i to
//! V_{i+1} and `Y` maps V_i to V_{i−1}; on V_i we need YX = t_at(i) and
//! XY = t_at(i−1).

mod diagram;
mod iso;

pub use diagram::Arrow;
pub use iso::{dual, is_isomorphic, search_isomorphism, IsoSearch, ModuleIso};

use crate::gwa::{GwaError, Orbit};
use crate::linalg::Matrix;
use crate::scalars::{Field, Scalar, ScalarError};
use crate::skewpoly::{companion, SkewError, SkewPoly};
use crate::words::{is_nonperiodic_mword, Letter, Word};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModuleError {
    #[error("descriptor invariant violated: {0}")]
    DescriptorInvariantViolated(String),
    #[error("a window is required for modules with infinite support")]
    WindowRequired,
    #[error("operation needs finite, untruncated support")]
    InfiniteSupport,
    #[error("operation needs a real orbit")]
    NonRealOrbit,
    #[error("modules live on different orbits")]
    OrbitMismatch,
    #[error("malformed module data: {0}")]
    Shape(String),
    #[error(transparent)]
    Gwa(#[from] GwaError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

// ---- descriptors ----

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// V(ω): infinite orbit without breaks.
    Omega,
    /// V(ω, S, I_X) with S = [lo, hi]; `None` means unbounded on that side.
    Supportive { lo: Option<i64>, hi: Option<i64>, ix: BTreeSet<i64> },
    /// V(ω, f): finite orbit without breaks, f in the skew Laurent ring.
    NoBreaks { f: SkewPoly },
    /// V(ω, i, w): finite orbit with breaks, first kind.
    FirstKind { index: usize, word: Word },
    /// V(ω, w, f): finite orbit with breaks, second kind.
    SecondKind { word: Word, f: SkewPoly },
}

#[derive(Clone, Debug)]
pub struct Descriptor {
    pub orbit: Arc<Orbit>,
    pub family: Family,
}

impl PartialEq for Descriptor {
    fn eq(&self, other: &Descriptor) -> bool {
        same_orbit(&self.orbit, &other.orbit) && self.family == other.family
    }
}

pub fn same_orbit(a: &Orbit, b: &Orbit) -> bool {
    std::ptr::eq(a, b)
        || (a.presentation().name == b.presentation().name
            && a.period() == b.period()
            && a.window() == b.window()
            && a.base() == b.base())
}

/// Indecomposability is only checked in strict mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strictness {
    Strict,
    Relaxed,
}

fn bad(msg: impl Into<String>) -> ModuleError {
    ModuleError::DescriptorInvariantViolated(msg.into())
}

/// Inner breaks of S: breaks x ∈ S with x + 1 ∈ S, within the orbit window.
pub fn inner_breaks(orbit: &Orbit, lo: Option<i64>, hi: Option<i64>) -> Result<BTreeSet<i64>, ModuleError> {
    Ok(orbit
        .break_indices()
        .iter()
        .cloned()
        .filter(|&b| lo.map_or(true, |l| b >= l) && hi.map_or(true, |h| b + 1 <= h))
        .collect())
}

impl Descriptor {
    pub fn new(orbit: Arc<Orbit>, family: Family) -> Descriptor {
        Descriptor { orbit, family }
    }

    pub fn kind(&self) -> &'static str {
        match self.family {
            Family::Omega => "omega",
            Family::Supportive { .. } => "supp",
            Family::NoBreaks { .. } => "f",
            Family::FirstKind { .. } => "iw",
            Family::SecondKind { .. } => "wf",
        }
    }

    pub fn validate(&self, mode: Strictness) -> Result<(), ModuleError> {
        let o = &self.orbit;
        let m = o.num_breaks();
        match &self.family {
            Family::Omega => {
                if o.is_finite() || m > 0 {
                    return Err(bad("V(ω) needs an infinite orbit without breaks"));
                }
            }
            Family::Supportive { lo, hi, ix } => {
                if o.is_finite() || m == 0 {
                    return Err(bad("supportive intervals need an infinite orbit with breaks"));
                }
                if let (Some(l), Some(h)) = (lo, hi) {
                    if l > h {
                        return Err(bad("empty interval"));
                    }
                }
                if let Some(l) = lo {
                    if !o.is_break(l - 1)? {
                        return Err(bad(format!("minimal element {l} must follow a break")));
                    }
                }
                if let Some(h) = hi {
                    if !o.is_break(*h)? {
                        return Err(bad(format!("maximal element {h} must be a break")));
                    }
                }
                let inner = inner_breaks(o, *lo, *hi)?;
                if !ix.is_subset(&inner) {
                    return Err(bad("I_X must be a subset of the inner breaks"));
                }
            }
            Family::NoBreaks { f } => {
                if !o.is_finite() || m > 0 {
                    return Err(bad("V(ω, f) needs a finite orbit without breaks"));
                }
                if !f.is_laurent() {
                    return Err(bad("f must live in the skew Laurent ring"));
                }
                if f.is_zero() || f.degree() == f.valuation() {
                    return Err(bad("f must have positive degree after removing its valuation"));
                }
                if mode == Strictness::Strict && !f.is_indecomposable()? {
                    return Err(bad("f is not indecomposable"));
                }
            }
            Family::FirstKind { index, .. } => {
                if !o.is_finite() || m == 0 {
                    return Err(bad("first kind needs a finite orbit with breaks"));
                }
                if *index >= m {
                    return Err(bad(format!("index {index} is not a residue mod {m}")));
                }
            }
            Family::SecondKind { word, f } => {
                if !o.is_finite() || m == 0 {
                    return Err(bad("second kind needs a finite orbit with breaks"));
                }
                if !is_nonperiodic_mword(word, m) {
                    return Err(bad(format!("`{word}` is not a non-periodic {m}-word")));
                }
                if f.is_laurent() {
                    return Err(bad("f must live in the skew polynomial ring"));
                }
                if f.is_zero() || f.degree() == Some(0) {
                    return Err(bad("f must have positive degree"));
                }
                if f.coeff(0).is_zero() {
                    return Err(bad("f must differ from x^d (nonzero constant term)"));
                }
                if mode == Strictness::Strict && !f.is_indecomposable()? {
                    return Err(bad("f is not indecomposable"));
                }
            }
        }
        Ok(())
    }

    /// Finite support and no window needed.
    pub fn has_finite_support(&self) -> bool {
        match &self.family {
            Family::Omega => false,
            Family::Supportive { lo, hi, .. } => lo.is_some() && hi.is_some(),
            _ => true,
        }
    }
}

// ---- modules ----

#[derive(Clone, Debug)]
pub struct WeightModule {
    orbit: Arc<Orbit>,
    dims: BTreeMap<i64, usize>,
    x: BTreeMap<i64, Matrix>,
    y: BTreeMap<i64, Matrix>,
    labels: BTreeMap<i64, Vec<String>>,
    cut_below: bool,
    cut_above: bool,
}

impl WeightModule {
    /// Assemble a module from raw data. Maps between stored spaces that are
    /// not supplied are zero; maps leaving the stored spaces are zero unless
    /// that side is cut.
    pub fn from_parts(
        orbit: Arc<Orbit>,
        dims: BTreeMap<i64, usize>,
        x: BTreeMap<i64, Matrix>,
        y: BTreeMap<i64, Matrix>,
        labels: Option<BTreeMap<i64, Vec<String>>>,
        cuts: (bool, bool),
    ) -> Result<WeightModule, ModuleError> {
        let field = orbit.field().clone();
        for &i in dims.keys() {
            if orbit.canon(i) != i {
                return Err(ModuleError::Shape(format!("index {i} is not canonical")));
            }
            orbit.point(i)?;
        }
        let mut fx = BTreeMap::new();
        let mut fy = BTreeMap::new();
        for (&i, &d) in &dims {
            if let Some(&ds) = dims.get(&orbit.succ(i)) {
                let mat = x.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(&field, ds, d));
                if mat.rows() != ds || mat.cols() != d {
                    return Err(ModuleError::Shape(format!("X at {i} has the wrong shape")));
                }
                fx.insert(i, mat);
            } else if x.contains_key(&i) {
                return Err(ModuleError::Shape(format!("X at {i} leaves the stored spaces")));
            }
            if let Some(&dp) = dims.get(&orbit.pred(i)) {
                let mat = y.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(&field, dp, d));
                if mat.rows() != dp || mat.cols() != d {
                    return Err(ModuleError::Shape(format!("Y at {i} has the wrong shape")));
                }
                fy.insert(i, mat);
            } else if y.contains_key(&i) {
                return Err(ModuleError::Shape(format!("Y at {i} leaves the stored spaces")));
            }
        }
        let labels = match labels {
            Some(l) => l,
            None => dims.iter().map(|(&i, &d)| (i, (1..=d).map(|s| format!("e{s}")).collect())).collect(),
        };
        Ok(WeightModule { orbit, dims, x: fx, y: fy, labels, cut_below: cuts.0, cut_above: cuts.1 })
    }

    pub fn orbit(&self) -> &Arc<Orbit> {
        &self.orbit
    }

    pub fn field(&self) -> &Field {
        self.orbit.field()
    }

    /// Stored indices in order.
    pub fn spaces(&self) -> Vec<i64> {
        self.dims.keys().cloned().collect()
    }

    pub fn dim_at(&self, i: i64) -> usize {
        self.dims.get(&self.orbit.canon(i)).cloned().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Indices with nonzero weight space.
    pub fn support(&self) -> Vec<i64> {
        self.dims.iter().filter(|(_, d)| **d > 0).map(|(i, _)| *i).collect()
    }

    pub fn x_at(&self, i: i64) -> Option<&Matrix> {
        self.x.get(&i)
    }

    pub fn y_at(&self, i: i64) -> Option<&Matrix> {
        self.y.get(&i)
    }

    pub fn labels_at(&self, i: i64) -> &[String] {
        self.labels.get(&i).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn is_truncated(&self) -> bool {
        self.cut_below || self.cut_above
    }

    pub fn cuts(&self) -> (bool, bool) {
        (self.cut_below, self.cut_above)
    }

    pub fn set_x(&mut self, i: i64, m: Matrix) -> Result<(), ModuleError> {
        let old = self.x.get(&i).ok_or_else(|| ModuleError::Shape(format!("no X map at {i}")))?;
        if old.rows() != m.rows() || old.cols() != m.cols() {
            return Err(ModuleError::Shape(format!("X at {i} has the wrong shape")));
        }
        self.x.insert(i, m);
        Ok(())
    }

    pub fn set_y(&mut self, i: i64, m: Matrix) -> Result<(), ModuleError> {
        let old = self.y.get(&i).ok_or_else(|| ModuleError::Shape(format!("no Y map at {i}")))?;
        if old.rows() != m.rows() || old.cols() != m.cols() {
            return Err(ModuleError::Shape(format!("Y at {i} has the wrong shape")));
        }
        self.y.insert(i, m);
        Ok(())
    }

    /// Is the neighbour `j` of a stored space known to be zero (rather than cut off)?
    fn edge_is_zero(&self, from: i64, j: i64) -> bool {
        if self.dims.contains_key(&j) {
            return false;
        }
        let first = *self.dims.keys().next().unwrap();
        let last = *self.dims.keys().next_back().unwrap();
        !((j < first && self.cut_below && from == first) || (j > last && self.cut_above && from == last))
    }

    /// Offsets of each weight space in the global basis (spaces in index order).
    pub fn offsets(&self) -> BTreeMap<i64, usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|(&i, &d)| {
                let o = acc;
                acc += d;
                (i, o)
            })
            .collect()
    }

    /// X and Y as square matrices on the whole (stored) module.
    pub fn global_maps(&self) -> (Matrix, Matrix) {
        let n = self.total_dim();
        let off = self.offsets();
        let field = self.field();
        let mut gx = Matrix::zeros(field, n, n);
        let mut gy = Matrix::zeros(field, n, n);
        for (maps, g, step) in [(&self.x, &mut gx, 1i64), (&self.y, &mut gy, -1i64)] {
            for (&i, m) in maps {
                let j = self.orbit.canon(i + step);
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        let v = m.get(r, c);
                        if !v.is_zero() {
                            g.set(off[&j] + r, off[&i] + c, v.clone());
                        }
                    }
                }
            }
        }
        (gx, gy)
    }

    /// Verify YX = t and XY = σ(t) on every weight space.
    pub fn check_relations(&self) -> RelationReport {
        let mut report = RelationReport { checked: 0, skipped_at_boundary: 0, violation: None };
        let o = &self.orbit;
        let field = self.field();
        for (&i, &d) in &self.dims {
            if d == 0 {
                continue;
            }
            let id = |c: &Scalar| Matrix::scalar(field, d, c);
            let s = o.succ(i);
            let p = o.pred(i);
            // YX on V_i.
            let yx = match (self.x.get(&i), self.y.get(&s)) {
                (Some(xm), Some(ym)) => Some(ym.mul(xm)),
                _ if self.edge_is_zero(i, s) => Some(Matrix::zeros(field, d, d)),
                _ => None,
            };
            // XY on V_i.
            let xy = match (self.y.get(&i), self.x.get(&p)) {
                (Some(ym), Some(xm)) => Some(xm.mul(ym)),
                _ if self.edge_is_zero(i, p) => Some(Matrix::zeros(field, d, d)),
                _ => None,
            };
            for (got, rel, ti) in [(yx, "YX=t", i), (xy, "XY=sigma(t)", p)] {
                let Some(got) = got else {
                    report.skipped_at_boundary += 1;
                    continue;
                };
                report.checked += 1;
                let Ok(t) = o.t_at(ti) else {
                    report.skipped_at_boundary += 1;
                    continue;
                };
                let want = id(t);
                if got != want && report.violation.is_none() {
                    let (r, c) = first_diff(&got, &want);
                    report.violation = Some(Violation {
                        index: i,
                        relation: rel.to_string(),
                        row: r,
                        col: c,
                        expected: want.get(r, c).clone(),
                        found: got.get(r, c).clone(),
                    });
                }
            }
        }
        report
    }
}

fn first_diff(a: &Matrix, b: &Matrix) -> (usize, usize) {
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if a.get(r, c) != b.get(r, c) {
                return (r, c);
            }
        }
    }
    (0, 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub index: i64,
    pub relation: String,
    pub row: usize,
    pub col: usize,
    pub expected: Scalar,
    pub found: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub skipped_at_boundary: usize,
    pub violation: Option<Violation>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

impl Serialize for WeightModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mat = |m: &Matrix| -> Vec<Vec<String>> { m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect() };
        let spaces: Vec<serde_json::Value> = self
            .dims
            .iter()
            .map(|(&i, &d)| {
                serde_json::json!({
                    "index": i,
                    "point": self.orbit.point(i).map(|p| p.to_string()).unwrap_or_default(),
                    "dim": d,
                    "labels": self.labels_at(i),
                })
            })
            .collect();
        let maps = |ms: &BTreeMap<i64, Matrix>, step: i64| -> Vec<serde_json::Value> {
            ms.iter()
                .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
                .map(|(&i, m)| serde_json::json!({"from": i, "to": self.orbit.canon(i + step), "matrix": mat(m)}))
                .collect()
        };
        let mut st = s.serialize_struct("WeightModule", 6)?;
        st.serialize_field("orbit", &*self.orbit)?;
        st.serialize_field("total_dim", &self.total_dim())?;
        st.serialize_field("spaces", &spaces)?;
        st.serialize_field("x", &maps(&self.x, 1))?;
        st.serialize_field("y", &maps(&self.y, -1))?;
        st.serialize_field("truncated", &serde_json::json!({"below": self.cut_below, "above": self.cut_above}))?;
        st.end()
    }
}

// ---- construction ----

pub fn build(desc: &Descriptor, window: Option<(i64, i64)>) -> Result<WeightModule, ModuleError> {
    build_with(desc, window, Strictness::Strict)
}

/// Build without the indecomposability requirement on f.
pub fn build_relaxed(desc: &Descriptor, window: Option<(i64, i64)>) -> Result<WeightModule, ModuleError> {
    build_with(desc, window, Strictness::Relaxed)
}

pub fn build_with(desc: &Descriptor, window: Option<(i64, i64)>, mode: Strictness) -> Result<WeightModule, ModuleError> {
    desc.validate(mode)?;
    let o = &desc.orbit;
    match &desc.family {
        Family::Omega => {
            let (a, b) = window.ok_or(ModuleError::WindowRequired)?;
            build_supportive(o, a, b, (true, true), &BTreeSet::new(), &BTreeSet::new())
        }
        Family::Supportive { lo, hi, ix } => {
            let (a, cut_a) = match (lo, window) {
                (Some(l), Some((wa, _))) if wa > *l => (wa, true),
                (Some(l), _) => (*l, false),
                (None, Some((wa, _))) => (wa, true),
                (None, None) => return Err(ModuleError::WindowRequired),
            };
            let (b, cut_b) = match (hi, window) {
                (Some(h), Some((_, wb))) if wb < *h => (wb, true),
                (Some(h), _) => (*h, false),
                (None, Some((_, wb))) => (wb, true),
                (None, None) => return Err(ModuleError::WindowRequired),
            };
            if a > b {
                return Err(bad("window misses the interval"));
            }
            let inner = inner_breaks(o, *lo, *hi)?;
            let y_open: BTreeSet<i64> = inner.difference(ix).cloned().collect();
            build_supportive(o, a, b, (cut_a, cut_b), ix, &y_open)
        }
        Family::NoBreaks { f } => build_no_breaks(o, f),
        Family::FirstKind { index, word } => build_first_kind(o, *index, word),
        Family::SecondKind { word, f } => build_second_kind(o, word, f),
    }
}

fn one_by_one(field: &Field, c: Scalar) -> Matrix {
    Matrix::from_rows(field, vec![vec![c]])
}

/// One-dimensional spaces on [a, b]; X at x is t(x) off breaks, 1 on `ix`;
/// Y at x is 1 when x−1 is not a break or lies in `y_open`.
fn build_supportive(
    o: &Arc<Orbit>,
    a: i64,
    b: i64,
    cuts: (bool, bool),
    ix: &BTreeSet<i64>,
    y_open: &BTreeSet<i64>,
) -> Result<WeightModule, ModuleError> {
    let field = o.field().clone();
    let mut dims = BTreeMap::new();
    let mut x = BTreeMap::new();
    let mut y = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for i in a..=b {
        dims.insert(i, 1);
        labels.insert(i, vec![format!("v{i}")]);
        if i < b {
            let t = o.t_at(i)?.clone();
            let c = if !t.is_zero() {
                t
            } else if ix.contains(&i) {
                field.one()
            } else {
                field.zero()
            };
            x.insert(i, one_by_one(&field, c));
        }
        if i > a {
            let open = !o.is_break(i - 1)? || y_open.contains(&(i - 1));
            y.insert(i, one_by_one(&field, if open { field.one() } else { field.zero() }));
        }
    }
    WeightModule::from_parts(o.clone(), dims, x, y, Some(labels), cuts)
}

fn build_no_breaks(o: &Arc<Orbit>, f: &SkewPoly) -> Result<WeightModule, ModuleError> {
    let field = o.field().clone();
    let g = f.strip_valuation()?;
    let ff = companion(&g)?;
    let d = ff.rows();
    let p = o.len().unwrap() as i64;
    let mut dims = BTreeMap::new();
    let mut x = BTreeMap::new();
    let mut y = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for i in 0..p {
        dims.insert(i, d);
        labels.insert(i, (1..=d).map(|s| format!("e{s}")).collect());
        let t = o.t_at(i)?;
        let xm = if i == 0 { ff.scale(t) } else { Matrix::scalar(&field, d, t) };
        x.insert(i, xm);
        let ym = if o.pred(i) == 0 { ff.inverse()? } else { Matrix::identity(&field, d) };
        y.insert(i, ym);
    }
    WeightModule::from_parts(o.clone(), dims, x, y, Some(labels), (false, false))
}

/// Basis at index i as labels (k, s); first kind uses s = 0.
fn layout<F: Fn(i64) -> Vec<(usize, usize)>>(o: &Orbit, basis: F) -> BTreeMap<i64, Vec<(usize, usize)>> {
    (0..o.len().unwrap() as i64).map(|i| (i, basis(i))).collect()
}

fn assemble(
    o: &Arc<Orbit>,
    lay: &BTreeMap<i64, Vec<(usize, usize)>>,
    label: impl Fn(usize, usize) -> String,
    x_img: impl Fn(i64, usize, usize) -> Result<Vec<((usize, usize), Scalar)>, ModuleError>,
    y_img: impl Fn(i64, usize, usize) -> Result<Vec<((usize, usize), Scalar)>, ModuleError>,
) -> Result<WeightModule, ModuleError> {
    let field = o.field().clone();
    let mut dims = BTreeMap::new();
    let mut x = BTreeMap::new();
    let mut y = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for (&i, basis) in lay {
        dims.insert(i, basis.len());
        labels.insert(i, basis.iter().map(|&(k, s)| label(k, s)).collect());
    }
    for (&i, basis) in lay {
        for (maps, j, img) in [(&mut x, o.succ(i), &x_img as &dyn Fn(i64, usize, usize) -> _), (&mut y, o.pred(i), &y_img)] {
            let target = &lay[&j];
            let mut m = Matrix::zeros(&field, target.len(), basis.len());
            for (c, &(k, s)) in basis.iter().enumerate() {
                for (key, v) in img(i, k, s)? {
                    let r = target
                        .iter()
                        .position(|&b| b == key)
                        .ok_or_else(|| ModuleError::Shape(format!("image {key:?} missing at index {j}")))?;
                    m.set(r, c, v);
                }
            }
            maps.insert(i, m);
        }
    }
    WeightModule::from_parts(o.clone(), dims, x, y, Some(labels), (false, false))
}

fn build_first_kind(o: &Arc<Orbit>, index: usize, w: &Word) -> Result<WeightModule, ModuleError> {
    let m = o.num_breaks();
    let n = w.len();
    let lay = layout(o, |i| (0..=n).filter(|k| (index + k) % m == o.j_of(i)).map(|k| (k, 0)).collect());
    let one = o.field().one();
    assemble(
        o,
        &lay,
        |k, _| format!("e{k}"),
        |i, k, _| {
            let t = o.t_at(i)?;
            Ok(if !t.is_zero() {
                vec![((k, 0), t.clone())]
            } else if k < n && w.z(k + 1) == Letter::X {
                vec![((k + 1, 0), one.clone())]
            } else {
                vec![]
            })
        },
        |i, k, _| {
            Ok(if !o.is_break(o.pred(i))? {
                vec![((k, 0), one.clone())]
            } else if k >= 1 && w.z(k) == Letter::Y {
                vec![((k - 1, 0), one.clone())]
            } else {
                vec![]
            })
        },
    )
}

fn build_second_kind(o: &Arc<Orbit>, w: &Word, f: &SkewPoly) -> Result<WeightModule, ModuleError> {
    if !f.twist().is_identity(o.field()) {
        return Err(bad("torsion-trivial orbits need f with the identity twist"));
    }
    let m = o.num_breaks();
    let n = w.len();
    let g = f.monic()?;
    let d = g.degree().unwrap() as usize;
    // a_r is the coefficient of x^{r−1}; with the identity twist a°_r = a_{d+1−r}.
    let a: Vec<Scalar> = (1..=d).map(|r| g.coeff(r as i64 - 1)).collect();
    let lay = layout(o, |i| {
        let j = o.j_of(i);
        (1..=n).filter(|k| k % m == j).flat_map(|k| (1..=d).map(move |s| (k, s))).collect()
    });
    let one = o.field().one();
    let wide = n >= 10 || d >= 10;
    assemble(
        o,
        &lay,
        |k, s| if wide { format!("e{k},{s}") } else { format!("e{k}{s}") },
        |i, k, s| {
            let t = o.t_at(i)?;
            Ok(if !t.is_zero() {
                vec![((k, s), t.clone())]
            } else if k < n && w.z(k + 1) == Letter::X {
                vec![((k + 1, s), one.clone())]
            } else if k == n && w.z(1) == Letter::X && s < d {
                vec![((1, s + 1), one.clone())]
            } else if k == n && w.z(1) == Letter::X {
                (1..=d).map(|r| ((1, r), -&a[r - 1])).collect()
            } else {
                vec![]
            })
        },
        |i, k, s| {
            Ok(if !o.is_break(o.pred(i))? {
                vec![((k, s), one.clone())]
            } else if k > 1 && w.z(k) == Letter::Y {
                vec![((k - 1, s), one.clone())]
            } else if k == 1 && w.z(1) == Letter::Y && s > 1 {
                vec![((n, s - 1), one.clone())]
            } else if k == 1 && w.z(1) == Letter::Y {
                (1..=d).map(|r| ((n, r), -&a[d - r])).collect()
            } else {
                vec![]
            })
        },
    )
}

// ---- textual descriptors ----

/// Serializable descriptor parameters; polynomials are text in `x` with
/// named parameters resolved at [`DescriptorSpec::resolve`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DescriptorSpec {
    Omega,
    Supp {
        #[serde(default)]
        lo: Option<i64>,
        #[serde(default)]
        hi: Option<i64>,
        #[serde(default)]
        ix: Vec<i64>,
    },
    F {
        f: String,
    },
    Iw {
        #[serde(default)]
        index: usize,
        word: Word,
    },
    Wf {
        word: Word,
        f: String,
    },
}

impl DescriptorSpec {
    pub fn resolve(&self, orbit: &Arc<Orbit>, params: &BTreeMap<String, Scalar>) -> Result<Descriptor, ModuleError> {
        use crate::scalars::FieldAut;
        let field = orbit.field();
        let family = match self {
            DescriptorSpec::Omega => Family::Omega,
            DescriptorSpec::Supp { lo, hi, ix } => Family::Supportive { lo: *lo, hi: *hi, ix: ix.iter().cloned().collect() },
            DescriptorSpec::F { f } => Family::NoBreaks { f: SkewPoly::parse(field, f, FieldAut::Identity, true, params)? },
            DescriptorSpec::Iw { index, word } => Family::FirstKind { index: *index, word: word.clone() },
            DescriptorSpec::Wf { word, f } => {
                Family::SecondKind { word: word.clone(), f: SkewPoly::parse(field, f, FieldAut::Identity, false, params)? }
            }
        };
        Ok(Descriptor::new(orbit.clone(), family))
    }
}

impl Descriptor {
    pub fn to_spec(&self) -> DescriptorSpec {
        match &self.family {
            Family::Omega => DescriptorSpec::Omega,
            Family::Supportive { lo, hi, ix } => DescriptorSpec::Supp { lo: *lo, hi: *hi, ix: ix.iter().cloned().collect() },
            Family::NoBreaks { f } => DescriptorSpec::F { f: f.to_string() },
            Family::FirstKind { index, word } => DescriptorSpec::Iw { index: *index, word: word.clone() },
            Family::SecondKind { word, f } => DescriptorSpec::Wf { word: word.clone(), f: f.to_string() },
        }
    }
}

#[cfg(test)]
mod tests;
