//! Finitistic duals and brute-force isomorphism search.

use super::{same_orbit, ModuleError, WeightModule};
use crate::linalg::{Matrix, SparseSystem};
use crate::scalars::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// The dual in the dual basis: X♯ on V_i is (Y on V_{i+1})ᴴ and Y♯ on V_i
/// is (X on V_{i−1})ᴴ.
pub fn dual(m: &WeightModule) -> Result<WeightModule, ModuleError> {
    if m.is_truncated() {
        return Err(ModuleError::InfiniteSupport);
    }
    if !m.orbit.is_real() {
        return Err(ModuleError::NonRealOrbit);
    }
    let o = &m.orbit;
    let mut x = BTreeMap::new();
    let mut y = BTreeMap::new();
    for &i in m.dims.keys() {
        if let Some(ym) = m.y.get(&o.succ(i)) {
            x.insert(i, ym.adjoint());
        }
        if let Some(xm) = m.x.get(&o.pred(i)) {
            y.insert(i, xm.adjoint());
        }
    }
    let labels = m.labels.iter().map(|(&i, ls)| (i, ls.iter().map(|l| format!("{l}#")).collect())).collect();
    WeightModule::from_parts(o.clone(), m.dims.clone(), x, y, Some(labels), (false, false))
}

/// Invertible T_i: V_i → V'_i intertwining X and Y.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleIso {
    pub blocks: BTreeMap<i64, Matrix>,
}

impl ModuleIso {
    pub fn inverse(&self) -> Result<ModuleIso, ModuleError> {
        let mut blocks = BTreeMap::new();
        for (&i, t) in &self.blocks {
            blocks.insert(i, t.inverse()?);
        }
        Ok(ModuleIso { blocks })
    }

    /// Check T·X = X'·T and T·Y = Y'·T on all stored maps.
    pub fn intertwines(&self, src: &WeightModule, dst: &WeightModule) -> bool {
        let o = &src.orbit;
        for (&i, t) in &self.blocks {
            for (maps_s, maps_d, j) in [(&src.x, &dst.x, o.succ(i)), (&src.y, &dst.y, o.pred(i))] {
                if let (Some(a), Some(b), Some(tj)) = (maps_s.get(&i), maps_d.get(&i), self.blocks.get(&j)) {
                    if tj.mul(a) != b.mul(t) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// One global matrix, block diagonal in the module's offsets.
    pub fn global(&self, m: &WeightModule) -> Matrix {
        let n = m.total_dim();
        let off = m.offsets();
        let mut g = Matrix::zeros(m.field(), n, n);
        for (&i, t) in &self.blocks {
            for r in 0..t.rows() {
                for c in 0..t.cols() {
                    g.set(off[&i] + r, off[&i] + c, t.get(r, c).clone());
                }
            }
        }
        g
    }
}

impl Serialize for ModuleIso {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let blocks: Vec<serde_json::Value> = self
            .blocks
            .iter()
            .map(|(i, t)| {
                let rows: Vec<Vec<String>> = t.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                serde_json::json!({"index": i, "matrix": rows})
            })
            .collect();
        blocks.serialize(s)
    }
}

/// Outcome of an isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoSearch {
    Found(ModuleIso),
    /// The intertwiner space is zero, dimensions differ, or a determinant
    /// polynomial vanishes identically on a full degree grid.
    NoneCertified(String),
    /// No invertible element found by sampling and affine slices.
    NoneSampled,
}

const RANDOM_ATTEMPTS: usize = 32;
const GRID_LIMIT: usize = 4096;

/// Search for an isomorphism M → N.
pub fn is_isomorphic(m: &WeightModule, n: &WeightModule) -> Result<Option<ModuleIso>, ModuleError> {
    Ok(match search_isomorphism(m, n)? {
        IsoSearch::Found(t) => Some(t),
        _ => None,
    })
}

pub fn search_isomorphism(m: &WeightModule, n: &WeightModule) -> Result<IsoSearch, ModuleError> {
    if !same_orbit(&m.orbit, &n.orbit) {
        return Err(ModuleError::OrbitMismatch);
    }
    if m.is_truncated() || n.is_truncated() {
        return Err(ModuleError::InfiniteSupport);
    }
    let sm: Vec<(i64, usize)> = m.dims.iter().filter(|(_, d)| **d > 0).map(|(i, d)| (*i, *d)).collect();
    let sn: Vec<(i64, usize)> = n.dims.iter().filter(|(_, d)| **d > 0).map(|(i, d)| (*i, *d)).collect();
    if sm != sn {
        return Ok(IsoSearch::NoneCertified("weight multiplicities differ".into()));
    }
    let field = m.field().clone();
    let o = &m.orbit;
    let mut offset = BTreeMap::new();
    let mut total = 0;
    for &(i, d) in &sm {
        offset.insert(i, total);
        total += d * d;
    }
    let dim = |i: i64| m.dim_at(i);
    let var = |i: i64, r: usize, c: usize| offset[&i] + r * dim(i) + c;
    let mut sys = SparseSystem::new(&field, total);
    // T_{j}·A_i − B_i·T_i = 0 for (A, B, j) = (X, X', i+1) and (Y, Y', i−1).
    for &(i, d) in &sm {
        for (ma, mb, j) in [(&m.x, &n.x, o.succ(i)), (&m.y, &n.y, o.pred(i))] {
            let dj = dim(j);
            if dj == 0 {
                continue;
            }
            let (Some(a), Some(b)) = (ma.get(&i), mb.get(&i)) else { continue };
            for r in 0..dj {
                for c in 0..d {
                    let mut row: Vec<(usize, Scalar)> = Vec::new();
                    for k in 0..dj {
                        let v = a.get(k, c);
                        if !v.is_zero() {
                            row.push((var(j, r, k), v.clone()));
                        }
                    }
                    for k in 0..d {
                        let v = b.get(r, k);
                        if !v.is_zero() {
                            row.push((var(i, k, c), -v));
                        }
                    }
                    if !row.is_empty() {
                        sys.add_row(row);
                    }
                }
            }
        }
    }
    let kernel = sys.nullspace();
    if kernel.is_empty() {
        return Ok(IsoSearch::NoneCertified("no nonzero intertwiner".into()));
    }
    let combine = |coef: &[i64]| -> BTreeMap<i64, Matrix> {
        let mut blocks = BTreeMap::new();
        for &(i, d) in &sm {
            let mut t = Matrix::zeros(&field, d, d);
            for r in 0..d {
                for c in 0..d {
                    let mut acc = field.zero();
                    for (v, &k) in kernel.iter().zip(coef) {
                        if k != 0 {
                            let e = &v[var(i, r, c)];
                            if !e.is_zero() {
                                acc = acc + &field.int(k) * e;
                            }
                        }
                    }
                    t.set(r, c, acc);
                }
            }
            blocks.insert(i, t);
        }
        blocks
    };
    let invertible = |blocks: &BTreeMap<i64, Matrix>| blocks.values().all(|t| !t.det().is_zero());
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    let r = kernel.len();
    if r == 1 {
        let b = combine(&[1]);
        return Ok(if invertible(&b) {
            IsoSearch::Found(ModuleIso { blocks: b })
        } else {
            IsoSearch::NoneCertified("one-dimensional intertwiner space without invertible element".into())
        });
    }
    for _ in 0..RANDOM_ATTEMPTS {
        let coef: Vec<i64> = (0..r).map(|_| rng.gen_range(-64..=64)).collect();
        let b = combine(&coef);
        if invertible(&b) {
            return Ok(IsoSearch::Found(ModuleIso { blocks: b }));
        }
    }
    // A block whose determinant polynomial (degree d_i) vanishes on the grid
    // {0..d_i}^r vanishes identically.
    for &(i, d) in &sm {
        let Some(size) = (d + 1).checked_pow(r as u32).filter(|s| *s <= GRID_LIMIT) else { continue };
        let mut all_zero = true;
        for idx in 0..size {
            let mut coef = vec![0i64; r];
            let mut rem = idx;
            for c in coef.iter_mut() {
                *c = (rem % (d + 1)) as i64;
                rem /= d + 1;
            }
            if !combine(&coef)[&i].det().is_zero() {
                all_zero = false;
                break;
            }
        }
        if all_zero {
            return Ok(IsoSearch::NoneCertified(format!("determinant vanishes identically at weight {i}")));
        }
    }
    // Affine slices a + s·b, s = 0..=D, with D the total degree.
    let deg: usize = sm.iter().map(|(_, d)| d).sum();
    for _ in 0..4 {
        let a: Vec<i64> = (0..r).map(|_| rng.gen_range(-16..=16)).collect();
        let b: Vec<i64> = (0..r).map(|_| rng.gen_range(-16..=16)).collect();
        for s in 0..=deg as i64 {
            let coef: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + s * y).collect();
            let bl = combine(&coef);
            if invertible(&bl) {
                return Ok(IsoSearch::Found(ModuleIso { blocks: bl }));
            }
        }
    }
    Ok(IsoSearch::NoneSampled)
}
