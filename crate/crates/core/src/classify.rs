//! Duals of the standard families and pseudo-unitarizability verdicts.

use crate::gwa::Period;
use crate::skewpoly::{sharp_laurent, sharp_poly, SkewError};
use crate::scalars::FieldAut;
use crate::wmodule::{inner_breaks, Descriptor, Family, ModuleError};
use crate::words::{sharp_word, split_self_sharp, Letter, Word};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("orbit is not real")]
    NonRealOrbit,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Skew(#[from] SkewError),
}

/// The dual's descriptor, or only its word when the polynomial part has no
/// closed form.
#[derive(Clone, Debug, PartialEq)]
pub enum DualDescriptor {
    Known(Descriptor),
    PartiallyKnown { word: Word, note: String },
}

impl DualDescriptor {
    pub fn known(&self) -> Option<&Descriptor> {
        match self {
            DualDescriptor::Known(d) => Some(d),
            DualDescriptor::PartiallyKnown { .. } => None,
        }
    }
}

/// The q entering f♯ for a self-sharp word. Words starting with y traverse
/// the orbit the other way, so q is inverted; for q = 1 nothing changes.
pub fn second_kind_q(orbit: &crate::gwa::Orbit, word: &Word) -> Result<crate::scalars::Scalar, ClassifyError> {
    let q = orbit.q_value();
    Ok(if !word.is_empty() && word.z(1) == Letter::Y { q.inv().map_err(SkewError::from)? } else { q })
}

pub fn dual_descriptor(desc: &Descriptor) -> Result<DualDescriptor, ClassifyError> {
    let o = &desc.orbit;
    if !o.is_real() {
        return Err(ClassifyError::NonRealOrbit);
    }
    let family = match &desc.family {
        Family::Omega => Family::Omega,
        Family::Supportive { lo, hi, ix } => {
            let inner = inner_breaks(o, *lo, *hi)?;
            Family::Supportive { lo: *lo, hi: *hi, ix: inner.difference(ix).cloned().collect() }
        }
        Family::NoBreaks { f } => Family::NoBreaks { f: sharp_laurent(f, &o.t_product())? },
        Family::FirstKind { index, word } => Family::FirstKind { index: *index, word: sharp_word(word) },
        Family::SecondKind { word, f } => match split_self_sharp(word, o.num_breaks()) {
            Some(w0) => {
                let l = w0.len() / o.num_breaks();
                Family::SecondKind { word: word.clone(), f: sharp_poly(f, &second_kind_q(o, word)?, l, &FieldAut::Identity)? }
            }
            None => {
                return Ok(DualDescriptor::PartiallyKnown {
                    word: sharp_word(word),
                    note: "word is not of the form w0 w0#; the polynomial part is only recoverable by search".into(),
                })
            }
        },
    };
    Ok(DualDescriptor::Known(Descriptor::new(o.clone(), family)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    Yes,
    No,
    OutOfScope,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PuVerdict {
    pub decision: Decision,
    pub theorem: String,
    pub condition: String,
    pub witness: Option<String>,
    /// Set when the orbit was only seen to be acyclic up to this many steps.
    pub bound: Option<usize>,
}

fn verdict(decision: Decision, theorem: &str, condition: impl Into<String>) -> PuVerdict {
    PuVerdict { decision, theorem: theorem.into(), condition: condition.into(), witness: None, bound: None }
}

fn yes_no(b: bool) -> Decision {
    if b {
        Decision::Yes
    } else {
        Decision::No
    }
}

/// Decide pseudo-unitarizability. Infinite orbits are trusted up to the
/// enumeration bound, which is recorded in the verdict.
pub fn decide_pu(desc: &Descriptor) -> Result<PuVerdict, ClassifyError> {
    decide_pu_with(desc, false)
}

/// As `decide_pu`, but `strict` refuses orbits whose infinitude is only
/// known up to a bound.
pub fn decide_pu_with(desc: &Descriptor, strict: bool) -> Result<PuVerdict, ClassifyError> {
    let o = &desc.orbit;
    if !o.is_symmetric() {
        return Ok(verdict(Decision::No, "Cor. 3.8", "orbit is not symmetric"));
    }
    if !o.is_real() {
        return Ok(verdict(Decision::OutOfScope, "Sec. 5", "orbit is symmetric but not real"));
    }
    let bound = match o.period() {
        Period::InfiniteWithin(n) => Some(n),
        Period::Finite(_) => None,
    };
    if strict && bound.is_some() {
        return Ok(PuVerdict { bound, ..verdict(Decision::OutOfScope, "Sec. 5", "orbit infinitude not certified") });
    }
    let mut v = match &desc.family {
        Family::Omega => verdict(Decision::Yes, "Thm 5.1", "V(ω) is self-dual"),
        Family::Supportive { lo, hi, .. } => {
            let inner = inner_breaks(o, *lo, *hi)?;
            let mut v = verdict(yes_no(inner.is_empty()), "Thm 5.3", format!("I(S) = {inner:?} must be empty"));
            if !inner.is_empty() {
                v.witness = Some(format!("inner breaks {inner:?}"));
            }
            v
        }
        Family::NoBreaks { f } => {
            let fs = sharp_laurent(f, &o.t_product())?;
            let mut v = verdict(yes_no(f.similar(&fs)?), "Thm 5.8", "f similar to f#");
            v.witness = Some(format!("f# = {fs}"));
            v
        }
        Family::FirstKind { word, .. } => {
            let mut v = verdict(yes_no(word.is_empty()), "Thm 5.10", "w = ε");
            if !word.is_empty() {
                v.witness = Some(format!("w# = {}", sharp_word(word)));
            }
            v
        }
        Family::SecondKind { word, f } => match split_self_sharp(word, o.num_breaks()) {
            None => {
                let mut v = verdict(Decision::No, "Cor. 5.12", "w = w0 w0# fails");
                v.witness = Some(format!("w = {word}"));
                v
            }
            Some(w0) => {
                let l = w0.len() / o.num_breaks();
                let fs = sharp_poly(f, &second_kind_q(o, word)?, l, &FieldAut::Identity)?;
                let mut v = verdict(yes_no(f.similar(&fs)?), "Thm 5.14", "w = w0 w0# and f similar to f#");
                v.witness = Some(format!("w0 = {w0}; f# = {fs}"));
                v
            }
        },
    };
    v.bound = bound;
    Ok(v)
}

/// Membership in the list of simple weight modules.
pub fn is_simple(desc: &Descriptor) -> Result<bool, ClassifyError> {
    let o = &desc.orbit;
    Ok(match &desc.family {
        Family::Omega => true,
        Family::Supportive { lo, hi, .. } => inner_breaks(o, *lo, *hi)?.is_empty(),
        Family::NoBreaks { f } => f.is_irreducible()?,
        Family::FirstKind { word, .. } => word.is_empty(),
        Family::SecondKind { word, f } => {
            let m = o.num_breaks();
            let pure = word.len() == m && (word.0.iter().all(|l| *l == Letter::X) || word.0.iter().all(|l| *l == Letter::Y));
            pure && f.is_irreducible()?
        }
    })
}
