//! Job specifications: which presentation, orbit, descriptor and command.

use gwa_rep::expr::Expr;
use gwa_rep::gwa::{orbit_of, GwaPresentation, Orbit, PresentationFile};
use gwa_rep::presets::{make_preset, PresetId};
use gwa_rep::scalars::{Field, FieldAut, Scalar};
use gwa_rep::wmodule::{Descriptor, DescriptorSpec};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

/// Errors split by exit code: spec problems exit 2, domain errors exit 1.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Spec(String),
    Domain { kind: String, message: String },
}

impl CliError {
    pub fn domain(kind: &str, e: impl std::fmt::Display) -> CliError {
        CliError::Domain { kind: kind.into(), message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Spec(m) => serde_json::json!({"error": {"kind": "spec", "message": m}}),
            CliError::Domain { kind, message } => serde_json::json!({"error": {"kind": kind, "message": message}}),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    #[default]
    Orbit,
    Build,
    Check,
    Dual,
    Iso,
    DecidePu,
    Gram,
    Signature,
    Diagram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Pretty,
    Dot,
    Ascii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Exact,
    Approx,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct PresetSpec {
    pub name: String,
    /// Kleinian: t as a polynomial in H. Field case: the constant t.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    /// Field case: σ acts on coefficients as ζ ↦ ζ^tau.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresentationSource {
    Preset(PresetSpec),
    File(PathBuf),
    Inline(PresentationFile),
}

impl Default for PresentationSource {
    fn default() -> Self {
        PresentationSource::Preset(PresetSpec { name: "cuts".into(), ..Default::default() })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct JobSpec {
    #[serde(default)]
    pub command: CommandKind,
    #[serde(default)]
    pub presentation: PresentationSource,
    /// Comma-separated coordinates; may reference `params`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u32>,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<DescriptorSpec>,
    /// Second descriptor for `iso`; the dual is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<DescriptorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default)]
    pub strict: bool,
    /// Build without the descriptor's indecomposability checks.
    #[serde(default)]
    pub relaxed: bool,
    #[serde(default)]
    pub format: OutputFormat,
}

impl JobSpec {
    pub fn from_toml(src: &str) -> Result<JobSpec, CliError> {
        toml::from_str(src).map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn from_json(src: &str) -> Result<JobSpec, CliError> {
        serde_json::from_str(src).map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job specs serialize")
    }

    /// Load by extension: `.json` as JSON, anything else as TOML.
    pub fn load(path: &std::path::Path) -> Result<JobSpec, CliError> {
        let src = std::fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
        if path.extension().map_or(false, |e| e == "json") {
            JobSpec::from_json(&src)
        } else {
            JobSpec::from_toml(&src)
        }
    }
}

/// Default approximate tolerance, overridable by GWA_REP_PRECISION.
pub fn approx_tolerance() -> Result<f64, CliError> {
    match std::env::var("GWA_REP_PRECISION") {
        Ok(v) => v.trim().parse::<f64>().map_err(|_| CliError::Spec(format!("GWA_REP_PRECISION: bad number `{v}`"))),
        Err(_) => Ok(1e-9),
    }
}

fn parse_expr(src: &str, what: &str) -> Result<Expr, CliError> {
    Expr::parse(src).map_err(|e| CliError::Spec(format!("{what}: {e}")))
}

/// A resolved job: field, presentation, orbit and evaluated parameters.
pub struct Context {
    pub field: Field,
    pub pres: Arc<GwaPresentation>,
    pub orbit: Arc<Orbit>,
    pub params: BTreeMap<String, Scalar>,
}

impl Context {
    pub fn descriptor(&self, spec: &DescriptorSpec) -> Result<Descriptor, CliError> {
        spec.resolve(&self.orbit, &self.params).map_err(|e| CliError::domain("descriptor", e))
    }
}

/// Smallest conductor (a multiple of 4) covering every literal in the job.
fn job_conductor(job: &JobSpec, file: Option<&PresentationFile>) -> Result<u32, CliError> {
    let mut n = 4u32;
    let mut texts: Vec<&str> = job.params.values().map(|s| s.as_str()).collect();
    if let Some(s) = &job.seed {
        texts.extend(s.split(','));
    }
    if let Some(l) = &job.lambda {
        texts.push(l);
    }
    for d in [&job.descriptor, &job.other].into_iter().flatten() {
        if let DescriptorSpec::F { f } | DescriptorSpec::Wf { f, .. } = d {
            texts.push(f);
        }
    }
    if let PresentationSource::Preset(p) = &job.presentation {
        texts.extend(p.t.as_deref());
        texts.extend(p.q.as_deref());
    }
    let bound = |v: &str| job.params.contains_key(v) || v == "x" || v == "H";
    for t in texts {
        n = n.lcm(&parse_expr(t.trim(), "literal")?.required_conductor(&bound));
    }
    if let Some(f) = file {
        n = n.lcm(&f.required_conductor().map_err(|e| CliError::Spec(e.to_string()))?);
    }
    Ok(n)
}

fn preset_id(p: &PresetSpec, field: &Field) -> Result<PresetId, CliError> {
    let scalar = |src: &str, what: &str| -> Result<Scalar, CliError> {
        parse_expr(src, what)?.eval_const(field).map_err(|e| CliError::Spec(format!("{what}: {e}")))
    };
    Ok(match p.name.as_str() {
        "kleinian" => PresetId::KleinianA { t: p.t.clone().ok_or_else(|| CliError::Spec("kleinian needs t".into()))? },
        "usl2" => PresetId::USl2,
        "uqsl2" => PresetId::UqSl2 { q: scalar(p.q.as_deref().ok_or_else(|| CliError::Spec("uqsl2 needs q".into()))?, "q")? },
        "cuts" => PresetId::Cuts,
        "field" => {
            let t = scalar(p.t.as_deref().unwrap_or("1"), "t")?;
            let tau = match p.tau {
                None | Some(1) => FieldAut::Identity,
                Some(-1) => FieldAut::Conjugation,
                Some(e) => FieldAut::Galois(e),
            };
            PresetId::FieldCase { t, tau }
        }
        other => return Err(CliError::Spec(format!("unknown preset `{other}`"))),
    })
}

fn default_seed(pres: &GwaPresentation, job: &JobSpec) -> String {
    if pres.name == "uqsl2" && job.params.contains_key("mu") {
        let alpha = if job.params.contains_key("alpha") { "alpha" } else { "0" };
        return format!("mu, {alpha}");
    }
    vec!["0"; pres.dim()].join(", ")
}

pub fn resolve(job: &JobSpec) -> Result<Context, CliError> {
    let file = match &job.presentation {
        PresentationSource::File(path) => {
            let src = std::fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
            let parsed = if path.extension().map_or(false, |e| e == "json") {
                PresentationFile::from_json(&src)
            } else {
                PresentationFile::from_toml(&src)
            };
            Some(parsed.map_err(|e| CliError::Spec(e.to_string()))?)
        }
        PresentationSource::Inline(f) => Some(f.clone()),
        PresentationSource::Preset(_) => None,
    };
    let field = match job.backend {
        Backend::Approx => Field::approx(approx_tolerance()?),
        Backend::Exact => Field::cyclotomic(match job.conductor {
            Some(c) => c,
            None => job_conductor(job, file.as_ref())?,
        }),
    };
    let pres = match (&job.presentation, &file) {
        (PresentationSource::Preset(p), _) => make_preset(&preset_id(p, &field)?, Some(field.clone())).map_err(|e| CliError::domain("presentation", e))?,
        (_, Some(f)) => {
            let pres = f.build(Some(field.clone())).map_err(|e| CliError::domain("presentation", e))?;
            pres.validate().map_err(|e| CliError::domain("presentation", e))?;
            pres
        }
        _ => unreachable!(),
    };
    let pres = Arc::new(pres);
    let mut params = BTreeMap::new();
    for (k, v) in &job.params {
        let val = parse_expr(v, k)?
            .eval(&field, &|n| params.get(n).cloned().or_else(|| pres.params.get(n).cloned()))
            .map_err(|e| CliError::Spec(format!("{k}: {e}")))?;
        params.insert(k.clone(), val);
    }
    let seed_src = job.seed.clone().unwrap_or_else(|| default_seed(&pres, job));
    let coords = seed_src
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            parse_expr(s.trim(), "seed")?
                .eval(&field, &|n| params.get(n).cloned().or_else(|| pres.params.get(n).cloned()))
                .map_err(|e| CliError::Spec(format!("seed: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let point = pres.point(coords).map_err(|e| CliError::Spec(e.to_string()))?;
    let orbit = Arc::new(orbit_of(&pres, &point, job.max_steps.unwrap_or(64)).map_err(|e| CliError::domain("orbit", e))?);
    Ok(Context { field, pres, orbit, params })
}
