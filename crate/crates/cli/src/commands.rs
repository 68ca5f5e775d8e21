//! Command dispatch: one resolved job in, one JSON value (or text) out.

use crate::job::{resolve, CliError, CommandKind, Context, JobSpec, OutputFormat};
use gwa_rep::classify::{decide_pu_with, dual_descriptor, is_simple, DualDescriptor};
use gwa_rep::forms::{adjoint, check_admissible, closed_form_gram, form_from_iso, signature, GramForm};
use gwa_rep::gwa::Period;
use gwa_rep::wmodule::{build_with, dual, search_isomorphism, Descriptor, IsoSearch, Strictness, WeightModule};
use serde_json::{json, Value};

/// Result of running a job: structured output plus an exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: Value,
    /// Raw text for diagram formats; printed instead of the JSON value.
    pub text: Option<String>,
    pub code: i32,
}

impl Outcome {
    fn ok(value: Value) -> Outcome {
        Outcome { value, text: None, code: 0 }
    }

    pub fn from_error(e: &CliError) -> Outcome {
        Outcome { value: e.to_json(), text: None, code: e.exit_code() }
    }

    /// Render for stdout in the requested format.
    pub fn render(&self, format: OutputFormat) -> String {
        if let Some(t) = &self.text {
            return t.clone();
        }
        match format {
            OutputFormat::Pretty => pretty(&self.value, 0),
            _ => serde_json::to_string_pretty(&self.value).expect("values serialize"),
        }
    }
}

fn domain<E: std::fmt::Display>(kind: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::domain(kind, e)
}

fn window(job: &JobSpec) -> Option<(i64, i64)> {
    job.window.map(|[a, b]| (a, b))
}

fn descriptor(ctx: &Context, job: &JobSpec) -> Result<Descriptor, CliError> {
    let spec = job.descriptor.as_ref().ok_or_else(|| CliError::Spec("this command needs a descriptor (--kind)".into()))?;
    ctx.descriptor(spec)
}

fn built(desc: &Descriptor, job: &JobSpec) -> Result<WeightModule, CliError> {
    let mode = if job.relaxed { Strictness::Relaxed } else { Strictness::Strict };
    build_with(desc, window(job), mode).map_err(domain("module"))
}

fn iso_json(r: &IsoSearch) -> Value {
    match r {
        IsoSearch::Found(t) => json!({"result": "found", "witness": t}),
        IsoSearch::NoneCertified(why) => json!({"result": "none_certified", "reason": why}),
        IsoSearch::NoneSampled => json!({"result": "none_sampled"}),
    }
}

/// Run a job and collect its output; errors become error JSON.
pub fn run(job: &JobSpec) -> Outcome {
    match run_inner(job) {
        Ok(o) => o,
        Err(e) => Outcome::from_error(&e),
    }
}

fn run_inner(job: &JobSpec) -> Result<Outcome, CliError> {
    let ctx = resolve(job)?;
    match job.command {
        CommandKind::Orbit => Ok(Outcome::ok(orbit_json(&ctx))),
        CommandKind::Build => {
            let desc = descriptor(&ctx, job)?;
            let m = built(&desc, job)?;
            Ok(Outcome::ok(json!({"descriptor": desc.to_spec(), "module": m})))
        }
        CommandKind::Check => {
            let desc = descriptor(&ctx, job)?;
            let valid = desc.validate(Strictness::Strict);
            let m = gwa_rep::wmodule::build_relaxed(&desc, window(job)).map_err(domain("module"))?;
            let report = m.check_relations();
            let ok = valid.is_ok() && report.ok();
            let value = json!({
                "ok": ok,
                "descriptor_valid": valid.is_ok(),
                "descriptor_error": valid.err().map(|e| e.to_string()),
                "relations": report,
            });
            Ok(Outcome { value, text: None, code: if ok { 0 } else { 1 } })
        }
        CommandKind::Dual => {
            let desc = descriptor(&ctx, job)?;
            let m = built(&desc, job)?;
            let d = dual(&m).map_err(domain("module"))?;
            let predicted = dual_descriptor(&desc).map_err(domain("classify"))?;
            let (pred_json, verified) = match &predicted {
                DualDescriptor::Known(p) => {
                    let check = if m.is_truncated() {
                        json!({"result": "skipped", "reason": "windowed module"})
                    } else {
                        let n = built(p, job)?;
                        iso_json(&search_isomorphism(&d, &n).map_err(domain("iso"))?)
                    };
                    (serde_json::to_value(p.to_spec()).expect("spec serializes"), check)
                }
                DualDescriptor::PartiallyKnown { word, note } => (json!({"kind": "wf", "word": word, "f": null, "note": note}), Value::Null),
            };
            Ok(Outcome::ok(json!({
                "descriptor": desc.to_spec(),
                "dual_descriptor": pred_json,
                "verified": verified,
                "dual_module": d,
            })))
        }
        CommandKind::Iso => {
            let desc = descriptor(&ctx, job)?;
            let m = built(&desc, job)?;
            let (target, n) = match &job.other {
                Some(spec) => {
                    let od = ctx.descriptor(spec)?;
                    (serde_json::to_value(od.to_spec()).expect("spec serializes"), built(&od, job)?)
                }
                None => (json!("dual"), dual(&m).map_err(domain("module"))?),
            };
            let r = search_isomorphism(&m, &n).map_err(domain("iso"))?;
            Ok(Outcome::ok(json!({"source": desc.to_spec(), "target": target, "search": iso_json(&r)})))
        }
        CommandKind::DecidePu => {
            let desc = descriptor(&ctx, job)?;
            // Decomposable f still gets a verdict; only the structural checks are fatal.
            desc.validate(Strictness::Relaxed).map_err(domain("descriptor"))?;
            let warning = desc.validate(Strictness::Strict).err().map(|e| e.to_string());
            let v = decide_pu_with(&desc, job.strict).map_err(domain("classify"))?;
            let simple = is_simple(&desc).ok();
            Ok(Outcome::ok(json!({"descriptor": desc.to_spec(), "verdict": v, "simple": simple, "warning": warning})))
        }
        CommandKind::Gram => {
            let desc = descriptor(&ctx, job)?;
            let m = built(&desc, job)?;
            let (source, f) = gram_form(&ctx, &desc, &m, job)?;
            let adm = check_admissible(&m, &f);
            Ok(Outcome::ok(json!({
                "descriptor": desc.to_spec(),
                "source": source,
                "form": f,
                "admissible": adm.ok(),
                "admissibility": adm,
                "nondegenerate": f.is_nondegenerate(),
                "symmetric": f.is_symmetric(),
            })))
        }
        CommandKind::Signature => {
            let desc = descriptor(&ctx, job)?;
            let m = built(&desc, job)?;
            let (source, f) = gram_form(&ctx, &desc, &m, job)?;
            let symmetrized = !f.is_symmetric();
            let h = if symmetrized { f.add(&adjoint(&f)) } else { f };
            let s = signature(&h).map_err(domain("form"))?;
            let (plus, minus, zero) = s.triple();
            Ok(Outcome::ok(json!({
                "descriptor": desc.to_spec(),
                "source": source,
                "symmetrized": symmetrized,
                "windowed": m.is_truncated(),
                "signature": {"plus": plus, "minus": minus, "zero": zero},
            })))
        }
        CommandKind::Diagram => {
            let desc = descriptor(&ctx, job)?;
            let m = built(&desc, job)?;
            let arrows = m.arrows();
            let count = |op: char| arrows.iter().filter(|a| a.op == op).count();
            let value = json!({"x_arrows": count('X'), "y_arrows": count('Y'), "arrows": arrows});
            let text = match job.format {
                OutputFormat::Dot => Some(m.to_dot()),
                OutputFormat::Ascii => Some(m.to_ascii()),
                _ => None,
            };
            Ok(Outcome { value, text, code: 0 })
        }
    }
}

/// Closed form when one exists, otherwise the form induced by an
/// isomorphism onto the dual.
fn gram_form(ctx: &Context, desc: &Descriptor, m: &WeightModule, job: &JobSpec) -> Result<(&'static str, GramForm), CliError> {
    let lambda = match &job.lambda {
        Some(src) => gwa_rep::expr::Expr::parse(src)
            .map_err(|e| CliError::Spec(format!("lambda: {e}")))?
            .eval(&ctx.field, &|n| ctx.params.get(n).cloned())
            .map_err(|e| CliError::Spec(format!("lambda: {e}")))?,
        None => ctx.field.one(),
    };
    match closed_form_gram(m, desc, &lambda, window(job)) {
        Ok(f) => return Ok(("closed_form", f)),
        Err(e) if job.lambda.is_some() => return Err(CliError::domain("form", e)),
        Err(_) => {}
    }
    let d = dual(m).map_err(domain("module"))?;
    match search_isomorphism(m, &d).map_err(domain("iso"))? {
        IsoSearch::Found(t) => Ok(("isomorphism", form_from_iso(m, &t).map_err(domain("form"))?)),
        _ => Err(CliError::domain("form", "no isomorphism onto the dual was found, so there is no non-degenerate form to report")),
    }
}

fn orbit_json(ctx: &Context) -> Value {
    let o = &ctx.orbit;
    let mut v = serde_json::to_value(&**o).expect("orbits serialize");
    let (period, within) = match o.period() {
        Period::Finite(p) => (json!(p), Value::Null),
        Period::InfiniteWithin(b) => (Value::Null, json!(b)),
    };
    v["period"] = period;
    v["infinite_within"] = within;
    if o.is_finite() {
        v["t_product"] = json!(o.t_product());
        v["q"] = json!(o.q_value());
    }
    v
}

/// Indented key/value rendering for `--pretty`.
pub fn pretty(v: &Value, depth: usize) -> String {
    let pad = "  ".repeat(depth);
    let scalar = |v: &Value| -> Option<String> {
        match v {
            Value::Null => Some("-".into()),
            Value::String(s) => Some(s.clone()),
            Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
            Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
                Some(format!("[{}]", a.iter().map(|x| x.as_str().map(String::from).unwrap_or_else(|| x.to_string())).collect::<Vec<_>>().join(", ")))
            }
            _ => None,
        }
    };
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        out.push_str(&pretty(x, depth + 1));
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        out.push_str(&pretty(x, depth + 1));
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
    }
    out
}
