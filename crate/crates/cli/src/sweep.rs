//! Parameter sweeps: the cartesian product of parameter ranges, run in parallel.

use crate::commands::{run, Outcome};
use crate::job::{CliError, JobSpec};
use num_rational::Ratio;
use rayon::prelude::*;
use serde_json::{json, Value};

/// One swept parameter and its values, in order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxis {
    pub name: String,
    pub values: Vec<String>,
}

/// Parse `name=a..b:n` (n evenly spaced values, ends included) or
/// `name=v1,v2,...`.
pub fn parse_axis(src: &str) -> Result<SweepAxis, CliError> {
    let bad = || CliError::Spec(format!("bad sweep `{src}`: expected name=a..b:n or name=v1,v2,..."));
    let (name, rest) = src.split_once('=').ok_or_else(bad)?;
    let name = name.trim();
    if name.is_empty() {
        return Err(bad());
    }
    let values = match rest.split_once("..") {
        Some((a, tail)) => {
            let (b, n) = tail.split_once(':').ok_or_else(bad)?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            linspace(a.trim(), b.trim(), n).ok_or_else(bad)?
        }
        None => rest.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(SweepAxis { name: name.to_string(), values })
}

/// Exact fractions for rational ends, decimals otherwise.
fn linspace(a: &str, b: &str, n: usize) -> Option<Vec<String>> {
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(vec![a.to_string()]);
    }
    let steps = (n - 1) as i64;
    if let (Ok(a), Ok(b)) = (a.parse::<Ratio<i64>>(), b.parse::<Ratio<i64>>()) {
        return Some((0..n as i64).map(|k| (a + (b - a) * Ratio::new(k, steps)).to_string()).collect());
    }
    let (a, b) = (a.parse::<f64>().ok()?, b.parse::<f64>().ok()?);
    Some((0..n).map(|k| format!("{}", a + (b - a) * k as f64 / steps as f64)).collect())
}

/// All parameter assignments, first axis varying slowest.
pub fn assignments(axes: &[SweepAxis]) -> Vec<Vec<(String, String)>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push((axis.name.clone(), v.clone()));
                    p
                })
            })
            .collect();
    }
    out
}

/// Run `base` once per assignment; results keep input order.
pub fn run_sweep(base: &JobSpec, axes: &[SweepAxis]) -> Outcome {
    let results: Vec<(Vec<(String, String)>, Outcome)> = assignments(axes)
        .into_par_iter()
        .map(|assign| {
            let mut job = base.clone();
            for (k, v) in &assign {
                job.params.insert(k.clone(), v.clone());
            }
            let o = run(&job);
            (assign, o)
        })
        .collect();
    let code = results.iter().map(|(_, o)| o.code).max().unwrap_or(0);
    let rows: Vec<Value> = results
        .into_iter()
        .map(|(assign, o)| {
            let params: serde_json::Map<String, Value> = assign.into_iter().map(|(k, v)| (k, Value::String(v))).collect();
            json!({"params": params, "exit_code": o.code, "output": o.value})
        })
        .collect();
    Outcome { value: Value::Array(rows), text: None, code }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        let a = parse_axis("alpha=0..4:9").unwrap();
        assert_eq!(a.values, ["0", "1/2", "1", "3/2", "2", "5/2", "3", "7/2", "4"]);
        let b = parse_axis("mu=1, zeta(12), -1").unwrap();
        assert_eq!(b.values, ["1", "zeta(12)", "-1"]);
        assert_eq!(parse_axis("x=0.5..1.5:3").unwrap().values, ["0.5", "1", "1.5"]);
        assert!(parse_axis("alpha").is_err());
        assert!(parse_axis("alpha=0..1").is_err());
    }

    #[test]
    fn product_order() {
        let axes = [parse_axis("a=1,2").unwrap(), parse_axis("b=x,y,z").unwrap()];
        let got: Vec<String> = assignments(&axes).iter().map(|p| format!("{}{}", p[0].1, p[1].1)).collect();
        assert_eq!(got, ["1x", "1y", "1z", "2x", "2y", "2z"]);
    }
}
