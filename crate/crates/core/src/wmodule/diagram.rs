//! Weight diagrams: one column per weight, arrows for the X and Y actions.

use super::WeightModule;
use std::fmt::Write;

/// An arrow between basis vectors, with its coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct Arrow {
    pub op: char,
    pub from: (i64, String),
    pub to: (i64, String),
    pub coeff: String,
}

impl WeightModule {
    /// All nonzero matrix entries as labelled arrows.
    pub fn arrows(&self) -> Vec<Arrow> {
        let mut out = Vec::new();
        for (op, maps, step) in [('X', &self.x, 1i64), ('Y', &self.y, -1i64)] {
            for (&i, m) in maps {
                let j = self.orbit.canon(i + step);
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        let v = m.get(r, c);
                        if !v.is_zero() {
                            out.push(Arrow {
                                op,
                                from: (i, self.labels_at(i)[c].clone()),
                                to: (j, self.labels_at(j)[r].clone()),
                                coeff: v.to_string(),
                            });
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph weights {\n  rankdir=LR;\n  node [shape=point];\n");
        for (&i, &d) in &self.dims {
            if d == 0 {
                continue;
            }
            let pt = self.orbit.point(i).map(|p| p.to_string()).unwrap_or_default();
            let _ = writeln!(s, "  subgraph cluster_{} {{\n    label=\"{i}: ({pt})\";", dot_id(i));
            for l in self.labels_at(i) {
                let _ = writeln!(s, "    \"{i}:{l}\" [shape=circle, label=\"{l}\"];");
            }
            s.push_str("  }\n");
        }
        for a in self.arrows() {
            let style = if a.op == 'X' { "solid" } else { "dashed" };
            let label = if a.coeff == "1" { a.op.to_string() } else { format!("{}: {}", a.op, a.coeff) };
            let _ = writeln!(
                s,
                "  \"{}:{}\" -> \"{}:{}\" [style={style}, label=\"{label}\"];",
                a.from.0, a.from.1, a.to.0, a.to.1
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        for (&i, &d) in &self.dims {
            if d == 0 {
                continue;
            }
            let pt = self.orbit.point(i).map(|p| p.to_string()).unwrap_or_default();
            let _ = writeln!(s, "[{i}] ({pt}): {}", self.labels_at(i).join(" "));
        }
        for a in self.arrows() {
            let arrow = if a.op == 'X' { "-->" } else { "<--" };
            let _ = writeln!(s, "  {} {}@{} {arrow} {}@{}  ({})", a.op, a.from.1, a.from.0, a.to.1, a.to.0, a.coeff);
        }
        if self.is_truncated() {
            s.push_str("  (truncated window)\n");
        }
        s
    }
}

fn dot_id(i: i64) -> String {
    if i < 0 {
        format!("m{}", -i)
    } else {
        i.to_string()
    }
}
