//! Text and JSON renderings of an [`AnalysisReport`].

use serde_json::{json, Map, Value};

use crate::analysis::AnalysisReport;
use crate::growth::RootInterval;
use crate::singularity::{point_long, point_short, Classification, GrowthClass, Seed, SingularityReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn decimal(x: f64) -> String {
    format!("{x:.15}")
}

fn growth_json(g: Option<&GrowthClass>) -> Value {
    match g {
        None => Value::Null,
        Some(g) => json!({ "type": g.name(), "rate": g.rate().map(decimal) }),
    }
}

/// Every computed point in index order, anticonfined window included.
fn sequence(r: &SingularityReport) -> Vec<String> {
    match &r.classification {
        Classification::Confined { pattern } => pattern.iter().map(point_short).collect(),
        Classification::NonConfined => Vec::new(),
        Classification::Anticonfined(a) => {
            a.backward.iter().rev().chain(&a.window).chain(&a.forward).map(point_long).collect()
        }
    }
}

fn singularity_json(r: &SingularityReport) -> Value {
    let (fv, bv, growth) = match &r.classification {
        Classification::Anticonfined(a) => (a.forward_valuations.clone(), a.backward_valuations.clone(), Some(&a.growth)),
        _ => (Vec::new(), Vec::new(), None),
    };
    json!({
        "value": r.singular_value.as_ref().map(|v| v.to_string()),
        "label": r.label,
        "probe": r.is_probe,
        "class": r.classification.name(),
        "pattern": sequence(r),
        "forward_valuations": fv,
        "backward_valuations": bv,
        "growth": growth_json(growth),
        "steps": { "forward": r.steps_forward, "backward": r.steps_backward },
        "horizon": r.horizon,
        "trunc": r.trunc,
        "warnings": r.warnings,
    })
}

fn root_json(root: &RootInterval) -> Value {
    json!({ "lo": root.lo.to_string(), "hi": root.hi.to_string(), "decimal": decimal(root.mid_f64()) })
}

/// Canonical JSON value; object keys are kept sorted.
pub fn report_json(r: &AnalysisReport) -> Value {
    let c = &r.config;
    let e = r.entropy.as_ref();
    let mut top = Map::new();
    top.insert("name".into(), json!(r.name));
    top.insert("kind".into(), json!(r.kind.as_str()));
    top.insert(
        "config".into(),
        json!({ "steps": c.steps, "horizon": c.horizon, "trunc": c.trunc, "seeds": c.seeds, "seed": c.seed }),
    );
    top.insert("singular_values".into(), json!(r.singular_values.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
    top.insert("singularities".into(), Value::Array(r.all_reports().map(singularity_json).collect()));
    top.insert("degrees".into(), json!(e.map(|e| e.degrees.degrees.clone()).unwrap_or_default()));
    top.insert(
        "recurrence".into(),
        match e.and_then(|e| e.recurrence.as_ref()) {
            Some(rec) => json!({
                "order": rec.order,
                "coeffs": rec.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "valid_from": rec.valid_from,
                "display": rec.display(),
            }),
            None => Value::Null,
        },
    );
    top.insert("char_poly".into(), json!(e.and_then(|e| e.char_poly.as_ref()).map(|p| p.display_with("λ"))));
    top.insert("dominant_root".into(), e.and_then(|e| e.dominant_root.as_ref()).map_or(Value::Null, root_json));
    top.insert("entropy".into(), json!(e.map(|e| decimal(e.entropy))));
    top.insert("growth_type".into(), json!(e.map(|e| e.growth_type.to_string())));
    top.insert("entropy_method".into(), json!(e.map(|e| e.method.as_str())));
    top.insert("verdict".into(), json!(r.verdict.verdict.code()));
    top.insert(
        "entropy_lower_bound".into(),
        match r.verdict.verdict {
            Verdict::NonIntegrable { lower_bound } => json!(decimal(lower_bound)),
            _ => Value::Null,
        },
    );
    top.insert("verdict_reason".into(), json!(r.verdict.reason));
    top.insert("warnings".into(), json!(r.warnings));
    Value::Object(top)
}

fn describe(r: &SingularityReport) -> String {
    match &r.classification {
        Classification::Confined { .. } => format!("confined {}", r.classification.pattern_short().unwrap_or_default()),
        Classification::NonConfined => "non-confined".to_string(),
        Classification::Anticonfined(a) => format!("anticonfined {}; growth {}", a.display(4), a.growth),
    }
}

fn probe_at_infinity(r: &SingularityReport) -> bool {
    matches!(r.probe.cur, Seed::Eps { power, .. } if power < 0)
}

pub fn render_text(r: &AnalysisReport) -> String {
    let c = &r.config;
    let mut out = Vec::new();
    out.push(format!("map: {} ({})", r.name, r.kind.as_str()));
    out.push(format!(
        "config: steps {}, horizon {}, trunc {}, seeds {}, seed {}",
        c.steps, c.horizon, c.trunc, c.seeds, c.seed
    ));
    if r.singular_values.is_empty() {
        let mut line = "singular values: none".to_string();
        if r.probes.iter().any(probe_at_infinity) {
            line.push_str(" (no enterable singular values; anticonfined probe at infinity)");
        }
        out.push(line);
    } else {
        let vs: Vec<String> = r.singular_values.iter().map(|v| v.to_string()).collect();
        out.push(format!("singular values: {}", vs.join(", ")));
        for s in &r.singularities {
            out.push(format!("  {}: {}", s.label, describe(s)));
        }
    }
    if !r.probes.is_empty() {
        out.push("probes:".into());
        for p in &r.probes {
            out.push(format!("  {}: {}", p.label, describe(p)));
        }
    }
    match &r.entropy {
        Some(e) => {
            let ds: Vec<String> = e.degrees.degrees.iter().map(|d| d.to_string()).collect();
            out.push(format!("degrees: {}", ds.join(", ")));
            match &e.recurrence {
                Some(rec) => out.push(format!("recurrence: {} (from n = {})", rec.display(), rec.valid_from)),
                None => out.push("recurrence: none found".into()),
            }
            if let Some(p) = &e.char_poly {
                out.push(format!("characteristic polynomial: {}", p.display_with("λ")));
            }
            if let Some(root) = &e.dominant_root {
                out.push(format!("dominant root: {}", decimal(root.mid_f64())));
            }
            out.push(format!("entropy: {} ({}, {})", decimal(e.entropy), e.growth_type, e.method.as_str()));
        }
        None => out.push("degrees: unavailable".into()),
    }
    out.push(format!("verdict: {} ({})", r.verdict.verdict, r.verdict.reason));
    if !r.warnings.is_empty() {
        out.push("warnings:".into());
        for w in &r.warnings {
            out.push(format!("  - {w}"));
        }
    }
    out.push(String::new());
    out.join("\n")
}

pub fn render_report(r: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Text => render_text(r),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report_json(r)).expect("json values serialise");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze, AnalysisConfig};
    use crate::dsl::parse_mapfile;

    fn run(src: &str) -> AnalysisReport {
        let m = parse_mapfile(src).unwrap().remove(0);
        analyze(&m, None, &AnalysisConfig::default())
    }

    #[test]
    fn henon_text_notes_missing_values() {
        let r = run("map \"h\" { kind: scalar forward: 1 + x^2 - y }");
        let t = render_text(&r);
        assert!(t.contains("no enterable singular values; anticonfined probe at infinity"), "{t}");
        assert!(t.contains("NON_INTEGRABLE"));
    }

    #[test]
    fn tsuda_text_and_json() {
        let r = run("map \"t\" { kind: scalar forward: y*(x - 1/x) }");
        assert!(render_text(&r).contains("d_{n+1} = 2 d_n - d_{n-2}"));
        let s = render_report(&r, Format::Json);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v, report_json(&r));
        assert_eq!(v["degrees"][14], 1218);
        assert_eq!(v["singularities"][0]["pattern"], json!(["-1", "0", "∞", "1"]));
        assert_eq!(s, render_report(&run("map \"t\" { kind: scalar forward: y*(x - 1/x) }"), Format::Json));
    }
}
