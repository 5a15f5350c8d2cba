//! Job descriptions, dispatch to the library, report documents and a
//! content-addressed on-disk cache.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::engine::{covariants_direct, psi_orbits, ring_comparison_sk1, scan, sk1, triviality_certificates, RingPair};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupDescriptor};
use crate::homology::{h2_ab, homology, CoeffModule, Scalars};
use crate::lab::{run_lab_checks, LabSuite};
use crate::rings::{coinvariants, RingDescriptor, RingKind, RingModel};

pub const SCHEMA_VERSION: &str = "sk1lab.report/1";

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SK1LAB_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Sk1,
    H2,
    Orbits,
    Logcheck,
    Coinv,
    CompareRings,
    Certify,
    Scan,
    Covariants,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

fn default_trials() -> usize {
    20
}

/// One unit of work; field names match the command-line flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<usize>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(default)]
    pub p_groups_only: bool,
    #[serde(default)]
    pub format: Format,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            group: None,
            ring: None,
            p: None,
            n: None,
            f: None,
            d: None,
            seed: 0,
            trials: default_trials(),
            suite: None,
            pair: None,
            min_order: None,
            max_order: None,
            p_groups_only: false,
            format: Format::Json,
        }
    }

    fn group(&self) -> Result<FiniteGroup> {
        let s = self.group.as_deref().ok_or_else(|| Error::InvalidInput("--group is required".into()))?;
        GroupDescriptor::parse(s)?.build()
    }

    fn prime(&self) -> Result<u64> {
        self.p.ok_or_else(|| Error::InvalidInput("--p is required".into()))
    }

    /// Ring descriptor from --ring/--p/--N/--f/--D; --ring may also be JSON.
    pub fn ring_descriptor(&self) -> Result<RingDescriptor> {
        let name = self.ring.as_deref().unwrap_or("Zp");
        let desc = if name.trim_start().starts_with('{') {
            let d = RingDescriptor::parse(name)?;
            if self.p.is_some_and(|p| p != d.p) {
                return Err(Error::InvalidInput(format!("--p does not match the ring descriptor's p = {}", d.p)));
            }
            d
        } else {
            let kind = parse_kind(name)?;
            let p = self.prime()?;
            let n = self.n.unwrap_or(4);
            let f = self.f.unwrap_or(if kind == RingKind::Witt { 2 } else { 1 });
            let d = if matches!(kind, RingKind::Zp | RingKind::Witt) { 0 } else { self.d.unwrap_or(8) };
            RingDescriptor { kind, p, n, f, d }
        };
        desc.validate()?;
        Ok(desc)
    }

    /// Canonical JSON used for hashing and embedded in reports.
    pub fn canonical(&self) -> Value {
        let mut j = self.clone();
        j.format = Format::Json;
        serde_json::to_value(j).expect("serializable")
    }
}

fn parse_kind(s: &str) -> Result<RingKind> {
    Ok(match s {
        "Zp" | "zp" => RingKind::Zp,
        "W" | "Witt" | "witt" => RingKind::Witt,
        "PowerSeries" | "W[[t]]" | "power-series" => RingKind::PowerSeries,
        "Laurent" | "W{{t}}" | "laurent" => RingKind::Laurent,
        "InverseVar" | "Winf" | "W<<1/t>>" | "inverse-var" => RingKind::InverseVar,
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown ring `{s}` (expected Zp, Witt, PowerSeries, Laurent or InverseVar)"
            )))
        }
    })
}

/// A finished job: the report document and whether every check passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub verified: bool,
}

fn document(job: &JobSpec, result: Value, verified: bool, provenance: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "job": job.canonical(),
        "verified": verified,
        "provenance": provenance,
        "result": result,
    })
}

fn h2_report(g: &FiniteGroup) -> Result<Value> {
    let part = h2_ab(g)?;
    let mut out = json!({
        "group": g.label(),
        "order": g.order(),
        "h2": part.h2.presentation(),
        "h2_ab": part.span(),
        "hbar2": part.quotient(),
    });
    if g.is_abelian() {
        let ab = g.abelianization();
        let closed = crate::abelian::AbelianGroupPresentation::from_cyclic_orders(&ab.orders, 0).exterior_square()?;
        out["exterior_square"] = serde_json::to_value(&closed)?;
        out["agrees_with_exterior_square"] = json!(closed == *part.h2.presentation());
    }
    Ok(out)
}

/// Runs a job without the cache.
pub fn run(job: &JobSpec) -> Result<Outcome> {
    let bounds = json!({
        "max_group_order": crate::group::MAX_ORDER,
        "max_homology_order": crate::homology::HARD_MAX_ORDER,
    });
    let (result, verified, provenance) = match job.command {
        Command::Sk1 => {
            let desc = job.ring_descriptor()?;
            let r = sk1(&desc, &job.group()?)?;
            let prov = json!({ "precision": desc.n, "bounds": bounds, "assumed_hypotheses": r.assumed_hypotheses });
            (serde_json::to_value(&r)?, true, prov)
        }
        Command::Covariants => {
            let desc = job.ring_descriptor()?;
            let g = job.group()?;
            let direct = covariants_direct(&desc, &g)?;
            let formula = sk1(&desc, &g)?.total;
            let agree = direct == formula;
            let result = json!({ "group": g.label(), "ring": desc, "covariants": direct, "formula": formula, "agree": agree });
            (result, agree, json!({ "precision": desc.n, "bounds": bounds }))
        }
        Command::H2 => {
            let g = job.group()?;
            let mut result = h2_report(&g)?;
            if let Some(p) = job.p {
                let h = homology(&g, 2, CoeffModule::Conjugation { p }, Scalars::LocalAt { p })?;
                result["h2_conjugation_local"] = serde_json::to_value(h.summary())?;
            }
            let ok = result.get("agrees_with_exterior_square").map_or(true, |v| v == &json!(true));
            (result, ok, json!({ "bounds": bounds }))
        }
        Command::Orbits => {
            let g = job.group()?;
            let s = psi_orbits(&g, job.prime()?);
            (serde_json::to_value(&s)?, true, json!({}))
        }
        Command::Logcheck => {
            let desc = job.ring_descriptor()?;
            let suite = LabSuite::parse(job.suite.as_deref().unwrap_or("all"))?;
            let reports = run_lab_checks(&job.group()?, &desc, suite, job.trials, job.seed)?;
            let ok = reports.iter().all(|r| r.failures == 0);
            let prov = json!({ "precision": desc.n, "seed": job.seed, "trials": job.trials });
            (serde_json::to_value(&reports)?, ok, prov)
        }
        Command::Coinv => {
            let desc = job.ring_descriptor()?;
            let c = coinvariants(&desc)?;
            let dim = RingModel::new(&desc)?.dim();
            let result = json!({
                "ring": desc,
                "label": desc.label(),
                "model_rank": dim,
                "coinvariants": c.presentation(),
            });
            (result, true, json!({ "precision": desc.n }))
        }
        Command::CompareRings => {
            let pair = RingPair::parse(job.pair.as_deref().ok_or_else(|| Error::InvalidInput("--pair is required".into()))?)?;
            let (src, dst) = pair.descriptors(job.prime()?, job.f.unwrap_or(1), job.n.unwrap_or(4), job.d.unwrap_or(8));
            let g = job.group.as_ref().map(|_| job.group()).transpose()?;
            let c = ring_comparison_sk1(&src, &dst, Some(pair), g.as_ref())?;
            let ok = c.expected.map_or(true, |e| e == c.verdict);
            (serde_json::to_value(&c)?, ok, json!({ "precision": src.n, "window": src.d }))
        }
        Command::Certify => {
            let g = job.group()?;
            let certs = triviality_certificates(&g);
            let mut result = json!({ "group": g.label(), "certificates": certs, "forced_trivial": !certs.is_empty() });
            if certs.is_empty() {
                result["note"] = json!("no forced triviality");
            }
            let mut ok = true;
            if job.p.is_some() {
                let desc = job.ring_descriptor()?;
                let r = sk1(&desc, &g)?;
                ok = certs.is_empty() || r.is_trivial();
                result["sk1_total"] = serde_json::to_value(&r.total)?;
                result["consistent"] = json!(ok);
            }
            (result, ok, json!({}))
        }
        Command::Scan => {
            let desc = job.ring_descriptor()?;
            let r = scan(&desc, job.min_order.unwrap_or(1), job.max_order.unwrap_or(16), job.p_groups_only)?;
            (serde_json::to_value(&r)?, true, json!({ "precision": desc.n, "bounds": bounds }))
        }
    };
    Ok(Outcome { report: document(job, result, verified, provenance), verified })
}

/// Default cache location: $SK1LAB_CACHE_DIR, else $XDG_CACHE_HOME/sk1lab,
/// else ~/.cache/sk1lab.
pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("sk1lab"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("sk1lab"))
}

/// Content hash of a job: its canonical JSON plus the group fingerprint.
pub fn cache_key(job: &JobSpec) -> Result<String> {
    let mut h = Sha256::new();
    h.update(SCHEMA_VERSION.as_bytes());
    h.update(serde_json::to_vec(&job.canonical())?);
    if job.group.is_some() {
        h.update(job.group()?.fingerprint().as_bytes());
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

/// Runs a job through the cache in `dir`; the flag reports a cache hit.
pub fn run_cached(job: &JobSpec, dir: &Path) -> Result<(Outcome, bool)> {
    let path = dir.join(format!("{}.json", cache_key(job)?));
    if let Ok(bytes) = std::fs::read(&path) {
        if let Ok(report) = serde_json::from_slice::<Value>(&bytes) {
            let verified = report["verified"].as_bool().unwrap_or(false);
            return Ok((Outcome { report, verified }, true));
        }
    }
    let out = run(job)?;
    std::fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_vec_pretty(&out.report)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok((out, false))
}

/// Renders a report as indented `key: value` lines.
pub fn render_text(v: &Value) -> String {
    fn walk(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object()))) {
                        out.push_str(&format!("{pad}{k}:\n"));
                        walk(x, indent + 1, out);
                    } else {
                        out.push_str(&format!("{pad}{k}: {x}\n"));
                    }
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    out.push_str(&format!("{pad}[{i}]\n"));
                    walk(x, indent + 1, out);
                }
            }
            x => out.push_str(&format!("{pad}{x}\n")),
        }
    }
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}

pub fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&outcome.report).expect("serializable"),
        Format::Text => render_text(&outcome.report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_descriptor_from_flags() {
        let mut j = JobSpec::new(Command::Coinv);
        j.ring = Some("Witt".into());
        j.p = Some(3);
        j.f = Some(2);
        assert_eq!(j.ring_descriptor().unwrap(), RingDescriptor::witt(3, 2, 4));
        j.ring = Some(r#"{"kind":"Zp","p":2,"N":3}"#.into());
        assert!(j.ring_descriptor().is_err());
        j.p = None;
        assert_eq!(j.ring_descriptor().unwrap(), RingDescriptor::zp(2, 3));
        j.ring = Some("bogus".into());
        assert!(j.ring_descriptor().is_err());
    }

    #[test]
    fn job_spec_round_trips() {
        let j: JobSpec = serde_json::from_str(r#"{"command":"sk1","group":"Q8","ring":"Zp","p":2,"N":4}"#).unwrap();
        assert_eq!(j.command, Command::Sk1);
        assert_eq!(j.n, Some(4));
        assert!(serde_json::from_str::<JobSpec>(r#"{"command":"sk1","bogus":1}"#).is_err());
    }

    #[test]
    fn cache_hit_matches_cold_run() {
        let dir = std::env::temp_dir().join(format!("sk1lab-cache-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let mut j = JobSpec::new(Command::Sk1);
        j.group = Some("D8".into());
        j.p = Some(2);
        let (a, hit_a) = run_cached(&j, &dir).unwrap();
        let (b, hit_b) = run_cached(&j, &dir).unwrap();
        assert!(!hit_a && hit_b);
        assert_eq!(serde_json::to_string(&a.report).unwrap(), serde_json::to_string(&b.report).unwrap());
        let _ = std::fs::remove_dir_all(&dir);
    }
}
