//! Catalog verification suite and its deterministic JSON report.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::catalog::{self, fmt_assignment, sample_params, CatalogEntry, FieldScope};
use crate::extension::{assemble, check_compatibility, mubarakzyanov_check, verify_nilradical, ExtensionSpec, Semantics};
use crate::poly::Factorable;
use crate::scalar::{Q, QI};

/// Check names in report order.
pub const CHECKS: [&str; 6] = ["jacobi", "solvable", "non_nilpotent", "nilradical", "indecomposable", "mubarakzyanov"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleResult {
    pub params: String,
    pub checks: BTreeMap<String, bool>,
    /// Human-readable reasons for failed checks.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl SampleResult {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|&b| b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub field_scope: FieldScope,
    /// Fewer parameter points than requested exist.
    pub short_samples: bool,
    pub samples: Vec<SampleResult>,
}

impl EntryResult {
    pub fn passed(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.passed())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub entries: usize,
    pub samples: usize,
    pub passed_samples: usize,
    pub failed_samples: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilradicalSection {
    pub id: String,
    pub entries: Vec<EntryResult>,
    pub counts: Counts,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Meta {
    pub seed: u64,
    pub field: FieldScope,
    pub samples: usize,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub meta: Meta,
    pub nilradicals: Vec<NilradicalSection>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.nilradicals.iter().all(|n| n.entries.iter().all(|e| e.passed()))
    }

    pub fn entries(&self) -> impl Iterator<Item = &EntryResult> {
        self.nilradicals.iter().flat_map(|n| n.entries.iter())
    }

    /// Stable pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Run every check on one instantiated extension.
pub fn verify_spec<F: Factorable>(spec: &ExtensionSpec<F>, semantics: Semantics) -> (BTreeMap<String, bool>, Vec<String>) {
    let mut checks: BTreeMap<String, bool> = CHECKS.iter().map(|c| (c.to_string(), false)).collect();
    let mut failures = Vec::new();
    let compat = check_compatibility(spec);
    if !compat.passed() {
        failures.push(compat.first_failure().unwrap());
        return (checks, failures);
    }
    let l = match assemble(spec) {
        Ok(l) => l,
        Err(e) => {
            failures.push(e.to_string());
            return (checks, failures);
        }
    };
    checks.insert("jacobi".into(), true);
    let solvable = l.is_solvable();
    checks.insert("solvable".into(), solvable);
    if !solvable {
        failures.push("derived series does not reach 0".into());
    }
    let nilpotent = l.is_nilpotent_algebra();
    checks.insert("non_nilpotent".into(), !nilpotent);
    if nilpotent {
        failures.push("assembled algebra is nilpotent".into());
    }
    match verify_nilradical(spec, semantics) {
        Ok(r) => {
            checks.insert("nilradical".into(), r.passed());
            failures.extend(r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default())));
        }
        Err(e) => failures.push(e.to_string()),
    }
    let verdict = l.is_decomposable();
    checks.insert("indecomposable".into(), verdict.name() == "indecomposable");
    if verdict.name() != "indecomposable" {
        failures.push(format!("decomposability verdict: {}", verdict.name()));
    }
    let muba = mubarakzyanov_check(&l, spec.nilradical.dim());
    checks.insert("mubarakzyanov".into(), muba);
    if !muba {
        failures.push(format!("2*dim N < dim L + dim Z(L) with dim Z(L) = {}", l.center().dim()));
    }
    (checks, failures)
}

fn verify_entry_in<F: Factorable>(
    entry: &CatalogEntry,
    field: FieldScope,
    semantics: Semantics,
    samples: usize,
    seed: u64,
    timings: bool,
) -> EntryResult {
    let s = sample_params::<F>(entry, field, samples, seed);
    let mut out = Vec::new();
    for env in &s.points {
        let start = Instant::now();
        let (checks, failures) = match entry.instantiate(env, field) {
            Ok(spec) => verify_spec(&spec, semantics),
            Err(e) => (CHECKS.iter().map(|c| (c.to_string(), false)).collect(), vec![e.to_string()]),
        };
        let millis = timings.then(|| start.elapsed().as_millis() as u64);
        out.push(SampleResult { params: fmt_assignment(env), checks, failures, millis });
    }
    EntryResult { name: entry.name.clone(), field_scope: entry.field, short_samples: s.short, samples: out }
}

/// Verify one entry over `field` (`R` or `C`).
pub fn verify_entry(entry: &CatalogEntry, field: FieldScope, samples: usize, seed: u64, timings: bool) -> EntryResult {
    match field {
        FieldScope::C => verify_entry_in::<QI>(entry, field, Semantics::ComplexLike, samples, seed, timings),
        _ => verify_entry_in::<Q>(entry, FieldScope::R, Semantics::RealLike, samples, seed, timings),
    }
}

/// Verify all entries of a catalog that exist over `field`, grouped by
/// nilradical in the conventional order.
pub fn verify_catalog(entries: &[CatalogEntry], field: FieldScope, samples: usize, seed: u64, timings: bool) -> VerificationReport {
    let mut nilradicals = Vec::new();
    for id in catalog::NILRADICAL_IDS {
        let results: Vec<EntryResult> = entries
            .iter()
            .filter(|e| e.nilradical.id == id && e.field.includes(field))
            .map(|e| verify_entry(e, field, samples, seed, timings))
            .collect();
        let total: usize = results.iter().map(|e| e.samples.len()).sum();
        let passed: usize = results.iter().map(|e| e.samples.iter().filter(|s| s.passed()).count()).sum();
        let counts = Counts { entries: results.len(), samples: total, passed_samples: passed, failed_samples: total - passed };
        nilradicals.push(NilradicalSection { id: id.to_string(), entries: results, counts });
    }
    VerificationReport {
        meta: Meta { seed, field, samples, version: env!("CARGO_PKG_VERSION").to_string() },
        nilradicals,
    }
}
