//! Claims ledger: every checked statement has a stable id, dependencies, a
//! status and a structured evidence payload. `run_claims` executes the
//! dependency closure of the requested ids and assembles a deterministic
//! report.

mod checks;
mod genus;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use genus::{genus_bounds, tc_lower, GenusBounds};

use checks::Workspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClaimError {
    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),
    #[error("inconsistent evidence: {0}")]
    InconsistentEvidence(String),
    #[error("computation failed: {0}")]
    Computation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Verified,
    Failed,
    AssumedFromLiterature,
    OutOfScope,
    /// A computational dependency failed, so the claim was not run.
    Blocked,
}

impl ClaimStatus {
    /// Statuses that count as success for an explicitly requested claim.
    pub fn is_accepted(self) -> bool {
        matches!(self, ClaimStatus::Verified | ClaimStatus::AssumedFromLiterature)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimKind {
    Computed,
    Literature,
    OutOfScope,
}

/// A registered claim.
#[derive(Debug, Clone, Copy)]
pub struct ClaimSpec {
    pub id: &'static str,
    pub statement: &'static str,
    pub paper_ref: &'static str,
    pub dependencies: &'static [&'static str],
    pub kind: ClaimKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub id: String,
    pub status: ClaimStatus,
    pub statement: String,
    pub paper_ref: String,
    pub dependencies: Vec<String>,
    pub evidence: serde_json::Value,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Restricts the ∇-generator checks to this prime.
    pub prime: Option<u32>,
    /// Largest even degree for the ∇-generator checks.
    pub max_degree: u32,
    /// Residual tolerance for flexes and for the exact-equivalence fallback.
    pub tol: f64,
    /// Residual tolerance for bitangents and flex tangents.
    pub bitangent_tol: f64,
    /// Matching tolerance for group actions on numeric solutions; an element
    /// must move some object by more than 10³ times this.
    pub match_tol: f64,
    pub tor_degree_k: u32,
    pub tor_degree_h: u32,
    /// When false every elapsed_ms is 0 so reports are byte-identical.
    pub timing: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            prime: None,
            max_degree: 12,
            tol: 1e-8,
            bitangent_tol: 1e-6,
            match_tol: 1e-6,
            tor_degree_k: 20,
            tor_degree_h: 14,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub verified: usize,
    pub failed: usize,
    pub blocked: usize,
    pub assumed_from_literature: usize,
    pub out_of_scope: usize,
    /// Claims whose status came from running a computation.
    pub machine_checked: usize,
    /// No verified claim has a failed or blocked dependency.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: Config,
    pub claims: Vec<ClaimRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn record(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.id == id)
    }

    /// True iff every id in `requested` is verified or assumed.
    pub fn accepted(&self, requested: &[String]) -> bool {
        requested.iter().all(|id| self.record(id).is_some_and(|r| r.status.is_accepted()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn registry() -> Vec<ClaimSpec> {
    use ClaimKind::*;
    let c = |id, statement, paper_ref, dependencies, kind| ClaimSpec { id, statement, paper_ref, dependencies, kind };
    let sg_line: &'static [&'static str] = &[
        "genus-pu4k",
        "fermat-lines",
        "k-faithful",
        "lit-pullback-genus",
        "lit-cover-morphism",
        "lit-disjoint-cover",
        "lit-monodromy",
    ];
    let sg_btg: &'static [&'static str] = &[
        "genus-pu3h",
        "klein-bitangents",
        "h-free-on-bitangents",
        "lit-pullback-genus",
        "lit-cover-morphism",
        "lit-disjoint-cover",
        "lit-monodromy",
    ];
    let sg_flex: &'static [&'static str] = &[
        "genus-pu3h",
        "klein-flexes",
        "h-free-on-flexes",
        "lit-pullback-genus",
        "lit-cover-morphism",
        "lit-disjoint-cover",
        "lit-monodromy",
    ];
    vec![
        c(
            "regseq-pu4k",
            "The restrictions of the degree 4, 6, 8 generators of H*(BPU_4; F_3) to K are σ₂, σ₁³−σ₁σ₂−σ₃, σ₁σ₃−σ₁²σ₂ and form a regular sequence in F_3[ξ₁,ξ₂,ξ₃] with |ξ_i| = 2.",
            "regular sequence for K in PU_4",
            &[],
            Computed,
        ),
        c(
            "regseq-pu3h",
            "The restrictions of the degree 4, 6 generators of H*(BPU_3; F_2) to H are (u²+uv+v²)² and u²v²(u+v)², coprime and regular in F_2[u,v].",
            "regular sequence for H in PU_3",
            &[],
            Computed,
        ),
        c(
            "regseq-permutations",
            "Every permutation of both restricted sequences is again regular.",
            "permutation lemma for regular sequences",
            &["regseq-pu3h", "regseq-pu4k"],
            Computed,
        ),
        c(
            "nabla-generators-n3",
            "The listed classes lie in Ker ∇ on H*(BU_3), span it in every even degree up to the bound for p = 2, 5, 7, match the H*(BSU_3) count, and lie in Ker ∇ over Z.",
            "generators of H*(BPU_3) as Ker ∇",
            &[],
            Computed,
        ),
        c(
            "nabla-generators-n4",
            "The listed classes lie in Ker ∇ on H*(BU_4), span it in every even degree up to the bound for p = 3, 5, 7, match the H*(BSU_4) count, and lie in Ker ∇ over Z.",
            "generators of H*(BPU_4) as Ker ∇",
            &[],
            Computed,
        ),
        c(
            "em-poincare-pu4k",
            "H*(PU_4/K; F_3) has Poincaré polynomial of top degree 15 = dim PU_4/K and total dimension 192, palindromic with alternating sum 0.",
            "Eilenberg-Moore collapse for PU_4/K",
            &["nabla-generators-n4", "regseq-pu4k"],
            Computed,
        ),
        c(
            "em-poincare-pu3h",
            "H*(PU_3/H; F_2) has Poincaré polynomial 1+2t+3t²+4t³+4t⁴+4t⁵+3t⁶+2t⁷+t⁸.",
            "Eilenberg-Moore collapse for PU_3/H",
            &["nabla-generators-n3", "regseq-pu3h"],
            Computed,
        ),
        c(
            "tor-concentration",
            "The Koszul complexes of both restricted sequences have no higher homology up to internal degree 20 (K) and 14 (H).",
            "Tor concentration in the Eilenberg-Moore E_2 page",
            &["regseq-pu3h", "regseq-pu4k"],
            Computed,
        ),
        c(
            "fermat-lines",
            "The Fermat cubic surface x³+y³+z³+w³ contains exactly the 27 distinct lines of the three standard families.",
            "27 lines on the Fermat cubic",
            &[],
            Computed,
        ),
        c(
            "k-faithful",
            "K ≅ (Z/3)³ acts faithfully on the 27 lines of the Fermat cubic.",
            "faithfulness of K on the 27 lines",
            &["fermat-lines"],
            Computed,
        ),
        c(
            "klein-flexes",
            "The Klein quartic has exactly 24 distinct flexes.",
            "24 flexes of the Klein quartic",
            &[],
            Computed,
        ),
        c(
            "klein-bitangents",
            "The Klein quartic has exactly 28 distinct bitangents; the 24 flex tangents solving the same system touch at the 24 flexes.",
            "28 bitangents of the Klein quartic",
            &["klein-flexes"],
            Computed,
        ),
        c(
            "klein-equivalence",
            "The displayed change of coordinates carries the α-form of the Klein quartic to a multiple of x³y+y³z+z³x over Q(ζ_7).",
            "projective equivalence with the standard Klein quartic",
            &[],
            Computed,
        ),
        c(
            "h-free-on-flexes",
            "Every nontrivial element of H moves some flex of the Klein quartic.",
            "freeness of H on flexes",
            &["klein-flexes"],
            Computed,
        ),
        c(
            "h-free-on-bitangents",
            "Every nontrivial element of H moves some bitangent of the Klein quartic.",
            "freeness of H on bitangents",
            &["klein-bitangents"],
            Computed,
        ),
        c(
            "genus-pu4k",
            "The Schwarz genus of PU_4 → PU_4/K equals 16.",
            "genus of PU_4 → PU_4/K",
            &["em-poincare-pu4k", "lit-homological-genus"],
            Computed,
        ),
        c(
            "genus-pu3h",
            "The Schwarz genus of PU_3 → PU_3/H equals 9.",
            "genus of PU_3 → PU_3/H",
            &["em-poincare-pu3h", "lit-homological-genus"],
            Computed,
        ),
        c(
            "thm-sg-line",
            "The covering of smooth cubic surfaces by their 27 lines has Schwarz genus at least 16.",
            "genus bound, lines on cubic surfaces",
            sg_line,
            Computed,
        ),
        c(
            "thm-sg-btg",
            "The covering of smooth plane quartics by their 28 bitangents has Schwarz genus at least 9.",
            "genus bound, bitangents of plane quartics",
            sg_btg,
            Computed,
        ),
        c(
            "thm-sg-flex",
            "The covering of smooth plane quartics by their 24 flexes has Schwarz genus at least 9.",
            "genus bound, flexes of plane quartics",
            sg_flex,
            Computed,
        ),
        c(
            "thm-tc-all",
            "Topological complexity is at least 15 for lines on cubic surfaces and at least 8 for bitangents and flexes of plane quartics.",
            "topological complexity lower bounds",
            &["lit-tc-genus", "tc-compactness", "thm-sg-btg", "thm-sg-flex", "thm-sg-line"],
            Computed,
        ),
        c(
            "lit-pullback-genus",
            "The genus of a pulled-back covering is at most the genus of the original covering.",
            "cited: pullback monotonicity",
            &[],
            Literature,
        ),
        c(
            "lit-cover-morphism",
            "A morphism of coverings over the same base bounds the genus of the target by that of the source.",
            "cited: morphisms of coverings",
            &[],
            Literature,
        ),
        c(
            "lit-disjoint-cover",
            "A faithful action of the finite group on the fibre makes the restricted covering a disjoint union of copies of the principal bundle.",
            "cited: disjoint-union structure",
            &[],
            Literature,
        ),
        c(
            "lit-monodromy",
            "The monodromy facts for the three enumerative problems, and transitivity of PU_n on the relevant configurations.",
            "cited: monodromy of enumerative problems",
            &[],
            Literature,
        ),
        c(
            "lit-homological-genus",
            "A nonzero product of k classes pulled back from the base forces genus > k.",
            "cited: homological genus bound",
            &[],
            Literature,
        ),
        c(
            "lit-tc-genus",
            "An algorithm tree with k leaves yields an open cover with local sections of size k, so topological complexity ≥ genus − 1.",
            "cited: algorithm trees and genus",
            &[],
            Literature,
        ),
        c(
            "tc-compactness",
            "The extension and compactness argument that passes from the problem space to the symmetric orbit.",
            "compactness step of the complexity argument",
            &[],
            OutOfScope,
        ),
    ]
}

pub fn claim_ids() -> Vec<&'static str> {
    let mut ids: Vec<_> = registry().iter().map(|c| c.id).collect();
    ids.sort_unstable();
    ids
}

/// Dependency closure of `ids` in execution order (dependencies first, ties by id).
fn execution_order(ids: &[String], table: &BTreeMap<&'static str, ClaimSpec>) -> Result<Vec<&'static str>, ClaimError> {
    fn visit(
        id: &'static str,
        table: &BTreeMap<&'static str, ClaimSpec>,
        done: &mut BTreeSet<&'static str>,
        active: &mut BTreeSet<&'static str>,
        out: &mut Vec<&'static str>,
    ) -> Result<(), ClaimError> {
        if done.contains(id) {
            return Ok(());
        }
        if !active.insert(id) {
            return Err(ClaimError::InconsistentEvidence(format!("dependency cycle through `{id}`")));
        }
        let spec = table.get(id).ok_or_else(|| ClaimError::UnknownClaim(id.to_string()))?;
        let mut deps: Vec<&'static str> = spec.dependencies.to_vec();
        deps.sort_unstable();
        for d in deps {
            visit(d, table, done, active, out)?;
        }
        active.remove(id);
        done.insert(id);
        out.push(id);
        Ok(())
    }
    let mut roots: Vec<&'static str> = Vec::with_capacity(ids.len());
    for id in ids {
        let (&key, _) = table.get_key_value(id.as_str()).ok_or_else(|| ClaimError::UnknownClaim(id.clone()))?;
        roots.push(key);
    }
    roots.sort_unstable();
    roots.dedup();
    let (mut done, mut active, mut out) = (BTreeSet::new(), BTreeSet::new(), Vec::new());
    for r in roots {
        visit(r, table, &mut done, &mut active, &mut out)?;
    }
    Ok(out)
}

fn summarize(claims: &[ClaimRecord], table: &BTreeMap<&'static str, ClaimSpec>) -> Summary {
    let status: BTreeMap<&str, ClaimStatus> = claims.iter().map(|c| (c.id.as_str(), c.status)).collect();
    let count = |s| claims.iter().filter(|c| c.status == s).count();
    let consistent = claims.iter().filter(|c| c.status == ClaimStatus::Verified).all(|c| {
        c.dependencies
            .iter()
            .all(|d| !matches!(status.get(d.as_str()), Some(ClaimStatus::Failed | ClaimStatus::Blocked) | None))
    });
    Summary {
        total: claims.len(),
        verified: count(ClaimStatus::Verified),
        failed: count(ClaimStatus::Failed),
        blocked: count(ClaimStatus::Blocked),
        assumed_from_literature: count(ClaimStatus::AssumedFromLiterature),
        out_of_scope: count(ClaimStatus::OutOfScope),
        machine_checked: claims.iter().filter(|c| table[c.id.as_str()].kind == ClaimKind::Computed).count(),
        consistent,
    }
}

/// Runs the requested claims and everything they depend on.
pub fn run_claims(ids: &[String], config: &Config) -> Result<VerificationReport, ClaimError> {
    let table: BTreeMap<&'static str, ClaimSpec> = registry().into_iter().map(|c| (c.id, c)).collect();
    let order = execution_order(ids, &table)?;
    let mut ws = Workspace::new(config);
    let mut status: BTreeMap<&'static str, ClaimStatus> = BTreeMap::new();
    let mut records = Vec::with_capacity(order.len());
    for id in order {
        let spec = table[id];
        let start = Instant::now();
        let (st, evidence) = match spec.kind {
            ClaimKind::Literature => (ClaimStatus::AssumedFromLiterature, serde_json::Value::Null),
            ClaimKind::OutOfScope => (ClaimStatus::OutOfScope, serde_json::Value::Null),
            ClaimKind::Computed => {
                let broken: Vec<&str> = spec
                    .dependencies
                    .iter()
                    .copied()
                    .filter(|d| matches!(status.get(d), Some(ClaimStatus::Failed | ClaimStatus::Blocked)))
                    .collect();
                if broken.is_empty() {
                    match ws.run(id) {
                        Ok((true, ev)) => (ClaimStatus::Verified, ev),
                        Ok((false, ev)) => (ClaimStatus::Failed, ev),
                        Err(e) => (ClaimStatus::Failed, serde_json::json!({ "error": e.to_string() })),
                    }
                } else {
                    (ClaimStatus::Blocked, serde_json::json!({ "blocked_by": broken }))
                }
            }
        };
        status.insert(id, st);
        let elapsed_ms = if config.timing { start.elapsed().as_millis() as u64 } else { 0 };
        let mut dependencies: Vec<String> = spec.dependencies.iter().map(|d| d.to_string()).collect();
        dependencies.sort();
        records.push(ClaimRecord {
            id: id.to_string(),
            status: st,
            statement: spec.statement.to_string(),
            paper_ref: spec.paper_ref.to_string(),
            dependencies,
            evidence,
            elapsed_ms,
        });
    }
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let summary = summarize(&records, &table);
    Ok(VerificationReport { config: config.clone(), claims: records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_closed_and_acyclic() {
        let table: BTreeMap<&'static str, ClaimSpec> = registry().into_iter().map(|c| (c.id, c)).collect();
        assert_eq!(table.len(), registry().len());
        let all: Vec<String> = table.keys().map(|k| k.to_string()).collect();
        let order = execution_order(&all, &table).unwrap();
        assert_eq!(order.len(), table.len());
        for (pos, id) in order.iter().enumerate() {
            for d in table[id].dependencies {
                assert!(order[..pos].contains(d), "{d} must precede {id}");
            }
        }
    }

    #[test]
    fn empty_and_unknown() {
        let r = run_claims(&[], &Config::default()).unwrap();
        assert!(r.claims.is_empty());
        assert_eq!(r.summary, Summary { consistent: true, ..Summary::default() });
        assert_eq!(run_claims(&["nope".into()], &Config::default()), Err(ClaimError::UnknownClaim("nope".into())));
    }

    #[test]
    fn literature_nodes_are_assumed() {
        let r = run_claims(&["lit-tc-genus".into(), "tc-compactness".into()], &Config::default()).unwrap();
        assert_eq!(r.record("lit-tc-genus").unwrap().status, ClaimStatus::AssumedFromLiterature);
        assert_eq!(r.record("tc-compactness").unwrap().status, ClaimStatus::OutOfScope);
        assert!(r.accepted(&["lit-tc-genus".into()]));
        assert!(!r.accepted(&["tc-compactness".into()]));
        assert_eq!(r.summary.machine_checked, 0);
    }

    #[test]
    fn fermat_chain_is_verified() {
        let cfg = Config { timing: false, ..Config::default() };
        let r = run_claims(&["k-faithful".into()], &cfg).unwrap();
        assert_eq!(r.claims.len(), 2);
        assert_eq!(r.record("fermat-lines").unwrap().status, ClaimStatus::Verified);
        let k = r.record("k-faithful").unwrap();
        assert_eq!(k.status, ClaimStatus::Verified);
        assert_eq!(k.evidence["nontrivial_elements"], 26);
        assert_eq!(k.evidence["witness_moved_by"], 24);
        assert_eq!(r.to_json_pretty(), run_claims(&["k-faithful".into()], &cfg).unwrap().to_json_pretty());
    }
}
