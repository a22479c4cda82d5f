use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::capfile::CapRecord;
use crate::codes::CodeProfile;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub index: usize,
    /// Least point of the orbit.
    pub representative: String,
    pub size: usize,
    pub nodes_visited: u64,
    pub caps_found: u64,
    pub quantum_caps_found: u64,
    pub units: usize,
    pub units_done: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedReport {
    pub class_id: String,
    pub seed_size: usize,
    pub seed_complete: bool,
    pub nodes_visited: u64,
    pub max_depth_reached: usize,
    /// Leaves of the searched (orbit-reduced) tree.
    pub caps_found: u64,
    /// Number of caps an unreduced search would emit; absent for partial
    /// runs.
    pub caps_found_expanded: Option<u128>,
    pub quantum_caps_found: u64,
    pub orbits: Vec<OrbitReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub nodes_visited: u64,
    pub max_depth_reached: usize,
    pub caps_found: u64,
    pub caps_found_expanded: Option<u128>,
    pub quantum_caps_found: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoundCap {
    pub class_id: String,
    pub cap: CapRecord,
    pub profile: CodeProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub target: usize,
    pub dim: usize,
    pub config_digest: String,
    pub geometry_digest: String,
    /// False when a node budget or unit limit left work undone.
    pub complete: bool,
    pub seeds: Vec<SeedReport>,
    pub totals: Totals,
    pub quantum_caps: Vec<FoundCap>,
    pub wall_time_secs: f64,
    /// SHA-256 of the report with `wall_time_secs` zeroed and this field
    /// empty.
    pub report_digest: String,
}

impl SearchReport {
    pub fn compute_digest(&self) -> String {
        let mut r = self.clone();
        r.wall_time_secs = 0.0;
        r.report_digest.clear();
        hex::encode(Sha256::digest(serde_json::to_vec(&r).expect("plain data")))
    }

    pub(crate) fn finish(&mut self) {
        let mut t = Totals { caps_found_expanded: Some(0), ..Totals::default() };
        for s in &self.seeds {
            t.nodes_visited += s.nodes_visited;
            t.max_depth_reached = t.max_depth_reached.max(s.max_depth_reached);
            t.caps_found += s.caps_found;
            t.quantum_caps_found += s.quantum_caps_found;
            t.caps_found_expanded = t.caps_found_expanded.zip(s.caps_found_expanded).map(|(a, b)| a + b);
        }
        self.totals = t;
        self.report_digest = self.compute_digest();
    }

    /// Checks the totals and the digest.
    pub fn verify(&self) -> bool {
        let mut r = self.clone();
        r.finish();
        r.totals == self.totals && r.report_digest == self.report_digest
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "target {} in PG({},4): {} ({} seeds)\nconfig {}\n",
            self.target,
            self.dim,
            if self.complete { "complete" } else { "partial" },
            self.seeds.len(),
            self.config_digest
        );
        for s in &self.seeds {
            out += &format!(
                "  {:>6}  size {:>2}  nodes {:>12}  depth {:>2}  caps {:>10}  quantum {}\n",
                s.class_id, s.seed_size, s.nodes_visited, s.max_depth_reached, s.caps_found, s.quantum_caps_found
            );
        }
        out += &format!(
            "total nodes {}  caps {}  quantum {}\nreport digest {}\n",
            self.totals.nodes_visited, self.totals.caps_found, self.totals.quantum_caps_found, self.report_digest
        );
        for q in &self.quantum_caps {
            let [n, k, d] = q.profile.quantum.unwrap_or_default();
            out += &format!("  [[{n},{k},{d}]] from {}: {}\n", q.class_id, q.cap.points.join(" "));
        }
        out
    }
}
