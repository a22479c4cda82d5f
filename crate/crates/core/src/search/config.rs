use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Upper bounds on the minimum distance of linear `[n, 5, d]` codes over
/// GF(4), taken from the published code tables rather than computed.
pub const MAX_DISTANCE_TABLE: &[(usize, usize)] = &[(37, 25), (39, 27)];

pub const MAX_DISTANCE_SOURCE: &str =
    "code tables: no linear [n,5,d] quaternary code with d > n-12 exists for n = 37, 39";

/// Largest cap of PG(r,4) for r = 0..=3.
const MAX_CAP: [usize; 4] = [1, 2, 6, 17];

/// Largest `d` allowed by the Griesmer bound for an `[n, k, d]` code over
/// GF(4).
pub fn griesmer_max_distance(n: usize, k: usize) -> usize {
    let len = |d: usize| (0..k as u32).map(|i| d.div_ceil(4usize.pow(i))).sum::<usize>();
    (0..=n).rev().find(|&d| len(d) <= n).unwrap_or(0)
}

/// Sizes of hyperplane sections that can be the largest section of a
/// quantum `n`-cap spanning PG(dim,4).
///
/// A spanning `n`-cap gives an `[n, dim+1, d]` code whose largest section
/// is `n − d`, and every section of a quantum cap has the parity of `n`.
/// The strict mode applies only to `n` = 37, 39 in PG(4,4), with the
/// tabulated distance bound; the exploratory mode uses the table when it
/// has an entry and the Griesmer bound otherwise.
pub fn admissible_seed_sizes(n: usize, dim: usize, exploratory: bool) -> Result<BTreeSet<usize>> {
    if !(3..=4).contains(&dim) {
        return Err(Error::Config(format!("searches run in PG(3,4) or PG(4,4), not PG({dim},4)")));
    }
    let tabulated = (dim == 4).then(|| MAX_DISTANCE_TABLE.iter().find(|e| e.0 == n).map(|e| e.1)).flatten();
    let max_d = match (tabulated, exploratory) {
        (Some(d), _) => d,
        (None, true) => griesmer_max_distance(n, dim + 1),
        (None, false) => {
            return Err(Error::Config(format!("target {n} needs --exploratory (strict mode covers 37 and 39)")))
        }
    };
    let lo = n.saturating_sub(max_d).max(1);
    let hi = MAX_CAP[dim - 1].min(n.saturating_sub(1));
    Ok((lo..=hi).filter(|s| s % 2 == n % 2).collect())
}

/// Which seeds to run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SeedSelection {
    /// Every supplied seed whose size is admissible for the target.
    All,
    /// Seeds with these class ids.
    Ids(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Ambient dimension; seeds live in the hyperplane x_dim = 0.
    pub dim: usize,
    pub target: usize,
    pub seeds: SeedSelection,
    pub exploratory: bool,
    /// Reduce the first off-hyperplane point to stabilizer orbit
    /// representatives.
    pub orbit_reduction: bool,
    /// Experimental: prune nodes whose hyperplane parities can no longer be
    /// repaired by the remaining candidates.
    pub parity_prune: bool,
    /// Exploratory: prune caps with a hyperplane section larger than the
    /// seed, which is then the largest section.
    pub max_section_prune: bool,
    /// Only the first `k` work units of each orbit.
    pub unit_limit: Option<usize>,
    /// Run the full three-way quantum check on every leaf.
    pub checked: bool,
    pub workers: usize,
    /// Node budget per work unit for this invocation.
    pub max_nodes: Option<u64>,
    /// Unit progress is saved here after every unit.
    pub checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint instead of starting afresh.
    pub resume: bool,
    /// One line per finished orbit on standard error.
    pub progress: bool,
}

impl SearchConfig {
    pub fn new(target: usize) -> SearchConfig {
        SearchConfig {
            dim: 4,
            target,
            seeds: SeedSelection::All,
            exploratory: false,
            orbit_reduction: true,
            parity_prune: false,
            max_section_prune: false,
            unit_limit: None,
            checked: false,
            workers: 1,
            max_nodes: None,
            checkpoint: None,
            resume: false,
            progress: false,
        }
    }

    /// SHA-256 over the fields that determine the report. Workers, node
    /// budget, checkpoint and progress settings are excluded so that a
    /// resumed run shares the digest of the run it continues.
    pub fn digest(&self) -> String {
        #[derive(Serialize)]
        struct View<'a> {
            dim: usize,
            target: usize,
            seeds: &'a SeedSelection,
            exploratory: bool,
            orbit_reduction: bool,
            parity_prune: bool,
            max_section_prune: bool,
            unit_limit: Option<usize>,
            checked: bool,
        }
        let v = View {
            dim: self.dim,
            target: self.target,
            seeds: &self.seeds,
            exploratory: self.exploratory,
            orbit_reduction: self.orbit_reduction,
            parity_prune: self.parity_prune,
            max_section_prune: self.max_section_prune,
            unit_limit: self.unit_limit,
            checked: self.checked,
        };
        hex::encode(Sha256::digest(serde_json::to_vec(&v).expect("plain struct")))
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(3..=4).contains(&self.dim) {
            return Err(Error::Config(format!("searches run in PG(3,4) or PG(4,4), not PG({},4)", self.dim)));
        }
        if !self.exploratory && (self.max_section_prune || self.dim != 4 || ![37, 39].contains(&self.target)) {
            return Err(Error::Config(
                "only targets 37 and 39 in PG(4,4) run in strict mode; use --exploratory".into(),
            ));
        }
        if self.resume && self.checkpoint.is_none() {
            return Err(Error::Config("resuming needs a checkpoint path".into()));
        }
        if self.max_nodes == Some(0) {
            return Err(Error::Config("the node budget must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("at least one worker is needed".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_sizes() {
        let want: BTreeSet<usize> = [13, 15, 17].into();
        assert_eq!(admissible_seed_sizes(37, 4, false).unwrap(), want);
        assert_eq!(admissible_seed_sizes(39, 4, false).unwrap(), want);
        assert!(admissible_seed_sizes(35, 4, false).is_err());
    }

    #[test]
    fn exploratory_sizes() {
        assert_eq!(admissible_seed_sizes(10, 4, true).unwrap(), [6, 8].into());
        assert_eq!(admissible_seed_sizes(11, 4, true).unwrap(), [5, 7, 9].into());
        assert_eq!(admissible_seed_sizes(12, 4, true).unwrap(), [6, 8, 10].into());
    }

    #[test]
    fn griesmer() {
        // ovoid code [17,4,12] meets the bound
        assert_eq!(griesmer_max_distance(17, 4), 12);
        assert_eq!(griesmer_max_distance(10, 5), 5);
        assert_eq!(griesmer_max_distance(5, 5), 1);
        assert_eq!(griesmer_max_distance(4, 5), 0);
    }

    #[test]
    fn digest_ignores_runtime_knobs() {
        let a = SearchConfig::new(37);
        let mut b = a.clone();
        b.workers = 8;
        b.max_nodes = Some(10);
        b.checkpoint = Some("x".into());
        assert_eq!(a.digest(), b.digest());
        b.parity_prune = true;
        assert_ne!(a.digest(), b.digest());
    }
}
