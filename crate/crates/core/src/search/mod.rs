//! Seed classification and the exhaustive extension search.

pub(crate) mod checkpoint;
mod config;
mod extend;
mod orbits;
mod report;
mod run;
mod seeds;

pub use orbits::{first_level_orbits, Orbit};
pub use seeds::{
    classify_seeds, generate_catalog, read_seed_file, write_seed_file, CatalogOptions, SeedCatalog, SeedClass,
};
pub use config::{
    admissible_seed_sizes, griesmer_max_distance, SearchConfig, SeedSelection, MAX_DISTANCE_SOURCE,
    MAX_DISTANCE_TABLE,
};
pub use extend::{extend_exhaustive, ExtendOptions, ExtendStats};
pub use report::{FoundCap, OrbitReport, SearchReport, SeedReport, Totals};
pub use run::run_search;
