use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use quantum_caps::capfile::{read_caps, read_lines, write_caps, CapRecord};
use quantum_caps::codes::quantum_check;
use quantum_caps::equivalence::{self, ClassReport, Verdict};
use quantum_caps::search::{
    admissible_seed_sizes, generate_catalog, read_seed_file, run_search, write_seed_file, CatalogOptions,
    SearchConfig, SearchReport, SeedClass, SeedSelection,
};
use quantum_caps::{Cap, Error, GeometryTables};

#[derive(Parser, Serialize)]
#[command(name = "qcaps", version, about = "Caps and quantum caps in PG(r,4)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Serialize)]
enum Cmd {
    /// Build the incidence tables of PG(dim,4) and print their counts.
    Tables {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify caps up to collineation, either generated or from a cap file.
    Classify(ClassifyArgs),
    /// Extend seed caps of the hyperplane x_dim = 0 to quantum caps.
    Search(SearchArgs),
    /// Check every cap in a cap file.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Test whether the first two caps of the given files are equivalent.
    Equiv {
        #[arg(required = true, num_args = 1..=2)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check a saved search report and print it.
    Report {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Serialize)]
struct ClassifyArgs {
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Comma-separated sizes to report.
    #[arg(long, value_delimiter = ',', default_values_t = [13, 15, 17])]
    sizes: Vec<usize>,
    /// Classify the caps in this file instead of generating all caps.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Save generated levels here and resume from it.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Stop after this many new levels.
    #[arg(long)]
    max_levels: Option<usize>,
    /// Also write the classes as a seed file.
    #[arg(long)]
    seed_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    #[arg(long)]
    target: usize,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    /// Comma-separated seed class ids such as 17-0.
    #[arg(long, value_delimiter = ',', conflicts_with = "all_seeds")]
    seeds: Vec<String>,
    /// Every admissible seed class (the default).
    #[arg(long)]
    all_seeds: bool,
    /// Verified seed file; seeds are generated when absent.
    #[arg(long)]
    seed_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Save unit progress here.
    #[arg(long, conflicts_with = "resume")]
    checkpoint: Option<PathBuf>,
    /// Continue the run saved in this checkpoint.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Run every quantum predicate on every leaf and check the seed section.
    #[arg(long)]
    checked: bool,
    /// Allow targets other than 37 and 39.
    #[arg(long)]
    exploratory: bool,
    /// Experimental parity pruning.
    #[arg(long)]
    parity_prune: bool,
    /// Skip caps whose largest hyperplane section exceeds the seed.
    #[arg(long)]
    max_section_prune: bool,
    #[arg(long)]
    no_orbit_reduction: bool,
    /// Node budget per work unit for this invocation.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Run only the first k work units of each orbit.
    #[arg(long)]
    unit_limit: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the quantum caps found as a cap file.
    #[arg(long)]
    caps_out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
enum Format {
    Json,
    Text,
}

enum Outcome {
    Ok,
    Findings,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Contract(_) => 1,
        Error::CrossCheck(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let digest = hex::encode(Sha256::digest(serde_json::to_vec(&cli).expect("plain args")));
    match run(cli, &digest) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Findings) => ExitCode::from(4),
        Err(e) => {
            eprintln!("qcaps: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit<T: Serialize>(value: &T, text: impl FnOnce() -> String, format: Format, out: Option<&Path>) -> Result<(), Error> {
    let body = match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => text(),
    };
    match out {
        Some(p) => std::fs::write(p, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli, args_digest: &str) -> Result<Outcome, Error> {
    if !matches!(cli.cmd, Cmd::Search(_)) {
        eprintln!("config {args_digest}");
    }
    match cli.cmd {
        Cmd::Tables { dim, format } => tables(dim, format),
        Cmd::Classify(a) => classify(a),
        Cmd::Search(a) => search(a),
        Cmd::Verify { path, format } => verify(&path, format),
        Cmd::Equiv { paths, format } => equiv(&paths, format),
        Cmd::Report { path, format } => report(&path, format),
    }
}

fn tables(dim: usize, format: Format) -> Result<Outcome, Error> {
    let g = GeometryTables::shared(dim)?;
    let h = g.hyperplane_members(0).len();
    let v = json!({
        "dim": dim,
        "points": g.num_points(),
        "hyperplanes": g.num_hyperplanes(),
        "points_per_line": 5,
        "points_per_hyperplane": h,
        "digest": g.digest(),
    });
    let text = || {
        format!(
            "PG({dim},4): {} points, {} hyperplanes of {h} points\ndigest {}\n",
            g.num_points(),
            g.num_hyperplanes(),
            g.digest()
        )
    };
    emit(&v, text, format, None)?;
    Ok(Outcome::Ok)
}

fn class_text(reports: &[ClassReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let complete = r.classes.iter().filter(|c| c.complete).count();
        s += &format!("size {:>2}: {} classes ({} complete)\n", r.size, r.classes.len(), complete);
        for c in &r.classes {
            s += &format!(
                "  {:>6}  count {:>6}  stabilizer {:>8}  {}\n",
                c.class_id,
                c.count,
                c.stabilizer_order,
                if c.complete { "complete" } else { "incomplete" }
            );
        }
    }
    s
}

fn classify(a: ClassifyArgs) -> Result<Outcome, Error> {
    let reports: Vec<ClassReport> = match &a.input {
        Some(path) => {
            let caps = read_caps(BufReader::new(File::open(path)?))?;
            let mut sizes: Vec<usize> = caps.iter().map(Cap::size).collect();
            sizes.sort();
            sizes.dedup();
            let mut out = Vec::new();
            for s in sizes {
                let group: Vec<Cap> = caps.iter().filter(|c| c.size() == s).cloned().collect();
                if group.iter().any(|c| c.geometry().dim() != group[0].geometry().dim()) {
                    return Err(Error::Domain(format!("caps of size {s} come from different geometries")));
                }
                out.push(ClassReport::new(s, &equivalence::classify(&group)?));
            }
            out
        }
        None => {
            let geom = GeometryTables::shared(a.dim)?;
            let max = a.sizes.iter().copied().max().unwrap_or(0);
            let progress = |s: usize, k: usize| eprintln!("size {s}: {k} classes");
            let cat = generate_catalog(
                &geom,
                &CatalogOptions {
                    max_size: Some(max),
                    checkpoint: a.checkpoint.as_deref(),
                    level_budget: a.max_levels,
                    progress: Some(&progress),
                },
            )?;
            let mut seeds = Vec::new();
            let mut out = Vec::new();
            for &s in &a.sizes {
                let classes: Vec<SeedClass> = cat.classes(s);
                out.push(seed_report(s, &classes));
                seeds.extend(classes);
            }
            if let Some(p) = &a.seed_file {
                write_seed_file(BufWriter::new(File::create(p)?), &seeds)?;
            }
            out
        }
    };
    emit(&reports, || class_text(&reports), a.format, None)?;
    Ok(Outcome::Ok)
}

fn seed_report(size: usize, classes: &[SeedClass]) -> ClassReport {
    let mut r = ClassReport { size, classes: Vec::new() };
    for c in classes {
        r.classes.push(equivalence::ClassEntry {
            class_id: c.class_id.clone(),
            representative: CapRecord::from_cap(&c.cap),
            count: 1,
            stabilizer_order: c.stabilizer_order,
            complete: c.complete,
        });
    }
    r
}

fn search(a: SearchArgs) -> Result<Outcome, Error> {
    let mut cfg = SearchConfig::new(a.target);
    cfg.dim = a.dim;
    cfg.seeds = if a.seeds.is_empty() { SeedSelection::All } else { SeedSelection::Ids(a.seeds.clone()) };
    cfg.exploratory = a.exploratory;
    cfg.orbit_reduction = !a.no_orbit_reduction;
    cfg.parity_prune = a.parity_prune;
    cfg.max_section_prune = a.max_section_prune;
    cfg.unit_limit = a.unit_limit;
    cfg.checked = a.checked;
    cfg.workers = a.workers;
    cfg.max_nodes = a.max_nodes;
    cfg.checkpoint = a.resume.clone().or(a.checkpoint.clone());
    cfg.resume = a.resume.is_some();
    cfg.progress = !a.quiet;
    eprintln!("config {}", cfg.digest());

    let seeds = match &a.seed_file {
        Some(p) => read_seed_file(p)?,
        None => {
            let sizes = admissible_seed_sizes(a.target, a.dim, a.exploratory)?;
            let max = sizes.iter().copied().max().unwrap_or(0);
            let geom = GeometryTables::shared(a.dim.saturating_sub(1).max(2))?;
            let cat = generate_catalog(&geom, &CatalogOptions { max_size: Some(max), ..Default::default() })?;
            sizes.iter().flat_map(|&s| cat.classes(s)).collect()
        }
    };
    let report = run_search(&cfg, &seeds)?;
    eprintln!(
        "{}: nodes {} quantum caps {}",
        if report.complete { "complete" } else { "partial" },
        report.totals.nodes_visited,
        report.totals.quantum_caps_found
    );
    if let Some(p) = &a.caps_out {
        let caps = report.quantum_caps.iter().map(|q| q.cap.to_cap()).collect::<Result<Vec<_>, _>>()?;
        write_caps(BufWriter::new(File::create(p)?), &caps)?;
    }
    emit(&report, || report.to_text(), a.format, a.output.as_deref())?;
    Ok(if report.totals.quantum_caps_found > 0 { Outcome::Findings } else { Outcome::Ok })
}

#[derive(Serialize)]
struct VerifyLine {
    line: usize,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    complete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<quantum_caps::codes::CodeProfile>,
}

fn verify(path: &Path, format: Format) -> Result<Outcome, Error> {
    let lines = read_lines(BufReader::new(File::open(path)?))?;
    let mut out = Vec::new();
    let mut bad = 0;
    for (line, parsed) in lines {
        match parsed {
            Ok(cap) => out.push(VerifyLine {
                line,
                valid: true,
                error: None,
                n: Some(cap.size()),
                complete: Some(cap.is_complete()),
                profile: Some(quantum_check(&cap)?),
            }),
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                bad += 1;
                out.push(VerifyLine {
                    line,
                    valid: false,
                    error: Some(e.to_string()),
                    n: None,
                    complete: None,
                    profile: None,
                });
            }
        }
    }
    let text = || {
        out.iter()
            .map(|l| match (&l.profile, &l.error) {
                (Some(p), _) => format!(
                    "line {}: {}-cap{}, {}\n",
                    l.line,
                    p.n,
                    if l.complete == Some(true) { " (complete)" } else { "" },
                    match p.quantum {
                        Some([n, k, d]) => format!("quantum [[{n},{k},{d}]]"),
                        None => "not quantum".into(),
                    }
                ),
                (None, e) => format!("line {}: invalid: {}\n", l.line, e.as_deref().unwrap_or("")),
            })
            .collect()
    };
    emit(&out, text, format, None)?;
    if bad > 0 {
        return Err(Error::Domain(format!("{bad} line(s) of {} are not caps", path.display())));
    }
    Ok(Outcome::Ok)
}

fn equiv(paths: &[PathBuf], format: Format) -> Result<Outcome, Error> {
    let mut caps = Vec::new();
    for p in paths {
        caps.extend(read_caps(BufReader::new(File::open(p)?))?);
    }
    if caps.len() < 2 {
        return Err(Error::Config("need two caps".into()));
    }
    let (a, b) = (&caps[0], &caps[1]);
    let v = match equivalence::compare(a, b) {
        Verdict::Equivalent(w) => json!({
            "equivalent": true,
            "witness": {
                "matrix": w.matrix().rows().iter()
                    .map(|r| r.iter().map(ToString::to_string).collect::<String>())
                    .collect::<Vec<_>>(),
                "frobenius": w.frobenius(),
            },
        }),
        Verdict::SignatureMismatch(which) => json!({ "equivalent": false, "reason": which }),
        Verdict::NotEquivalent => json!({ "equivalent": false, "reason": "no witness" }),
    };
    let text = || {
        if v["equivalent"] == true {
            format!("equivalent\n{}\n", v["witness"])
        } else {
            format!("not equivalent ({})\n", v["reason"].as_str().unwrap_or(""))
        }
    };
    emit(&v, text, format, None)?;
    Ok(Outcome::Ok)
}

fn report(path: &Path, format: Format) -> Result<Outcome, Error> {
    let r: SearchReport = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    if !r.verify() {
        return Err(Error::Domain(format!("{}: totals or digest do not match the contents", path.display())));
    }
    emit(&r, || r.to_text(), format, None)?;
    Ok(if r.totals.quantum_caps_found > 0 { Outcome::Findings } else { Outcome::Ok })
}
