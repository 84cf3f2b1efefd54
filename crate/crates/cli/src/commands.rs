//! The four subcommands. Each renders its whole output as a string; the
//! binary writes it to `--out` or stdout.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use allgenus_core::chords::{isolated_chords, partner_of_one};
use allgenus_core::gfengine::{eta_triangle, exact_mean_var, map_counts, phi_series};
use allgenus_core::mapcore::{canonical_encode, stat, MapStat};
use allgenus_core::stats::{limit_law, loop_moment_check, ExactDist, ReferenceLaw};
use allgenus_core::{dist_series, BigInt, BigRat, Statistic};
use clap::{Args, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::criteria::{run_suite, LimitsConfig, Suite};
use crate::output::{json_header, json_string, Format, Table};
use crate::sampling::{diagram_histogram, map_histogram, map_samples, with_pool};
use crate::tables::max_n;
use crate::CliError;

/// Largest `n` for `coeffs --stat maps`.
pub const MAPS_MAX_N: usize = 2000;
/// Largest map size for `sample`.
pub const SAMPLE_MAX_N: usize = 300;
/// Largest chord count for `sample --diagram`.
pub const DIAGRAM_MAX_N: usize = 2000;
/// Largest `--trials` for which `--records` is accepted.
pub const RECORDS_MAX_TRIALS: u64 = 1_000_000;
/// Moment orders listed by `plotdata --stat loops`.
pub const LOOP_ORDERS: usize = 8;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact coefficient table of a statistic, or the map counts.
    Coeffs(CoeffsArgs),
    /// Histogram of a statistic over uniform random maps or diagrams.
    Sample(SampleArgs),
    /// Run a check suite; exit 1 if any check fails.
    Check(CheckArgs),
    /// Exact distribution next to its limit law, ready for plotting.
    Plotdata(PlotArgs),
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    /// vertices, leaves, loops, root_edges, root_degree, root_isthmic or maps
    #[arg(long)]
    pub stat: String,
    /// Rows 0..=n are emitted.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Map statistic (vertices, leaves, loops, root_edges, root_degree,
    /// root_face_degree, genus, root_isthmic); with --diagram,
    /// partner_of_one or isolated_chords.
    #[arg(long)]
    pub stat: String,
    /// Edges, or chords with --diagram.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample indecomposable chord diagrams by rejection instead of maps.
    #[arg(long)]
    pub diagram: bool,
    /// Also write every sample as a JSON line to this file.
    #[arg(long)]
    pub records: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// One of the six table statistics.
    #[arg(long)]
    pub stat: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a command produced: the text to emit, and whether it counts as a
/// failure once emitted.
pub struct Outcome {
    pub text: String,
    pub failure: Option<CliError>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome {
            text,
            failure: None,
        }
    }
}

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Coeffs(a) => coeffs(a).map(Outcome::from),
        Command::Sample(a) => sample(a).map(Outcome::from),
        Command::Check(a) => check(a),
        Command::Plotdata(a) => plotdata(a).map(Outcome::from),
    }
}

pub fn out_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Coeffs(a) => a.out.as_ref(),
        Command::Sample(a) => a.out.as_ref(),
        Command::Check(a) => a.out.as_ref(),
        Command::Plotdata(a) => a.out.as_ref(),
    }
}

fn parse_stat(name: &str) -> Result<Statistic, CliError> {
    name.parse::<Statistic>()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn bound(n: usize, max: usize, what: &str) -> Result<(), CliError> {
    if n > max {
        Err(CliError::Bounds(format!(
            "{what}: n = {n} exceeds the supported maximum {max}"
        )))
    } else {
        Ok(())
    }
}

fn big(c: &BigInt) -> Value {
    Value::String(c.to_string())
}

pub fn coeffs(a: &CoeffsArgs) -> Result<String, CliError> {
    if a.stat == "maps" {
        bound(a.n, MAPS_MAX_N, "coeffs --stat maps")?;
        let counts = map_counts(a.n);
        let mut table = Table::new(&["n", "count"])
            .meta("command", "coeffs")
            .meta("stat", "maps");
        for (n, c) in counts.as_slice().iter().enumerate() {
            table.push(vec![json!(n), big(c)]);
        }
        return Ok(match a.format {
            Format::Csv => table.to_csv(),
            Format::Json => coeffs_json(
                "maps",
                counts.as_slice().iter().map(|c| json!([c.to_string()])),
            ),
        });
    }
    let s = parse_stat(&a.stat)?;
    bound(a.n, max_n(s), &format!("coeffs --stat {}", s.name()))?;
    let dist = dist_series(s, a.n);
    let columns: &[&str] = if s.is_joint() {
        &["n", "k", "m", "count"]
    } else {
        &["n", "k", "count"]
    };
    let mut table = Table::new(columns)
        .meta("command", "coeffs")
        .meta("stat", s.name());
    for (n, row) in dist.rows().iter().enumerate() {
        for (i, j, c) in row.terms() {
            let mut cells = vec![json!(n), json!(i)];
            if s.is_joint() {
                cells.push(json!(j));
            }
            cells.push(big(c));
            table.push(cells);
        }
    }
    Ok(match a.format {
        Format::Csv => table.to_csv(),
        Format::Json => coeffs_json(
            s.name(),
            dist.rows().iter().map(|row| {
                if s.is_joint() {
                    // counts[k][m]
                    let (dv, dw) = (
                        row.degree(allgenus_core::Var::V),
                        row.degree(allgenus_core::Var::W),
                    );
                    let grid: Vec<Value> = (0..=dv.unwrap_or(0))
                        .filter(|_| dv.is_some())
                        .map(|i| {
                            Value::Array(
                                (0..=dw.unwrap_or(0))
                                    .map(|j| big(row.coeff(i, j)))
                                    .collect(),
                            )
                        })
                        .collect();
                    Value::Array(grid)
                } else {
                    Value::Array(
                        row.univariate_coeffs()
                            .expect("univariate")
                            .iter()
                            .map(big)
                            .collect(),
                    )
                }
            }),
        ),
    })
}

fn coeffs_json(stat: &str, rows: impl Iterator<Item = Value>) -> String {
    let mut obj = json_header(&[
        ("command".into(), "coeffs".into()),
        ("stat".into(), stat.into()),
    ]);
    let rows = rows
        .enumerate()
        .map(|(n, counts)| json!({"n": n, "counts": counts}))
        .collect();
    obj.insert("rows".into(), Value::Array(rows));
    json_string(obj)
}

pub fn sample(a: &SampleArgs) -> Result<String, CliError> {
    let mut table = Table::new(&["value", "count"])
        .meta("command", "sample")
        .meta("stat", a.stat.clone());
    if a.records.is_some() && a.trials > RECORDS_MAX_TRIALS {
        return Err(CliError::Bounds(format!(
            "--records needs --trials <= {RECORDS_MAX_TRIALS}"
        )));
    }
    let histogram: BTreeMap<u64, u64> = if a.diagram {
        let key: fn(&allgenus_core::chords::ChordDiagram) -> u64 = match a.stat.as_str() {
            "partner_of_one" => |d| u64::from(partner_of_one(d)),
            "isolated_chords" => |d| isolated_chords(d) as u64,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown diagram statistic '{other}'"
                )))
            }
        };
        if a.n == 0 {
            return Err(CliError::Bounds("sample --diagram needs n >= 1".into()));
        }
        bound(a.n, DIAGRAM_MAX_N, "sample --diagram")?;
        let run = with_pool(|| diagram_histogram(a.n, a.trials, a.seed, key));
        let counts = map_counts(a.n - 1);
        let phi = phi_series(a.n);
        let exact = BigRat::new(
            counts.get(a.n - 1).unwrap().clone(),
            phi.get(a.n).unwrap().clone(),
        );
        table = table
            .meta("diagram", true)
            .meta("n", a.n)
            .meta("trials", a.trials)
            .meta("seed", a.seed)
            .meta("attempts", run.attempts)
            .meta("acceptance_rate", run.acceptance_rate())
            .meta("exact_acceptance_rate", exact.to_f64().unwrap_or(f64::NAN));
        if let Some(path) = &a.records {
            let lines = with_pool(|| crate::sampling::diagram_samples(a.n, a.trials, a.seed));
            let text: String = lines
                .iter()
                .map(|d| json!(d.partners()).to_string() + "\n")
                .collect();
            fs::write(path, text)?;
        }
        run.histogram
    } else {
        let which = MapStat::parse(&a.stat)
            .ok_or_else(|| CliError::Usage(format!("unknown map statistic '{}'", a.stat)))?;
        bound(a.n, SAMPLE_MAX_N, "sample")?;
        let counts = map_counts(a.n);
        table = table
            .meta("diagram", false)
            .meta("n", a.n)
            .meta("trials", a.trials)
            .meta("seed", a.seed);
        if let Some(path) = &a.records {
            let maps = with_pool(|| map_samples(a.n, a.trials, a.seed, &counts));
            let text: String = maps
                .iter()
                .map(|m| {
                    let rec = json!({
                        "format": crate::FORMAT_VERSION,
                        "n": m.n_edges(),
                        "sigma": m.sigma(),
                        "root": m.root(),
                        "canonical": hex::encode(canonical_encode(m)),
                    });
                    rec.to_string() + "\n"
                })
                .collect();
            fs::write(path, text)?;
        }
        with_pool(|| map_histogram(a.n, a.trials, a.seed, &counts, |m| stat(m, which) as u64))
    };
    for (v, c) in histogram {
        table.push(vec![json!(v), json!(c)]);
    }
    Ok(table.render(a.format))
}

pub fn check(a: &CheckArgs) -> Result<Outcome, CliError> {
    let criteria = run_suite(a.suite, &LimitsConfig::default());
    let total: usize = criteria.iter().map(|c| c.checks.len()).sum();
    let failed: usize = criteria
        .iter()
        .flat_map(|c| &c.checks)
        .filter(|c| !c.passed)
        .count();
    let suite = format!("{:?}", a.suite).to_lowercase();
    let text = match a.format {
        Format::Json => {
            let mut obj = json_header(&[
                ("command".into(), "check".into()),
                ("suite".into(), suite.into()),
            ]);
            obj.insert("passed".into(), (failed == 0).into());
            obj.insert(
                "criteria".into(),
                serde_json::to_value(&criteria).expect("serializable"),
            );
            json_string(obj)
        }
        Format::Csv => {
            let mut table = Table::new(&["criterion", "check", "passed", "detail"])
                .meta("command", "check")
                .meta("suite", suite)
                .meta("passed", failed == 0);
            for c in &criteria {
                for k in &c.checks {
                    table.push(vec![
                        json!(c.id),
                        json!(k.name),
                        json!(k.passed),
                        json!(k.detail),
                    ]);
                }
            }
            table.to_csv()
        }
    };
    Ok(Outcome {
        text,
        failure: (failed > 0).then_some(CliError::ChecksFailed { failed, total }),
    })
}

fn float(r: &BigRat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn plotdata(a: &PlotArgs) -> Result<String, CliError> {
    let s = parse_stat(&a.stat)?;
    bound(a.n, max_n(s), &format!("plotdata --stat {}", s.name()))?;
    if a.n == 0 && !matches!(s, Statistic::Leaves | Statistic::RootIsthmic) {
        return Err(CliError::Bounds(format!(
            "plotdata --stat {} needs n >= 1",
            s.name()
        )));
    }
    let table = dist_series(s, a.n);
    let n = a.n;
    let nf = n as f64;
    let (law, _) = limit_law(s, n, None);
    let base = |cols: &[&str]| {
        Table::new(cols)
            .meta("command", "plotdata")
            .meta("stat", s.name())
            .meta("n", n)
    };
    let mut out;
    match s {
        Statistic::Leaves | Statistic::RootIsthmic => {
            out = base(&["k", "exact_pmf", "law_pmf"]);
            let dist = ExactDist::from_table(&table, n)?;
            for (k, p) in dist.probs().iter().enumerate() {
                out.push(vec![
                    json!(k),
                    json!(float(p)),
                    json!(law.pmf(k as i64).expect("discrete law")),
                ]);
            }
        }
        Statistic::RootDegree | Statistic::RootEdges => {
            out = base(&["t", "exact_cdf", "law_cdf"]);
            let dist = ExactDist::from_table(&table, n)?;
            let top = if s == Statistic::RootDegree { 2 * n } else { n };
            let mut cdf = BigRat::from_integer(BigInt::ZERO);
            for k in 0..=top {
                if let Some(p) = dist.probs().get(k) {
                    cdf += p;
                }
                let t = k as f64 / nf;
                out.push(vec![
                    json!(t),
                    json!(float(&cdf)),
                    json!(law.cdf(t).expect("continuous law")),
                ]);
            }
        }
        Statistic::Vertices => {
            // standardized by the exact mean and variance
            out = base(&["t", "exact_cdf", "law_cdf"]);
            let (mean, var) = exact_mean_var(&table, n)?;
            let (mu, sd) = (float(&mean), float(&var).sqrt());
            let normal = ReferenceLaw::Normal { mean: 0.0, sd: 1.0 };
            let dist = ExactDist::from_table(&table, n)?;
            let mut cdf = BigRat::from_integer(BigInt::ZERO);
            for (k, p) in dist.probs().iter().enumerate().skip(1) {
                cdf += p;
                let t = (k as f64 - mu) / sd;
                out.push(vec![
                    json!(t),
                    json!(float(&cdf)),
                    json!(normal.cdf(t).expect("normal cdf")),
                ]);
            }
        }
        Statistic::Loops => {
            out = base(&["order", "exact_moment", "law_moment"]);
            let eta = eta_triangle(0, LOOP_ORDERS);
            for m in loop_moment_check(&table, &eta, n, LOOP_ORDERS)? {
                out.push(vec![
                    json!(m.order),
                    json!(float(&m.exact)),
                    json!(float(&m.limit)),
                ]);
            }
        }
    }
    Ok(out.render(a.format))
}
