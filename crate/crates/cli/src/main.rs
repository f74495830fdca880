//! Batch experiment runner around the starcover library. A run is described
//! by a key=value config file and/or command-line flags (flags win), and
//! emits one deterministic result table.

mod config;
mod output;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use starcover::cfrac::cf_expand;
use starcover::circle::{gap_structure, CircleOrbit};
use starcover::experiment::{
    circle_coverage_exact, circle_coverage_grid, divergence_check, planar_coverage, rho_sequence,
    slope_contrast, PlanarSampling, Verdict,
};
use starcover::geometry::StarBodyFn;
use starcover::ubiquity::calibrate_kappa;
use starcover::{Error, Real};

use config::{ConfigMap, RealValue, Scope};
use output::{num, Format, Table};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "starcover", version, about = "Star-body coverage experiments")]
struct Cli {
    /// Key=value run configuration; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// PRNG seed for sampled experiments.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the library's parallel loops.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Gap statistics of a rotation orbit on the circle.
    Gaps {
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
    },
    /// Continued fraction expansion and convergents.
    Cf {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        depth: Option<String>,
    },
    /// Calibrate the local ubiquity constant kappa over random intervals.
    Ubiquity {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        trials: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rho_min: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rho_max: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        r_extra: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        nr_count: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y0: Option<String>,
    },
    /// Arc radii rho_n, partial sums, and the divergence check.
    Rho {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        s_threshold: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        stride: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        ladder: Option<String>,
    },
    /// Circle coverage fraction along an N ladder.
    CoverageCircle {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n_ladder: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        resolution: Option<String>,
    },
    /// Planar coverage fraction over a window of lattice translates.
    #[command(name = "coverage-2d")]
    Coverage2d {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<String>,
        #[arg(long = "P", allow_hyphen_values = true)]
        p_ladder: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        resolution: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mc_samples: Option<String>,
    },
    /// Paired irrational/rational slope coverage curves.
    Contrast {
        #[arg(long, allow_hyphen_values = true)]
        alpha_irr: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha_rat: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p_ladder: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        resolution: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mc_samples: Option<String>,
    },
    /// Structural condition checks on a distance function.
    CheckConditions {
        #[arg(long, allow_hyphen_values = true)]
        body: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        s_min: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        s_max: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        samples: Option<String>,
    },
}

impl Command {
    fn overrides(&self) -> (&'static str, Vec<(&'static str, &Option<String>)>) {
        match self {
            Command::Gaps { beta, y0, n, epsilon } => (
                "gaps",
                vec![("beta", beta), ("y0", y0), ("n", n), ("epsilon", epsilon)],
            ),
            Command::Cf { alpha, depth } => ("cf", vec![("alpha", alpha), ("depth", depth)]),
            Command::Ubiquity { alpha, trials, rho_min, rho_max, r_extra, nr_count, y0 } => (
                "ubiquity",
                vec![
                    ("alpha", alpha),
                    ("trials", trials),
                    ("rho_min", rho_min),
                    ("rho_max", rho_max),
                    ("r_extra", r_extra),
                    ("nr_count", nr_count),
                    ("y0", y0),
                ],
            ),
            Command::Rho { alpha, q, psi, s_threshold, n, stride, ladder } => (
                "rho",
                vec![
                    ("alpha", alpha),
                    ("q", q),
                    ("psi_q", psi),
                    ("n", n),
                    ("s_threshold", s_threshold),
                    ("stride", stride),
                    ("ladder", ladder),
                ],
            ),
            Command::CoverageCircle { alpha, q, psi, y0, n_ladder, resolution } => (
                "coverage-circle",
                vec![
                    ("alpha", alpha),
                    ("q", q),
                    ("psi_q", psi),
                    ("y0", y0),
                    ("n_ladder", n_ladder),
                    ("resolution", resolution),
                ],
            ),
            Command::Coverage2d { alpha, q, psi, p_ladder, resolution, mc_samples } => (
                "coverage-2d",
                vec![
                    ("alpha", alpha),
                    ("q", q),
                    ("psi_q", psi),
                    ("p_ladder", p_ladder),
                    ("resolution", resolution),
                    ("mc_samples", mc_samples),
                ],
            ),
            Command::Contrast { alpha_irr, alpha_rat, q, psi, p_ladder, resolution, mc_samples } => (
                "contrast",
                vec![
                    ("alpha_irr", alpha_irr),
                    ("alpha_rat", alpha_rat),
                    ("q", q),
                    ("psi_q", psi),
                    ("p_ladder", p_ladder),
                    ("resolution", resolution),
                    ("mc_samples", mc_samples),
                ],
            ),
            Command::CheckConditions { body, alpha, s_min, s_max, samples } => (
                "check-conditions",
                vec![
                    ("body", body),
                    ("alpha", alpha),
                    ("s_min", s_min),
                    ("s_max", s_max),
                    ("samples", samples),
                ],
            ),
        }
    }
}

struct Globals {
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let mut map = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match ConfigMap::parse_file(&text) {
                Ok(map) => map,
                Err(errs) => return validation_failure(&errs),
            },
            Err(e) => {
                eprintln!("error: cannot read config {}: {e}", path.display());
                return ExitCode::from(EXIT_IO);
            }
        },
        None => ConfigMap::default(),
    };

    let command_name = match (&cli.command, map.get("command").map(str::to_string)) {
        (Some(cmd), _) => {
            let (name, pairs) = cmd.overrides();
            for (key, value) in pairs {
                if let Some(v) = value {
                    map.set(key, v.clone());
                }
            }
            name.to_string()
        }
        (None, Some(name)) => name,
        (None, None) => {
            return validation_failure(&["command: missing (give a subcommand or a config with command=...)".into()]);
        }
    };
    if let Some(seed) = cli.seed {
        map.set("seed", seed.to_string());
    }
    if let Some(format) = &cli.format {
        map.set("format", format.clone());
    }
    if let Some(threads) = cli.threads {
        map.set("threads", threads.to_string());
    }

    let mut scope = Scope::new(&map);
    let seed = scope.opt_f64("seed", 0.0) as u64;
    let format_text = scope.opt_string("format", "csv");
    let format = match format_text.as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => {
            scope.violations.push(format!("format: '{other}' is not csv or json"));
            Format::Csv
        }
    };
    let threads = scope.opt_usize("threads", 0);
    if !scope.violations.is_empty() {
        return validation_failure(&scope.violations);
    }
    if threads > 0 {
        // Ignored when a global pool already exists (tests in one process).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let globals = Globals { seed, format, out: cli.out.clone() };

    let result = match command_name.as_str() {
        "gaps" => run_gaps(&map, &globals),
        "cf" => run_cf(&map, &globals),
        "ubiquity" => run_ubiquity(&map, &globals),
        "rho" => run_rho(&map, &globals),
        "coverage-circle" => run_coverage_circle(&map, &globals),
        "coverage-2d" => run_coverage_2d(&map, &globals),
        "contrast" => run_contrast(&map, &globals),
        "check-conditions" => run_check_conditions(&map, &globals),
        other => {
            return validation_failure(&[format!("command: unknown command '{other}'")]);
        }
    };

    let table = match result {
        Ok(table) => table,
        Err(RunError::Validation(errs)) => return validation_failure(&errs),
        Err(RunError::Library(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                Error::NonFinite(_)
                | Error::UnboundedWidth { .. }
                | Error::CfPrecision { .. }
                | Error::CfOverflow(_) => EXIT_NUMERIC,
                _ => EXIT_VALIDATION,
            });
        }
    };

    match write_table(&table, &globals) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn validation_failure(errs: &[String]) -> ExitCode {
    for e in errs {
        eprintln!("error: {e}");
    }
    ExitCode::from(EXIT_VALIDATION)
}

fn write_table(table: &Table, globals: &Globals) -> std::io::Result<()> {
    match &globals.out {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            table.write(globals.format, &mut file)?;
            file.flush()
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(globals.format, &mut lock)?;
            lock.flush()
        }
    }
}

enum RunError {
    Validation(Vec<String>),
    Library(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Library(e)
    }
}

type RunResult = Result<Table, RunError>;

/// Shared metadata skeleton; `echo` must reparse to the same run.
fn base_meta(table: &mut Table, command: &str, globals: &Globals, echo: BTreeMap<String, String>) {
    table.meta_entry("command", Value::String(command.to_string()));
    table.meta_entry("version", Value::String(env!("CARGO_PKG_VERSION").to_string()));
    table.meta_entry("seed", json!(globals.seed));
    table.meta_entry("rng", Value::String("chacha8".to_string()));
    let mut obj = Map::new();
    for (k, v) in echo {
        obj.insert(k, Value::String(v));
    }
    table.meta_entry("config", Value::Object(obj));
}

fn finish_scope(scope: Scope) -> Result<(), RunError> {
    if scope.violations.is_empty() {
        Ok(())
    } else {
        Err(RunError::Validation(scope.violations))
    }
}

fn body_from(alpha: &RealValue) -> Result<StarBodyFn, Error> {
    match &alpha.real {
        Real::Surd(s) => StarBodyFn::rotated_exact(*s),
        Real::Float(v) => StarBodyFn::rotated(*v),
    }
}

fn exactness_note(table: &mut Table, key: &str, value: &RealValue) {
    if !value.is_exact() {
        table.meta_entry(
            &format!("{key}_warning"),
            Value::String("float value treated as irrational by declaration".to_string()),
        );
    }
}

fn run_gaps(map: &ConfigMap, globals: &Globals) -> RunResult {
    let mut scope = Scope::new(map);
    let beta = scope.req_real("beta");
    let y0 = scope.opt_f64("y0", 0.0);
    let n = scope.req_usize("n");
    let epsilon = scope.opt_f64("epsilon", 1e-9);
    scope.check(n >= 1, "n", "must be >= 1");
    scope.check(epsilon >= 0.0, "epsilon", "must be >= 0");
    scope.check(beta.value() > 0.0, "beta", "must be > 0");
    finish_scope(scope)?;

    // The named constants exceed 1; only the fractional part rotates.
    let orbit = CircleOrbit::new(y0, beta.value(), n);
    let gs = gap_structure(&orbit.points(), epsilon);

    let mut table = Table::new(vec!["length", "multiplicity"]);
    base_meta(
        &mut table,
        "gaps",
        globals,
        BTreeMap::from([
            ("beta".into(), beta.text.clone()),
            ("y0".into(), y0.to_string()),
            ("n".into(), n.to_string()),
            ("epsilon".into(), epsilon.to_string()),
        ]),
    );
    table.meta_entry("has_zero_gap", Value::Bool(gs.has_zero_gap));
    for &(length, mult) in &gs.distinct_gaps {
        table.push_row(vec![num(length), json!(mult)]);
    }
    Ok(table)
}

fn run_cf(map: &ConfigMap, globals: &Globals) -> RunResult {
    let mut scope = Scope::new(map);
    let alpha = scope.req_real("alpha");
    let depth = scope.opt_usize("depth", 32);
    scope.check(depth >= 1, "depth", "must be >= 1");
    finish_scope(scope)?;

    let cf = cf_expand(alpha.real.clone(), depth)?;

    let mut table = Table::new(vec!["k", "partial_quotient", "p", "q"]);
    base_meta(
        &mut table,
        "cf",
        globals,
        BTreeMap::from([
            ("alpha".into(), alpha.text.clone()),
            ("depth".into(), depth.to_string()),
        ]),
    );
    table.meta_entry("value", num(cf.value));
    table.meta_entry("exact", Value::Bool(cf.exact));
    table.meta_entry("terminated", Value::Bool(cf.terminated));
    table.meta_entry(
        "period_start",
        cf.period_start.map_or(Value::Null, |p| json!(p)),
    );
    for (k, a) in cf.partial_quotients.iter().enumerate() {
        let (p, q) = &cf.convergents[k];
        table.push_row(vec![
            json!(k),
            json!(a),
            Value::String(p.to_string()),
            Value::String(q.to_string()),
        ]);
    }
    Ok(table)
}

fn run_ubiquity(map: &ConfigMap, globals: &Globals) -> RunResult {
    let mut scope = Scope::new(map);
    let alpha = scope.req_real("alpha");
    let trials = scope.opt_usize("trials", 1000);
    let rho_min = scope.opt_f64("rho_min", 0.01);
    let rho_max = scope.opt_f64("rho_max", 0.1);
    let r_extra = scope.opt_usize("r_extra", 3);
    let nr_count = scope.opt_usize("nr_count", 20);
    let y0 = scope.opt_f64("y0", 0.0);
    scope.check(trials >= 1, "trials", "must be >= 1");
    scope.check(
        0.0 < rho_min && rho_min <= rho_max && rho_max <= 0.5,
        "rho_min",
        "need 0 < rho_min <= rho_max <= 1/2",
    );
    scope.check(nr_count >= 3, "nr_count", "must be >= 3");
    scope.check(alpha.value() > 1.0, "alpha", "must exceed 1 so beta = 1/alpha rotates");
    finish_scope(scope)?;

    let beta = alpha.real.recip()?;
    let nr = cf_expand(beta.clone(), nr_count + 2)?.nr_sequence(nr_count)?;
    let (kappa, report) =
        calibrate_kappa(y0, beta.value(), &nr, trials, (rho_min, rho_max), r_extra, globals.seed)?;

    let mut table = Table::new(vec!["trial", "center", "rho", "r", "lambda", "measured", "ratio"]);
    base_meta(
        &mut table,
        "ubiquity",
        globals,
        BTreeMap::from([
            ("alpha".into(), alpha.text.clone()),
            ("trials".into(), trials.to_string()),
            ("rho_min".into(), rho_min.to_string()),
            ("rho_max".into(), rho_max.to_string()),
            ("r_extra".into(), r_extra.to_string()),
            ("nr_count".into(), nr_count.to_string()),
            ("y0".into(), y0.to_string()),
        ]),
    );
    exactness_note(&mut table, "alpha", &alpha);
    table.meta_entry("kappa", num(kappa));
    table.meta_entry("min_ratio", num(report.min_ratio));
    table.meta_entry("nr", json!(nr));
    for (i, t) in report.trials.iter().enumerate() {
        table.push_row(vec![
            json!(i),
            num(t.center),
            num(t.rho),
            json!(t.r),
            num(t.lambda),
            num(t.measured),
            num(t.ratio()),
        ]);
    }
    Ok(table)
}

fn run_rho(map: &ConfigMap, globals: &Globals) -> RunResult {
    let mut scope = Scope::new(map);
    let alpha = scope.req_real("alpha");
    let q = scope.req_u32("q");
    let psi = scope.req_f64("psi_q");
    let n = scope.opt_usize("n", 1000);
    let s_threshold = scope.opt_f64("s_threshold", 0.0);
    let stride = scope.opt_usize("stride", 1);
    let ladder = map.get("ladder").map(|_| {
        let mut s = Scope::new(map);
        let l = s.opt_usize_list("ladder", "");
        (l, s.violations)
    });
    scope.check(psi > 0.0, "psi_q", "must be > 0");
    scope.check(q >= 1, "q", "must be >= 1");
    scope.check(n >= 1, "n", "must be >= 1");
    scope.check(stride >= 1, "stride", "must be >= 1");
    scope.check(alpha.value() >= 0.5, "alpha", "must be >= 1/2 (swap the axes otherwise)");
    scope.check(s_threshold >= 0.0, "s_threshold", "must be >= 0");
    let ladder = match ladder {
        Some((l, errs)) if errs.is_empty() => {
            if let Some(max) = l.iter().max() {
                scope.check(
                    n >= 10 * max,
                    "ladder",
                    "divergence needs n >= 10 * max ladder entry",
                );
            }
            Some(l)
        }
        Some((_, errs)) => {
            scope.violations.extend(errs);
            None
        }
        None => None,
    };
    finish_scope(scope)?;

    let body = body_from(&alpha)?;
    let rho = rho_sequence(&body, psi, alpha.value(), q, n, s_threshold)?;

    let mut table = Table::new(vec!["n", "rho", "partial_sum"]);
    let mut echo = BTreeMap::from([
        ("alpha".into(), alpha.text.clone()),
        ("q".into(), q.to_string()),
        ("psi_q".into(), psi.to_string()),
        ("n".into(), n.to_string()),
        ("s_threshold".into(), s_threshold.to_string()),
        ("stride".into(), stride.to_string()),
    ]);
    if let Some(l) = &ladder {
        echo.insert(
            "ladder".into(),
            l.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        );
    }
    base_meta(&mut table, "rho", globals, echo);
    exactness_note(&mut table, "alpha", &alpha);
    table.meta_entry("clamped_entries", json!(rho.clamped_entries));
    if let Some(l) = &ladder {
        let report = divergence_check(&rho, l)?;
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|&(n, s_n, s_10n, inc)| json!([n, s_n, s_10n, inc]))
            .collect();
        table.meta_entry(
            "divergence",
            json!({
                "verdict": match report.verdict {
                    Verdict::Diverging => "diverging",
                    Verdict::Converging => "converging",
                },
                "rows": rows,
            }),
        );
    }
    for k in (1..=rho.len()).step_by(stride) {
        table.push_row(vec![json!(k), num(rho.radii[k - 1]), num(rho.partial_sums[k - 1])]);
    }
    Ok(table)
}

fn run_coverage_circle(map: &ConfigMap, globals: &Globals) -> RunResult {
    let mut scope = Scope::new(map);
    let alpha = scope.req_real("alpha");
    let q = scope.req_u32("q");
    let psi = scope.req_f64("psi_q");
    let y0 = scope.opt_f64("y0", 0.0);
    let n_ladder = scope.opt_usize_list("n_ladder", "1000,10000,100000");
    let resolution = scope.opt_usize("resolution", 0);
    scope.check(psi > 0.0, "psi_q", "must be > 0");
    scope.check(q >= 1, "q", "must be >= 1");
    scope.check(alpha.value() >= 0.5, "alpha", "must be >= 1/2 (swap the axes otherwise)");
    scope.check(n_ladder.iter().all(|&n| n >= 1), "n_ladder", "entries must be >= 1");
    scope.check(
        resolution == 0 || resolution >= 1000,
        "resolution",
        "must be 0 (exact) or >= 1000 grid points",
    );
    finish_scope(scope)?;

    let body = body_from(&alpha)?;
    let count = *n_ladder.iter().max().unwrap();
    let rho = rho_sequence(&body, psi, alpha.value(), q, count, 0.0)?;

    let mut table = Table::new(vec!["n", "fraction", "method"]);
    base_meta(
        &mut table,
        "coverage-circle",
        globals,
        BTreeMap::from([
            ("alpha".into(), alpha.text.clone()),
            ("q".into(), q.to_string()),
            ("psi_q".into(), psi.to_string()),
            ("y0".into(), y0.to_string()),
            (
                "n_ladder".into(),
                n_ladder.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
            ),
            ("resolution".into(), resolution.to_string()),
        ]),
    );
    exactness_note(&mut table, "alpha", &alpha);
    for &n in &n_ladder {
        let cov = if resolution == 0 {
            circle_coverage_exact(alpha.value(), q, y0, &rho, n)?
        } else {
            circle_coverage_grid(alpha.value(), q, y0, &rho, n, resolution)?
        };
        table.push_row(vec![json!(n), num(cov.fraction), Value::String(cov.method)]);
    }
    Ok(table)
}

fn sampling_from(
    scope: &mut Scope,
    map: &ConfigMap,
    seed: u64,
) -> (PlanarSampling, BTreeMap<String, String>) {
    let resolution = scope.opt_usize("resolution", 1024);
    let mc_samples = map.get("mc_samples").map(|_| scope.opt_usize("mc_samples", 1_000_000));
    scope.check(resolution >= 1, "resolution", "must be >= 1");
    let mut echo = BTreeMap::new();
    let sampling = match mc_samples {
        Some(samples) => {
            scope.check(samples >= 1, "mc_samples", "must be >= 1");
            echo.insert("mc_samples".into(), samples.to_string());
            PlanarSampling::MonteCarlo { samples, seed }
        }
        None => {
            echo.insert("resolution".into(), resolution.to_string());
            PlanarSampling::Grid { resolution }
        }
    };
    (sampling, echo)
}

fn run_coverage_2d(map: &ConfigMap, globals: &Globals) -> RunResult {
    let mut scope = Scope::new(map);
    let alpha = scope.req_real("alpha");
    let q = scope.req_u32("q");
    let psi = scope.req_f64("psi_q");
    let p_ladder = scope.req_i64_list("p_ladder");
    let (sampling, sampling_echo) = sampling_from(&mut scope, map, globals.seed);
    scope.check(psi > 0.0, "psi_q", "must be > 0");
    scope.check(q >= 1, "q", "must be >= 1");
    scope.check(p_ladder.iter().all(|&p| p >= 0), "p_ladder", "entries must be >= 0");
    scope.check(alpha.value() >= 0.5, "alpha", "must be >= 1/2 (swap the axes otherwise)");
    finish_scope(scope)?;

    let body = body_from(&alpha)?;

    let mut table = Table::new(vec!["p", "fraction", "sample_count", "method"]);
    let mut echo = BTreeMap::from([
        ("alpha".into(), alpha.text.clone()),
        ("q".into(), q.to_string()),
        ("psi_q".into(), psi.to_string()),
        (
            "p_ladder".into(),
            p_ladder.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        ),
    ]);
    echo.extend(sampling_echo);
    base_meta(&mut table, "coverage-2d", globals, echo);
    exactness_note(&mut table, "alpha", &alpha);
    for &p in &p_ladder {
        let cov = planar_coverage(&body, psi, q, p, &sampling)?;
        table.push_row(vec![
            json!(p),
            num(cov.fraction),
            json!(cov.sample_count),
            Value::String(cov.method),
        ]);
    }
    Ok(table)
}

fn run_contrast(map: &ConfigMap, globals: &Globals) -> RunResult {
    let mut scope = Scope::new(map);
    let alpha_irr = scope.opt_real("alpha_irr", "sqrt2");
    let alpha_rat = scope.opt_real("alpha_rat", "1");
    let q = scope.req_u32("q");
    let psi = scope.req_f64("psi_q");
    let p_ladder = scope.opt_i64_list("p_ladder", "1,2,4,8,16,32");
    let (sampling, sampling_echo) = sampling_from(&mut scope, map, globals.seed);
    scope.check(psi > 0.0, "psi_q", "must be > 0");
    scope.check(q >= 1, "q", "must be >= 1");
    scope.check(alpha_irr.value() >= 0.5, "alpha_irr", "must be >= 1/2");
    scope.check(alpha_rat.value() >= 0.5, "alpha_rat", "must be >= 1/2");
    scope.check(p_ladder.iter().all(|&p| p >= 0), "p_ladder", "entries must be >= 0");
    finish_scope(scope)?;

    let curves =
        slope_contrast(psi, q, &p_ladder, alpha_irr.value(), alpha_rat.value(), &sampling)?;

    let mut table = Table::new(vec!["p", "irrational_fraction", "rational_fraction"]);
    let mut echo = BTreeMap::from([
        ("alpha_irr".into(), alpha_irr.text.clone()),
        ("alpha_rat".into(), alpha_rat.text.clone()),
        ("q".into(), q.to_string()),
        ("psi_q".into(), psi.to_string()),
        (
            "p_ladder".into(),
            p_ladder.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        ),
    ]);
    echo.extend(sampling_echo);
    base_meta(&mut table, "contrast", globals, echo);
    for (i, &p) in curves.p_ladder.iter().enumerate() {
        table.push_row(vec![json!(p), num(curves.irrational[i]), num(curves.rational[i])]);
    }
    Ok(table)
}

fn run_check_conditions(map: &ConfigMap, globals: &Globals) -> RunResult {
    let mut scope = Scope::new(map);
    let kind = scope.opt_string("body", "rotated");
    let s_min = scope.opt_f64("s_min", 1.0);
    let s_max = scope.opt_f64("s_max", 1000.0);
    let samples = scope.opt_usize("samples", 1000);
    scope.check(0.0 < s_min && s_min < s_max, "s_min", "need 0 < s_min < s_max");
    scope.check(samples >= 2, "samples", "must be >= 2");
    let (body, alpha_echo) = match kind.as_str() {
        "height" => (Ok(StarBodyFn::Height), None),
        "multiplicative" => (Ok(StarBodyFn::Multiplicative), None),
        "rotated" => {
            let alpha = scope.req_real("alpha");
            (body_from(&alpha), Some(alpha))
        }
        other => {
            scope.violations.push(format!(
                "body: '{other}' is not height, multiplicative, or rotated"
            ));
            (Ok(StarBodyFn::Height), None)
        }
    };
    finish_scope(scope)?;
    let body = body?;

    let report = body.check_conditions(s_min, s_max, samples)?;

    let mut table = Table::new(vec!["cutoff", "strip_integral"]);
    let mut echo = BTreeMap::from([
        ("body".into(), kind.clone()),
        ("s_min".into(), s_min.to_string()),
        ("s_max".into(), s_max.to_string()),
        ("samples".into(), samples.to_string()),
    ]);
    if let Some(alpha) = &alpha_echo {
        echo.insert("alpha".into(), alpha.text.clone());
    }
    base_meta(&mut table, "check-conditions", globals, echo);
    if let Some(alpha) = &alpha_echo {
        exactness_note(&mut table, "alpha", alpha);
    }
    table.meta_entry("irrational_slope_found", Value::Bool(report.irrational_slope_found));
    table.meta_entry("slope_note", Value::String(report.slope_note.clone()));
    table.meta_entry("strip_measure_diverges", Value::Bool(report.strip_measure_diverges));
    table.meta_entry(
        "symmetry_max_defect",
        report.symmetry_max_defect.map_or(Value::Null, num),
    );
    table.meta_entry(
        "width_monotone_from",
        report.width_monotone_from.map_or(Value::Null, num),
    );
    for &(cutoff, integral) in &report.strip_integrals {
        table.push_row(vec![num(cutoff), num(integral)]);
    }
    Ok(table)
}
