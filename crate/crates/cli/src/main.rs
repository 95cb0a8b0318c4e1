//! Command-line pipeline for prefix-traffic locality analysis: prepare
//! routing tables, generate or analyze reference traces, fit the locality
//! model, predict miss rates, emulate LRU caches (with or without scanning
//! attacks) and compare model against emulation.

mod io;
mod svg;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mapcache::attack::{attack_miss_vs_size, build_attack_size, AttackSpec};
use mapcache::emulator::{build_attack_stream, inject_attack, sweep, EmulateConfig};
use mapcache::locality::fit_piecewise;
use mapcache::prefix_table::{PrefixTable, RawTable};
use mapcache::stationarity::{stationarity_report, StationarityConfig};
use mapcache::trace::{
    self, coverage_ratio, gen_irm, gen_regime_switch, IrmSpec, RawTrace, ReferenceStream,
    TraceFormat, UnmatchedPolicy,
};
use mapcache::workingset::{
    avg_ws_from_curves, avg_ws_from_histogram, reuse_histogram, ws_curve_family, AvgWorkingSet,
    CurveAvgConfig,
};

#[derive(Parser)]
#[command(
    name = "mapcache",
    version,
    about = "Map-cache locality analysis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a CIDR table, filter more-specific prefixes, report statistics.
    Table(TableArgs),
    /// Generate a synthetic reference trace.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Working-set curves, average working-set and stationarity report.
    Analyze(AnalyzeArgs),
    /// Fit the piecewise power-law locality model to an average working-set CSV.
    Fit(FitArgs),
    /// Predict miss rates for cache sizes from a fitted model.
    Predict(PredictArgs),
    /// Emulate an LRU map-cache over a trace for a sweep of capacities.
    Emulate(EmulateArgs),
    /// Emulate a prefix-scanning attack injected into a legitimate trace.
    Attack(AttackArgs),
    /// Join a fitted model with emulation results and report the error.
    Compare(CompareArgs),
}

#[derive(Args)]
struct TraceInput {
    /// Trace file (gzip accepted when the name ends in .gz).
    #[arg(long)]
    trace: PathBuf,
    /// Trace format: refstring (one unit id per line) or dst-csv
    /// (timestamp_usec,dotted-quad per line).
    #[arg(long, default_value = "refstring")]
    format: String,
    /// CIDR table for resolving dst-csv destinations.
    #[arg(long)]
    table: Option<PathBuf>,
    /// What to do with unmatched destinations: drop or special.
    #[arg(long, default_value = "drop")]
    unmatched: String,
}

struct LoadedTrace {
    stream: ReferenceStream,
    table: Option<PrefixTable>,
}

impl TraceInput {
    fn load(&self) -> Result<LoadedTrace> {
        let format = match self.format.as_str() {
            "refstring" => TraceFormat::RefString,
            "dst-csv" => TraceFormat::DstCsv,
            other => bail!("unknown trace format `{other}` (refstring or dst-csv)"),
        };
        let table = self.table.as_ref().map(|p| load_filtered(p)).transpose()?;
        let stream = match trace::open_trace(&self.trace, format)? {
            RawTrace::Refs(stream) => stream,
            RawTrace::Dst(dst) => {
                let table = table
                    .as_ref()
                    .context("dst-csv traces need --table to resolve destinations")?;
                let policy = match self.unmatched.as_str() {
                    "drop" => UnmatchedPolicy::Drop,
                    "special" => UnmatchedPolicy::CountAsSpecial,
                    other => bail!("unknown unmatched policy `{other}` (drop or special)"),
                };
                let (stream, stats) = trace::resolve(&dst, table, policy);
                eprintln!(
                    "resolved {} destinations ({} unmatched, policy {})",
                    stats.matched, stats.unmatched, self.unmatched
                );
                stream
            }
        };
        if stream.is_empty() {
            bail!("{}: trace is empty", self.trace.display());
        }
        Ok(LoadedTrace { stream, table })
    }
}

fn load_filtered(path: &Path) -> Result<PrefixTable> {
    Ok(RawTable::load(path)?.filter_more_specifics())
}

#[derive(Args)]
struct TableArgs {
    /// CIDR table file, one a.b.c.d/len per line, # comments allowed.
    #[arg(long)]
    input: PathBuf,
    /// Visited-prefix count to report coverage against the filtered size.
    #[arg(long)]
    psi: Option<u64>,
    /// Write the statistics as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Independent reference model: i.i.d. Zipf draws over a unit universe.
    Irm(GenIrmArgs),
    /// Two IRM localities over disjoint unit ranges, back to back.
    RegimeSwitch(GenRegimeArgs),
}

#[derive(Args)]
struct GenIrmArgs {
    #[arg(long)]
    units: u32,
    #[arg(long, default_value_t = 1.0)]
    exponent: f64,
    #[arg(long)]
    length: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output refstring path (.gz for gzip).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenRegimeArgs {
    #[arg(long)]
    units_a: u32,
    #[arg(long, default_value_t = 1.0)]
    exponent_a: f64,
    #[arg(long)]
    length_a: u64,
    #[arg(long, default_value_t = 1)]
    seed_a: u64,
    #[arg(long)]
    units_b: u32,
    #[arg(long, default_value_t = 1.0)]
    exponent_b: f64,
    #[arg(long)]
    length_b: u64,
    #[arg(long, default_value_t = 2)]
    seed_b: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: TraceInput,
    /// Number of equally spaced working-set curves.
    #[arg(long, default_value_t = 48)]
    curves: usize,
    /// Curve spacing in references (default: length / curves).
    #[arg(long)]
    spacing: Option<usize>,
    /// Window-grid density per decade.
    #[arg(long, default_value_t = 32)]
    per_decade: u32,
    /// Minimum curves per grid point for curve averaging.
    #[arg(long, default_value_t = 8)]
    quorum: usize,
    /// Fraction of the largest windows trimmed from the curve average.
    #[arg(long, default_value_t = 0.05)]
    trim: f64,
    /// Aggregation window for the interreference mean series.
    #[arg(long, default_value_t = 10_000)]
    mean_window: usize,
    /// Seed for the Monte Carlo calibrations inside the stationarity tests.
    #[arg(long, default_value_t = 0x57A7)]
    seed: u64,
    /// Output prefix; writes PREFIX_curves.csv, PREFIX_avg_hist.csv,
    /// PREFIX_avg_curves.csv and PREFIX_stationarity.json.
    #[arg(long)]
    out_prefix: PathBuf,
    /// Also render the curve family as an SVG chart.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Average working-set CSV (u,s,std,m) from `analyze`.
    #[arg(long)]
    avg: PathBuf,
    #[arg(long, default_value_t = 4)]
    segments: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Fitted model JSON from `fit`.
    #[arg(long)]
    fit: PathBuf,
    /// Cache sizes: comma list (100,200) or log range lo:hi:count.
    #[arg(long, conflicts_with = "normalized")]
    sizes: Option<String>,
    /// Cache sizes as fractions of --universe (e.g. 0.01,0.1).
    #[arg(long, requires = "universe")]
    normalized: Option<String>,
    /// Unit universe (e.g. the filtered table size) for --normalized.
    #[arg(long)]
    universe: Option<u64>,
    /// Attack intensity; with --delta and --omega predicts the
    /// scanning-attack miss rate instead of the plain one.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    omega: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Also write the curve as JSON ({cache_size, miss_rate} points).
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct EmulateArgs {
    #[command(flatten)]
    input: TraceInput,
    /// Capacities: comma list or log range lo:hi:count.
    #[arg(long)]
    capacities: String,
    /// Window for the instantaneous miss-rate series.
    #[arg(long, default_value_t = 100_000)]
    window: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write the per-window instantaneous series.
    #[arg(long)]
    instant: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    #[command(flatten)]
    input: TraceInput,
    /// Unit universe size when no table is given (ids 0..universe).
    #[arg(long)]
    universe: Option<u32>,
    /// Relative attack intensity (attack packets per legitimate packet).
    #[arg(long)]
    rho: f64,
    /// Overlap between attack set and visited set, in [0, 1].
    #[arg(long)]
    delta: f64,
    /// Seed for attack-set sampling and per-cycle shuffling.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    capacities: String,
    #[arg(long, default_value_t = 100_000)]
    window: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    instant: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Fitted model JSON from `fit`.
    #[arg(long)]
    fit: PathBuf,
    /// Emulation CSV from `emulate` or `attack`.
    #[arg(long)]
    emulation: PathBuf,
    /// Attack intensity; with --delta and --omega switches the model to
    /// the scanning-attack form.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Attack set size |omega| for the attack model.
    #[arg(long)]
    omega: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli.command) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Table(args) => cmd_table(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Emulate(args) => cmd_emulate(args),
        Command::Attack(args) => cmd_attack(args),
        Command::Compare(args) => cmd_compare(args),
    }
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn cmd_table(args: TableArgs) -> Result<()> {
    let raw = RawTable::load(&args.input)?;
    let table = raw.filter_more_specifics();
    println!("bgp_rt {}", table.raw_size());
    println!("bgp_phi {}", table.len());
    let ratio = args.psi.map(|psi| coverage_ratio(psi, table.len() as u64));
    if let (Some(psi), Some(ratio)) = (args.psi, ratio) {
        println!("psi {psi}");
        println!("psi_over_bgp_phi {ratio:.2}");
    }
    if let Some(path) = args.json {
        let doc = serde_json::json!({
            "schema_version": io::SCHEMA_VERSION,
            "command": command_line(),
            "bgp_rt": table.raw_size(),
            "bgp_phi": table.len(),
            "psi": args.psi,
            "psi_over_bgp_phi": ratio,
        });
        io::write_text(&path, &format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
    }
    Ok(())
}

fn cmd_gen(command: GenCommand) -> Result<()> {
    let (stream, out) = match command {
        GenCommand::Irm(a) => {
            let spec = IrmSpec {
                n_units: a.units,
                zipf_exponent: a.exponent,
                length: a.length,
                seed: a.seed,
            };
            (gen_irm(&spec)?, a.out)
        }
        GenCommand::RegimeSwitch(a) => {
            let first = IrmSpec {
                n_units: a.units_a,
                zipf_exponent: a.exponent_a,
                length: a.length_a,
                seed: a.seed_a,
            };
            let second = IrmSpec {
                n_units: a.units_b,
                zipf_exponent: a.exponent_b,
                length: a.length_b,
                seed: a.seed_b,
            };
            (gen_regime_switch(&first, &second)?, a.out)
        }
    };
    trace::write_refstring_annotated(
        &out,
        &stream,
        &[
            format!("mapcache schema_version={}", io::SCHEMA_VERSION),
            format!("command: {}", command_line()),
        ],
    )?;
    println!(
        "wrote {} references, {} distinct units, to {}",
        stream.len(),
        stream.visited_set().len(),
        out.display()
    );
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let loaded = args.input.load()?;
    let stream = &loaded.stream;
    let cmd = command_line();

    let grid = mapcache::grid::log_grid(1, stream.len() as u64, args.per_decade);
    let spacing = match args.spacing {
        Some(s) => s,
        None => (stream.len() / args.curves.max(1)).max(1),
    };
    let curves = ws_curve_family(stream, spacing, args.curves, &grid)?;

    let hist = reuse_histogram(stream);
    let avg_hist = avg_ws_from_histogram(&hist, &grid)?;
    let avg_curves = avg_ws_from_curves(
        &curves,
        &CurveAvgConfig {
            quorum: args.quorum,
            trim_fraction: args.trim,
        },
    )?;

    let mut st_config = StationarityConfig {
        curve_count: args.curves,
        points_per_decade: args.per_decade,
        mean_window: args.mean_window,
        ..Default::default()
    };
    st_config.cluster.seed = args.seed;
    st_config.adf.seed = args.seed;
    let report = stationarity_report(stream, &st_config)?;

    let prefix = args.out_prefix.as_os_str().to_string_lossy();
    let path = |suffix: &str| PathBuf::from(format!("{prefix}{suffix}"));
    io::write_curves_csv(&path("_curves.csv"), &curves, &cmd, Some(args.seed))?;
    io::write_avg_csv(&path("_avg_hist.csv"), &avg_hist, &cmd, Some(args.seed))?;
    io::write_avg_csv(&path("_avg_curves.csv"), &avg_curves, &cmd, Some(args.seed))?;

    let psi = stream.visited_set().len();
    let doc = serde_json::json!({
        "schema_version": io::SCHEMA_VERSION,
        "command": cmd,
        "seed": args.seed,
        "trace": args.input.trace,
        "references": stream.len(),
        "psi": psi,
        "bgp_phi": loaded.table.as_ref().map(|t| t.len()),
        "psi_over_bgp_phi": loaded
            .table
            .as_ref()
            .map(|t| coverage_ratio(psi, t.len() as u64)),
        "curve_count": curves.len(),
        "curve_spacing": spacing,
        "report": report,
    });
    io::write_text(
        &path("_stationarity.json"),
        &format!("{}\n", serde_json::to_string_pretty(&doc)?),
    )?;

    if let Some(svg_path) = args.svg {
        let series: Vec<svg::Series> = curves
            .iter()
            .enumerate()
            .map(|(i, c)| svg::Series {
                label: format!("start {}", c.start_index),
                points: c
                    .samples()
                    .iter()
                    .map(|&(t, w)| (t as f64, w as f64))
                    .collect(),
                color: svg::PALETTE[i % svg::PALETTE.len()],
            })
            .collect();
        io::write_text(
            &svg_path,
            &svg::line_chart(
                &series,
                &svg::ChartOptions {
                    title: "Working-set curves".into(),
                    x_label: "window size T (references)".into(),
                    y_label: "w(t, T)".into(),
                    log_x: true,
                    log_y: true,
                },
            ),
        )?;
    }

    println!("references {}", stream.len());
    println!("psi {psi}");
    if let Some(table) = &loaded.table {
        println!("bgp_phi {}", table.len());
        println!(
            "psi_over_bgp_phi {:.2}",
            coverage_ratio(psi, table.len() as u64)
        );
    }
    println!(
        "stationarity {}",
        serde_json::to_value(report.verdict)?.as_str().unwrap()
    );
    println!(
        "clustering pass_fraction {:.3} dispersion_ok {}",
        report.clustering.pass_fraction, report.clustering.dispersion_ok
    );
    println!(
        "adf t {:.3} critical_1pct {:.3} reject {}",
        report.adf.t_stat, report.adf.critical_1pct, report.adf.reject_unit_root
    );
    Ok(())
}

fn cmd_fit(args: FitArgs) -> Result<()> {
    let avg: AvgWorkingSet = io::read_avg_csv(&args.avg)?;
    let fit = fit_piecewise(&avg, args.segments)?;
    io::write_fit_json(&args.out, &fit, &command_line())?;
    println!("segments {}", fit.segments().len());
    for (i, seg) in fit.segments().iter().enumerate() {
        println!(
            "segment {i}: u [{:.0}, {:.0}] alpha {:.4} beta {:.4}",
            seg.u_lo, seg.u_hi, seg.alpha, seg.beta
        );
    }
    println!("log_sse {:.6}", fit.log_sse);
    for w in &fit.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn cmd_predict(args: PredictArgs) -> Result<()> {
    let fit = io::read_fit_json(&args.fit)?;
    let sizes: Vec<u64> = match (&args.sizes, &args.normalized) {
        (Some(sizes), None) => io::parse_sizes(sizes)?,
        (None, Some(fractions)) => {
            let universe = args.universe.context("--normalized needs --universe")?;
            let mut sizes = Vec::new();
            for tok in fractions.split(',') {
                let f: f64 = tok
                    .trim()
                    .parse()
                    .with_context(|| format!("bad fraction `{tok}`"))?;
                if !(f > 0.0) {
                    bail!("normalized sizes must be positive");
                }
                sizes.push((f * universe as f64).round() as u64);
            }
            sizes
        }
        _ => bail!("give exactly one of --sizes or --normalized"),
    };
    let attack_spec = match (args.rho, args.delta, args.omega) {
        (None, None, None) => None,
        (Some(rho), Some(delta), Some(omega)) => Some(AttackSpec::new(rho, delta, omega)?),
        _ => bail!("attack prediction needs all of --rho, --delta and --omega"),
    };
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in &sizes {
        let miss = match &attack_spec {
            Some(spec) => attack_miss_vs_size(&fit, spec, size as f64)?,
            None => fit.eval_m_s(size as f64)?,
        };
        rows.push((size as f64, miss));
    }
    io::write_prediction_csv(&args.out, &rows, &command_line())?;
    if let Some(json_path) = &args.json {
        let doc = serde_json::json!({
            "schema_version": io::SCHEMA_VERSION,
            "command": command_line(),
            "attack": attack_spec,
            "points": rows
                .iter()
                .map(|&(size, miss)| serde_json::json!({
                    "cache_size": size,
                    "miss_rate": miss,
                }))
                .collect::<Vec<_>>(),
        });
        io::write_text(
            json_path,
            &format!("{}\n", serde_json::to_string_pretty(&doc)?),
        )?;
    }
    for &(size, miss) in &rows {
        println!("{size} {miss:.6e}");
    }
    if let Some(svg_path) = args.svg {
        io::write_text(
            &svg_path,
            &svg::line_chart(
                &[svg::Series {
                    label: "model".into(),
                    points: rows.clone(),
                    color: svg::PALETTE[0],
                }],
                &svg::ChartOptions {
                    title: "Predicted miss rate vs cache size".into(),
                    x_label: "cache size (entries)".into(),
                    y_label: "miss rate".into(),
                    log_x: true,
                    log_y: true,
                },
            ),
        )?;
    }
    Ok(())
}

fn capacities_from(text: &str) -> Result<Vec<usize>> {
    Ok(io::parse_sizes(text)?
        .into_iter()
        .map(|v| v as usize)
        .collect())
}

fn cmd_emulate(args: EmulateArgs) -> Result<()> {
    let loaded = args.input.load()?;
    let capacities = capacities_from(&args.capacities)?;
    let config = EmulateConfig {
        window: args.window,
        universe: loaded.table.as_ref().map(|t| t.len() as u64),
    };
    let reports = sweep(&loaded.stream, &capacities, &config)?;
    let cmd = command_line();
    io::write_emulation_csv(&args.out, &reports, &cmd, None)?;
    if let Some(instant) = args.instant {
        io::write_instantaneous_csv(&instant, &reports, &cmd, None)?;
    }
    for r in &reports {
        println!(
            "capacity {} miss_rate_raw {:.6e} warm {}",
            r.capacity,
            r.miss_rate_raw,
            r.miss_rate_warm
                .map(|w| format!("{w:.6e}"))
                .unwrap_or_else(|| "n/a".into())
        );
    }
    if let Some(svg_path) = args.svg {
        let points: Vec<(f64, f64)> = reports
            .iter()
            .map(|r| {
                (
                    r.capacity as f64,
                    r.miss_rate_warm.unwrap_or(r.miss_rate_raw),
                )
            })
            .collect();
        io::write_text(
            &svg_path,
            &svg::line_chart(
                &[svg::Series {
                    label: "emulated".into(),
                    points,
                    color: svg::PALETTE[1],
                }],
                &svg::ChartOptions {
                    title: "Emulated miss rate vs cache size".into(),
                    x_label: "cache size (entries)".into(),
                    y_label: "miss rate".into(),
                    log_x: true,
                    log_y: true,
                },
            ),
        )?;
    }
    Ok(())
}

fn cmd_attack(args: AttackArgs) -> Result<()> {
    let loaded = args.input.load()?;
    let stream = &loaded.stream;
    let universe = match (&loaded.table, args.universe) {
        (Some(table), None) => table.len() as u32,
        (None, Some(n)) => n,
        (Some(_), Some(_)) => bail!("give either --table or --universe, not both"),
        (None, None) => bail!("attack emulation needs --table or --universe"),
    };
    let psi = stream.visited_set();
    let omega_size = build_attack_size(universe as u64, psi.len(), args.delta)?;
    let mut attack = build_attack_stream(omega_size, args.seed, universe, &psi, args.delta)?;
    let merged = inject_attack(stream, &mut attack, args.rho)?;
    eprintln!(
        "attack set |omega| = {omega_size}, merged stream {} references ({} attack)",
        merged.len(),
        merged.len() - stream.len()
    );

    let capacities = capacities_from(&args.capacities)?;
    let config = EmulateConfig {
        window: args.window,
        universe: Some(universe as u64),
    };
    let reports = sweep(&merged, &capacities, &config)?;
    let cmd = command_line();
    io::write_emulation_csv(&args.out, &reports, &cmd, Some(args.seed))?;
    if let Some(instant) = args.instant {
        io::write_instantaneous_csv(&instant, &reports, &cmd, Some(args.seed))?;
    }
    for r in &reports {
        let pc = r.per_class.as_ref().expect("attack runs are tagged");
        println!(
            "capacity {} miss_rate_raw {:.6e} warm {} legit_misses {} attack_misses {}",
            r.capacity,
            r.miss_rate_raw,
            r.miss_rate_warm
                .map(|w| format!("{w:.6e}"))
                .unwrap_or_else(|| "n/a".into()),
            pc.legit_misses,
            pc.attack_misses
        );
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let fit = io::read_fit_json(&args.fit)?;
    let emulated = io::read_emulation_csv(&args.emulation)?;
    let attack_spec = match (args.rho, args.delta, args.omega) {
        (None, None, None) => None,
        (Some(rho), Some(delta), Some(omega)) => Some(AttackSpec::new(rho, delta, omega)?),
        _ => bail!("attack comparison needs all of --rho, --delta and --omega"),
    };

    let mut rows = Vec::new();
    let mut skipped = 0usize;
    for row in &emulated {
        let model = match &attack_spec {
            Some(spec) => attack_miss_vs_size(&fit, spec, row.capacity as f64),
            None => fit.eval_m_s(row.capacity as f64),
        };
        match model {
            Ok(model) => {
                let emp = row.miss_rate_warm.unwrap_or(row.miss_rate_raw);
                rows.push((row.capacity, model, emp, (model - emp).abs()));
            }
            Err(mapcache::Error::Domain(_)) => skipped += 1,
            Err(err) => return Err(err.into()),
        }
    }
    if rows.is_empty() {
        bail!("no emulated capacity falls inside the model's range");
    }
    let max_err = rows.iter().map(|r| r.3).fold(0.0f64, f64::max);
    let mean_err = rows.iter().map(|r| r.3).sum::<f64>() / rows.len() as f64;

    let mut out = io::csv_header(&command_line(), None);
    out.push_str(&format!(
        "# max_abs_error: {max_err}\n# mean_abs_error: {mean_err}\n# skipped_out_of_range: {skipped}\n"
    ));
    out.push_str("capacity,model_miss_rate,emulated_miss_rate,abs_error\n");
    for &(cap, model, emp, err) in &rows {
        out.push_str(&format!("{cap},{model},{emp},{err}\n"));
    }
    io::write_text(&args.out, &out)?;

    println!(
        "compared {} capacities ({skipped} outside model range)",
        rows.len()
    );
    println!("max_abs_error {max_err:.6e}");
    println!("mean_abs_error {mean_err:.6e}");

    if let Some(svg_path) = args.svg {
        let model_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.0 as f64, r.1)).collect();
        let emp_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.0 as f64, r.2)).collect();
        io::write_text(
            &svg_path,
            &svg::line_chart(
                &[
                    svg::Series {
                        label: "model".into(),
                        points: model_pts,
                        color: svg::PALETTE[0],
                    },
                    svg::Series {
                        label: "emulated".into(),
                        points: emp_pts,
                        color: svg::PALETTE[1],
                    },
                ],
                &svg::ChartOptions {
                    title: "Model vs emulation".into(),
                    x_label: "cache size (entries)".into(),
                    y_label: "miss rate".into(),
                    log_x: true,
                    log_y: true,
                },
            ),
        )?;
    }
    Ok(())
}
