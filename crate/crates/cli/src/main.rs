use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use singan::analysis::{analyze, AnalysisConfig, AnalysisReport};
use singan::catalog::{catalog, lookup, run_all, Tag};
use singan::dsl::parse_mapfile;
use singan::report::{render_report, report_json, Format};

#[derive(Parser)]
#[command(name = "singan", version, about = "Singularity and degree-growth analysis of second-order mappings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse the maps in a mapfile or a catalog entry.
    Analyze(AnalyzeArgs),
    /// Built-in mappings with expected results.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Args, Clone, Copy)]
struct Settings {
    /// Degree iterations.
    #[arg(long, default_value_t = 14)]
    steps: usize,
    /// ε-orbit length each way.
    #[arg(long, default_value_t = 20)]
    horizon: usize,
    /// Initial Laurent truncation.
    #[arg(long, default_value_t = 8)]
    trunc: usize,
    /// Number of random initial values for the degree sequence.
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    /// PRNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Settings {
    fn config(self) -> AnalysisConfig {
        AnalysisConfig { steps: self.steps, horizon: self.horizon, trunc: self.trunc, seeds: self.seeds, seed: self.seed }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Mapfile to read.
    #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
    file: Option<PathBuf>,
    /// Catalog key instead of a file.
    #[arg(long)]
    catalog: Option<String>,
    #[command(flatten)]
    settings: Settings,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Keys and descriptions.
    List,
    /// Run every entry and check its expectations.
    RunAll {
        /// Restrict to expectations with a tag, e.g. `tag=PAPER`.
        #[arg(long, value_name = "tag=TAG")]
        only: Option<String>,
        /// Restrict to catalog keys; repeatable.
        #[arg(long = "key", value_name = "KEY")]
        keys: Vec<String>,
        #[command(flatten)]
        settings: Settings,
    },
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8, String> {
    let cfg = args.settings.config();
    let (maps, probes) = match (&args.file, &args.catalog) {
        (_, Some(key)) => {
            let e = lookup(key).ok_or_else(|| format!("unknown catalog key `{key}`"))?;
            (vec![e.map()], e.probes.clone())
        }
        (Some(path), None) => {
            let src = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            match parse_mapfile(&src) {
                Ok(m) => (m, None),
                Err(e) => {
                    eprintln!("{}:{e}", path.display());
                    return Ok(2);
                }
            }
        }
        (None, None) => unreachable!("clap requires a file or --catalog"),
    };
    let reports: Vec<AnalysisReport> = maps.iter().map(|m| analyze(m, probes.as_deref(), &cfg)).collect();
    let mut out = io::stdout().lock();
    if args.json && reports.len() > 1 {
        let v = serde_json::Value::Array(reports.iter().map(report_json).collect());
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json values serialise")).map_err(|e| e.to_string())?;
    } else {
        let format = if args.json { Format::Json } else { Format::Text };
        for r in &reports {
            out.write_all(render_report(r, format).as_bytes()).map_err(|e| e.to_string())?;
        }
    }
    Ok(if reports.iter().any(|r| r.exit_code() == 3) { 3 } else { 0 })
}

fn parse_only(only: Option<&str>) -> Result<Vec<Tag>, String> {
    let Some(s) = only else { return Ok(Vec::new()) };
    let value = s.strip_prefix("tag=").unwrap_or(s);
    value.split(',').map(|t| Tag::parse(t.trim()).ok_or_else(|| format!("unknown tag `{t}`"))).collect()
}

fn cmd_catalog(action: CatalogAction) -> Result<u8, String> {
    match action {
        CatalogAction::List => {
            for e in catalog() {
                println!("{:<14} {}", e.key, e.description);
            }
            Ok(0)
        }
        CatalogAction::RunAll { only, keys, settings } => {
            let tags = parse_only(only.as_deref())?;
            if let Some(k) = keys.iter().find(|k| lookup(k).is_none()) {
                return Err(format!("unknown catalog key `{k}`"));
            }
            let mut entries = catalog();
            entries.retain(|e| keys.is_empty() || keys.iter().any(|k| k == e.key));
            entries.sort_by_key(|e| e.key);
            let results = run_all(&entries, &settings.config(), &tags);
            let (mut pass, mut fail) = (0, 0);
            for r in &results {
                for (x, o) in &r.outcomes {
                    let status = if o.pass { "PASS" } else { "FAIL" };
                    if o.pass {
                        pass += 1;
                    } else {
                        fail += 1;
                    }
                    println!("{status} [{}] {}: {} ({})", x.tag, r.key, x.text, o.detail);
                }
            }
            println!("{pass} passed, {fail} failed");
            Ok(if fail > 0 { 1 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Catalog { action } => cmd_catalog(action),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
