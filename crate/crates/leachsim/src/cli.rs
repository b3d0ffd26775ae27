//! Experiment runner behind the `leachsim` binary.
//!
//! Two subcommands:
//!
//! * `run` simulates one variant over a seed range, writes one trace CSV per
//!   seed plus a per-round aggregate CSV, and prints lifetime milestones
//!   with confidence intervals.
//! * `compare` runs all four variants over the same seed range with paired
//!   deployments (per seed, every variant sees identical node placements),
//!   writes the four aggregate CSVs and a comparison table, and can render
//!   SVG charts of the alive-node and cumulative-packet curves.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on configuration or usage
//! failure (every violation is listed, not just the first).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::engine::{run_with_seed, RunSummary};
use crate::model::{Config, RetentionMode, Variant};
use crate::report;
use crate::stats::{aggregate, aggregate_traces, ReplicateStats, StatsError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] crate::model::ConfigError),
    #[error("config file: {0}")]
    ConfigFile(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

/// Flag overrides applied on top of the config file (or the defaults).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub variant: Option<Variant>,
    pub nodes: Option<u32>,
    pub field: Option<(f64, f64)>,
    pub bs: Option<(f64, f64)>,
    pub p: Option<f64>,
    pub retention: Option<RetentionMode>,
    pub ht: Option<f64>,
    pub st: Option<f64>,
    pub data_bits: Option<u32>,
    pub control_bits: Option<u32>,
    pub max_rounds: Option<u32>,
}

impl Overrides {
    pub fn apply(&self, config: &mut Config) {
        if let Some(v) = self.variant {
            config.protocol.variant = v;
        }
        if let Some(n) = self.nodes {
            config.field.node_count = n;
        }
        if let Some((w, h)) = self.field {
            config.field.width_m = w;
            config.field.height_m = h;
        }
        if let Some(bs) = self.bs {
            config.field.bs_pos = bs;
        }
        if let Some(p) = self.p {
            config.protocol.p_ch = p;
        }
        if let Some(r) = self.retention {
            config.protocol.retention_mode = r;
        }
        if let Some(ht) = self.ht {
            config.protocol.hard_threshold = ht;
        }
        if let Some(st) = self.st {
            config.protocol.soft_threshold = st;
        }
        if let Some(bits) = self.data_bits {
            config.protocol.data_packet_bits = bits;
        }
        if let Some(bits) = self.control_bits {
            config.protocol.control_packet_bits = bits;
        }
        if let Some(r) = self.max_rounds {
            config.field.max_rounds = r;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommonOptions {
    pub config_path: Option<PathBuf>,
    pub overrides: Overrides,
    pub seeds: (u64, u64),
    pub out_dir: PathBuf,
    pub svg: bool,
    pub require_ci: bool,
}

impl Default for CommonOptions {
    fn default() -> Self {
        Self {
            config_path: None,
            overrides: Overrides::default(),
            seeds: (1, 20),
            out_dir: PathBuf::from("out"),
            svg: false,
            require_ci: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Run(CommonOptions),
    Compare(CommonOptions),
}

pub const USAGE: &str = "\
usage: leachsim <run|compare> [options]

  run      simulate one variant over a seed range
  compare  run all four variants on paired deployments

options:
  --config PATH        JSON config file (flags override its values)
  --variant NAME       leach | modleach | modleach_ht | modleach_st (run only)
  --seeds A..B         inclusive seed range, default 1..20
  --nodes N            node count
  --field WxH          field size in meters, e.g. 100x100
  --bs X,Y             base station position
  --p VALUE            cluster-head probability per round
  --retention MODE     adaptive | fixed:<joules> (fixed:inf disables retention)
  --ht VALUE           hard threshold (sensed units)
  --st VALUE           soft threshold (sensed units)
  --data-bits N        data packet size in bits
  --control-bits N     control packet size in bits (0 = free formation)
  --max-rounds N       round horizon
  --out DIR            output directory, default ./out
  --svg                render SVG charts
  --ci                 fail unless confidence intervals can be computed
";

fn parse_pair(s: &str, sep: char, what: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = s.split(sep).collect();
    if parts.len() == 2 {
        if let (Ok(a), Ok(b)) = (parts[0].trim().parse(), parts[1].trim().parse()) {
            return Ok((a, b));
        }
    }
    Err(CliError::Usage(format!("cannot parse {what} from '{s}'")))
}

fn parse_seeds(s: &str) -> Result<(u64, u64), CliError> {
    if let Some((a, b)) = s.split_once("..") {
        let lo: u64 = a
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad seed range '{s}'")))?;
        let hi: u64 = b
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad seed range '{s}'")))?;
        if hi < lo {
            return Err(CliError::Usage(format!("empty seed range '{s}'")));
        }
        Ok((lo, hi))
    } else {
        let one: u64 = s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad seed '{s}'")))?;
        Ok((one, one))
    }
}

fn parse_retention(s: &str) -> Result<RetentionMode, CliError> {
    if s == "adaptive" {
        return Ok(RetentionMode::Adaptive);
    }
    if let Some(rest) = s.strip_prefix("fixed:") {
        let joules = match rest {
            "inf" | "+inf" | "infinity" => f64::INFINITY,
            other => other
                .parse()
                .map_err(|_| CliError::Usage(format!("bad retention threshold '{other}'")))?,
        };
        return Ok(RetentionMode::Fixed(joules));
    }
    Err(CliError::Usage(format!(
        "retention must be 'adaptive' or 'fixed:<joules>', got '{s}'"
    )))
}

pub fn parse_args(args: &[String]) -> Result<Command, CliError> {
    let mut iter = args.iter();
    let sub = iter
        .next()
        .ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
    let compare = match sub.as_str() {
        "run" => false,
        "compare" => true,
        other => return Err(CliError::Usage(format!("unknown subcommand '{other}'"))),
    };

    let mut opts = CommonOptions::default();
    let next_value = |iter: &mut std::slice::Iter<String>, flag: &str| {
        iter.next()
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("{flag} needs a value")))
    };
    while let Some(arg) = iter.next() {
        match arg.as_str() {
            "--config" => opts.config_path = Some(PathBuf::from(next_value(&mut iter, arg)?)),
            "--variant" => {
                if compare {
                    return Err(CliError::Usage(
                        "compare always runs all four variants; drop --variant".into(),
                    ));
                }
                let name = next_value(&mut iter, arg)?;
                let v = Variant::parse(&name)
                    .ok_or_else(|| CliError::Usage(format!("unknown variant '{name}'")))?;
                opts.overrides.variant = Some(v);
            }
            "--seeds" => opts.seeds = parse_seeds(&next_value(&mut iter, arg)?)?,
            "--nodes" => {
                let n = next_value(&mut iter, arg)?;
                opts.overrides.nodes =
                    Some(n.parse().map_err(|_| CliError::Usage(format!("bad node count '{n}'")))?);
            }
            "--field" => {
                let s = next_value(&mut iter, arg)?;
                let lowered = s.to_ascii_lowercase();
                opts.overrides.field = Some(parse_pair(&lowered, 'x', "field WxH")?);
            }
            "--bs" => opts.overrides.bs = Some(parse_pair(&next_value(&mut iter, arg)?, ',', "bs X,Y")?),
            "--p" => {
                let s = next_value(&mut iter, arg)?;
                opts.overrides.p =
                    Some(s.parse().map_err(|_| CliError::Usage(format!("bad probability '{s}'")))?);
            }
            "--retention" => opts.overrides.retention = Some(parse_retention(&next_value(&mut iter, arg)?)?),
            "--ht" => {
                let s = next_value(&mut iter, arg)?;
                opts.overrides.ht =
                    Some(s.parse().map_err(|_| CliError::Usage(format!("bad hard threshold '{s}'")))?);
            }
            "--st" => {
                let s = next_value(&mut iter, arg)?;
                opts.overrides.st =
                    Some(s.parse().map_err(|_| CliError::Usage(format!("bad soft threshold '{s}'")))?);
            }
            "--data-bits" => {
                let s = next_value(&mut iter, arg)?;
                opts.overrides.data_bits =
                    Some(s.parse().map_err(|_| CliError::Usage(format!("bad bit count '{s}'")))?);
            }
            "--control-bits" => {
                let s = next_value(&mut iter, arg)?;
                opts.overrides.control_bits =
                    Some(s.parse().map_err(|_| CliError::Usage(format!("bad bit count '{s}'")))?);
            }
            "--max-rounds" => {
                let s = next_value(&mut iter, arg)?;
                opts.overrides.max_rounds =
                    Some(s.parse().map_err(|_| CliError::Usage(format!("bad round count '{s}'")))?);
            }
            "--out" => opts.out_dir = PathBuf::from(next_value(&mut iter, arg)?),
            "--svg" => opts.svg = true,
            "--ci" => opts.require_ci = true,
            other => return Err(CliError::Usage(format!("unknown flag '{other}'"))),
        }
    }
    Ok(if compare {
        Command::Compare(opts)
    } else {
        Command::Run(opts)
    })
}

/// Load the JSON config file if given, then apply flag overrides and
/// validate.
pub fn resolve_config(opts: &CommonOptions) -> Result<Config, CliError> {
    let mut config = match &opts.config_path {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| CliError::ConfigFile(e.to_string()))?
        }
        None => Config::default(),
    };
    opts.overrides.apply(&mut config);
    crate::model::validate_config(&config)?;
    Ok(config)
}

/// Run one variant across an inclusive seed range.
pub fn run_grid(config: &Config, seeds: (u64, u64)) -> Result<Vec<RunSummary>, CliError> {
    let mut runs = Vec::with_capacity((seeds.1 - seeds.0 + 1) as usize);
    for seed in seeds.0..=seeds.1 {
        runs.push(run_with_seed(config, seed)?);
    }
    Ok(runs)
}

fn milestone_stats(runs: &[RunSummary]) -> Result<[ReplicateStats; 5], CliError> {
    let first: Vec<f64> = runs.iter().map(|r| r.first_dead_round as f64).collect();
    let half: Vec<f64> = runs.iter().map(|r| r.half_dead_round as f64).collect();
    let last: Vec<f64> = runs.iter().map(|r| r.last_dead_round as f64).collect();
    let bs: Vec<f64> = runs.iter().map(|r| r.total_packets_to_bs as f64).collect();
    let ch: Vec<f64> = runs.iter().map(|r| r.mean_ch_count()).collect();
    Ok([
        aggregate("first_dead", &first)?,
        aggregate("half_dead", &half)?,
        aggregate("last_dead", &last)?,
        aggregate("packets_bs", &bs)?,
        aggregate("mean_ch", &ch)?,
    ])
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a Config,
    seeds: [u64; 2],
    variants: Vec<&'static str>,
}

fn write_manifest(dir: &Path, config: &Config, seeds: (u64, u64), variants: &[Variant]) -> Result<(), CliError> {
    let manifest = Manifest {
        config,
        seeds: [seeds.0, seeds.1],
        variants: variants.iter().map(|v| v.name()).collect(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("config_used.json"), text + "\n")?;
    Ok(())
}

/// Result of a four-way comparison, including the report note emitted when
/// the reactive soft-threshold variant fails to take the throughput lead
/// under the configured sensing model.
pub struct CompareOutcome {
    pub rows: Vec<report::ComparisonRow>,
    pub runs: Vec<(Variant, Vec<RunSummary>)>,
    pub st_throughput_note: Option<String>,
}

/// Milestone rows (one per variant) from already-computed run batches.
pub fn comparison_rows(
    runs: &[(Variant, Vec<RunSummary>)],
) -> Result<Vec<report::ComparisonRow>, CliError> {
    let mut rows = Vec::new();
    for (variant, summaries) in runs {
        let [first, half, last, bs, ch] = milestone_stats(summaries)?;
        rows.push(report::ComparisonRow {
            variant: variant.name().to_string(),
            first_dead: first,
            half_dead: half,
            last_dead: last,
            packets_bs: bs,
            mean_ch: ch,
        });
    }
    Ok(rows)
}

/// The report note for runs where the soft-threshold variant does not hold
/// the throughput lead. The reactive variants' throughput depends on the
/// sensed-data model, so a comparison must say so out loud rather than pass
/// silently when the expected ranking fails to materialize.
pub fn st_throughput_note(rows: &[report::ComparisonRow]) -> Option<String> {
    let mean_bs = |v: Variant| {
        rows.iter()
            .find(|r| r.variant == v.name())
            .map(|r| r.packets_bs.mean)
            .unwrap_or(0.0)
    };
    let st = mean_bs(Variant::ModleachSt);
    let best = Variant::ALL
        .iter()
        .copied()
        .max_by(|&a, &b| mean_bs(a).total_cmp(&mean_bs(b)))
        .unwrap();
    if best != Variant::ModleachSt {
        Some(format!(
            "note: modleach_st packets-to-bs mean ({st:.1}) trails {} ({:.1}); \
             reactive throughput depends on the sensing walk and thresholds, \
             so this outcome is setup dependent",
            best.name(),
            mean_bs(best)
        ))
    } else {
        None
    }
}

/// Run all four variants on the identical seed grid and node deployments.
pub fn compare_variants(config: &Config, seeds: (u64, u64)) -> Result<CompareOutcome, CliError> {
    let mut runs = Vec::new();
    for variant in Variant::ALL {
        let mut cfg = config.clone();
        cfg.protocol.variant = variant;
        runs.push((variant, run_grid(&cfg, seeds)?));
    }
    let rows = comparison_rows(&runs)?;
    let st_throughput_note = st_throughput_note(&rows);
    Ok(CompareOutcome {
        rows,
        runs,
        st_throughput_note,
    })
}

fn execute_run(opts: &CommonOptions) -> Result<(), CliError> {
    let config = resolve_config(opts)?;
    if opts.require_ci && opts.seeds.0 == opts.seeds.1 {
        return Err(StatsError::InsufficientReplicates(1).into());
    }
    let runs = run_grid(&config, opts.seeds)?;
    fs::create_dir_all(&opts.out_dir)?;
    write_manifest(&opts.out_dir, &config, opts.seeds, &[config.protocol.variant])?;

    let variant = config.protocol.variant;
    for summary in &runs {
        let name = format!("trace_{}_seed{}.csv", variant.name(), summary.seed);
        fs::write(opts.out_dir.join(name), report::trace_csv(&summary.trace))?;
    }
    let traces: Vec<&[_]> = runs.iter().map(|r| r.trace.as_slice()).collect();
    let agg = aggregate_traces(&traces)?;
    fs::write(
        opts.out_dir.join(format!("aggregate_{}.csv", variant.name())),
        report::aggregate_csv(&agg),
    )?;
    if opts.svg {
        let alive = vec![(variant.name().to_string(), report::alive_series(&agg))];
        let packets = vec![(variant.name().to_string(), report::packets_series(&agg))];
        fs::write(
            opts.out_dir.join("alive_nodes.svg"),
            report::svg_line_chart("alive nodes per round", "round", "alive nodes", &alive),
        )?;
        fs::write(
            opts.out_dir.join("packets_to_bs.svg"),
            report::svg_line_chart("packets delivered to bs", "round", "packets", &packets),
        )?;
    }

    let [first, half, last, bs, _] = milestone_stats(&runs)?;
    if opts.require_ci {
        first.require_ci()?;
    }
    let ch_pkts: Vec<f64> = runs.iter().map(|r| r.total_packets_to_ch as f64).collect();
    let ch_stats = aggregate("packets_ch", &ch_pkts)?;
    print!(
        "{}",
        report::run_summary_text(variant.name(), opts.seeds, &first, &half, &last, &bs, &ch_stats)
    );
    println!("artifacts in {}", opts.out_dir.display());
    Ok(())
}

fn execute_compare(opts: &CommonOptions) -> Result<(), CliError> {
    let config = resolve_config(opts)?;
    if opts.require_ci && opts.seeds.0 == opts.seeds.1 {
        return Err(StatsError::InsufficientReplicates(1).into());
    }
    let outcome = compare_variants(&config, opts.seeds)?;
    fs::create_dir_all(&opts.out_dir)?;
    write_manifest(&opts.out_dir, &config, opts.seeds, &Variant::ALL)?;

    let mut chart_alive = Vec::new();
    let mut chart_packets = Vec::new();
    for (variant, summaries) in &outcome.runs {
        let traces: Vec<&[_]> = summaries.iter().map(|r| r.trace.as_slice()).collect();
        let agg = aggregate_traces(&traces)?;
        fs::write(
            opts.out_dir.join(format!("aggregate_{}.csv", variant.name())),
            report::aggregate_csv(&agg),
        )?;
        if opts.svg {
            chart_alive.push((variant.name().to_string(), report::alive_series(&agg)));
            chart_packets.push((variant.name().to_string(), report::packets_series(&agg)));
        }
    }
    fs::write(
        opts.out_dir.join("comparison.csv"),
        report::comparison_csv(&outcome.rows),
    )?;
    if opts.svg {
        fs::write(
            opts.out_dir.join("alive_nodes.svg"),
            report::svg_line_chart("alive nodes per round", "round", "alive nodes", &chart_alive),
        )?;
        fs::write(
            opts.out_dir.join("packets_to_bs.svg"),
            report::svg_line_chart("packets delivered to bs", "round", "packets", &chart_packets),
        )?;
    }

    print!("{}", report::comparison_table(&outcome.rows));
    if let Some(note) = &outcome.st_throughput_note {
        println!("{note}");
    }
    println!("artifacts in {}", opts.out_dir.display());
    Ok(())
}

/// Entry point shared by the binary and the integration tests.
pub fn main_entry(args: &[String]) -> i32 {
    let command = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            eprint!("{USAGE}");
            return e.exit_code();
        }
    };
    let result = match &command {
        Command::Run(opts) => execute_run(opts),
        Command::Compare(opts) => execute_compare(opts),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_run_with_overrides() {
        let cmd = parse_args(&args(&[
            "run",
            "--variant",
            "modleach",
            "--seeds",
            "1..20",
            "--nodes",
            "50",
            "--field",
            "200x150",
            "--bs",
            "100,175",
            "--p",
            "0.05",
            "--retention",
            "fixed:0.02",
            "--ht",
            "40",
            "--st",
            "1.5",
            "--data-bits",
            "2000",
            "--control-bits",
            "0",
            "--max-rounds",
            "900",
            "--out",
            "results",
            "--svg",
        ]))
        .unwrap();
        let Command::Run(opts) = cmd else {
            panic!("expected run");
        };
        assert_eq!(opts.seeds, (1, 20));
        assert_eq!(opts.overrides.variant, Some(Variant::Modleach));
        assert_eq!(opts.overrides.nodes, Some(50));
        assert_eq!(opts.overrides.field, Some((200.0, 150.0)));
        assert_eq!(opts.overrides.bs, Some((100.0, 175.0)));
        assert_eq!(opts.overrides.p, Some(0.05));
        assert_eq!(opts.overrides.retention, Some(RetentionMode::Fixed(0.02)));
        assert_eq!(opts.overrides.ht, Some(40.0));
        assert_eq!(opts.overrides.st, Some(1.5));
        assert_eq!(opts.overrides.data_bits, Some(2000));
        assert_eq!(opts.overrides.control_bits, Some(0));
        assert_eq!(opts.overrides.max_rounds, Some(900));
        assert!(opts.svg);
        assert_eq!(opts.out_dir, PathBuf::from("results"));

        let mut config = Config::default();
        opts.overrides.apply(&mut config);
        assert_eq!(config.field.node_count, 50);
        assert_eq!(config.protocol.control_packet_bits, 0);
    }

    #[test]
    fn parse_rejects_unknown_flag_and_subcommand() {
        assert!(matches!(
            parse_args(&args(&["run", "--bogus"])),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse_args(&args(&["walk"])),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse_args(&args(&["compare", "--variant", "leach"])),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn seed_forms() {
        assert_eq!(parse_seeds("7..7").unwrap(), (7, 7));
        assert_eq!(parse_seeds("3").unwrap(), (3, 3));
        assert_eq!(parse_seeds("2..9").unwrap(), (2, 9));
        assert!(parse_seeds("9..2").is_err());
        assert!(parse_seeds("a..b").is_err());
    }

    #[test]
    fn retention_forms() {
        assert_eq!(parse_retention("adaptive").unwrap(), RetentionMode::Adaptive);
        assert_eq!(parse_retention("fixed:0.1").unwrap(), RetentionMode::Fixed(0.1));
        assert_eq!(
            parse_retention("fixed:inf").unwrap(),
            RetentionMode::Fixed(f64::INFINITY)
        );
        assert!(parse_retention("sometimes").is_err());
    }

    #[test]
    fn invalid_override_fails_validation_with_named_parameter() {
        let cmd = parse_args(&args(&["run", "--variant", "leach", "--nodes", "0"])).unwrap();
        let Command::Run(opts) = cmd else {
            panic!();
        };
        let err = resolve_config(&opts).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("node_count"));
    }

    #[test]
    fn single_seed_with_ci_flag_is_insufficient() {
        let opts = CommonOptions {
            seeds: (7, 7),
            require_ci: true,
            ..CommonOptions::default()
        };
        let err = execute_run(&opts).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("replicates"));
    }
}
