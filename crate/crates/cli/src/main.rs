use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pgtower::cases::{self, CASE_IDS};
use pgtower::error::Error;
use pgtower::oracle::{run_suite, OracleOptions, Suite};
use pgtower::tower::{
    export_candidates, export_tree, report, run_config, Assignment, SearchConfig, SearchOptions, Status, TreeMode,
};

/// Exit code when a search stopped at the order or class limit.
const EXIT_CAP: u8 = 3;
/// Exit code for an unknown case or a bad configuration.
const EXIT_CONFIG: u8 = 2;
/// Exit code for a failed check or any other error.
const EXIT_FAIL: u8 = 1;

#[derive(Parser)]
#[command(name = "pgtower", version, about = "Constrained p-group descendant searches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the descendant search of a case or a configuration file.
    Run(RunArgs),
    /// Check the final presentations of the case studies.
    Verify {
        /// Case id; all cases if omitted.
        #[arg(long, allow_hyphen_values = true)]
        case: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Compare the engine with brute-force computations.
    Oracle {
        /// Suites to run; all if omitted.
        suites: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Thread counts compared by the determinism suite.
        #[arg(long, value_delimiter = ',', default_value = "1,4")]
        jobs: Vec<usize>,
    },
    /// Write a case's configuration and final presentations.
    Export {
        #[arg(long, allow_hyphen_values = true)]
        case: String,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct OutArg {
    /// Output directory.
    #[arg(long = "out", env = "PGTOWER_OUT", default_value = "pgtower-out")]
    dir: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "config", required_unless_present = "config")]
    case: Option<String>,
    /// Search configuration in JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Last stage to run, from 1; all stages if omitted.
    #[arg(long)]
    stage: Option<usize>,
    /// Run only this assignment of targets; every distinct one if omitted.
    #[arg(long)]
    assignment: Option<usize>,
    /// Largest order p^N of the groups listed.
    #[arg(long)]
    max_order: Option<usize>,
    /// Largest p-class of the groups listed.
    #[arg(long)]
    max_class: Option<u32>,
    #[arg(long, default_value = "full", value_parser = ["full", "paper"])]
    tree_mode: String,
    #[command(flatten)]
    out: OutArg,
    /// Worker threads; the results do not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Enumerate surjections without the automorphism orbits.
    #[arg(long)]
    exhaustive_surjections: bool,
}

enum Failure {
    Config(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::UnknownCase(_) | Error::Json(_) | Error::Syntax(_) => {
                Failure::Config(e.to_string())
            }
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), text)?;
    Ok(())
}

/// Directory name for a configuration.
fn dir_name(name: &str) -> String {
    let s: String = name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect();
    if s.starts_with('-') { format!("d{s}") } else { s }
}

fn run(args: RunArgs) -> Result<u8, Failure> {
    let config = match (&args.case, &args.config) {
        (Some(id), _) => cases::case(id)?.config(),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            SearchConfig::from_json(&text)?
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    let last = match args.stage {
        Some(0) => return Err(Failure::Config("stages are numbered from 1".into())),
        Some(k) if k > config.stages.len() => {
            return Err(Failure::Config(format!("the configuration has {} stages", config.stages.len())))
        }
        Some(k) => k - 1,
        None => config.stages.len() - 1,
    };
    let all = config.assignments();
    let chosen: Vec<&Assignment> = match args.assignment {
        Some(k) => vec![all
            .iter()
            .find(|a| a.index == k)
            .ok_or_else(|| Failure::Config(format!("assignment {k} of {}", all.len())))?],
        None => {
            // assignments differing only in later stages give the same runs
            let mut seen = BTreeSet::new();
            all.iter().filter(|a| seen.insert(a.targets[..=last].to_vec())).collect()
        }
    };
    let mut opts = SearchOptions { jobs: args.jobs.max(1), exhaustive_surjections: args.exhaustive_surjections, ..Default::default() };
    if args.max_order.is_some() {
        opts.limits.max_order_log = args.max_order;
    }
    if args.max_class.is_some() {
        opts.limits.max_class = args.max_class;
    }
    let mode: TreeMode = args.tree_mode.parse().map_err(Failure::Config)?;
    let base = args.out.dir.join(dir_name(&config.name));
    let mut capped = false;
    let mut summary = String::new();
    for a in chosen {
        let shown = Assignment { index: a.index, targets: a.targets[..=last].to_vec() };
        let runs = run_config(&config, a, Some(last), &opts)?;
        let title = format!("{} assignment {}: {}", config.name, a.index, shown.describe(&config));
        let text = report(&title, &runs);
        print!("{text}");
        let dir = base.join(format!("assignment-{}", a.index));
        write(&dir, "report.txt", &text)?;
        for run in &runs {
            let k = run.stage + 1;
            write(&dir, &format!("stage{k}-tree.dot"), &export_tree(&run.result, mode))?;
            write(&dir, &format!("stage{k}-candidates.txt"), &export_candidates(&run.result, &run.result.candidates()))?;
            write(&dir, &format!("stage{k}-passed.txt"), &export_candidates(&run.result, &run.passed))?;
            capped |= run.result.status == Status::CapHit;
        }
        let counts: Vec<String> = runs
            .iter()
            .map(|r| format!("stage {}: {} candidates, {} passed, {}", r.stage + 1, r.result.candidates().len(), r.passed.len(), r.result.status))
            .collect();
        summary.push_str(&format!("assignment {}: {}\n  {}\n", a.index, shown.describe(&config), counts.join("\n  ")));
    }
    write(&base, "summary.txt", &summary)?;
    println!("output written to {}", base.display());
    Ok(if capped { EXIT_CAP } else { 0 })
}

fn verify(case: Option<String>, out: &Path) -> Result<u8, Failure> {
    let ids: Vec<String> = match case {
        Some(id) => vec![cases::case(&id)?.id.to_string()],
        None => CASE_IDS.iter().map(|s| s.to_string()).collect(),
    };
    let mut failed = 0;
    for id in ids {
        let c = cases::case(&id)?;
        let mut text = String::new();
        for check in c.verify_finals()? {
            failed += !check.ok as usize;
            let mark = if check.ok { "ok  " } else { "FAIL" };
            let detail = if check.detail.is_empty() { String::new() } else { format!(": {}", check.detail) };
            text.push_str(&format!("{mark} {}{detail}\n", check.name));
        }
        print!("{text}");
        write(&out.join(dir_name(c.id)), "verify.txt", &text)?;
    }
    Ok(if failed == 0 { 0 } else { EXIT_FAIL })
}

fn oracle(suites: Vec<String>, seed: u64, jobs: Vec<usize>) -> Result<u8, Failure> {
    let suites: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    let opts = OracleOptions { seed, jobs, ..Default::default() };
    let mut ok = true;
    for s in suites {
        let rep = run_suite(s, &opts)?;
        print!("{rep}");
        ok &= rep.ok();
    }
    Ok(if ok { 0 } else { EXIT_FAIL })
}

fn export(case: &str, out: &Path) -> Result<u8, Failure> {
    let c = cases::case(case)?;
    let dir = out.join(dir_name(c.id));
    write(&dir, "config.json", &c.config().to_json())?;
    let mut finals = String::new();
    for (params, g) in c.finals.groups()? {
        let p: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        finals.push_str(&format!("# {} {}\n{}\n", c.id, p.join(","), g.to_text().trim_end()));
        finals.push('\n');
    }
    write(&dir, "finals.txt", &finals)?;
    println!("wrote {} and {}", dir.join("config.json").display(), dir.join("finals.txt").display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    let res = match cli.command {
        Command::Run(args) => run(args),
        Command::Verify { case, out } => verify(case, &out.dir),
        Command::Oracle { suites, seed, jobs } => oracle(suites, seed, jobs),
        Command::Export { case, out } => export(&case, &out.dir),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
