mod commands;
mod doc;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};
use stackcoh::{Coeff, DEFAULT_CELL_CAP};

use commands::{Options, COMMANDS};
use report::{CliError, Report};

fn about(name: &str) -> &'static str {
    match name {
        "validate" => "check any document against its kind",
        "nerve" => "cell counts per nerve level and identity checks",
        "cohomology" => "total cohomology groups up to --max-degree",
        "homology" => "integral homology groups up to --max-degree",
        "pair" => "pair a closed cochain with the free homology basis",
        "integrality" => "decide whether a rational class is integral",
        "chern" => "Chern class of a bundle lift at (1,0)",
        "pseudo-curvature" => "curvature of a bundle and a (0,1) connection",
        "realize-bundle" => "bundle and connection with a given degree 2 curvature",
        "extension-build" => "extension groupoid of a (2,0) cocycle",
        "extension-cocycle" => "cocycle of an extension morphism",
        "tensor" => "tensor product of two extension cocycles",
        "pullback" => "pull a cochain back along a morphism",
        "dd-class" => "Dixmier-Douady class of an extension cocycle",
        "gerbe-curvature" => "pseudo-curvature of (sigma, A, B)",
        "curving" => "find B with dA = del B, or report the obstruction",
        "flat-check" => "check the flatness equations for (sigma, A, B)",
        "holonomy" => "holonomy of a simplicial 1-cochain along loops",
        "enumerate-extensions" => "extension classes with fiber order --fiber-order",
        "morita-validate" => "check the Morita conditions on a morphism",
        "morita-verify" => "per-degree isomorphism verdicts for a Morita morphism",
        _ => "refine a cover and compare cohomology",
    }
}

fn cli() -> Command {
    let inputs = Arg::new("inputs").num_args(1..).required(true).value_parser(clap::value_parser!(PathBuf)).help("input documents");
    let mut cmd = Command::new("stackcoh")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Exact cohomology of groupoids and covers, with bundle and gerbe invariants")
        .subcommand_required(true)
        .arg(Arg::new("coeff").long("coeff").global(true).help("Z, Q, QmodZ or Zmod:n"))
        .arg(Arg::new("max-degree").long("max-degree").global(true).value_parser(clap::value_parser!(usize)))
        .arg(Arg::new("fiber-order").long("fiber-order").global(true).value_parser(clap::value_parser!(u64)))
        .arg(Arg::new("cell-cap").long("cell-cap").global(true).value_parser(clap::value_parser!(usize)))
        .arg(Arg::new("out").long("out").global(true).value_parser(clap::value_parser!(PathBuf)).help("write the JSON report here"))
        .arg(Arg::new("format").long("format").global(true).value_parser(["table", "json"]).default_value("table"))
        .arg(
            Arg::new("loop")
                .long("loop")
                .global(true)
                .value_delimiter(',')
                .action(ArgAction::Set)
                .num_args(1)
                .help("closed vertex path, comma separated"),
        );
    for name in COMMANDS {
        cmd = cmd.subcommand(Command::new(name).about(about(name)).arg(inputs.clone()));
    }
    cmd.subcommand(
        Command::new("run").about("run a job document").arg(Arg::new("inputs").required(true).value_parser(clap::value_parser!(PathBuf))),
    )
}

fn options(m: &ArgMatches) -> Result<Options, CliError> {
    let coeff = m.get_one::<String>("coeff").map(|s| Coeff::parse(s)).transpose()?;
    let loop_ = m.get_many::<String>("loop").map(|v| v.cloned().collect());
    Ok(Options {
        coeff,
        max_degree: m.get_one::<usize>("max-degree").copied(),
        fiber_order: m.get_one::<u64>("fiber-order").copied(),
        cell_cap: m.get_one::<usize>("cell-cap").copied().unwrap_or(DEFAULT_CELL_CAP),
        loop_,
    })
}

fn execute(name: &str, sub: &ArgMatches) -> Result<Report, CliError> {
    let mut opts = options(sub)?;
    if name == "run" {
        let job = doc::load(sub.get_one::<PathBuf>("inputs").expect("required"))?;
        let (command, inputs, o) = doc::job(&job)?;
        if let Some(c) = o.coeff {
            opts.coeff.get_or_insert(Coeff::parse(&c)?);
        }
        opts.max_degree = opts.max_degree.or(o.max_degree);
        opts.fiber_order = opts.fiber_order.or(o.fiber_order);
        if let Some(cap) = o.cell_cap {
            if sub.get_one::<usize>("cell-cap").is_none() {
                opts.cell_cap = cap;
            }
        }
        opts.loop_ = opts.loop_.or(o.loop_);
        return commands::run(&command, &inputs, &opts);
    }
    let docs = sub.get_many::<PathBuf>("inputs").expect("required").map(|p| doc::load(p)).collect::<Result<Vec<_>, _>>()?;
    commands::run(name, &docs, &opts)
}

fn write_out(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let report = execute(name, sub).unwrap_or_else(|e| Report::failure(name, e));
    let json = report.json_text();
    if let Some(out) = sub.get_one::<PathBuf>("out") {
        if let Err(e) = write_out(out, &json) {
            eprintln!("{e}");
            return ExitCode::from(report::EXIT_SCHEMA as u8);
        }
    }
    if sub.get_one::<String>("format").map(String::as_str) == Some("json") {
        print!("{json}");
    } else {
        print!("{}", report.table());
    }
    if let Some(e) = &report.error {
        eprintln!("error [{}]: {}", e.kind, e.message);
    }
    ExitCode::from(report.code as u8)
}
