//! Script-driven front end. A script declares finite categories, functors,
//! presheaves, profunctors, and adjunctions in a small text format, then
//! issues `run` statements; the result is a deterministic check report in
//! text or JSON.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 for
//! usage, parse, or elaboration errors.

pub mod ast;
pub mod elab;
pub mod parse;
pub mod pretty;
pub mod report;
pub mod run;
pub mod token;

use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct CliOptions {
    pub format: Format,
    /// Largest probe cardinality used by the coherence suite (probes of
    /// every size from 0 up to this bound are generated).
    pub probe_size: usize,
    /// Seed for the randomised cross-checks inside suites.
    pub seed: u64,
    /// Directory of scripts whose declarations are loaded before the main
    /// script; their own run statements are ignored.
    pub corpus: Option<PathBuf>,
}

impl Default for CliOptions {
    fn default() -> Self {
        CliOptions {
            format: Format::Text,
            probe_size: 2,
            seed: 2_026,
            corpus: None,
        }
    }
}

/// Parses, elaborates, and runs one script; `preloads` are (filename,
/// source) pairs elaborated first for their declarations only. Returns the
/// rendered report and whether every check passed. Errors are rendered
/// diagnostics destined for stderr.
pub fn render_source(
    file: &str,
    source: &str,
    preloads: &[(String, String)],
    opts: &CliOptions,
) -> Result<(String, bool), String> {
    let mut env = elab::Env::default();
    for (pre_file, pre_source) in preloads {
        let doc = parse::parse(pre_source).map_err(|d| d.render(pre_file))?;
        elab::elaborate(&doc, &mut env).map_err(|d| d.render(pre_file))?;
    }
    let doc = parse::parse(source).map_err(|d| d.render(file))?;
    let runs = elab::elaborate(&doc, &mut env).map_err(|d| d.render(file))?;
    let mut rep = report::Report::default();
    for stmt in &runs {
        rep.sections.push(run::execute(stmt, &env, opts));
    }
    let rendered = match opts.format {
        Format::Text => rep.render_text(),
        Format::Json => rep.render_json(),
    };
    Ok((rendered, rep.all_pass()))
}

fn command() -> clap::Command {
    clap::Command::new("fincat")
        .about("runs finite-category check scripts and prints a report")
        .arg(
            clap::Arg::new("script")
                .required(true)
                .value_name("SCRIPT")
                .help("path to the script to run"),
        )
        .arg(
            clap::Arg::new("format")
                .long("format")
                .value_name("FORMAT")
                .value_parser(["text", "json"])
                .default_value("text")
                .help("report format"),
        )
        .arg(
            clap::Arg::new("probe-size")
                .long("probe-size")
                .value_name("N")
                .value_parser(clap::value_parser!(usize))
                .default_value("2")
                .help("largest probe cardinality for the coherence suite"),
        )
        .arg(
            clap::Arg::new("seed")
                .long("seed")
                .value_name("N")
                .value_parser(clap::value_parser!(u64))
                .default_value("2026")
                .help("seed for randomised cross-checks"),
        )
        .arg(
            clap::Arg::new("corpus")
                .long("corpus")
                .value_name("DIR")
                .value_parser(clap::value_parser!(PathBuf))
                .help("directory of scripts whose declarations are preloaded"),
        )
}

/// Collects `.fc` scripts from a corpus directory in filename order.
fn load_corpus(dir: &PathBuf) -> Result<Vec<(String, String)>, String> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("cannot read corpus directory `{}`: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|d| d.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "fc"))
        .collect();
    entries.sort();
    let mut out = Vec::new();
    for path in entries {
        let source = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read `{}`: {e}", path.display()))?;
        out.push((path.display().to_string(), source));
    }
    Ok(out)
}

/// Runs the command line given the process arguments (without argv[0]) and
/// returns the exit code.
pub fn run_cli(args: Vec<String>) -> i32 {
    let matches = match command().try_get_matches_from(
        std::iter::once("fincat".to_string()).chain(args),
    ) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let opts = CliOptions {
        format: match matches.get_one::<String>("format").map(String::as_str) {
            Some("json") => Format::Json,
            _ => Format::Text,
        },
        probe_size: *matches.get_one::<usize>("probe-size").expect("defaulted"),
        seed: *matches.get_one::<u64>("seed").expect("defaulted"),
        corpus: matches.get_one::<PathBuf>("corpus").cloned(),
    };
    let script = matches.get_one::<String>("script").expect("required");
    let source = match std::fs::read_to_string(script) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read `{script}`: {e}");
            return 2;
        }
    };
    let preloads = match &opts.corpus {
        Some(dir) => match load_corpus(dir) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("{e}");
                return 2;
            }
        },
        None => Vec::new(),
    };
    match render_source(script, &source, &preloads, &opts) {
        Ok((rendered, all_pass)) => {
            print!("{rendered}");
            if all_pass {
                0
            } else {
                1
            }
        }
        Err(diagnostic) => {
            eprintln!("{diagnostic}");
            2
        }
    }
}
