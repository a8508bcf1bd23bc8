mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nontrans_core::adversary::{
    count_reduced_trees, reduced_trees, verify_joint_no_dominator, verify_no_dominator,
    DominatorReport, JointReport,
};
use nontrans_core::recognizers::format_tree;
use nontrans_core::simulation::{simulate, SequenceDistribution};
use nontrans_core::tournament::{compare, render_time_table, tournament, AlgorithmEntry, Entrant};
use nontrans_core::verify::{theorem1_entrants, verify_theorem1_with, verify_theorem2, Mode};
use nontrans_core::Error;

use input::{load_trees, load_universe, Source};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Incorrect(_)) => EXIT_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "nontrans",
    version,
    about = "Decision-tree recognizers and their nontransitive preference relation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    ImageLevel,
}

#[derive(Clone, Copy, ValueEnum)]
enum Claim {
    Theorem1,
    Theorem2,
}

#[derive(Args)]
struct Common {
    /// `theorem1`, `theorem2:N` or a universe file.
    #[arg(long, default_value = "theorem1")]
    universe: String,
    /// Output format.
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct TreeArgs {
    /// A tree as `[label=]dsl`, or `@file` with one tree per line. Repeatable.
    #[arg(long = "tree")]
    tree: Vec<String>,
    /// Comma-separated builtin names, e.g. `A,B,C` or spines `A0,A1,A2`.
    #[arg(long, value_delimiter = ',')]
    trees: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the universe, its image sizes and fingerprint.
    Universe {
        #[command(flatten)]
        common: Common,
    },
    /// Recognition times per image.
    Times {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        trees: TreeArgs,
    },
    /// Compare exactly two recognizers.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        trees: TreeArgs,
    },
    /// Pairwise win matrix over any number of recognizers.
    Tournament {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        trees: TreeArgs,
    },
    /// Check one of the nontransitivity claims.
    Verify {
        #[arg(value_enum)]
        claim: Claim,
        /// Family size for theorem2.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[command(flatten)]
        common: Common,
        /// Replacement recognizers for theorem1, in cycle order.
        #[command(flatten)]
        trees: TreeArgs,
    },
    /// Best margin any correct reduced tree achieves against each target.
    Adversary {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        trees: TreeArgs,
        /// Also search for a tree that does well against all targets at once.
        #[arg(long)]
        joint: bool,
    },
    /// Stream correct reduced trees in DSL form.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Monte-Carlo estimate of how often the first tree beats the second.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        trees: TreeArgs,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What every report echoes about its inputs.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    universe: &'a str,
    universe_hash: String,
    trees: Vec<AlgorithmEntry>,
    report: T,
}

struct Output {
    text: String,
    json: String,
    passed: bool,
}

impl Output {
    fn new<T: Serialize>(
        command: &str,
        source: &Source,
        trees: &[Entrant],
        report: T,
        text: String,
    ) -> Self {
        let envelope = Envelope {
            command,
            universe: &source.spec,
            universe_hash: source.universe.fingerprint(),
            trees: entries(trees, source),
            report,
        };
        let mut header = format!("# universe {} {}\n", source.spec, envelope.universe_hash);
        for t in &envelope.trees {
            header.push_str(&format!("# {} = {}\n", t.label, t.tree));
        }
        Output {
            json: serde_json::to_string_pretty(&envelope).expect("reports serialize") + "\n",
            text: header + &text,
            passed: true,
        }
    }

    fn failed_if(mut self, failed: bool) -> Self {
        self.passed = !failed;
        self
    }
}

fn entries(trees: &[Entrant], source: &Source) -> Vec<AlgorithmEntry> {
    trees
        .iter()
        .map(|e| AlgorithmEntry {
            label: e.label.clone(),
            tree: format_tree(&e.tree, &source.universe),
        })
        .collect()
}

fn exactly(n: usize, trees: &[Entrant], command: &str) -> Result<(), Failure> {
    if trees.len() == n {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "{command} takes exactly {n} trees, got {}",
            trees.len()
        )))
    }
}

fn at_least_one(trees: &[Entrant], command: &str) -> Result<(), Failure> {
    if trees.is_empty() {
        Err(Failure::Usage(format!("{command} needs --tree or --trees")))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct ImageSummary {
    name: String,
    templates: Vec<String>,
    size: usize,
}

#[derive(Serialize)]
struct UniverseSummary {
    sign_count: usize,
    patterns: usize,
    images: Vec<ImageSummary>,
}

#[derive(Serialize)]
struct EnumerationReport {
    total: String,
    trees: Vec<String>,
}

#[derive(Serialize)]
struct AdversaryReport {
    single: DominatorReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    joint: Option<JointReport>,
}

fn run(command: Command) -> Result<(Output, Format), Failure> {
    match command {
        Command::Universe { common } => {
            let source = load_universe(&common.universe)?;
            let u = &source.universe;
            let summary = UniverseSummary {
                sign_count: u.sign_count(),
                patterns: u.len(),
                images: u
                    .images()
                    .iter()
                    .map(|img| ImageSummary {
                        name: img.name.clone(),
                        templates: img.templates.iter().map(|t| t.to_string()).collect(),
                        size: img.len(),
                    })
                    .collect(),
            };
            let mut text = u.to_text();
            for img in &summary.images {
                text.push_str(&format!("# {} size {}\n", img.name, img.size));
            }
            text.push_str(&format!("# total size {}\n", summary.patterns));
            Ok((
                Output::new("universe", &source, &[], summary, text),
                common.format,
            ))
        }
        Command::Times { common, trees } => {
            let source = load_universe(&common.universe)?;
            let entrants = load_trees(&source, &trees.trees, &trees.tree)?;
            at_least_one(&entrants, "times")?;
            let table = render_time_table(&entrants, &source.universe)?;
            let text = table.to_text();
            Ok((
                Output::new("times", &source, &entrants, table, text),
                common.format,
            ))
        }
        Command::Compare { common, trees } => {
            let source = load_universe(&common.universe)?;
            let entrants = load_trees(&source, &trees.trees, &trees.tree)?;
            exactly(2, &entrants, "compare")?;
            let c = compare(&entrants[0].tree, &entrants[1].tree, &source.universe)?;
            let text = format!("{} ({} vs {})\n", c.outcome, c.wins_first, c.wins_second);
            Ok((
                Output::new("compare", &source, &entrants, c, text),
                common.format,
            ))
        }
        Command::Tournament { common, trees } => {
            let source = load_universe(&common.universe)?;
            let entrants = load_trees(&source, &trees.trees, &trees.tree)?;
            at_least_one(&entrants, "tournament")?;
            let m = tournament(&entrants, &source.universe)?;
            let text = m.to_text();
            Ok((
                Output::new("tournament", &source, &entrants, m, text),
                common.format,
            ))
        }
        Command::Verify {
            claim: Claim::Theorem1,
            common,
            trees,
            ..
        } => {
            let source = load_universe(&common.universe)?;
            let mut entrants = load_trees(&source, &trees.trees, &trees.tree)?;
            if entrants.is_empty() {
                entrants = theorem1_entrants();
            }
            exactly(3, &entrants, "verify theorem1")?;
            let r = verify_theorem1_with(&source.universe, &entrants);
            let (text, passed) = (r.to_text(), r.passed);
            // The report carries its own header.
            let mut out = Output::new("verify theorem1", &source, &entrants, r, String::new());
            out.text = text;
            Ok((out.failed_if(!passed), common.format))
        }
        Command::Verify {
            claim: Claim::Theorem2,
            n,
            mode,
            common,
            ..
        } => {
            let n = n.ok_or_else(|| Failure::Usage("verify theorem2 needs --n".into()))?;
            let mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::ImageLevel => Mode::ImageLevel,
            };
            let r = verify_theorem2(n, mode)?;
            let (text, passed) = (r.to_text(), r.passed);
            let json = serde_json::to_string_pretty(&Envelope {
                command: "verify theorem2",
                universe: &format!("theorem2:{n}"),
                universe_hash: r.universe_hash.clone().unwrap_or_default(),
                trees: Vec::new(),
                report: &r,
            })
            .expect("reports serialize")
                + "\n";
            let out = Output { text, json, passed };
            Ok((out, common.format))
        }
        Command::Adversary {
            common,
            trees,
            joint,
        } => {
            let source = load_universe(&common.universe)?;
            let entrants = load_trees(&source, &trees.trees, &trees.tree)?;
            at_least_one(&entrants, "adversary")?;
            let single = verify_no_dominator(&entrants, &source.universe)?;
            let joint = if joint {
                Some(verify_joint_no_dominator(&entrants, &source.universe)?)
            } else {
                None
            };
            let mut text = single.to_text();
            if let Some(j) = &joint {
                text.push('\n');
                text.push_str(&j.to_text());
            }
            let report = AdversaryReport { single, joint };
            Ok((
                Output::new("adversary", &source, &entrants, report, text),
                common.format,
            ))
        }
        Command::Enumerate { common, limit } => {
            let source = load_universe(&common.universe)?;
            let total = count_reduced_trees(&source.universe)?;
            let trees: Vec<String> = reduced_trees(&source.universe)?
                .take(limit)
                .map(|t| format_tree(&t, &source.universe))
                .collect();
            let mut text: String = trees.iter().map(|t| format!("{t}\n")).collect();
            text.push_str(&format!("# total {total}\n"));
            let report = EnumerationReport {
                total: total.to_string(),
                trees,
            };
            Ok((
                Output::new("enumerate", &source, &[], report, text),
                common.format,
            ))
        }
        Command::Simulate {
            common,
            trees,
            steps,
            trials,
            seed,
        } => {
            let source = load_universe(&common.universe)?;
            let entrants = load_trees(&source, &trees.trees, &trees.tree)?;
            exactly(2, &entrants, "simulate")?;
            let dist = SequenceDistribution::uniform(&source.universe);
            let r = simulate(
                &entrants[0].tree,
                &entrants[1].tree,
                &source.universe,
                &dist,
                steps,
                trials,
                seed,
            )?;
            let text = r.to_text();
            Ok((
                Output::new("simulate", &source, &entrants, r, text),
                common.format,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, format)) => {
            match format {
                Format::Table => print!("{}", out.text),
                Format::Json => print!("{}", out.json),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(e) => {
            eprintln!("nontrans: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
