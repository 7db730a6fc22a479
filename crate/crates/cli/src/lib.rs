//! Command-line front-end: `validate`, `solve`, `rationalise` and the bundled
//! `scenario` files.
//!
//! Exit codes: 0 success, 2 input or configuration error, 3 I/O error,
//! 4 refusal because the candidate estimate exceeds `--max-candidates`.

pub mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypergame::dsl::ParseError;
use hypergame::rationaliser::{preflight, RunOptions};
use hypergame::scenarios;
use hypergame::{
    nash_equilibria, ordinal_from_cardinal, parse, rationalise_with, render, Attitude, Concept,
    ConstraintSet, Level, OptionId, OwnActionPolicy, Parsed, PlayerConstraints, PlayerId,
    StrategyProfile, SubjectiveGame,
};
use thiserror::Error;

use report::{Candidate, HypergameEntry, PlayerReport, Profile, SolvedView, ViewSummary};
pub use report::{Matrix, Report, Results};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: cannot read: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: cannot write: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}", diagnostics(.path, .error))]
    Parse { path: PathBuf, error: ParseError },
    #[error("{0}")]
    Config(String),
    #[error("candidate estimate {estimate} exceeds --max-candidates {limit}; refusing to run")]
    BlowUp { estimate: u128, limit: u128 },
}

fn diagnostics(path: &Path, error: &ParseError) -> String {
    error
        .diagnostics
        .iter()
        .map(|d| format!("{}:{d}", path.display()))
        .collect::<Vec<_>>()
        .join("\n")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Config(_) => 2,
            CliError::Read { .. } | CliError::Write { .. } => 3,
            CliError::BlowUp { .. } => 4,
        }
    }
}

impl From<hypergame::RationaliseError> for CliError {
    fn from(e: hypergame::RationaliseError) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hypergame",
    version,
    about = "Hypergame equilibria and rationalisation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Print the JSON report instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to FILE
    #[arg(long, value_name = "FILE", global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a .hg file and pretty-print it
    Validate {
        path: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Pure Nash equilibria of the base view or the declared views
    Solve {
        path: PathBuf,
        /// Solve the declared utility views (error if there are none)
        #[arg(long, conflicts_with = "cardinal")]
        ordinal: bool,
        /// Solve the base payoffs, ignoring declared views
        #[arg(long)]
        cardinal: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Find the hypergames under which a profile is an equilibrium
    Rationalise {
        path: PathBuf,
        #[command(flatten)]
        args: RationaliseArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Print a bundled scenario file (pd.hg, france.hg, france_view.hg)
    Scenario {
        /// File name; omit to list them
        name: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConceptArg {
    Strong,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OwnActions {
    Full,
    ContainsTarget,
}

#[derive(Debug, Clone, Args)]
pub struct RationaliseArgs {
    /// Target profile ROW,COL (defaults to the file's `chosen` fact)
    #[arg(long, value_name = "ROW,COL")]
    pub target: Option<String>,
    #[arg(long, value_enum, default_value = "strong")]
    pub concept: ConceptArg,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub level: u8,
    /// Allowed attitudes of the owner, e.g. so,po
    #[arg(long, value_delimiter = ',', value_parser = parse_attitude)]
    pub attitudes_own: Option<Vec<Attitude>>,
    /// Attitudes the owner may ascribe to the opponent
    #[arg(long, value_delimiter = ',', value_parser = parse_attitude)]
    pub attitudes_opp: Option<Vec<Attitude>>,
    /// Enumerate rank tables
    #[arg(long)]
    pub enumerate_ranks: bool,
    /// Enumerate the opponent's believed action sets
    #[arg(long)]
    pub enumerate_opp_actions: bool,
    #[arg(long, value_enum, default_value = "full")]
    pub own_actions: OwnActions,
    /// Allow ties when enumerating rank tables
    #[arg(long)]
    pub non_strict: bool,
    /// Permit enumerating ranks and action sets together
    #[arg(long)]
    pub joint: bool,
    /// Fix PLAYER's subjective game to the view declared in FILE
    #[arg(long, value_name = "PLAYER=FILE")]
    pub fix_view: Vec<String>,
    /// Filtering pool size
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_candidates: u128,
}

impl Default for RationaliseArgs {
    fn default() -> Self {
        RationaliseArgs {
            target: None,
            concept: ConceptArg::Strong,
            level: 2,
            attitudes_own: None,
            attitudes_opp: None,
            enumerate_ranks: false,
            enumerate_opp_actions: false,
            own_actions: OwnActions::Full,
            non_strict: false,
            joint: false,
            fix_view: Vec::new(),
            threads: None,
            max_candidates: 10_000_000,
        }
    }
}

fn parse_attitude(s: &str) -> Result<Attitude, String> {
    s.trim().parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    /// Declared views if present, otherwise the base payoffs.
    #[default]
    Auto,
    Ordinal,
    Cardinal,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path) -> Result<Parsed, CliError> {
    let text = read(path)?;
    parse(&text).map_err(|error| CliError::Parse {
        path: path.to_path_buf(),
        error,
    })
}

fn parse_warnings(path: &Path, parsed: &Parsed) -> Vec<String> {
    parsed
        .warnings
        .iter()
        .map(|d| format!("{}:{d}", path.display()))
        .collect()
}

pub fn cmd_validate(path: &Path) -> Result<Report, CliError> {
    let parsed = load(path)?;
    let spec = &parsed.spec;
    Ok(Report {
        command: "validate".into(),
        input: render(spec),
        configuration: BTreeMap::from([("path".into(), path.display().to_string())]),
        warnings: parse_warnings(path, &parsed),
        results: Results::Validate {
            players: spec
                .base
                .players()
                .iter()
                .map(|(p, r)| (p.to_string(), r.to_string()))
                .collect(),
            target: spec.target.as_ref().map(Profile::from),
            base: Matrix::from_payoffs(&spec.base),
            views: spec
                .views
                .iter()
                .map(|(role, g)| ViewSummary {
                    player: g.owner().to_string(),
                    role: role.to_string(),
                    matrix: Matrix::from_ranks(g.table()),
                })
                .collect(),
        },
    })
}

pub fn cmd_solve(path: &Path, mode: SolveMode) -> Result<Report, CliError> {
    let parsed = load(path)?;
    let spec = &parsed.spec;
    let use_views = match mode {
        SolveMode::Auto => !spec.views.is_empty(),
        SolveMode::Cardinal => false,
        SolveMode::Ordinal => {
            if spec.views.is_empty() {
                return Err(CliError::Config(format!(
                    "{}: --ordinal needs declared utility views",
                    path.display()
                )));
            }
            true
        }
    };
    let views = if use_views {
        spec.views
            .iter()
            .map(|(_, g)| SolvedView {
                source: g.owner().to_string(),
                matrix: Matrix::from_ranks(g.table()),
                equilibria: nash_equilibria(g.table())
                    .iter()
                    .map(Profile::from)
                    .collect(),
            })
            .collect()
    } else {
        let view = ordinal_from_cardinal(&spec.base);
        vec![SolvedView {
            source: "base".into(),
            matrix: Matrix::from_payoffs(&spec.base),
            equilibria: nash_equilibria(&view).iter().map(Profile::from).collect(),
        }]
    };
    let mode_name = if use_views {
        "declared views"
    } else {
        "base payoffs"
    };
    Ok(Report {
        command: "solve".into(),
        input: render(spec),
        configuration: BTreeMap::from([
            ("path".into(), path.display().to_string()),
            ("views".into(), mode_name.into()),
        ]),
        warnings: parse_warnings(path, &parsed),
        results: Results::Solve { views },
    })
}

fn parse_target(s: &str) -> Result<StrategyProfile, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(CliError::Config(format!(
            "--target expects ROW,COL, got `{s}`"
        )));
    };
    let id = |x: &str| OptionId::new(x).map_err(|e| CliError::Config(format!("--target: {e}")));
    Ok(StrategyProfile::new(id(a)?, id(b)?))
}

fn fixed_view(
    spec: &hypergame::ProblemSpec,
    arg: &str,
    warnings: &mut Vec<String>,
) -> Result<(PlayerId, SubjectiveGame), CliError> {
    let Some((name, file)) = arg.split_once('=') else {
        return Err(CliError::Config(format!(
            "--fix-view expects PLAYER=FILE, got `{arg}`"
        )));
    };
    let player =
        PlayerId::new(name.trim()).map_err(|e| CliError::Config(format!("--fix-view: {e}")))?;
    let Some(role) = spec.base.role_of(&player) else {
        return Err(CliError::Config(format!(
            "--fix-view: `{player}` is not a player of the input game"
        )));
    };
    let path = Path::new(file.trim());
    let other = load(path)?;
    let Some(view) = other.spec.view(role) else {
        return Err(CliError::Config(format!(
            "{}: no {role} view declared for `{player}`",
            path.display()
        )));
    };
    if other.spec.base != spec.base {
        warnings.push(format!(
            "{}: base game differs from the input; the view is checked against the input",
            path.display()
        ));
    }
    let game = SubjectiveGame::new(&spec.base, player.clone(), view.table().clone())
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((player, game))
}

pub fn cmd_rationalise(path: &Path, args: &RationaliseArgs) -> Result<Report, CliError> {
    let parsed = load(path)?;
    let spec = &parsed.spec;
    let mut warnings = parse_warnings(path, &parsed);

    let target = match (&args.target, &spec.target) {
        (Some(flag), chosen) => {
            let t = parse_target(flag)?;
            if let Some(c) = chosen {
                if *c != t {
                    warnings.push(format!("--target {t} overrides chosen {c}"));
                }
            }
            t
        }
        (None, Some(c)) => c.clone(),
        (None, None) => {
            return Err(CliError::Config(
                "no target: pass --target or add a chosen fact".into(),
            ))
        }
    };
    spec.base
        .check_profile(&target)
        .map_err(|e| CliError::Config(format!("target: {e}")))?;

    let concept = match args.concept {
        ConceptArg::Strong => Concept::StrongHne,
        ConceptArg::Weak => Concept::WeakHne,
    };
    let level = Level::try_from(args.level).map_err(|e| CliError::Config(e.to_string()))?;
    let mut constraints = ConstraintSet::new(concept, level);
    constraints.allow_joint_enumeration = args.joint;

    let mut fixed = Vec::new();
    for arg in &args.fix_view {
        let (player, game) = fixed_view(spec, arg, &mut warnings)?;
        if fixed.iter().any(|(p, _)| *p == player) {
            return Err(CliError::Config(format!(
                "--fix-view given twice for `{player}`"
            )));
        }
        fixed.push((player, game));
    }

    let template = PlayerConstraints {
        own_attitudes: args.attitudes_own.clone(),
        opponent_attitudes: args.attitudes_opp.clone(),
        enumerate_rank_tables: args.enumerate_ranks,
        enumerate_opponent_actions: args.enumerate_opp_actions,
        own_action_policy: match args.own_actions {
            OwnActions::Full => OwnActionPolicy::FullOptions,
            OwnActions::ContainsTarget => OwnActionPolicy::ContainsOwnComponent,
        },
        strict_ranks: !args.non_strict,
        ..Default::default()
    };
    for (player, role) in spec.base.players() {
        if let Some((_, game)) = fixed.iter().find(|(p, _)| p == player) {
            constraints =
                constraints.with_player(player.clone(), PlayerConstraints::fixed(game.clone()));
            continue;
        }
        let mut entry = template.clone();
        if let Some(view) = spec.view(*role) {
            if entry.enumerate_rank_tables {
                warnings.push(format!(
                    "declared view of `{player}` ignored: rank tables are enumerated"
                ));
            } else if entry.enumerates_actions() {
                entry.fixed_ranks = Some(view.table().clone());
            } else if !entry.has_attitudes() {
                entry = PlayerConstraints::fixed(view.clone());
            }
        }
        constraints = constraints.with_player(player.clone(), entry);
    }

    let estimate = preflight(&spec.base, &target, &constraints)?;
    if estimate.total() > args.max_candidates {
        return Err(CliError::BlowUp {
            estimate: estimate.total(),
            limit: args.max_candidates,
        });
    }
    let result = rationalise_with(
        &spec.base,
        &target,
        &constraints,
        &RunOptions {
            threads: args.threads,
        },
    )?;

    let players: Vec<PlayerReport> = result
        .players
        .iter()
        .map(|o| PlayerReport {
            player: o.player.to_string(),
            role: o.role.to_string(),
            estimate: o.estimate,
            generated: o.generated,
            level_retained: o.level_retained,
            retained: o.retained.iter().map(Candidate::from).collect(),
        })
        .collect();
    let index: Vec<std::collections::HashMap<&SubjectiveGame, usize>> = result
        .players
        .iter()
        .map(|o| {
            o.retained
                .iter()
                .enumerate()
                .map(|(i, g)| (g, i + 1))
                .collect()
        })
        .collect();
    let hypergames = result
        .hypergames
        .iter()
        .map(|h| HypergameEntry {
            views: h
                .views()
                .iter()
                .zip(&index)
                .map(|(v, idx)| idx[v])
                .collect(),
        })
        .collect();

    let mut configuration = BTreeMap::from([
        ("path".to_string(), path.display().to_string()),
        ("concept".into(), concept.to_string()),
        ("level".into(), level.to_string()),
        ("target".into(), target.to_string()),
        ("enumerate_ranks".into(), args.enumerate_ranks.to_string()),
        (
            "enumerate_opp_actions".into(),
            args.enumerate_opp_actions.to_string(),
        ),
        (
            "own_actions".into(),
            format!("{:?}", args.own_actions).to_lowercase(),
        ),
        ("strict_ranks".into(), (!args.non_strict).to_string()),
        ("joint".into(), args.joint.to_string()),
        ("max_candidates".into(), args.max_candidates.to_string()),
    ]);
    let list = |a: &Option<Vec<Attitude>>| match a {
        Some(v) => v.iter().map(|x| x.token()).collect::<Vec<_>>().join(","),
        None => "any".into(),
    };
    configuration.insert("attitudes_own".into(), list(&args.attitudes_own));
    configuration.insert("attitudes_opp".into(), list(&args.attitudes_opp));
    if !args.fix_view.is_empty() {
        configuration.insert("fix_view".into(), args.fix_view.join(" "));
    }

    Ok(Report {
        command: "rationalise".into(),
        input: render(spec),
        configuration,
        warnings,
        results: Results::Rationalise {
            target: Profile::from(&target),
            concept: concept.to_string(),
            level: level.as_u8(),
            rationalisable: result.is_rationalisable(),
            players,
            hypergame_count: result.hypergames.len(),
            hypergames,
        },
    })
}

/// Contents of a bundled scenario, looked up by file name with or without
/// the `.hg` suffix.
pub fn scenario(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".hg").unwrap_or(name);
    scenarios::FILES
        .iter()
        .find(|(f, _)| f.strip_suffix(".hg") == Some(name))
        .map(|(_, text)| *text)
}

/// Runs one parsed command line, writing to stdout. Returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let (result, output) = match cli.command {
        Command::Validate { path, output } => (cmd_validate(&path), output),
        Command::Solve {
            path,
            ordinal,
            cardinal,
            output,
        } => {
            let mode = if ordinal {
                SolveMode::Ordinal
            } else if cardinal {
                SolveMode::Cardinal
            } else {
                SolveMode::Auto
            };
            (cmd_solve(&path, mode), output)
        }
        Command::Rationalise { path, args, output } => (cmd_rationalise(&path, &args), output),
        Command::Scenario { name } => {
            return match name {
                None => {
                    for (f, _) in scenarios::FILES {
                        println!("{f}");
                    }
                    0
                }
                Some(n) => match scenario(&n) {
                    Some(text) => {
                        print!("{text}");
                        0
                    }
                    None => {
                        eprintln!("error: no bundled scenario `{n}`");
                        2
                    }
                },
            };
        }
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    if let Some(out) = &output.out {
        if let Err(source) = std::fs::write(out, report.to_json()) {
            let e = CliError::Write {
                path: out.clone(),
                source,
            };
            eprintln!("error: {e}");
            return e.exit_code();
        }
    }
    if output.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    0
}
