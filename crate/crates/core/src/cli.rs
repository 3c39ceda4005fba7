//! The `ambiguity` command line.
//!
//! Exit codes: 0 when the command succeeds and its answer is positive, 1
//! when an analysis comes out negative, 2 on usage, input or evaluation
//! errors.

use std::error::Error;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::agreement::{
    ambiguity_measure, aumann_check, check_agreement_bound, classify_signal, compare_posteriors_events,
    compare_posteriors_formulas, AgreementStatus,
};
use crate::model::{
    check_cpa, check_prior_generated, find_common_prior, generate_priors, validate, validate_ai, Distribution,
    PriorReport, Structure, ValidationReport,
};
use crate::rational::Rational;
use crate::semantics::{Evaluator, Mode};
use crate::sweep::{run_sweep, SeedRange, Suite, SweepReport};
use crate::syntax::{parse, Formula, Group, PlayerId};
use crate::transforms::{
    add_cell_labels, check_equivalent, check_equivalent_on, disjoint_copies, formula_family, mentions_knowledge,
    project_outermost, random_structure, EquivalenceVerdict, GeneratorConfig, LabelAmbiguity, Pairing, PairingFile,
};

/// Largest `m` accepted in `EB^m`.
pub const MAX_EB_DEPTH: u32 = 8;
/// Largest formula family depth.
pub const MAX_DEPTH: usize = 3;

type Outcome = Result<i32, Box<dyn Error>>;

#[derive(Debug, Parser)]
#[command(
    name = "ambiguity",
    version,
    about = "Model checker for epistemic probability logic with ambiguous propositions"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for `gen`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Depth of formula families and propositional formula scans.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(0..=MAX_DEPTH as u64))]
    pub depth: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the structural assumptions of a model file.
    Validate {
        model: PathBuf,
        /// Also check the assumptions of an ambiguous-information mode.
        #[arg(long, value_parser = parse_mode)]
        ai_mode: Option<Mode>,
    },
    /// Evaluate a formula and print a state by viewpoint truth table.
    Eval {
        model: PathBuf,
        formula: String,
        #[arg(long, default_value = "in", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        state: Option<String>,
        #[arg(long, value_parser = parse_player)]
        viewpoint: Option<PlayerId>,
    },
    /// Run an analysis on a model.
    Analyze {
        model: PathBuf,
        #[command(subcommand)]
        analysis: Analysis,
    },
    /// Build a transformed model and optionally verify it.
    Transform {
        model: PathBuf,
        #[command(subcommand)]
        kind: TransformKind,
    },
    /// Check invariant suites over seeded random structures.
    Sweep {
        /// Suite name, or `all`. May be repeated.
        #[arg(long, required = true)]
        suite: Vec<String>,
        #[arg(long, default_value = "1..200")]
        seeds: SeedRange,
    },
    /// Print a random model file.
    Gen(GenArgs),
}

#[derive(Debug, Subcommand)]
pub enum Analysis {
    /// The common prior assumption.
    Cpa,
    /// Whether priors generate the posteriors, and a common prior if one exists.
    Priors {
        /// Check generated priors even when the model has its own.
        #[arg(long)]
        generate: bool,
    },
    /// Prior mass of the states where players read a formula differently.
    Ambiguity {
        #[arg(long)]
        formula: String,
        /// Whose prior measures the disagreement.
        #[arg(long, default_value = "1", value_parser = parse_player)]
        prior: PlayerId,
    },
    /// Search for common belief of a disagreement beyond the ambiguity bound.
    Agreement {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        lower: Rational,
        #[arg(long)]
        upper: Rational,
        /// Players, as `1,2`; all by default.
        #[arg(long, value_parser = parse_group)]
        group: Option<Group>,
    },
    /// Whether a signal is common, public, shared and strongly shared.
    Signals {
        /// The signal; by default the one player 1 receives at the state.
        #[arg(long)]
        signal: Option<String>,
        #[arg(long)]
        state: String,
        #[arg(long, default_value = "in", value_parser = parse_mode)]
        mode: Mode,
    },
    /// Compare two players' posteriors at a state.
    Posteriors {
        #[arg(long)]
        state: String,
        #[arg(long, value_parser = parse_player)]
        i: PlayerId,
        #[arg(long, value_parser = parse_player)]
        j: PlayerId,
        /// Compare probabilities of propositional formulas instead of events.
        #[arg(long)]
        formulas: bool,
        #[arg(long, default_value = "in", value_parser = parse_mode)]
        mode: Mode,
    },
    /// Search for common belief of differing posteriors.
    Aumann {
        #[arg(long, value_parser = parse_group)]
        group: Option<Group>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TransformKind {
    /// Give every player the interpretation of one player.
    Project {
        #[arg(long, value_parser = parse_player)]
        player: PlayerId,
        #[command(flatten)]
        io: TransformIo,
    },
    /// One copy of the state space per player.
    Copies {
        #[command(flatten)]
        io: TransformIo,
    },
    /// Restrict to the states reachable from a state and label every cell.
    Labels {
        #[arg(long)]
        state: String,
        #[command(flatten)]
        io: TransformIo,
    },
}

#[derive(Debug, Args)]
pub struct TransformIo {
    /// Where to write the model; printed to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the pairing of old and new points.
    #[arg(long)]
    pairing: Option<PathBuf>,
    /// Check the output against the input on the formula family.
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Start from the generator configuration of a sweep suite.
    #[arg(long)]
    suite: Option<Suite>,
    /// Number of states, as `n` or `a..b`.
    #[arg(long, value_parser = parse_range)]
    states: Option<(usize, usize)>,
    #[arg(long, value_parser = parse_range)]
    players: Option<(usize, usize)>,
    #[arg(long, value_parser = parse_range)]
    props: Option<(usize, usize)>,
    /// Chance that a player's reading of a proposition is redrawn.
    #[arg(long)]
    ambiguity: Option<Rational>,
    /// Draw a separate prior per player.
    #[arg(long)]
    no_common_prior: bool,
    /// Add signals, receipt propositions and cell labels.
    #[arg(long)]
    signals: bool,
    #[arg(long, value_parser = parse_label_ambiguity)]
    label_ambiguity: Option<LabelAmbiguity>,
    /// Allow zero prior weights.
    #[arg(long)]
    degenerate: bool,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_player(s: &str) -> Result<PlayerId, String> {
    s.trim().parse::<u16>().ok().and_then(PlayerId::new).ok_or_else(|| format!("`{s}` is not a player number"))
}

fn parse_group(s: &str) -> Result<Group, String> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let group: Group = inner.split(',').map(parse_player).collect::<Result<_, _>>()?;
    Ok(group)
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad number `{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b.strip_prefix('=').unwrap_or(b))?)),
        None => Ok((num(s)?, num(s)?)),
    }
}

fn parse_label_ambiguity(s: &str) -> Result<LabelAmbiguity, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown label ambiguity `{s}` (expected none, coarsening or arbitrary)"))
}

/// Parses `args` (program name first) and runs the command, writing to the
/// process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let depth = cli.depth as usize;
    match &cli.command {
        Command::Validate { model, ai_mode } => cmd_validate(cli, &load(model)?, *ai_mode, out),
        Command::Eval { model, formula, mode, state, viewpoint } => {
            cmd_eval(cli, &load(model)?, formula, *mode, state.as_deref(), *viewpoint, out)
        }
        Command::Analyze { model, analysis } => cmd_analyze(cli, &load(model)?, analysis, depth, out),
        Command::Transform { model, kind } => cmd_transform(cli, &load(model)?, kind, depth, out, err),
        Command::Sweep { suite, seeds } => cmd_sweep(cli, suite, *seeds, depth, out),
        Command::Gen(args) => cmd_gen(cli, args, out),
    }
}

fn load(path: &Path) -> Result<Structure, Box<dyn Error>> {
    Ok(Structure::load(path)?)
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Box<dyn Error>> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn parse_formula(text: &str) -> Result<Formula, Box<dyn Error>> {
    let f = parse(text)?;
    if let Some(d) = max_eb_depth(&f).filter(|&d| d > MAX_EB_DEPTH) {
        return Err(format!("EB^{d} exceeds the limit of {MAX_EB_DEPTH}").into());
    }
    Ok(f)
}

fn max_eb_depth(f: &Formula) -> Option<u32> {
    let own = match f {
        Formula::EveryoneBelieves { depth, .. } => Some(*depth),
        _ => None,
    };
    f.children().into_iter().filter_map(max_eb_depth).chain(own).max()
}

fn cmd_validate(cli: &Cli, m: &Structure, ai_mode: Option<Mode>, out: &mut dyn Write) -> Outcome {
    let mut report = validate(m);
    if let Some(mode) = ai_mode {
        report.extend(validate_ai(m, mode)?);
    }
    if cli.json {
        print_json(out, &report)?;
    } else {
        write_validation(out, &report)?;
        writeln!(out, "{}", if report.passed() { "valid" } else { "invalid" })?;
    }
    Ok(code(report.passed()))
}

fn write_validation(out: &mut dyn Write, report: &ValidationReport) -> std::io::Result<()> {
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.checks {
        let status = serde_json::to_value(c.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        writeln!(out, "{:<width$}  {:<15}  {}", c.name, status, c.description)?;
        for w in &c.witnesses {
            let mut at = Vec::new();
            if let Some(p) = w.player {
                at.push(format!("player {p}"));
            }
            if let Some(p) = w.other {
                at.push(format!("reader {p}"));
            }
            if let Some(s) = &w.state {
                at.push(format!("state {s}"));
            }
            writeln!(out, "{:width$}  {}: {}", "", at.join(", "), w.detail)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRow {
    pub state: String,
    pub viewpoint: PlayerId,
    pub value: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub formula: Formula,
    pub mode: Mode,
    pub all_true: bool,
    pub rows: Vec<EvalRow>,
}

fn cmd_eval(
    cli: &Cli,
    m: &Structure,
    formula: &str,
    mode: Mode,
    state: Option<&str>,
    viewpoint: Option<PlayerId>,
    out: &mut dyn Write,
) -> Outcome {
    let f = parse_formula(formula)?;
    let states: Vec<usize> = match state {
        Some(name) => vec![m.state(name)?],
        None => (0..m.n_states()).collect(),
    };
    let viewpoints: Vec<PlayerId> = match viewpoint {
        Some(v) => {
            m.check_player(v)?;
            vec![v]
        }
        None => m.player_ids().collect(),
    };
    let mut ev = Evaluator::new(m, mode)?;
    let mut rows = Vec::new();
    for &s in &states {
        for &v in &viewpoints {
            rows.push(EvalRow { state: m.state_name(s).to_string(), viewpoint: v, value: ev.eval(&f, s, v)? });
        }
    }
    let report = EvalReport { formula: f, mode, all_true: rows.iter().all(|r| r.value), rows };
    if cli.json {
        print_json(out, &report)?;
    } else {
        let width = states.iter().map(|&s| m.state_name(s).len()).max().unwrap_or(0).max(5);
        write!(out, "{:<width$}", "state")?;
        for v in &viewpoints {
            write!(out, "  {:<5}", format!("v{v}"))?;
        }
        writeln!(out)?;
        for chunk in report.rows.chunks(viewpoints.len()) {
            write!(out, "{:<width$}", chunk[0].state)?;
            for r in chunk {
                write!(out, "  {:<5}", r.value)?;
            }
            writeln!(out)?;
        }
    }
    Ok(code(report.all_true))
}

fn named(m: &Structure, d: &Distribution) -> IndexMap<String, Rational> {
    m.states().iter().cloned().zip(d.values().iter().cloned()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorsOutput {
    pub generated: bool,
    pub priors: Vec<IndexMap<String, Rational>>,
    pub check: PriorReport,
    pub common_prior: Option<IndexMap<String, Rational>>,
}

fn write_distribution(out: &mut dyn Write, label: &str, d: &IndexMap<String, Rational>) -> std::io::Result<()> {
    let parts: Vec<String> = d.iter().map(|(s, p)| format!("{s}={p}")).collect();
    writeln!(out, "{label}: {}", parts.join(" "))
}

fn cmd_analyze(cli: &Cli, m: &Structure, analysis: &Analysis, depth: usize, out: &mut dyn Write) -> Outcome {
    match analysis {
        Analysis::Cpa => {
            let report = check_cpa(m)?;
            if cli.json {
                print_json(out, &report)?;
            } else if report.passed {
                writeln!(out, "pass")?;
            } else {
                for c in report.clauses.iter().filter(|c| !c.passed) {
                    writeln!(out, "fail: {}", c.failure.as_deref().unwrap_or(&c.name))?;
                }
            }
            Ok(code(report.passed))
        }
        Analysis::Priors { generate } => {
            let (generated, priors) = match m.priors() {
                Some(p) if !generate => (false, p.to_vec()),
                _ => (true, generate_priors(m)),
            };
            let check = check_prior_generated(m, &priors);
            let report = PriorsOutput {
                generated,
                priors: priors.iter().map(|d| named(m, d)).collect(),
                common_prior: find_common_prior(m).map(|d| named(m, &d)),
                check,
            };
            if cli.json {
                print_json(out, &report)?;
            } else {
                let source = if report.generated { "generated" } else { "stored" };
                for (i, d) in m.player_ids().zip(&report.priors) {
                    write_distribution(out, &format!("{source} prior of player {i}"), d)?;
                }
                let verdict = if report.check.passed { "pass" } else { "fail" };
                writeln!(out, "prior-generated: {verdict} ({} unconstrained cells)", report.check.unconstrained)?;
                match &report.common_prior {
                    Some(d) => write_distribution(out, "common prior", d)?,
                    None => writeln!(out, "common prior: none")?,
                }
            }
            Ok(code(report.check.passed))
        }
        Analysis::Ambiguity { formula, prior } => {
            let f = parse_formula(formula)?;
            m.check_player(*prior)?;
            let nu = m.prior(*prior).ok_or("the model has no priors")?;
            let report = ambiguity_measure(m, nu, &f)?;
            if cli.json {
                print_json(out, &report)?;
            } else {
                writeln!(out, "epsilon: {}", report.epsilon)?;
                writeln!(out, "disagreement: {{{}}}", report.disagreement_event.join(", "))?;
            }
            Ok(0)
        }
        Analysis::Agreement { formula, lower, upper, group } => {
            let f = parse_formula(formula)?;
            let group = group.clone().unwrap_or_else(|| m.all_players());
            let report = check_agreement_bound(m, &group, &f, lower, upper)?;
            if cli.json {
                print_json(out, &report)?;
            } else {
                let status = serde_json::to_value(report.status)?;
                writeln!(out, "status: {}", status.as_str().unwrap_or_default())?;
                if let Some(eps) = &report.epsilon {
                    writeln!(out, "epsilon: {eps}")?;
                }
                for failure in &report.failures {
                    writeln!(out, "precondition: {failure}")?;
                }
                if let Some(w) = &report.witness {
                    writeln!(out, "witness: players {} and {} at {}", w.i, w.j, w.state)?;
                }
            }
            Ok(code(matches!(report.status, AgreementStatus::Consistent | AgreementStatus::Vacuous)))
        }
        Analysis::Signals { signal, state, mode } => {
            let s = m.state(state)?;
            let signal = match signal {
                Some(signal) => signal.clone(),
                None => m
                    .signal(PlayerId::from_index(0), s)
                    .ok_or("player 1 receives no signal there; pass --signal")?
                    .to_string(),
            };
            let report = classify_signal(m, &signal, s, *mode)?;
            if cli.json {
                print_json(out, &report)?;
            } else {
                writeln!(
                    out,
                    "common: {}, public: {}, shared: {}, strongly shared: {}",
                    yes(report.common),
                    yes(report.public),
                    yes(report.shared),
                    yes(report.strongly_shared)
                )?;
                if report.viewpoints.iter().any(|v| v.public != report.public || v.shared != report.shared) {
                    for v in &report.viewpoints {
                        writeln!(
                            out,
                            "  viewpoint {}: public: {}, shared: {}",
                            v.viewpoint,
                            yes(v.public),
                            yes(v.shared)
                        )?;
                    }
                }
            }
            Ok(0)
        }
        Analysis::Posteriors { state, i, j, formulas, mode } => {
            let s = m.state(state)?;
            if *formulas {
                let report = compare_posteriors_formulas(m, s, *i, *j, *mode, depth)?;
                if cli.json {
                    print_json(out, &report)?;
                } else {
                    writeln!(
                        out,
                        "{} ({} formulas)",
                        if report.equal { "equal" } else { "differ" },
                        report.formulas_checked
                    )?;
                    if let Some(w) = &report.witness {
                        let by = w.viewpoint.map(|v| format!(" for viewpoint {v}")).unwrap_or_default();
                        writeln!(out, "Pr_{i}({f}) = {}, Pr_{j}({f}) = {}{by}", w.left, w.right, f = w.formula)?;
                    }
                }
                Ok(code(report.equal))
            } else {
                let report = compare_posteriors_events(m, s, *i, *j)?;
                if cli.json {
                    print_json(out, &report)?;
                } else {
                    writeln!(out, "{}", if report.equal { "equal" } else { "differ" })?;
                    if let Some(w) = &report.witness {
                        writeln!(out, "on {{{}}}: {} vs {}", w.event.join(", "), w.left, w.right)?;
                    }
                }
                Ok(code(report.equal))
            }
        }
        Analysis::Aumann { group } => {
            let group = group.clone().unwrap_or_else(|| m.all_players());
            let report = aumann_check(m, &group)?;
            if cli.json {
                print_json(out, &report)?;
            } else {
                let status = serde_json::to_value(report.status)?;
                writeln!(out, "status: {}", status.as_str().unwrap_or_default())?;
                for failure in &report.failures {
                    writeln!(out, "precondition: {failure}")?;
                }
                for f in &report.findings {
                    writeln!(
                        out,
                        "at {}: CB of Pr_{}({}) = {} and Pr_{}({}) = {}",
                        f.state, f.i, f.formula, f.a, f.j, f.formula, f.c
                    )?;
                }
            }
            Ok(code(report.findings.is_empty()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub name: String,
    pub verdict: EquivalenceVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub family_size: usize,
    pub equivalent: bool,
    pub verdicts: Vec<NamedVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformOutput {
    pub states: usize,
    pub pairing: PairingFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

fn cmd_transform(
    cli: &Cli,
    m: &Structure,
    kind: &TransformKind,
    depth: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let family = formula_family(m.props(), m.n_players(), depth);
    let (result, pairing, io, verification) = match kind {
        TransformKind::Project { player, io } => {
            m.check_player(*player)?;
            let p = project_outermost(m, *player)?;
            let pairing = Pairing::identity_for(m, [*player]);
            let verification = io
                .verify
                .then(|| -> Result<Verification, Box<dyn Error>> {
                    let v = check_equivalent(m, &p, &pairing, Mode::Out, Mode::In, &family)?;
                    Ok(verdicts(family.len(), vec![(format!("out, viewpoint {player} / in"), v)], None))
                })
                .transpose()?;
            (p, pairing, io, verification)
        }
        TransformKind::Copies { io } => {
            let (c, pairing) = disjoint_copies(m)?;
            let verification = io
                .verify
                .then(|| -> Result<Verification, Box<dyn Error>> {
                    let beliefs: Vec<Formula> = family.iter().filter(|f| !mentions_knowledge(f)).cloned().collect();
                    let v = check_equivalent(m, &c, &pairing, Mode::In, Mode::In, &beliefs)?;
                    Ok(verdicts(beliefs.len(), vec![("in / in".to_string(), v)], None))
                })
                .transpose()?;
            (c, pairing, io, verification)
        }
        TransformKind::Labels { state, io } => {
            let (l, pairing) = add_cell_labels(m, m.state(state)?)?;
            let verification = io
                .verify
                .then(|| -> Result<Verification, Box<dyn Error>> {
                    let mut validation = validate(&l);
                    validation.extend(validate_ai(&l, Mode::OutAi)?);
                    let inner = validate_ai(&l, Mode::InAi)?;
                    let fresh: Vec<_> =
                        inner.checks.into_iter().filter(|c| validation.get(&c.name).is_none()).collect();
                    validation.extend(ValidationReport { checks: fresh });
                    let mut named = Vec::new();
                    for mode in [Mode::Out, Mode::In] {
                        named.push((
                            format!("{mode} / {mode}"),
                            check_equivalent_on(m, &l, &pairing, mode, mode, &family)?,
                        ));
                    }
                    Ok(verdicts(family.len(), named, Some(validation)))
                })
                .transpose()?;
            (l, pairing, io, verification)
        }
    };
    let names = pairing.to_names(m, &result);
    if let Some(path) = &io.out {
        result.save(path)?;
    }
    if let Some(path) = &io.pairing {
        std::fs::write(path, serde_json::to_string_pretty(&names)? + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let ok = verification.as_ref().is_none_or(|v| v.equivalent);
    if cli.json {
        let model = match io.out {
            Some(_) => None,
            None => Some(serde_json::from_str(&result.to_json_string())?),
        };
        let report = TransformOutput { states: result.n_states(), pairing: names, model, verification };
        print_json(out, &report)?;
        return Ok(code(ok));
    }
    // The model owns stdout when it is not written to a file.
    let summary: &mut dyn Write = if io.out.is_some() {
        out
    } else {
        write!(out, "{}", result.to_json_string())?;
        err
    };
    if let Some(path) = &io.out {
        writeln!(summary, "wrote {} ({} states)", path.display(), result.n_states())?;
    }
    if let Some(v) = &verification {
        if let Some(report) = &v.validation {
            write_validation(summary, report)?;
        }
        if v.equivalent {
            writeln!(summary, "equivalent (family size {})", v.family_size)?;
        } else {
            for nv in v.verdicts.iter().filter(|nv| !nv.verdict.equivalent) {
                match &nv.verdict.witness {
                    Some(w) => writeln!(
                        summary,
                        "not equivalent ({}): `{}` is {} at {} for {} but {} at {} for {}",
                        nv.name,
                        w.formula,
                        w.left_value,
                        w.left_state,
                        w.left_viewpoint,
                        w.right_value,
                        w.right_state,
                        w.right_viewpoint
                    )?,
                    None => writeln!(summary, "not equivalent ({})", nv.name)?,
                }
            }
            if v.validation.as_ref().is_some_and(|r| !r.passed()) {
                writeln!(summary, "the output fails validation")?;
            }
        }
    }
    Ok(code(ok))
}

fn verdicts(
    family_size: usize,
    named: Vec<(String, EquivalenceVerdict)>,
    validation: Option<ValidationReport>,
) -> Verification {
    let equivalent =
        named.iter().all(|(_, v)| v.equivalent) && validation.as_ref().is_none_or(ValidationReport::passed);
    Verification {
        family_size,
        equivalent,
        verdicts: named.into_iter().map(|(name, verdict)| NamedVerdict { name, verdict }).collect(),
        validation,
    }
}

fn cmd_sweep(cli: &Cli, suites: &[String], seeds: SeedRange, depth: usize, out: &mut dyn Write) -> Outcome {
    let mut selected: Vec<Suite> = Vec::new();
    for name in suites {
        if name == "all" {
            selected.extend(Suite::ALL);
        } else {
            selected.push(name.parse::<Suite>()?);
        }
    }
    let reports: Vec<SweepReport> = selected.into_iter().map(|s| run_sweep(s, seeds, depth)).collect();
    if cli.json {
        print_json(out, &reports)?;
    } else {
        for r in &reports {
            writeln!(
                out,
                "{}: {} structures, {} instances, {} positive, {} violations",
                r.suite, r.structures, r.instances, r.positive, r.violations
            )?;
            if let Some(w) = &r.witness {
                writeln!(out, "  witness (seed {}): {}", w.seed, w.detail)?;
                writeln!(out, "{}", serde_json::to_string_pretty(&w.model)?)?;
            }
        }
    }
    Ok(code(reports.iter().all(SweepReport::passed)))
}

fn cmd_gen(cli: &Cli, args: &GenArgs, out: &mut dyn Write) -> Outcome {
    let mut cfg = args.suite.map(Suite::config).unwrap_or_default();
    if let Some(r) = args.states {
        cfg.states = r;
    }
    if let Some(r) = args.players {
        cfg.players = r;
    }
    if let Some(r) = args.props {
        cfg.props = r;
    }
    if let Some(a) = &args.ambiguity {
        cfg.ambiguity = a.clone();
    }
    if args.no_common_prior {
        cfg.common_prior = false;
    }
    if args.signals {
        cfg.with_signals = true;
    }
    if let Some(l) = args.label_ambiguity {
        cfg.label_ambiguity = l;
    }
    if args.degenerate {
        cfg.degenerate = true;
    }
    let m = random_structure(&GeneratorConfig { seed: cli.seed, ..cfg })?;
    write!(out, "{}", m.to_json_string())?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_group("{1, 3}").unwrap().len(), 2);
        assert!(parse_group("1,x").is_err());
        assert_eq!(parse_range("2..4").unwrap(), (2, 4));
        assert_eq!(parse_range("3").unwrap(), (3, 3));
        assert_eq!(parse_label_ambiguity("coarsening").unwrap(), LabelAmbiguity::Coarsening);
        assert!(parse_player("0").is_err());
    }

    #[test]
    fn eb_depth_is_capped() {
        assert!(parse_formula("EB^8_{1}(p)").is_ok());
        assert!(parse_formula("B_1(EB^9_{1,2}(p))").is_err());
    }

    #[test]
    fn depth_is_capped() {
        assert!(Cli::try_parse_from(["ambiguity", "--depth", "4", "sweep", "--suite", "aumann"]).is_err());
        assert!(Cli::try_parse_from(["ambiguity", "sweep", "--suite", "aumann", "--depth", "3"]).is_ok());
    }
}
