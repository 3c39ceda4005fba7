use serde::{Deserialize, Serialize};

use super::{check_prior_generated, Event, ModelError, Structure};
use crate::semantics::Mode;
use crate::syntax::PlayerId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Holds for every representable structure.
    ByConstruction,
}

/// Where an assumption fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub player: Option<PlayerId>,
    /// The second player of a pairwise assumption (the interpreter in A6).
    pub other: Option<PlayerId>,
    pub state: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub description: String,
    pub status: CheckStatus,
    pub witnesses: Vec<Witness>,
}

impl Check {
    fn new(name: &str, description: &str, witnesses: Vec<Witness>) -> Check {
        let status = if witnesses.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail };
        Check { name: name.into(), description: description.into(), status, witnesses }
    }

    fn by_construction(name: &str, description: &str) -> Check {
        Check {
            name: name.into(),
            description: description.into(),
            status: CheckStatus::ByConstruction,
            witnesses: vec![],
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }
}

fn witness(m: &Structure, player: PlayerId, other: Option<PlayerId>, state: Option<usize>, detail: String) -> Witness {
    Witness { player: Some(player), other, state: state.map(|s| m.state_name(s).to_string()), detail }
}

fn cell_text(m: &Structure, cell: Event) -> String {
    format!("{{{}}}", m.event_names(cell).join(", "))
}

/// Checks the structural assumptions A1 to A4 and that posteriors and priors
/// are probability measures.
pub fn validate(m: &Structure) -> ValidationReport {
    let mut a1 = Vec::new();
    let mut measure = Vec::new();
    for i in m.player_ids() {
        for (cell, mu) in m.partition(i).cells().iter().zip(m.posteriors(i)) {
            let first = cell.first();
            let off = mu.support().minus(*cell);
            if let Some(s) = off.first() {
                a1.push(witness(
                    m,
                    i,
                    None,
                    first,
                    format!(
                        "posterior on cell {} puts mass {} on `{}` outside the cell",
                        cell_text(m, *cell),
                        mu.get(s),
                        m.state_name(s)
                    ),
                ));
            }
            if let Some(s) = (0..m.n_states()).find(|&s| mu.get(s).is_negative()) {
                measure.push(witness(
                    m,
                    i,
                    None,
                    first,
                    format!("posterior on cell {} is negative at `{}`", cell_text(m, *cell), m.state_name(s)),
                ));
            }
            let total = mu.total();
            if !total.is_one() {
                measure.push(witness(
                    m,
                    i,
                    None,
                    first,
                    format!(
                        "posterior on cell {} has total mass {total}, not a probability measure",
                        cell_text(m, *cell)
                    ),
                ));
            }
        }
    }
    let mut checks = vec![
        Check::new("A1", "each posterior's sample space is the player's cell", a1),
        Check::new("measure", "each posterior is a probability measure", measure),
        Check::by_construction("A2", "posteriors are constant on cells (stored per cell)"),
        Check::by_construction("A3", "cell intersections are measurable (powerset algebras)"),
        Check::by_construction("A4", "proposition extensions within cells are measurable (powerset algebras)"),
    ];
    if let Some(priors) = m.priors() {
        let mut bad = Vec::new();
        for (i, nu) in m.player_ids().zip(priors) {
            if let Some(s) = (0..m.n_states()).find(|&s| nu.get(s).is_negative()) {
                bad.push(witness(m, i, None, Some(s), "prior is negative".into()));
            }
            if !nu.total().is_one() {
                bad.push(witness(m, i, None, None, format!("prior has total mass {}", nu.total())));
            }
        }
        checks.push(Check::new("priors", "each prior is a probability measure", bad));
    }
    ValidationReport { checks }
}

/// Checks the assumptions the ambiguous-information semantics rely on:
/// A5 always, A6 for `OutAi` and A6' for `InAi`, plus the presence of
/// priors that generate the posteriors.
pub fn validate_ai(m: &Structure, mode: Mode) -> Result<ValidationReport, ModelError> {
    let labels = m.cell_labels().ok_or(ModelError::MissingLabels)?;
    let interpreters: fn(&Structure, PlayerId) -> Vec<PlayerId> = match mode {
        Mode::OutAi => |m, _| m.player_ids().collect(),
        Mode::InAi => |_, i| vec![i],
        Mode::Out | Mode::In => return Err(ModelError::NotAiMode(mode.to_string())),
    };
    let ext = |j: PlayerId, f| m.propositional_extension(j, f);

    let mut a5 = Vec::new();
    for i in m.player_ids() {
        for (k, cell) in m.partition(i).cells().iter().enumerate() {
            let e = ext(i, &labels[i.index()][k])?;
            if e != *cell {
                a5.push(witness(
                    m,
                    i,
                    Some(i),
                    cell.first(),
                    format!(
                        "[[{}]]_{i} = {} but the cell is {}",
                        labels[i.index()][k],
                        cell_text(m, e),
                        cell_text(m, *cell)
                    ),
                ));
            }
        }
    }

    let mut a6 = Vec::new();
    for i in m.player_ids() {
        for j in interpreters(m, i) {
            let blocks: Vec<Event> =
                (0..m.n_states()).map(|s| ext(j, m.label(i, s).expect("labels present"))).collect::<Result<_, _>>()?;
            let mut failed = false;
            for (s, block) in blocks.iter().enumerate() {
                if !block.contains(s) {
                    let f = m.label(i, s).unwrap();
                    a6.push(witness(
                        m,
                        i,
                        Some(j),
                        Some(s),
                        format!("`{}` is not in [[{f}]]_{j} = {}", m.state_name(s), cell_text(m, *block)),
                    ));
                    failed = true;
                    break;
                }
            }
            if failed {
                continue;
            }
            'pairs: for (s, x) in blocks.iter().enumerate() {
                for (t, y) in blocks.iter().enumerate().skip(s + 1) {
                    if x != y && x.intersects(*y) {
                        let (fs, ft) = (m.label(i, s).unwrap(), m.label(i, t).unwrap());
                        a6.push(witness(
                            m,
                            i,
                            Some(j),
                            Some(s),
                            format!(
                                "[[{fs}]]_{j} = {} and [[{ft}]]_{j} = {} overlap without being equal",
                                cell_text(m, *x),
                                cell_text(m, *y)
                            ),
                        ));
                        break 'pairs;
                    }
                }
            }
        }
    }

    let mut priors = Vec::new();
    match m.priors() {
        None => priors.push(Witness { player: None, other: None, state: None, detail: "no priors given".into() }),
        Some(ps) => {
            let report = check_prior_generated(m, ps);
            for p in report.players.iter().filter(|p| !p.passed()) {
                priors.push(Witness {
                    player: Some(p.player),
                    other: None,
                    state: None,
                    detail: "priors do not generate the posteriors".into(),
                });
            }
        }
    }

    let (name, description) = match mode {
        Mode::OutAi => ("A6", "every player reads every player's cell labels as a partition containing each state"),
        _ => ("A6'", "every player reads their own cell labels as a partition containing each state"),
    };
    Ok(ValidationReport {
        checks: vec![
            Check::new("A5", "each cell is its label's extension for its owner", a5),
            Check::new(name, description, a6),
            Check::new("prior-generated", "explicit priors generate the posteriors", priors),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    #[test]
    fn bundled_fixtures_are_valid() {
        for name in ["atd", "example2", "critical", "no_equiv"] {
            let report = validate(&load(name));
            assert!(report.passed(), "{name}: {report:?}");
            assert_eq!(report.get("A3").unwrap().status, CheckStatus::ByConstruction);
        }
    }

    #[test]
    fn short_mass_is_reported() {
        let text = std::fs::read_to_string(format!("{}/examples/example2.json", env!("CARGO_MANIFEST_DIR"))).unwrap();
        let text = text.replacen(r#""w3": "1""#, r#""w3": "9/10""#, 1);
        let m = Structure::from_json_str(&text).unwrap();
        let report = validate(&m);
        let check = report.get("measure").unwrap();
        assert_eq!(check.status, CheckStatus::Fail);
        assert!(check.witnesses[0].detail.contains("9/10"));
        assert!(report.get("A1").unwrap().passed());
    }

    #[test]
    fn critical_fails_a6_but_not_a6_prime() {
        let m = load("critical");
        let out = validate_ai(&m, Mode::OutAi).unwrap();
        assert!(out.get("A5").unwrap().passed());
        let a6 = out.get("A6").unwrap();
        assert_eq!(a6.status, CheckStatus::Fail);
        let w = &a6.witnesses[0];
        assert_eq!((w.player, w.other, w.state.as_deref()), (Some(pl(1)), Some(pl(2)), Some("w12")));
        let inai = validate_ai(&m, Mode::InAi).unwrap();
        assert!(inai.passed(), "{inai:?}");
    }

    #[test]
    fn labels_required() {
        assert!(matches!(validate_ai(&load("no_equiv"), Mode::InAi), Err(ModelError::MissingLabels)));
    }
}
