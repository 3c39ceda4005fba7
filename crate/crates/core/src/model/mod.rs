//! Finite epistemic probability structures.
//!
//! A [`Structure`] has a finite, ordered state space, an information
//! partition and a posterior measure per cell for every player, and a
//! per-player interpretation of the primitive propositions. Optional parts
//! are propositional cell labels, per-player priors and received signals.
//!
//! All σ-algebras are powersets of cells. Posteriors are stored per cell,
//! so a player's measure cannot vary within a cell.

mod event;
mod json;
mod priors;
mod reach;
mod validate;

use std::collections::HashMap;
use std::path::PathBuf;

use thiserror::Error;

use crate::rational::Rational;
use crate::syntax::{Formula, PlayerId, PropId};

pub use event::Event;
pub use json::ModelFile;
pub use priors::{
    check_cpa, check_prior_generated, find_common_prior, generate_priors, CellStatus, CpaClause, CpaReport, PriorCheck,
    PriorReport,
};
pub use reach::{reachable, reachable_components};
pub use validate::{validate, validate_ai, Check, CheckStatus, ValidationReport, Witness};

/// Largest supported state space.
pub const MAX_STATES: usize = 64;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("a structure needs at least one state")]
    NoStates,
    #[error("{0} states exceed the limit of {MAX_STATES}")]
    TooManyStates(usize),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("a structure needs at least one player")]
    NoPlayers,
    #[error("`{field}` lists {found} entries, expected one per player ({expected})")]
    PlayerCount { field: &'static str, expected: usize, found: usize },
    #[error("partition of player {player} is invalid: {detail}")]
    NotAPartition { player: PlayerId, detail: String },
    #[error("`{field}` of player {player} lists {found} cells, the partition has {expected}")]
    CellCount { field: &'static str, player: PlayerId, expected: usize, found: usize },
    #[error("invalid proposition name `{0}`")]
    BadProposition(String),
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("invalid rational `{text}`: {reason}")]
    BadRational { text: String, reason: String },
    #[error("cell label `{label}` of player {player}: {reason}")]
    BadLabel { player: PlayerId, label: String, reason: String },
    #[error("signals of state `{state}` list {found} players, expected {expected}")]
    SignalCount { state: String, expected: usize, found: usize },
    #[error("invalid signal name `{0}`")]
    BadSignal(String),
    #[error("player {0} is not in this structure")]
    UnknownPlayer(PlayerId),
    #[error("the structure has no priors")]
    MissingPriors,
    #[error("the structure has no cell labels")]
    MissingLabels,
    #[error("the structure has no signals")]
    MissingSignals,
    #[error("mode `{0}` is not an ambiguous-information mode")]
    NotAiMode(String),
    #[error("formula `{0}` is not propositional")]
    NotPropositional(String),
}

/// A measure over the states of a structure, one value per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distribution(Vec<Rational>);

impl Distribution {
    pub fn new(values: Vec<Rational>) -> Self {
        Distribution(values)
    }

    pub fn zeros(n: usize) -> Self {
        Distribution(vec![Rational::zero(); n])
    }

    pub fn point(n: usize, state: usize) -> Self {
        let mut d = Self::zeros(n);
        d.0[state] = Rational::one();
        d
    }

    /// Uniform over the members of `support`.
    pub fn uniform(n: usize, support: Event) -> Self {
        let w = Rational::new(1, support.len() as i64);
        Distribution((0..n).map(|s| if support.contains(s) { w.clone() } else { Rational::zero() }).collect())
    }

    pub fn get(&self, state: usize) -> &Rational {
        &self.0[state]
    }

    pub fn set(&mut self, state: usize, value: Rational) {
        self.0[state] = value;
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mass(&self, event: Event) -> Rational {
        event.iter().map(|s| &self.0[s]).sum()
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    /// States with nonzero value.
    pub fn support(&self) -> Event {
        self.0.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(s, _)| s).collect()
    }

    /// `self(· | given)`, or `None` when `given` has zero mass.
    pub fn condition(&self, given: Event) -> Option<Distribution> {
        let z = self.mass(given);
        if z.is_zero() {
            return None;
        }
        Some(Distribution(
            self.0.iter().enumerate().map(|(s, v)| if given.contains(s) { v / &z } else { Rational::zero() }).collect(),
        ))
    }
}

/// A player's information partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cells: Vec<Event>,
    cell_of: Vec<usize>,
}

impl Partition {
    /// Checks that `cells` are nonempty, pairwise disjoint and cover `n` states.
    pub fn new(n: usize, cells: Vec<Event>) -> Result<Self, String> {
        let mut cell_of = vec![usize::MAX; n];
        for (k, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(format!("cell {} is empty", k + 1));
            }
            for s in cell.iter() {
                if s >= n {
                    return Err(format!("cell {} mentions state index {s} outside the structure", k + 1));
                }
                if cell_of[s] != usize::MAX {
                    return Err(format!("state index {s} lies in cells {} and {}", cell_of[s] + 1, k + 1));
                }
                cell_of[s] = k;
            }
        }
        if let Some(s) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(format!("state index {s} is in no cell"));
        }
        Ok(Partition { cells, cell_of })
    }

    /// The partition with a single cell.
    pub fn trivial(n: usize) -> Self {
        Partition { cells: vec![Event::full(n)], cell_of: vec![0; n] }
    }

    /// The partition into singletons.
    pub fn discrete(n: usize) -> Self {
        Partition { cells: (0..n).map(Event::singleton).collect(), cell_of: (0..n).collect() }
    }

    pub fn cells(&self) -> &[Event] {
        &self.cells
    }

    pub fn cell_index(&self, state: usize) -> usize {
        self.cell_of[state]
    }

    pub fn cell(&self, state: usize) -> Event {
        self.cells[self.cell_of[state]]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Union of the cells that meet `event`.
    pub fn saturate(&self, event: Event) -> Event {
        self.cells.iter().filter(|c| c.intersects(event)).fold(Event::EMPTY, |acc, c| acc.union(*c))
    }
}

/// Signal received by each player at each state: `signals[state][player]`.
pub type Signals = Vec<Vec<Option<String>>>;

/// The reserved proposition for "player `i` received `signal`".
pub fn recv_prop(player: PlayerId, signal: &str) -> PropId {
    PropId::new(format!("recv_{player}_{signal}")).expect("signal names are identifier characters")
}

/// All the parts of a structure, before validation of their shapes.
#[derive(Debug, Clone)]
pub struct StructureParts {
    pub states: Vec<String>,
    pub players: usize,
    pub props: Vec<PropId>,
    pub partitions: Vec<Partition>,
    /// `posteriors[player][cell]`
    pub posteriors: Vec<Vec<Distribution>>,
    /// `interpretations[player][prop]` is the extension of the prop for that player.
    pub interpretations: Vec<Vec<Event>>,
    pub cell_labels: Option<Vec<Vec<Formula>>>,
    pub priors: Option<Vec<Distribution>>,
    pub signals: Option<Signals>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    states: Vec<String>,
    state_index: HashMap<String, usize>,
    players: usize,
    props: Vec<PropId>,
    prop_index: HashMap<PropId, usize>,
    partitions: Vec<Partition>,
    posteriors: Vec<Vec<Distribution>>,
    interpretations: Vec<Vec<Event>>,
    cell_labels: Option<Vec<Vec<Formula>>>,
    priors: Option<Vec<Distribution>>,
    signals: Option<Signals>,
}

impl Structure {
    /// Assembles a structure, checking shapes but not the probabilistic
    /// assumptions (see [`validate`]).
    pub fn from_parts(parts: StructureParts) -> Result<Self, ModelError> {
        let n = parts.states.len();
        if n == 0 {
            return Err(ModelError::NoStates);
        }
        if n > MAX_STATES {
            return Err(ModelError::TooManyStates(n));
        }
        if parts.players == 0 {
            return Err(ModelError::NoPlayers);
        }
        let mut state_index = HashMap::new();
        for (k, s) in parts.states.iter().enumerate() {
            if state_index.insert(s.clone(), k).is_some() {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        let players = parts.players;
        let count = |field: &'static str, found: usize| {
            if found == players {
                Ok(())
            } else {
                Err(ModelError::PlayerCount { field, expected: players, found })
            }
        };
        count("partitions", parts.partitions.len())?;
        count("posteriors", parts.posteriors.len())?;
        count("interpretations", parts.interpretations.len())?;
        let mut prop_index = HashMap::new();
        for (k, p) in parts.props.iter().enumerate() {
            prop_index.insert(p.clone(), k);
        }
        for i in 0..players {
            let player = PlayerId::from_index(i);
            let cells = parts.partitions[i].len();
            if parts.partitions[i].cell_of.len() != n {
                return Err(ModelError::NotAPartition { player, detail: "wrong number of states".into() });
            }
            if parts.posteriors[i].len() != cells {
                return Err(ModelError::CellCount {
                    field: "posteriors",
                    player,
                    expected: cells,
                    found: parts.posteriors[i].len(),
                });
            }
            if parts.posteriors[i].iter().any(|d| d.len() != n) {
                return Err(ModelError::NotAPartition {
                    player,
                    detail: "posterior over the wrong state count".into(),
                });
            }
            if parts.interpretations[i].len() != parts.props.len() {
                return Err(ModelError::PlayerCount {
                    field: "interpretations",
                    expected: parts.props.len(),
                    found: parts.interpretations[i].len(),
                });
            }
        }
        if let Some(labels) = &parts.cell_labels {
            count("cell_labels", labels.len())?;
            for (i, per_cell) in labels.iter().enumerate() {
                let player = PlayerId::from_index(i);
                let cells = parts.partitions[i].len();
                if per_cell.len() != cells {
                    return Err(ModelError::CellCount {
                        field: "cell_labels",
                        player,
                        expected: cells,
                        found: per_cell.len(),
                    });
                }
                for label in per_cell {
                    if !label.is_propositional() {
                        return Err(ModelError::BadLabel {
                            player,
                            label: label.to_string(),
                            reason: "not propositional".into(),
                        });
                    }
                    if let Some(p) = label.props().into_iter().find(|p| !prop_index.contains_key(p)) {
                        return Err(ModelError::BadLabel {
                            player,
                            label: label.to_string(),
                            reason: format!("unknown proposition `{p}`"),
                        });
                    }
                }
            }
        }
        if let Some(priors) = &parts.priors {
            count("priors", priors.len())?;
            if priors.iter().any(|d| d.len() != n) {
                return Err(ModelError::PlayerCount { field: "priors", expected: n, found: 0 });
            }
        }
        if let Some(signals) = &parts.signals {
            if signals.len() != n {
                return Err(ModelError::SignalCount { state: "<all>".into(), expected: n, found: signals.len() });
            }
            for (s, row) in signals.iter().enumerate() {
                if row.len() != players {
                    return Err(ModelError::SignalCount {
                        state: parts.states[s].clone(),
                        expected: players,
                        found: row.len(),
                    });
                }
            }
        }
        Ok(Structure {
            states: parts.states,
            state_index,
            players,
            props: parts.props,
            prop_index,
            partitions: parts.partitions,
            posteriors: parts.posteriors,
            interpretations: parts.interpretations,
            cell_labels: parts.cell_labels,
            priors: parts.priors,
            signals: parts.signals,
        })
    }

    /// A copy of the parts, for building modified structures.
    pub fn to_parts(&self) -> StructureParts {
        StructureParts {
            states: self.states.clone(),
            players: self.players,
            props: self.props.clone(),
            partitions: self.partitions.clone(),
            posteriors: self.posteriors.clone(),
            interpretations: self.interpretations.clone(),
            cell_labels: self.cell_labels.clone(),
            priors: self.priors.clone(),
            signals: self.signals.clone(),
        }
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_players(&self) -> usize {
        self.players
    }

    pub fn player_ids(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.players).map(PlayerId::from_index)
    }

    pub fn all_players(&self) -> crate::syntax::Group {
        self.player_ids().collect()
    }

    pub fn check_player(&self, player: PlayerId) -> Result<(), ModelError> {
        if player.index() < self.players {
            Ok(())
        } else {
            Err(ModelError::UnknownPlayer(player))
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.states[state]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn state(&self, name: &str) -> Result<usize, ModelError> {
        self.state_index(name).ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    /// The whole state space.
    pub fn omega(&self) -> Event {
        Event::full(self.states.len())
    }

    pub fn event_names(&self, event: Event) -> Vec<String> {
        event.iter().map(|s| self.states[s].clone()).collect()
    }

    pub fn props(&self) -> &[PropId] {
        &self.props
    }

    pub fn prop_index(&self, p: &PropId) -> Option<usize> {
        self.prop_index.get(p).copied()
    }

    pub fn partition(&self, player: PlayerId) -> &Partition {
        &self.partitions[player.index()]
    }

    /// `Π_i(ω)`.
    pub fn cell(&self, player: PlayerId, state: usize) -> Event {
        self.partitions[player.index()].cell(state)
    }

    pub fn posteriors(&self, player: PlayerId) -> &[Distribution] {
        &self.posteriors[player.index()]
    }

    /// `μ_{i,ω}`.
    pub fn posterior(&self, player: PlayerId, state: usize) -> &Distribution {
        let i = player.index();
        &self.posteriors[i][self.partitions[i].cell_index(state)]
    }

    /// `[[p]]_i`, or `None` for a proposition outside the vocabulary.
    pub fn prop_extension(&self, player: PlayerId, p: &PropId) -> Option<Event> {
        self.prop_index(p).map(|k| self.interpretations[player.index()][k])
    }

    /// Props true at `state` under `player`'s interpretation.
    pub fn true_props(&self, player: PlayerId, state: usize) -> Vec<&PropId> {
        self.props
            .iter()
            .zip(&self.interpretations[player.index()])
            .filter(|(_, e)| e.contains(state))
            .map(|(p, _)| p)
            .collect()
    }

    /// `[[f]]_i` for a propositional formula.
    pub fn propositional_extension(&self, player: PlayerId, f: &Formula) -> Result<Event, ModelError> {
        let n = self.n_states();
        Ok(match f {
            Formula::True => self.omega(),
            Formula::Prim(p) => {
                self.prop_extension(player, p).ok_or_else(|| ModelError::UnknownProposition(p.to_string()))?
            }
            Formula::Not(a) => self.propositional_extension(player, a)?.complement(n),
            Formula::And(a, b) => {
                self.propositional_extension(player, a)?.intersect(self.propositional_extension(player, b)?)
            }
            Formula::Or(a, b) => {
                self.propositional_extension(player, a)?.union(self.propositional_extension(player, b)?)
            }
            Formula::Implies(a, b) => {
                self.propositional_extension(player, a)?.complement(n).union(self.propositional_extension(player, b)?)
            }
            Formula::Iff(a, b) => {
                let (x, y) = (self.propositional_extension(player, a)?, self.propositional_extension(player, b)?);
                x.intersect(y).union(x.complement(n).intersect(y.complement(n)))
            }
            other => return Err(ModelError::NotPropositional(other.to_string())),
        })
    }

    /// True when every player interprets every proposition identically.
    pub fn is_common_interpretation(&self) -> bool {
        self.interpretations.windows(2).all(|w| w[0] == w[1])
    }

    pub fn cell_labels(&self) -> Option<&[Vec<Formula>]> {
        self.cell_labels.as_deref()
    }

    /// `φ_{i,ω}`: the label of the cell of `player` containing `state`.
    pub fn label(&self, player: PlayerId, state: usize) -> Option<&Formula> {
        let i = player.index();
        self.cell_labels.as_ref().map(|l| &l[i][self.partitions[i].cell_index(state)])
    }

    pub fn priors(&self) -> Option<&[Distribution]> {
        self.priors.as_deref()
    }

    pub fn prior(&self, player: PlayerId) -> Option<&Distribution> {
        self.priors.as_ref().map(|p| &p[player.index()])
    }

    pub fn signals(&self) -> Option<&Signals> {
        self.signals.as_ref()
    }

    /// `σ_{i,ω}`.
    pub fn signal(&self, player: PlayerId, state: usize) -> Option<&str> {
        self.signals.as_ref().and_then(|s| s[state][player.index()].as_deref())
    }

    /// Signal names in order of first appearance.
    pub fn signal_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for row in self.signals.iter().flatten() {
            for s in row.iter().flatten() {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn with_priors(&self, priors: Option<Vec<Distribution>>) -> Result<Structure, ModelError> {
        let mut parts = self.to_parts();
        parts.priors = priors;
        Structure::from_parts(parts)
    }

    pub fn with_cell_labels(&self, labels: Option<Vec<Vec<Formula>>>) -> Result<Structure, ModelError> {
        let mut parts = self.to_parts();
        parts.cell_labels = labels;
        Structure::from_parts(parts)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    //! Small structures built in code for unit tests.
    use super::*;

    pub fn load(name: &str) -> Structure {
        let path = format!("{}/examples/{name}.json", env!("CARGO_MANIFEST_DIR"));
        Structure::load(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
    }

    pub fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    pub fn pl(n: u16) -> PlayerId {
        PlayerId::new(n).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn partition_rejects_overlap_and_gaps() {
        assert!(Partition::new(3, vec![Event::from_bits(0b011), Event::from_bits(0b110)]).is_err());
        assert!(Partition::new(3, vec![Event::from_bits(0b011)]).is_err());
        assert!(Partition::new(3, vec![Event::from_bits(0b011), Event::EMPTY, Event::from_bits(0b100)]).is_err());
        let p = Partition::new(3, vec![Event::from_bits(0b101), Event::from_bits(0b010)]).unwrap();
        assert_eq!(p.cell(2), Event::from_bits(0b101));
        assert_eq!(p.saturate(Event::singleton(0)), Event::from_bits(0b101));
    }

    #[test]
    fn conditioning() {
        let d = Distribution::new(vec![r("1/4"), r("1/4"), r("1/2")]);
        let c = d.condition(Event::from_bits(0b011)).unwrap();
        assert_eq!(c.values(), &[r("1/2"), r("1/2"), r("0")]);
        assert!(Distribution::zeros(3).condition(Event::full(3)).is_none());
    }

    #[test]
    fn accessors_on_example2() {
        let m = load("example2");
        let w1 = m.state("w1").unwrap();
        assert_eq!(m.event_names(m.cell(pl(1), w1)), ["w1", "w2"]);
        assert_eq!(m.event_names(m.cell(pl(2), w1)), ["w1", "w3"]);
        assert!(m.is_common_interpretation());
        assert_eq!(m.signal(pl(1), w1), Some("s"));
        assert_eq!(m.signal_names(), ["s"]);
        let f = crate::syntax::parse("p & !q").unwrap();
        assert_eq!(m.event_names(m.propositional_extension(pl(1), &f).unwrap()), ["w2"]);
    }
}
