use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::TransformError;
use crate::model::{recv_prop, Distribution, Event, Partition, Signals, Structure, StructureParts, MAX_STATES};
use crate::rational::Rational;
use crate::syntax::{Formula, PlayerId, PropId};

/// How other players read the signal propositions behind a player's labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelAmbiguity {
    /// Everyone reads them as the receiver does.
    #[default]
    None,
    /// Readings merge some of the receiver's signal cells, so the labels
    /// still partition the space for every reader.
    Coarsening,
    /// Each reading is, with even odds, an arbitrary set.
    Arbitrary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub states: (usize, usize),
    pub players: (usize, usize),
    pub props: (usize, usize),
    /// Chance that a player's truth value of a primitive proposition at a
    /// state differs from player 1's.
    pub ambiguity: Rational,
    /// One prior shared by all players; otherwise each draws their own.
    pub common_prior: bool,
    /// Partitions come from received signals, with `recv_i_σ` labels.
    pub with_signals: bool,
    pub label_ambiguity: LabelAmbiguity,
    /// Allow zero prior weight on states, keeping every cell positive.
    pub degenerate: bool,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            states: (2, 4),
            players: (2, 3),
            props: (1, 2),
            ambiguity: Rational::zero(),
            common_prior: true,
            with_signals: false,
            label_ambiguity: LabelAmbiguity::None,
            degenerate: false,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorConfig { seed, ..self.clone() }
    }

    pub fn check(&self) -> Result<(), TransformError> {
        let range = |name: &str, (lo, hi): (usize, usize), min: usize| {
            if lo > hi || lo < min {
                Err(TransformError::Config(format!("{name} range {lo}..{hi} is empty or below {min}")))
            } else {
                Ok(())
            }
        };
        range("state", self.states, 1)?;
        range("player", self.players, 1)?;
        range("proposition", self.props, 0)?;
        if self.states.1 > MAX_STATES {
            return Err(TransformError::Config(format!("at most {MAX_STATES} states")));
        }
        if self.players.1 > 16 {
            return Err(TransformError::Config("at most 16 players".into()));
        }
        if self.ambiguity.is_negative() || self.ambiguity > Rational::one() {
            return Err(TransformError::Config("ambiguity must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
const SIGNALS: [&str; 2] = ["a", "b"];

fn chance(rng: &mut ChaCha8Rng, p: &Rational) -> bool {
    if p.is_zero() {
        return false;
    }
    let num = p.numer().to_u64().expect("probabilities lie in [0, 1]");
    let den = p.denom().to_u64().expect("denominator fits in 64 bits");
    rng.gen_range(0..den) < num
}

fn subset(rng: &mut ChaCha8Rng, n: usize) -> Event {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// Groups states by key, in order of first appearance.
fn group_by<K: PartialEq>(keys: &[K]) -> Vec<Event> {
    let mut seen: Vec<&K> = Vec::new();
    let mut cells: Vec<Event> = Vec::new();
    for (s, k) in keys.iter().enumerate() {
        match seen.iter().position(|x| *x == k) {
            Some(c) => cells[c].insert(s),
            None => {
                seen.push(k);
                cells.push(Event::singleton(s));
            }
        }
    }
    cells
}

/// Integer weights turned into a distribution with every cell positive.
fn prior(rng: &mut ChaCha8Rng, n: usize, degenerate: bool, partitions: &[Partition]) -> Distribution {
    let low = if degenerate { 0 } else { 1 };
    let mut weights: Vec<i64> = (0..n).map(|_| rng.gen_range(low..=6)).collect();
    for part in partitions {
        for cell in part.cells() {
            if cell.iter().all(|s| weights[s] == 0) {
                weights[cell.first().unwrap()] = 1;
            }
        }
    }
    let total: i64 = weights.iter().sum();
    Distribution::new(weights.into_iter().map(|w| Rational::new(w, total)).collect())
}

/// A random structure, fully determined by the configuration.
///
/// Posteriors come from conditioning priors on cells and every cell has
/// positive prior mass, so the structure always validates, and with a
/// common prior it satisfies the common prior assumption.
pub fn random_structure(cfg: &GeneratorConfig) -> Result<Structure, TransformError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = rng.gen_range(cfg.states.0..=cfg.states.1);
    let k = rng.gen_range(cfg.players.0..=cfg.players.1);
    let np = rng.gen_range(cfg.props.0..=cfg.props.1);
    let players: Vec<PlayerId> = (0..k).map(PlayerId::from_index).collect();

    let mut props: Vec<PropId> = (0..np)
        .map(|c| PropId::new(NAMES.get(c).map(|s| s.to_string()).unwrap_or_else(|| format!("p{c}"))).unwrap())
        .collect();
    let first: Vec<Event> = (0..np).map(|_| subset(&mut rng, n)).collect();
    let mut interpretations: Vec<Vec<Event>> = players
        .iter()
        .map(|_| {
            first
                .iter()
                .map(|e| (0..n).filter(|&s| e.contains(s) != chance(&mut rng, &cfg.ambiguity)).collect())
                .collect()
        })
        .collect();
    interpretations[0] = first.clone();

    let mut signals: Option<Signals> = None;
    let mut cell_labels = None;
    let partitions: Vec<Partition> = if cfg.with_signals {
        let alphabet = &SIGNALS[..rng.gen_range(1..=SIGNALS.len())];
        let table: Signals = (0..n)
            .map(|_| {
                (0..k)
                    .map(|_| {
                        let c = rng.gen_range(0..=alphabet.len());
                        alphabet.get(c).map(|s| s.to_string())
                    })
                    .collect()
            })
            .collect();
        let appearing: Vec<&str> =
            alphabet.iter().copied().filter(|a| table.iter().flatten().any(|s| s.as_deref() == Some(*a))).collect();
        let owner_block =
            |i: usize, sig: &str| -> Event { (0..n).filter(|&s| table[s][i].as_deref() == Some(sig)).collect() };
        // recv_i_σ for every player and every appearing signal.
        for (i, &player) in players.iter().enumerate() {
            for sig in &appearing {
                props.push(recv_prop(player, sig));
                let own = owner_block(i, sig);
                let mut readings = vec![own; k];
                for (j, reading) in readings.iter_mut().enumerate() {
                    if j == i {
                        continue;
                    }
                    *reading = match cfg.label_ambiguity {
                        LabelAmbiguity::None => own,
                        LabelAmbiguity::Arbitrary if rng.gen_bool(0.5) => subset(&mut rng, n),
                        LabelAmbiguity::Arbitrary => own,
                        LabelAmbiguity::Coarsening => own,
                    };
                }
                for (j, reading) in readings.into_iter().enumerate() {
                    interpretations[j].push(reading);
                }
            }
        }
        if cfg.label_ambiguity == LabelAmbiguity::Coarsening {
            // Merge groups of one receiver's signal blocks for each reader.
            let base = np;
            for i in 0..k {
                let slots: Vec<usize> = (0..appearing.len()).map(|c| base + i * appearing.len() + c).collect();
                for j in (0..k).filter(|&j| j != i) {
                    let groups: Vec<usize> = slots.iter().map(|_| rng.gen_range(0..appearing.len())).collect();
                    let own: Vec<Event> = slots.iter().map(|&s| interpretations[i][s]).collect();
                    for (c, &slot) in slots.iter().enumerate() {
                        let merged = (0..slots.len())
                            .filter(|&d| groups[d] == groups[c])
                            .fold(Event::EMPTY, |acc, d| acc.union(own[d]));
                        interpretations[j][slot] = if own[c].is_empty() { Event::EMPTY } else { merged };
                    }
                }
            }
        }
        let mut parts = Vec::new();
        let mut labels = Vec::new();
        for i in 0..k {
            let keys: Vec<Option<&str>> = (0..n).map(|s| table[s][i].as_deref()).collect();
            let cells = group_by(&keys);
            labels.push(
                cells
                    .iter()
                    .map(|c| match keys[c.first().unwrap()] {
                        Some(sig) => Formula::Prim(recv_prop(players[i], sig)),
                        None => Formula::conjunction(
                            appearing.iter().map(|a| Formula::not(Formula::Prim(recv_prop(players[i], a)))),
                        ),
                    })
                    .collect::<Vec<_>>(),
            );
            parts.push(Partition::new(n, cells).expect("grouping covers every state once"));
        }
        signals = Some(table);
        cell_labels = Some(labels);
        parts
    } else {
        (0..k)
            .map(|_| {
                let keys: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                Partition::new(n, group_by(&keys)).expect("grouping covers every state once")
            })
            .collect()
    };

    let priors: Vec<Distribution> = if cfg.common_prior {
        vec![prior(&mut rng, n, cfg.degenerate, &partitions); k]
    } else {
        (0..k).map(|_| prior(&mut rng, n, cfg.degenerate, &partitions)).collect()
    };
    let posteriors = partitions
        .iter()
        .zip(&priors)
        .map(|(part, nu)| part.cells().iter().map(|c| nu.condition(*c).expect("cells have positive mass")).collect())
        .collect();

    let structure = Structure::from_parts(StructureParts {
        states: (1..=n).map(|s| format!("w{s}")).collect(),
        players: k,
        props,
        partitions,
        posteriors,
        interpretations,
        cell_labels,
        priors: Some(priors),
        signals,
    })?;
    Ok(structure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_cpa, validate, validate_ai};
    use crate::semantics::Mode;

    #[test]
    fn seed_one_is_a_cpa_structure() {
        let m = random_structure(&GeneratorConfig::default().with_seed(1)).unwrap();
        assert!(validate(&m).passed());
        assert!(check_cpa(&m).unwrap().passed);
    }

    #[test]
    fn deterministic() {
        let cfg = GeneratorConfig { ambiguity: Rational::new(1, 3), with_signals: true, ..GeneratorConfig::default() };
        for seed in 0..20 {
            let a = random_structure(&cfg.with_seed(seed)).unwrap().to_json_string();
            let b = random_structure(&cfg.with_seed(seed)).unwrap().to_json_string();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn no_ambiguity_means_common_interpretation() {
        for seed in 0..50 {
            let m = random_structure(&GeneratorConfig::default().with_seed(seed)).unwrap();
            assert!(m.is_common_interpretation());
        }
    }

    #[test]
    fn label_modes_meet_their_assumptions() {
        for (mode, check, ai) in [
            (LabelAmbiguity::None, "A6", Mode::OutAi),
            (LabelAmbiguity::Coarsening, "A6", Mode::OutAi),
            (LabelAmbiguity::Arbitrary, "A6'", Mode::InAi),
        ] {
            let cfg = GeneratorConfig { with_signals: true, label_ambiguity: mode, ..GeneratorConfig::default() };
            let mut ambiguous = 0;
            for seed in 0..100 {
                let m = random_structure(&cfg.with_seed(seed)).unwrap();
                assert!(validate(&m).passed());
                let report = validate_ai(&m, ai).unwrap();
                assert!(report.passed(), "{mode:?} seed {seed}: {report:?}");
                assert!(report.get("A5").is_some() && report.get(check).is_some());
                ambiguous += usize::from(!m.is_common_interpretation());
            }
            assert_eq!(ambiguous > 0, mode != LabelAmbiguity::None, "{mode:?}");
        }
    }

    #[test]
    fn degenerate_priors_keep_cells_positive() {
        let cfg =
            GeneratorConfig { degenerate: true, common_prior: false, states: (3, 6), ..GeneratorConfig::default() };
        let mut zeros = 0;
        for seed in 0..100 {
            let m = random_structure(&cfg.with_seed(seed)).unwrap();
            assert!(validate(&m).passed());
            zeros += m.priors().unwrap().iter().filter(|p| p.values().iter().any(Rational::is_zero)).count();
        }
        assert!(zeros > 0);
    }

    #[test]
    fn bad_ranges() {
        let cfg = GeneratorConfig { states: (3, 2), ..GeneratorConfig::default() };
        assert!(random_structure(&cfg).is_err());
        let cfg = GeneratorConfig { ambiguity: Rational::new(3, 2), ..GeneratorConfig::default() };
        assert!(random_structure(&cfg).is_err());
    }
}
