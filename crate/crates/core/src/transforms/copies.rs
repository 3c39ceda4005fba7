use std::collections::HashSet;

use super::{PairPoint, Pairing};
use crate::model::{Distribution, Event, ModelError, Partition, Structure, StructureParts, MAX_STATES};
use crate::rational::Rational;

/// One copy of the state space per player, with player `j`'s copy carrying
/// `j`'s interpretation and each player's beliefs living on their own copy.
///
/// Cells are the unions of all copies of the original cells. Copy `j` of
/// `ω` is index `j·|Ω| + ω` and is named `{ω}_c{j}`, with underscores
/// appended on a clash. Cell labels and signals are dropped. The pairing
/// maps `(ω, j)` to `(ω_j, j)`; in the output every viewpoint agrees.
pub fn disjoint_copies(m: &Structure) -> Result<(Structure, Pairing), ModelError> {
    let n = m.n_states();
    let k = m.n_players();
    let total = n * k;
    if total > MAX_STATES {
        return Err(ModelError::TooManyStates(total));
    }
    let copy = |j: usize, s: usize| j * n + s;
    let lift = |j: usize, e: Event| -> Event { e.iter().map(|s| copy(j, s)).collect() };
    let all_copies = |e: Event| -> Event { (0..k).fold(Event::EMPTY, |acc, j| acc.union(lift(j, e))) };

    let mut taken: HashSet<String> = HashSet::new();
    let mut states = Vec::with_capacity(total);
    for j in m.player_ids() {
        for name in m.states() {
            let mut candidate = format!("{name}_c{j}");
            while taken.contains(&candidate) {
                candidate.push('_');
            }
            taken.insert(candidate.clone());
            states.push(candidate);
        }
    }

    let mut partitions = Vec::with_capacity(k);
    let mut posteriors = Vec::with_capacity(k);
    for i in m.player_ids() {
        let cells: Vec<Event> = m.partition(i).cells().iter().map(|c| all_copies(*c)).collect();
        partitions.push(Partition::new(total, cells).expect("copies of a partition form a partition"));
        posteriors.push(
            m.posteriors(i)
                .iter()
                .map(|mu| {
                    let mut values = vec![Rational::zero(); total];
                    for s in 0..n {
                        values[copy(i.index(), s)] = mu.get(s).clone();
                    }
                    Distribution::new(values)
                })
                .collect(),
        );
    }

    let common: Vec<Event> = (0..m.props().len())
        .map(|p| {
            m.player_ids().fold(Event::EMPTY, |acc, j| {
                let e = m.prop_extension(j, &m.props()[p]).expect("own vocabulary");
                acc.union(lift(j.index(), e))
            })
        })
        .collect();

    let priors = m.priors().map(|ps| {
        ps.iter()
            .enumerate()
            .map(|(i, nu)| {
                let mut values = vec![Rational::zero(); total];
                for s in 0..n {
                    values[copy(i, s)] = nu.get(s).clone();
                }
                Distribution::new(values)
            })
            .collect()
    });

    let out = Structure::from_parts(StructureParts {
        states,
        players: k,
        props: m.props().to_vec(),
        partitions,
        posteriors,
        interpretations: vec![common; k],
        cell_labels: None,
        priors,
        signals: None,
    })?;
    let pairs = m
        .player_ids()
        .flat_map(|j| {
            (0..n).map(move |s| {
                (PairPoint { state: s, viewpoint: j }, PairPoint { state: copy(j.index(), s), viewpoint: j })
            })
        })
        .collect();
    Ok((out, Pairing { pairs }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_cpa;
    use crate::model::fixtures::*;
    use crate::semantics::{Evaluator, Mode};
    use crate::syntax::parse;

    #[test]
    fn atd_copies() {
        let (c, pairing) = disjoint_copies(&load("atd")).unwrap();
        assert_eq!(c.states(), &["w_c1".to_string(), "w_c2".to_string()]);
        assert!(c.is_common_interpretation());
        let p = c.props()[0].clone();
        assert_eq!(c.prop_extension(pl(1), &p), Some(Event::singleton(0)));
        assert_eq!(c.posterior(pl(1), 1).values(), &[r("1"), r("0")]);
        assert_eq!(c.posterior(pl(2), 0).values(), &[r("0"), r("1")]);
        let mut ev = Evaluator::new(&c, Mode::In).unwrap();
        assert!(ev.valid(&parse("CB_{1,2}(B_1(p) & B_2(!p))").unwrap()).unwrap());
        assert_eq!(pairing.pairs.len(), 2);
    }

    #[test]
    fn single_player_is_isomorphic() {
        let mut parts = load("atd").to_parts();
        parts.players = 1;
        parts.partitions.truncate(1);
        parts.posteriors.truncate(1);
        parts.interpretations.truncate(1);
        parts.cell_labels = None;
        parts.priors = None;
        let m = Structure::from_parts(parts).unwrap();
        let (c, _) = disjoint_copies(&m).unwrap();
        assert_eq!(c.n_states(), 1);
        assert_eq!(c.partition(pl(1)), m.partition(pl(1)));
        assert_eq!(c.posteriors(pl(1)), m.posteriors(pl(1)));
        assert_eq!(c.prop_extension(pl(1), &m.props()[0]), m.prop_extension(pl(1), &m.props()[0]));
    }

    #[test]
    fn copies_break_the_common_prior() {
        let m = load("example2");
        assert!(check_cpa(&m).unwrap().passed);
        let (c, _) = disjoint_copies(&m).unwrap();
        assert!(!check_cpa(&c).unwrap().passed);
    }

    #[test]
    fn names_stay_unique() {
        let mut parts = load("example2").to_parts();
        parts.states = vec!["a".into(), "a_c1".into(), "b".into()];
        let m = Structure::from_parts(parts).unwrap();
        let (c, _) = disjoint_copies(&m).unwrap();
        let names: HashSet<_> = c.states().iter().collect();
        assert_eq!(names.len(), 6);
    }
}
