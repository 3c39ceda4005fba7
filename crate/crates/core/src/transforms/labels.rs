use std::collections::HashSet;

use super::{PairPoint, Pairing};
use crate::model::{
    check_prior_generated, generate_priors, reachable, Distribution, Event, ModelError, Partition, Structure,
    StructureParts,
};
use crate::rational::Rational;
use crate::syntax::{Formula, PropId};

/// Restricts `m` to the states reachable from `state` and labels every cell
/// with a fresh proposition `cell_i_k` that all players read as that cell.
///
/// The labels satisfy A5 and A6 by construction. Priors are kept, restricted
/// and renormalized, when they still generate the posteriors; otherwise
/// they are regenerated from the posteriors. The pairing is the identity on
/// the kept states.
pub fn add_cell_labels(m: &Structure, state: usize) -> Result<(Structure, Pairing), ModelError> {
    let keep = reachable(m, &m.all_players(), state);
    let kept: Vec<usize> = keep.iter().collect();
    let n = kept.len();
    let local =
        |e: Event| -> Event { kept.iter().enumerate().filter(|(_, s)| e.contains(**s)).map(|(k, _)| k).collect() };
    let restrict = |d: &Distribution| Distribution::new(kept.iter().map(|&s| d.get(s).clone()).collect());

    let mut taken: HashSet<PropId> = m.props().iter().cloned().collect();
    let mut props = m.props().to_vec();
    let mut partitions = Vec::new();
    let mut posteriors = Vec::new();
    let mut labels = Vec::new();
    let mut fresh_extensions = Vec::new();
    for i in m.player_ids() {
        let mut cells = Vec::new();
        let mut post = Vec::new();
        for (cell, mu) in m.partition(i).cells().iter().zip(m.posteriors(i)) {
            if cell.is_subset(keep) {
                cells.push(local(*cell));
                post.push(restrict(mu));
            }
        }
        let mut per_cell = Vec::new();
        for (k, cell) in cells.iter().enumerate() {
            let mut name = format!("cell_{i}_{}", k + 1);
            while taken.contains(&PropId::new(name.clone()).expect("identifier")) {
                name.push('_');
            }
            let p = PropId::new(name).expect("identifier");
            taken.insert(p.clone());
            props.push(p.clone());
            fresh_extensions.push(*cell);
            per_cell.push(Formula::Prim(p));
        }
        partitions.push(Partition::new(n, cells).expect("reachable sets are unions of cells"));
        posteriors.push(post);
        labels.push(per_cell);
    }

    let interpretations = m
        .player_ids()
        .map(|j| {
            m.props()
                .iter()
                .map(|p| local(m.prop_extension(j, p).expect("own vocabulary")))
                .chain(fresh_extensions.iter().copied())
                .collect()
        })
        .collect();
    let signals = m.signals().map(|sig| kept.iter().map(|&s| sig[s].clone()).collect());

    let mut out = Structure::from_parts(StructureParts {
        states: kept.iter().map(|&s| m.state_name(s).to_string()).collect(),
        players: m.n_players(),
        props,
        partitions,
        posteriors,
        interpretations,
        cell_labels: Some(labels),
        priors: None,
        signals,
    })?;

    let restricted = m.priors().and_then(|ps| {
        ps.iter()
            .map(|nu| {
                let d = restrict(nu);
                let total = d.total();
                (!total.is_zero()).then(|| Distribution::new(d.values().iter().map(|v| v / &total).collect()))
            })
            .collect::<Option<Vec<_>>>()
    });
    let usable = restricted.filter(|ps| {
        let report = check_prior_generated(&out, ps);
        report.passed && report.unconstrained == 0
    });
    let priors = match usable {
        Some(ps) => ps,
        None => generate_priors(&out),
    };
    debug_assert!(priors.iter().all(|p| p.total() == Rational::one()));
    out = out.with_priors(Some(priors))?;

    let pairs = m
        .player_ids()
        .flat_map(|j| {
            kept.iter()
                .enumerate()
                .map(move |(k, &s)| (PairPoint { state: s, viewpoint: j }, PairPoint { state: k, viewpoint: j }))
        })
        .collect();
    Ok((out, Pairing { pairs }))
}
