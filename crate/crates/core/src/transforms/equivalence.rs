use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::TransformError;
use crate::model::Structure;
use crate::semantics::{Evaluator, Mode};
use crate::syntax::{Formula, PlayerId};

/// A state together with the viewpoint that evaluates there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairPoint {
    pub state: usize,
    pub viewpoint: PlayerId,
}

/// Points of one structure matched with points of another.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pairing {
    pub pairs: Vec<(PairPoint, PairPoint)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTarget {
    pub state: String,
    pub viewpoint: PlayerId,
}

/// A pairing by names: left state, then left viewpoint, to the right point.
pub type PairingFile = IndexMap<String, IndexMap<String, PairTarget>>;

impl Pairing {
    /// Each point of `m` paired with itself.
    pub fn identity(m: &Structure) -> Self {
        Self::identity_for(m, m.player_ids())
    }

    /// Each state of `m` paired with itself, for the given viewpoints only.
    pub fn identity_for(m: &Structure, viewpoints: impl IntoIterator<Item = PlayerId>) -> Self {
        let viewpoints: Vec<PlayerId> = viewpoints.into_iter().collect();
        let pairs = viewpoints
            .iter()
            .flat_map(|&v| {
                (0..m.n_states())
                    .map(move |s| (PairPoint { state: s, viewpoint: v }, PairPoint { state: s, viewpoint: v }))
            })
            .collect();
        Pairing { pairs }
    }

    pub fn to_names(&self, left: &Structure, right: &Structure) -> PairingFile {
        let mut out: PairingFile = IndexMap::new();
        for (a, b) in &self.pairs {
            out.entry(left.state_name(a.state).to_string()).or_default().insert(
                a.viewpoint.to_string(),
                PairTarget { state: right.state_name(b.state).to_string(), viewpoint: b.viewpoint },
            );
        }
        out
    }

    pub fn from_names(file: &PairingFile, left: &Structure, right: &Structure) -> Result<Self, TransformError> {
        let mut pairs = Vec::new();
        for (state, targets) in file {
            let a = left.state(state)?;
            for (view, target) in targets {
                let viewpoint = view
                    .parse::<u16>()
                    .ok()
                    .and_then(PlayerId::new)
                    .ok_or_else(|| TransformError::Pairing(format!("`{view}` is not a player")))?;
                left.check_player(viewpoint)?;
                right.check_player(target.viewpoint)?;
                let b = right.state(&target.state)?;
                pairs.push((PairPoint { state: a, viewpoint }, PairPoint { state: b, viewpoint: target.viewpoint }));
            }
        }
        Ok(Pairing { pairs })
    }

    /// Every state of `m` appears on the left.
    pub fn is_total_on(&self, m: &Structure) -> bool {
        (0..m.n_states()).all(|s| self.pairs.iter().any(|(a, _)| a.state == s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub formula: Formula,
    pub left_state: String,
    pub left_viewpoint: PlayerId,
    pub left_value: bool,
    pub right_state: String,
    pub right_viewpoint: PlayerId,
    pub right_value: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub formulas_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<EquivalenceWitness>,
}

/// Compares truth at paired points for every formula of `family`, `left`
/// under `left_mode` and `right` under `right_mode`. Stops at the first
/// disagreement.
pub fn check_equivalent(
    left: &Structure,
    right: &Structure,
    pairing: &Pairing,
    left_mode: Mode,
    right_mode: Mode,
    family: &[Formula],
) -> Result<EquivalenceVerdict, TransformError> {
    if !pairing.is_total_on(left) {
        return Err(TransformError::Pairing("some state of the left structure is unpaired".into()));
    }
    check_equivalent_on(left, right, pairing, left_mode, right_mode, family)
}

/// [`check_equivalent`] restricted to the paired points, which need not
/// cover the left structure.
pub fn check_equivalent_on(
    left: &Structure,
    right: &Structure,
    pairing: &Pairing,
    left_mode: Mode,
    right_mode: Mode,
    family: &[Formula],
) -> Result<EquivalenceVerdict, TransformError> {
    let mut l = Evaluator::new(left, left_mode)?;
    let mut r = Evaluator::new(right, right_mode)?;
    for (k, f) in family.iter().enumerate() {
        for (a, b) in &pairing.pairs {
            let x = l.eval(f, a.state, a.viewpoint)?;
            let y = r.eval(f, b.state, b.viewpoint)?;
            if x != y {
                let witness = EquivalenceWitness {
                    formula: f.clone(),
                    left_state: left.state_name(a.state).to_string(),
                    left_viewpoint: a.viewpoint,
                    left_value: x,
                    right_state: right.state_name(b.state).to_string(),
                    right_viewpoint: b.viewpoint,
                    right_value: y,
                };
                return Ok(EquivalenceVerdict { equivalent: false, formulas_checked: k + 1, witness: Some(witness) });
            }
        }
    }
    Ok(EquivalenceVerdict { equivalent: true, formulas_checked: family.len(), witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::syntax::parse;
    use crate::transforms::{disjoint_copies, formula_family, mentions_knowledge, project_outermost};

    #[test]
    fn atd_contracts() {
        let m = load("atd");
        let family = formula_family(m.props(), m.n_players(), 2);
        let beliefs: Vec<Formula> = family.iter().filter(|f| !mentions_knowledge(f)).cloned().collect();
        let (c, pairing) = disjoint_copies(&m).unwrap();
        let verdict = check_equivalent(&m, &c, &pairing, Mode::In, Mode::In, &beliefs).unwrap();
        assert!(verdict.equivalent, "{verdict:?}");
        for i in m.player_ids() {
            let p = project_outermost(&m, i).unwrap();
            let pairing = Pairing::identity_for(&m, [i]);
            assert!(check_equivalent(&m, &p, &pairing, Mode::Out, Mode::In, &family).unwrap().equivalent);
        }
    }

    #[test]
    fn projection_is_not_inner_equivalent() {
        let m = load("atd");
        let family = formula_family(m.props(), m.n_players(), 1);
        let p = project_outermost(&m, pl(1)).unwrap();
        let verdict = check_equivalent(&m, &p, &Pairing::identity(&m), Mode::In, Mode::In, &family).unwrap();
        assert!(!verdict.equivalent);
        let w = verdict.witness.unwrap();
        assert_ne!(w.left_value, w.right_value);
    }

    #[test]
    fn copies_do_not_preserve_knowledge() {
        // Each copy's cell spans every copy, so the other copies' readings count.
        let m = load("atd");
        let (c, pairing) = disjoint_copies(&m).unwrap();
        let verdict = check_equivalent(&m, &c, &pairing, Mode::In, Mode::In, &[parse("K_1(p)").unwrap()]).unwrap();
        let w = verdict.witness.unwrap();
        assert!(w.left_value && !w.right_value);
    }

    #[test]
    fn names_round_trip() {
        let m = load("example2");
        let (c, pairing) = disjoint_copies(&m).unwrap();
        let names = pairing.to_names(&m, &c);
        assert_eq!(names["w2"]["2"].state, "w2_c2");
        let text = serde_json::to_string(&names).unwrap();
        let back: PairingFile = serde_json::from_str(&text).unwrap();
        let mut again = Pairing::from_names(&back, &m, &c).unwrap().pairs;
        let mut pairs = pairing.pairs.clone();
        let key = |(a, b): &(PairPoint, PairPoint)| (a.state, a.viewpoint, b.state, b.viewpoint);
        again.sort_by_key(key);
        pairs.sort_by_key(key);
        assert_eq!(again, pairs);
    }

    #[test]
    fn partial_pairing_is_rejected() {
        let m = load("example2");
        let pairing = Pairing { pairs: vec![] };
        assert!(check_equivalent(&m, &m, &pairing, Mode::In, Mode::In, &[]).is_err());
    }
}
