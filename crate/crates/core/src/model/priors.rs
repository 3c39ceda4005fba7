use serde::{Deserialize, Serialize};

use super::{reachable_components, Distribution, ModelError, Structure};
use crate::rational::Rational;
use crate::syntax::PlayerId;

/// Priors from posteriors: every cell of player `i` gets weight `1/N_i`,
/// spread according to the cell's posterior, so `ν_i(ω) = μ_{i,ω}(ω) / N_i`.
pub fn generate_priors(m: &Structure) -> Vec<Distribution> {
    m.player_ids()
        .map(|i| {
            let part = m.partition(i);
            let weight = Rational::new(1, part.len() as i64);
            Distribution::new((0..m.n_states()).map(|s| &weight * m.posterior(i, s).get(s)).collect())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    /// Conditioning the prior on the cell gives the stored posterior.
    Consistent,
    /// The first state where the conditional and the posterior differ.
    Mismatch { state: String, conditional: Rational, posterior: Rational },
    /// The cell has prior mass zero, so the posterior is unconstrained.
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCheck {
    pub cell: Vec<String>,
    pub mass: Rational,
    pub status: CellStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorCheck {
    pub player: PlayerId,
    pub cells: Vec<CellCheck>,
}

impl PriorCheck {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| !matches!(c.status, CellStatus::Mismatch { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorReport {
    pub passed: bool,
    pub unconstrained: usize,
    pub players: Vec<PriorCheck>,
}

/// Checks `μ_{i,ω} = ν_i(· | Π_i(ω))` on every cell of positive prior mass.
pub fn check_prior_generated(m: &Structure, priors: &[Distribution]) -> PriorReport {
    let mut players = Vec::new();
    for (i, nu) in m.player_ids().zip(priors) {
        let mut cells = Vec::new();
        for (cell, mu) in m.partition(i).cells().iter().zip(m.posteriors(i)) {
            let mass = nu.mass(*cell);
            let status = match nu.condition(*cell) {
                None => CellStatus::Unconstrained,
                Some(cond) => match (0..m.n_states()).find(|&s| cond.get(s) != mu.get(s)) {
                    None => CellStatus::Consistent,
                    Some(s) => CellStatus::Mismatch {
                        state: m.state_name(s).to_string(),
                        conditional: cond.get(s).clone(),
                        posterior: mu.get(s).clone(),
                    },
                },
            };
            cells.push(CellCheck { cell: m.event_names(*cell), mass, status });
        }
        players.push(PriorCheck { player: i, cells });
    }
    let unconstrained = players.iter().flat_map(|p| &p.cells).filter(|c| c.status == CellStatus::Unconstrained).count();
    PriorReport { passed: players.iter().all(PriorCheck::passed), unconstrained, players }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpaClause {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpaReport {
    pub passed: bool,
    pub clauses: Vec<CpaClause>,
}

impl CpaReport {
    pub fn clause(&self, name: &str) -> Option<&CpaClause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

/// The common prior assumption: one prior, shared by all players, generates
/// every posterior and gives each `R_N(ω)` positive mass.
pub fn check_cpa(m: &Structure) -> Result<CpaReport, ModelError> {
    let priors = m.priors().ok_or(ModelError::MissingPriors)?;
    let nu = &priors[0];
    let mut clauses = Vec::new();

    let differ = m.player_ids().zip(priors).skip(1).find_map(|(j, nj)| {
        (0..m.n_states()).find(|&s| nj.get(s) != nu.get(s)).map(|s| {
            format!("priors differ: ν_1({w}) = {} but ν_{j}({w}) = {}", nu.get(s), nj.get(s), w = m.state_name(s))
        })
    });
    clauses.push(CpaClause { name: "identical-priors".into(), passed: differ.is_none(), failure: differ });

    let report = check_prior_generated(m, &vec![nu.clone(); m.n_players()]);
    let mismatch = report.players.iter().find_map(|p| {
        p.cells.iter().find_map(|c| match &c.status {
            CellStatus::Mismatch { state, conditional, posterior } => Some(format!(
                "ν_1 conditioned on player {}'s cell {{{}}} gives {conditional} at `{state}`, the posterior is {posterior}",
                p.player,
                c.cell.join(", ")
            )),
            _ => None,
        })
    });
    clauses.push(CpaClause { name: "prior-generated".into(), passed: mismatch.is_none(), failure: mismatch });

    let null = reachable_components(m, &m.all_players())
        .into_iter()
        .find(|r| nu.mass(*r).is_zero())
        .map(|r| format!("ν(R_N({})) = 0", m.state_name(r.first().unwrap())));
    clauses.push(CpaClause { name: "positive-reachable-mass".into(), passed: null.is_none(), failure: null });

    Ok(CpaReport { passed: clauses.iter().all(|c| c.passed), clauses })
}

/// A common prior for the posteriors of `m`, if any exists.
///
/// On a cell `C` of player `i` a generating prior must equal `t·μ_C` for a
/// scale `t ≥ 0`. States tie the scales of the cells containing them, so
/// the scales are solved by propagation: a state some posterior ignores
/// forces zero on every cell that weighs it, and a connected group of cells
/// whose ratios are inconsistent around a cycle must be zero as a whole.
/// The surviving groups are independent; each gets the same total mass.
/// Returns `None` when some `R_N(ω)` is left with no mass.
pub fn find_common_prior(m: &Structure) -> Option<Distribution> {
    let n = m.n_states();
    // Cells as nodes, numbered player by player.
    let mut offset = Vec::new();
    let mut count = 0;
    for i in m.player_ids() {
        offset.push(count);
        count += m.partition(i).len();
    }
    let node = |i: PlayerId, s: usize| offset[i.index()] + m.partition(i).cell_index(s);
    // For each state, the (cell, posterior weight) of every player.
    let touching: Vec<Vec<(usize, Rational)>> =
        (0..n).map(|s| m.player_ids().map(|i| (node(i, s), m.posterior(i, s).get(s).clone())).collect()).collect();

    let mut zero = vec![false; count];
    let scale = loop {
        loop {
            let mut changed = false;
            for row in &touching {
                if row.iter().any(|(c, w)| w.is_zero() || zero[*c]) {
                    for (c, w) in row {
                        if !w.is_zero() && !zero[*c] {
                            zero[*c] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut scale: Vec<Option<Rational>> = vec![None; count];
        let mut group = vec![usize::MAX; count];
        let mut groups = 0;
        let mut conflict = None;
        'roots: for root in 0..count {
            if zero[root] || scale[root].is_some() {
                continue;
            }
            scale[root] = Some(Rational::one());
            group[root] = groups;
            let mut stack = vec![root];
            while let Some(a) = stack.pop() {
                let ta = scale[a].clone().unwrap();
                for row in touching.iter().filter(|row| row.iter().any(|(c, _)| *c == a)) {
                    let wa = &row.iter().find(|(c, _)| *c == a).unwrap().1;
                    let mass = &ta * wa;
                    for (b, wb) in row {
                        let tb = &mass / wb;
                        match &scale[*b] {
                            Some(t) if *t != tb => {
                                conflict = Some(groups);
                                break 'roots;
                            }
                            Some(_) => {}
                            None => {
                                scale[*b] = Some(tb);
                                group[*b] = groups;
                                stack.push(*b);
                            }
                        }
                    }
                }
            }
            groups += 1;
        }
        match conflict {
            Some(g) => {
                for c in 0..count {
                    if group[c] == g {
                        zero[c] = true;
                    }
                }
            }
            None => break (scale, group, groups),
        }
    };
    let (scale, group, groups) = scale;
    let mut values = vec![Rational::zero(); n];
    let mut totals = vec![Rational::zero(); groups];
    let mut state_group = vec![usize::MAX; n];
    for (s, row) in touching.iter().enumerate() {
        let (c, w) = &row[0];
        if let Some(t) = &scale[*c] {
            values[s] = t * w;
            totals[group[*c]] = &totals[group[*c]] + &values[s];
            state_group[s] = group[*c];
        }
    }
    let share = Rational::new(1, groups.max(1) as i64);
    for s in 0..n {
        if state_group[s] != usize::MAX {
            values[s] = &(&values[s] / &totals[state_group[s]]) * &share;
        }
    }
    let nu = Distribution::new(values);
    let covered = reachable_components(m, &m.all_players()).into_iter().all(|r| !nu.mass(r).is_zero());
    covered.then_some(nu)
}
