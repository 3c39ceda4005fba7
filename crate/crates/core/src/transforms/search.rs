use std::collections::BTreeSet;
use std::ops::ControlFlow;

use indexmap::IndexMap;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{reads_viewpoint, TransformError};
use crate::model::{Distribution, Event, Partition, Structure, StructureParts};
use crate::rational::Rational;
use crate::semantics::{Evaluator, Mode};
use crate::syntax::{Formula, PlayerId, PropId};

/// The candidate class: common-prior structures with up to `max_states`
/// states whose prior is strictly positive with every value's denominator
/// at most `max_denominator`, any partitions, and any interpretations of
/// the probes' propositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_states: usize,
    pub max_denominator: i64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_states: 3, max_denominator: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub bounds: SearchBounds,
    pub priors: u64,
    /// Partial and complete assignments evaluated.
    pub nodes: u64,
    pub equivalent: u64,
    /// For each probe, how many partial assignments it ruled out first.
    pub rejected_by: IndexMap<String, u64>,
    /// False when the visitor stopped the search early.
    pub exhausted: bool,
}

/// All strictly positive distributions on `n` states whose values have
/// denominators at most `max_den`.
pub fn farey_priors(n: usize, max_den: i64) -> Vec<Vec<Rational>> {
    let mut values: BTreeSet<Rational> = BTreeSet::new();
    for d in 1..=max_den {
        for k in 1..=d {
            if k.gcd(&d) == 1 {
                values.insert(Rational::new(k, d));
            }
        }
    }
    let values: Vec<Rational> = values.into_iter().collect();
    let fits = |r: &Rational| r.is_positive() && r.denom() <= max_den.into();
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn go(
        n: usize,
        rest: Rational,
        values: &[Rational],
        fits: &dyn Fn(&Rational) -> bool,
        prefix: &mut Vec<Rational>,
        out: &mut Vec<Vec<Rational>>,
    ) {
        if prefix.len() + 1 == n {
            if fits(&rest) {
                let mut full = prefix.clone();
                full.push(rest);
                out.push(full);
            }
            return;
        }
        for v in values.iter().take_while(|v| **v < rest) {
            prefix.push(v.clone());
            go(n, &rest - v, values, fits, prefix, out);
            prefix.pop();
        }
    }
    if n > 0 {
        go(n, Rational::one(), &values, &fits, &mut prefix, &mut out);
    }
    out
}

/// All partitions of `n` states, from restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn go(pos: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        let n = rgs.len();
        if pos == n {
            let blocks = rgs.iter().max().map_or(0, |m| m + 1);
            let cells = (0..blocks).map(|b| (0..n).filter(|&s| rgs[s] == b).collect()).collect();
            out.push(Partition::new(n, cells).expect("growth strings give partitions"));
            return;
        }
        for b in 0..=max {
            rgs[pos] = b;
            go(pos + 1, max.max(b + 1), rgs, out);
        }
    }
    if n > 0 {
        go(1, 1, &mut rgs, &mut out);
    }
    out
}

/// One validity requirement: `probe` holds everywhere for `viewpoint`
/// (or for any viewpoint, when the probe cannot depend on it).
struct Constraint {
    probe: usize,
    viewpoint: Option<PlayerId>,
    deps: BTreeSet<PlayerId>,
}

/// Enumerates the candidate class for structures with as many players as
/// `target` that agree with `target` on which probes are valid under
/// innermost scope, calling `visit` on each.
///
/// Players are assigned one at a time. A probe's validity for a viewpoint
/// depends only on the players it mentions and, when it has a proposition
/// outside every modal operator, the viewpoint. Each such requirement is
/// checked as soon as those players are fixed, with the others left
/// trivial, which prunes most of the space.
pub fn search_cpa_equivalent(
    target: &Structure,
    probes: &[Formula],
    bounds: SearchBounds,
    visit: &mut dyn FnMut(&Structure) -> ControlFlow<()>,
) -> Result<SearchReport, TransformError> {
    let k = target.n_players();
    let mut required = Vec::new();
    {
        let mut ev = Evaluator::new(target, Mode::In)?;
        for f in probes {
            required.push(ev.valid(f)?);
        }
    }
    let props: Vec<PropId> = probes.iter().flat_map(|f| f.props()).collect::<BTreeSet<_>>().into_iter().collect();
    let players: Vec<PlayerId> = target.player_ids().collect();

    let mut constraints = Vec::new();
    for (c, f) in probes.iter().enumerate() {
        if !required[c] {
            continue;
        }
        let mentioned: BTreeSet<PlayerId> = f.players();
        if reads_viewpoint(f) {
            for &v in &players {
                let mut deps = mentioned.clone();
                deps.insert(v);
                constraints.push(Constraint { probe: c, viewpoint: Some(v), deps });
            }
        } else {
            constraints.push(Constraint { probe: c, viewpoint: None, deps: mentioned });
        }
    }
    constraints.sort_by_key(|c| c.deps.len());
    let mut order: Vec<PlayerId> = Vec::new();
    for c in &constraints {
        for p in &c.deps {
            if !order.contains(p) {
                order.push(*p);
            }
        }
    }
    for &p in &players {
        if !order.contains(&p) {
            order.push(p);
        }
    }
    // Constraints checked right after assigning order[level].
    let mut at_level: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (c, con) in constraints.iter().enumerate() {
        let level = con.deps.iter().map(|p| order.iter().position(|q| q == p).unwrap()).max().unwrap_or(0);
        at_level[level].push(c);
    }

    let mut report = SearchReport {
        bounds,
        priors: 0,
        nodes: 0,
        equivalent: 0,
        rejected_by: probes.iter().map(|f| (f.to_string(), 0)).collect(),
        exhausted: true,
    };

    for n in 1..=bounds.max_states {
        let partitions = set_partitions(n);
        let interps: Vec<Vec<Event>> = (0..1u64 << (n * props.len()))
            .map(|bits| (0..props.len()).map(|p| Event::from_bits((bits >> (p * n)) & ((1 << n) - 1))).collect())
            .collect();
        let options: Vec<(usize, usize)> =
            (0..partitions.len()).flat_map(|a| (0..interps.len()).map(move |b| (a, b))).collect();
        for values in farey_priors(n, bounds.max_denominator) {
            report.priors += 1;
            let nu = Distribution::new(values);
            let search = Search {
                n,
                k,
                nu: &nu,
                props: &props,
                probes,
                required: &required,
                constraints: &constraints,
                at_level: &at_level,
                order: &order,
                partitions: &partitions,
                interps: &interps,
                options: &options,
            };
            let mut chosen = vec![None; k];
            if search.descend(0, &mut chosen, &mut report, visit)?.is_break() {
                report.exhausted = false;
                return Ok(report);
            }
        }
    }
    Ok(report)
}

struct Search<'a> {
    n: usize,
    k: usize,
    nu: &'a Distribution,
    props: &'a [PropId],
    probes: &'a [Formula],
    required: &'a [bool],
    constraints: &'a [Constraint],
    at_level: &'a [Vec<usize>],
    order: &'a [PlayerId],
    partitions: &'a [Partition],
    interps: &'a [Vec<Event>],
    options: &'a [(usize, usize)],
}

impl Search<'_> {
    fn build(&self, chosen: &[Option<(usize, usize)>]) -> Structure {
        let n = self.n;
        let mut partitions = Vec::with_capacity(self.k);
        let mut interpretations = Vec::with_capacity(self.k);
        for c in chosen {
            match c {
                Some((a, b)) => {
                    partitions.push(self.partitions[*a].clone());
                    interpretations.push(self.interps[*b].clone());
                }
                None => {
                    partitions.push(Partition::trivial(n));
                    interpretations.push(vec![Event::EMPTY; self.props.len()]);
                }
            }
        }
        let posteriors = partitions
            .iter()
            .map(|p| p.cells().iter().map(|c| self.nu.condition(*c).expect("positive prior")).collect())
            .collect();
        Structure::from_parts(StructureParts {
            states: (1..=n).map(|s| format!("w{s}")).collect(),
            players: self.k,
            props: self.props.to_vec(),
            partitions,
            posteriors,
            interpretations,
            cell_labels: None,
            priors: Some(vec![self.nu.clone(); self.k]),
            signals: None,
        })
        .expect("candidate shapes are consistent")
    }

    fn descend(
        &self,
        level: usize,
        chosen: &mut Vec<Option<(usize, usize)>>,
        report: &mut SearchReport,
        visit: &mut dyn FnMut(&Structure) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, TransformError> {
        if level == self.k {
            let m = self.build(chosen);
            let mut ev = Evaluator::new(&m, Mode::In)?;
            for (c, f) in self.probes.iter().enumerate() {
                if !self.required[c] && ev.valid(f)? {
                    return Ok(ControlFlow::Continue(()));
                }
            }
            report.equivalent += 1;
            return Ok(visit(&m));
        }
        let player = self.order[level];
        let omega = Event::full(self.n);
        'options: for &option in self.options {
            chosen[player.index()] = Some(option);
            report.nodes += 1;
            if !self.at_level[level].is_empty() {
                let m = self.build(chosen);
                let mut ev = Evaluator::new(&m, Mode::In)?;
                for &c in &self.at_level[level] {
                    let con = &self.constraints[c];
                    let v = con.viewpoint.unwrap_or(player);
                    if ev.extension(&self.probes[con.probe], v)? != omega {
                        *report.rejected_by.get_index_mut(con.probe).unwrap().1 += 1;
                        continue 'options;
                    }
                }
            }
            if self.descend(level + 1, chosen, report, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        chosen[player.index()] = None;
        Ok(ControlFlow::Continue(()))
    }
}
