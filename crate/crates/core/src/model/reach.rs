use super::{Event, Structure};
use crate::syntax::Group;

/// `R_G(ω)`: the states reachable from `state` by moving within the
/// partition cells of players in `group`.
pub fn reachable(m: &Structure, group: &Group, state: usize) -> Event {
    let mut seen = Event::singleton(state);
    let mut frontier = seen;
    while !frontier.is_empty() {
        let mut next = Event::EMPTY;
        for s in frontier.iter() {
            for &i in group {
                next = next.union(m.cell(i, s));
            }
        }
        frontier = next.minus(seen);
        seen = seen.union(next);
    }
    seen
}

/// The classes of `R_G`, in order of their first state.
pub fn reachable_components(m: &Structure, group: &Group) -> Vec<Event> {
    let mut out = Vec::new();
    let mut covered = Event::EMPTY;
    for s in 0..m.n_states() {
        if !covered.contains(s) {
            let r = reachable(m, group, s);
            covered = covered.union(r);
            out.push(r);
        }
    }
    out
}
