use std::fmt;

/// A set of states of one structure, stored as a bitset over state indices.
///
/// Structures hold at most [`MAX_STATES`](super::MAX_STATES) states, so one
/// word suffices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Event(u64);

impl Event {
    pub const EMPTY: Event = Event(0);

    pub fn full(n: usize) -> Event {
        debug_assert!(n <= 64);
        if n == 64 {
            Event(u64::MAX)
        } else {
            Event((1u64 << n) - 1)
        }
    }

    pub fn singleton(state: usize) -> Event {
        Event(1u64 << state)
    }

    pub fn from_bits(bits: u64) -> Event {
        Event(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, state: usize) -> bool {
        self.0 >> state & 1 == 1
    }

    pub fn insert(&mut self, state: usize) {
        self.0 |= 1 << state;
    }

    pub fn remove(&mut self, state: usize) {
        self.0 &= !(1 << state);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    pub fn intersect(self, other: Event) -> Event {
        Event(self.0 & other.0)
    }

    pub fn minus(self, other: Event) -> Event {
        Event(self.0 & !other.0)
    }

    /// Complement within the first `n` states.
    pub fn complement(self, n: usize) -> Event {
        Event::full(n).minus(self)
    }

    pub fn is_subset(self, other: Event) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Event) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let s = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(s)
            }
        })
    }
}

impl FromIterator<usize> for Event {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut e = Event::EMPTY;
        for s in iter {
            e.insert(s);
        }
        e
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let a: Event = [0, 2, 5].into_iter().collect();
        let b: Event = [2, 3].into_iter().collect();
        assert_eq!(a.intersect(b), Event::singleton(2));
        assert_eq!(a.union(b).len(), 4);
        assert_eq!(a.minus(b).iter().collect::<Vec<_>>(), vec![0, 5]);
        assert_eq!(b.complement(4).iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(Event::singleton(2).is_subset(a));
        assert_eq!(Event::full(64).len(), 64);
        assert_eq!(a.first(), Some(0));
        assert_eq!(Event::EMPTY.first(), None);
    }
}
