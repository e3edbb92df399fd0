use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of a stage's atom list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elem(FixedBitSet);

impl Elem {
    pub fn empty(n: usize) -> Elem {
        Elem(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Elem {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        Elem(b)
    }

    pub fn singleton(n: usize, i: usize) -> Elem {
        let mut e = Elem::empty(n);
        e.insert(i);
        e
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Elem {
        let mut e = Elem::empty(n);
        for i in it {
            e.insert(i);
        }
        e
    }

    /// Bit `i` of `pattern` selects atom `i`.  Only for universes of at most
    /// 64 atoms.
    pub fn from_pattern(n: usize, pattern: u64) -> Elem {
        Elem::from_indices(n, (0..n.min(64)).filter(|i| pattern >> i & 1 == 1))
    }

    pub fn universe_size(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.0.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.is_empty() || self.is_full()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn union(&self, o: &Elem) -> Elem {
        let mut b = self.0.clone();
        b.union_with(&o.0);
        Elem(b)
    }

    pub fn inter(&self, o: &Elem) -> Elem {
        let mut b = self.0.clone();
        b.intersect_with(&o.0);
        Elem(b)
    }

    pub fn minus(&self, o: &Elem) -> Elem {
        let mut b = self.0.clone();
        b.difference_with(&o.0);
        Elem(b)
    }

    pub fn complement(&self) -> Elem {
        let mut b = self.0.clone();
        b.toggle_range(..);
        Elem(b)
    }

    pub fn is_subset(&self, o: &Elem) -> bool {
        self.0.is_subset(&o.0)
    }

    pub fn is_disjoint(&self, o: &Elem) -> bool {
        self.0.is_disjoint(&o.0)
    }

    pub fn union_with(&mut self, o: &Elem) {
        self.0.union_with(&o.0);
    }

    /// Low 64 atoms as an integer pattern.
    pub fn pattern(&self) -> u64 {
        self.ones().filter(|&i| i < 64).fold(0u64, |acc, i| acc | 1 << i)
    }

    /// Atom list as text `{0,3}`.
    pub fn indices_text(&self) -> String {
        let v: Vec<String> = self.ones().map(|i| i.to_string()).collect();
        format!("{{{}}}", v.join(","))
    }
}

impl Ord for Elem {
    /// Universe size, then cardinality, then the bit pattern read with the
    /// highest atom as most significant digit.
    fn cmp(&self, o: &Elem) -> Ordering {
        self.0
            .len()
            .cmp(&o.0.len())
            .then(self.len().cmp(&o.len()))
            .then_with(|| {
                let n = self.0.len();
                for i in (0..n).rev() {
                    match (self.0.contains(i), o.0.contains(i)) {
                        (true, false) => return Ordering::Greater,
                        (false, true) => return Ordering::Less,
                        _ => {}
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, o: &Elem) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.indices_text())
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.indices_text())
    }
}

/// All elements of the powerset over `n` atoms, in pattern order.
pub fn all_elements(n: usize) -> impl Iterator<Item = Elem> {
    assert!(n < 64, "powerset enumeration beyond 63 atoms");
    (0..(1u64 << n)).map(move |p| Elem::from_pattern(n, p))
}

/// All unions of the given disjoint blocks.
pub fn unions_of(n: usize, blocks: &[Elem]) -> impl Iterator<Item = Elem> + '_ {
    assert!(blocks.len() < 64);
    (0..(1u64 << blocks.len())).map(move |mask| {
        let mut e = Elem::empty(n);
        for (k, b) in blocks.iter().enumerate() {
            if mask >> k & 1 == 1 {
                e.union_with(b);
            }
        }
        e
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_ops() {
        let a = Elem::from_indices(4, [0, 1]);
        let b = Elem::from_indices(4, [1, 2]);
        assert_eq!(a.union(&b), Elem::from_indices(4, [0, 1, 2]));
        assert_eq!(a.inter(&b), Elem::singleton(4, 1));
        assert_eq!(a.complement(), Elem::from_indices(4, [2, 3]));
        assert!(Elem::empty(4).is_trivial());
        assert!(Elem::full(4).is_full());
    }

    #[test]
    fn order_prefers_small_then_low_atoms() {
        let u = Elem::singleton(2, 0);
        let v = Elem::singleton(2, 1);
        assert!(u < v);
        assert!(v < Elem::full(2));
        assert!(Elem::empty(2) < u);
    }

    #[test]
    fn block_unions() {
        let blocks = [Elem::from_indices(4, [0, 1]), Elem::from_indices(4, [2, 3])];
        let all: Vec<Elem> = unions_of(4, &blocks).collect();
        assert_eq!(all.len(), 4);
        assert!(all.contains(&Elem::full(4)));
    }
}
