//! Sparse exact row echelon forms over the rationals.
//!
//! Vectors are [`Lin`] combinations of ordered keys. Every stored row is
//! normalised to leading coefficient one at its largest key (its pivot), and
//! distinct rows have distinct pivots. Reduction eliminates every pivot key,
//! which makes [`Echelon::reduce`] a canonical projection onto the span of
//! the non-pivot keys.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::lin::{Lin, Q};

#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Lin<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, key: &K) -> bool {
        self.rows.contains_key(key)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Remove every pivot key from `v`, scanning from the largest key down.
    pub fn reduce(&self, v: &Lin<K>) -> Lin<K> {
        let mut out = v.clone();
        let mut bound: Option<K> = None;
        loop {
            let next = out
                .keys()
                .rev()
                .filter(|k| bound.as_ref().is_none_or(|b| *k < b))
                .find(|k| self.rows.contains_key(*k))
                .cloned();
            let Some(key) = next else { break };
            let c = out.coeff(&key);
            out.add_scaled(&self.rows[&key], &-c);
            bound = Some(key);
        }
        out
    }

    /// Only clear the leading key repeatedly; enough to test independence.
    fn reduce_leading(&self, v: &Lin<K>) -> Lin<K> {
        let mut out = v.clone();
        while let Some(key) = out.max_key().cloned() {
            match self.rows.get(&key) {
                Some(row) => {
                    let c = out.coeff(&key);
                    out.add_scaled(row, &-c);
                }
                None => break,
            }
        }
        out
    }

    /// Add `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: &Lin<K>) -> bool {
        let r = self.reduce_leading(v);
        let Some(pivot) = r.max_key().cloned() else { return false };
        let lead = r.coeff(&pivot);
        let row = r.scaled(&(Q::one() / lead));
        self.rows.insert(pivot, row);
        true
    }

    pub fn contains(&self, v: &Lin<K>) -> bool {
        self.reduce_leading(v).is_zero()
    }
}

/// Rank of a family of vectors.
pub fn rank<K: Ord + Clone>(vectors: &[Lin<K>]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// A basis of the relations `Σ c_j vectors[j] = 0`, as combinations of indices.
pub fn kernel<K: Ord + Clone>(vectors: &[Lin<K>]) -> Vec<Lin<usize>> {
    // Rows carry their combination history in a tagged key space.
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum Tag<K> {
        History(usize),
        Value(K),
    }
    let mut e: Echelon<Tag<K>> = Echelon::new();
    let mut out = Vec::new();
    for (j, v) in vectors.iter().enumerate() {
        let mut tagged: Lin<Tag<K>> = v.map_keys(|k| Some((Tag::Value(k.clone()), Q::one())));
        tagged.add_term(Tag::History(j), Q::one());
        let r = e.reduce_leading(&tagged);
        match r.max_key() {
            Some(Tag::Value(_)) => {
                e.insert(&r);
            }
            Some(Tag::History(_)) => {
                out.push(r.map_keys(|k| match k {
                    Tag::History(i) => Some((*i, Q::one())),
                    Tag::Value(_) => None,
                }));
            }
            None => {}
        }
    }
    out
}

/// Apply `Σ c_j vectors[j]` for a combination of indices.
pub fn combine<K: Ord + Clone>(vectors: &[Lin<K>], combo: &Lin<usize>) -> Lin<K> {
    let mut out = Lin::zero();
    for (j, c) in combo.iter() {
        if !c.is_zero() {
            out.add_scaled(&vectors[*j], c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lin::q;
    use proptest::prelude::*;

    fn vec_of(entries: &[i64]) -> Lin<usize> {
        entries.iter().enumerate().map(|(i, &c)| (i, q(c))).collect()
    }

    /// Oracle: dense fraction-exact Gaussian elimination.
    fn dense_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(rank, p);
            let pivot = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && !row[col].is_zero() {
                    let f = &row[col] / &pivot[col];
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x -= p * &f;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn reduce_is_canonical() {
        let mut e = Echelon::new();
        e.insert(&vec_of(&[1, 1, 0]));
        e.insert(&vec_of(&[0, 1, 1]));
        let a = e.reduce(&vec_of(&[0, 0, 1]));
        let b = e.reduce(&vec_of(&[1, 0, 0]));
        assert_eq!(a, b);
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&vec_of(&[1, 0, -1])));
    }

    proptest! {
        #[test]
        fn rank_matches_dense_oracle(rows in proptest::collection::vec(proptest::collection::vec(-2i64..3, 5), 0..7)) {
            let vs: Vec<Lin<usize>> = rows.iter().map(|r| vec_of(r)).collect();
            prop_assert_eq!(rank(&vs), dense_rank(&rows));
        }

        #[test]
        fn kernel_vectors_are_relations(rows in proptest::collection::vec(proptest::collection::vec(-2i64..3, 4), 0..7)) {
            let vs: Vec<Lin<usize>> = rows.iter().map(|r| vec_of(r)).collect();
            let ker = kernel(&vs);
            prop_assert_eq!(ker.len() + rank(&vs), vs.len());
            for k in &ker {
                prop_assert!(combine(&vs, k).is_zero());
            }
        }

        #[test]
        fn reduce_kills_span(rows in proptest::collection::vec(proptest::collection::vec(-2i64..3, 5), 1..5), coeffs in proptest::collection::vec(-3i64..4, 5)) {
            let vs: Vec<Lin<usize>> = rows.iter().map(|r| vec_of(r)).collect();
            let mut e = Echelon::new();
            for v in &vs { e.insert(v); }
            let mut combo = Lin::zero();
            for (v, c) in vs.iter().zip(coeffs.iter()) { combo.add_scaled(v, &q(*c)); }
            prop_assert!(e.reduce(&combo).is_zero());
        }
    }
}
