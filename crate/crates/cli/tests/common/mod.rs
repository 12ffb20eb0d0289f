//! Independent brute-force oracles shared by the integration tests.
//!
//! The Connes oracle works on the free algebra over single-byte letters with
//! chains stored as byte strings. It builds the cyclic quotient from explicit
//! rotation orbits, applies the Hochschild differential entry by entry and
//! ranks the resulting sparse rational matrices by its own elimination.

#![allow(dead_code)]

use std::collections::BTreeMap;

use ncpoisson::Q;
use num_traits::Zero;

type Chain = Vec<Vec<u8>>;

/// Rank of a set of sparse rational rows.
pub fn rank(rows: Vec<BTreeMap<usize, Q>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Q>> = BTreeMap::new();
    for mut row in rows {
        while let Some((&lead, c)) = row.iter().next() {
            let c = c.clone();
            match pivots.get(&lead) {
                Some(p) => {
                    let factor = c / p[&lead].clone();
                    for (k, v) in p {
                        let e = row.entry(*k).or_insert_with(Q::zero);
                        *e -= &factor * v;
                        if e.is_zero() {
                            row.remove(k);
                        }
                    }
                }
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn compositions(letters: &[u8], slots: usize, weight: usize) -> Vec<Chain> {
    if slots == 0 {
        return if weight == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=weight {
        for w in words(letters, first) {
            for mut rest in compositions(letters, slots - 1, weight - first) {
                rest.insert(0, w.clone());
                out.push(rest);
            }
        }
    }
    out
}

fn words(letters: &[u8], len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.iter().flat_map(|w| letters.iter().map(move |l| [w.clone(), vec![*l]].concat())).collect();
    }
    out
}

fn tau(c: &Chain) -> (Chain, i64) {
    let n = c.len() - 1;
    let mut out = vec![c[n].clone()];
    out.extend_from_slice(&c[..n]);
    (out, if n.is_multiple_of(2) { 1 } else { -1 })
}

/// The class of a chain in the cyclic quotient: a sign and the smallest
/// chain of its orbit, or `None` when the orbit forces the class to vanish.
fn class(c: &Chain) -> Option<(i64, Chain)> {
    let mut orbit: Vec<(Chain, i64)> = vec![(c.clone(), 1)];
    loop {
        let (last, s) = orbit.last().unwrap().clone();
        let (next, t) = tau(&last);
        let sign = s * t;
        if let Some((_, s0)) = orbit.iter().find(|(x, _)| *x == next) {
            if *s0 != sign {
                return None;
            }
            break;
        }
        orbit.push((next, sign));
    }
    orbit.into_iter().min().map(|(x, s)| (s, x))
}

fn hochschild(c: &Chain) -> Vec<(Chain, i64)> {
    let n = c.len() - 1;
    let mut out = Vec::new();
    for i in 0..n {
        let mut d = c[..i].to_vec();
        d.push([c[i].clone(), c[i + 1].clone()].concat());
        d.extend_from_slice(&c[i + 2..]);
        out.push((d, if i % 2 == 0 { 1 } else { -1 }));
    }
    let mut d = vec![[c[n].clone(), c[0].clone()].concat()];
    d.extend_from_slice(&c[1..n]);
    out.push((d, if n.is_multiple_of(2) { 1 } else { -1 }));
    out
}

fn cyclic_basis(letters: &[u8], n: usize, weight: usize) -> Vec<Chain> {
    let mut out: Vec<Chain> = compositions(letters, n + 1, weight).iter().filter_map(class).map(|(_, c)| c).collect();
    out.sort();
    out.dedup();
    out
}

fn differential_rank(letters: &[u8], n: usize, weight: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let target: BTreeMap<Chain, usize> =
        cyclic_basis(letters, n - 1, weight).into_iter().enumerate().map(|(i, c)| (c, i)).collect();
    let rows = cyclic_basis(letters, n, weight)
        .iter()
        .map(|c| {
            let mut row: BTreeMap<usize, Q> = BTreeMap::new();
            for (d, s) in hochschild(c) {
                if let Some((t, chain)) = class(&d) {
                    let e = row.entry(target[&chain]).or_insert_with(Q::zero);
                    *e += Q::from_integer((s * t).into());
                }
            }
            row.retain(|_, v| !v.is_zero());
            row
        })
        .collect();
    rank(rows)
}

/// `dim HC_n` of the free algebra on `letters` in path-length weight `weight`.
pub fn free_cyclic_homology(letters: &[u8], n: usize, weight: usize) -> usize {
    cyclic_basis(letters, n, weight).len() - differential_rank(letters, n, weight) - differential_rank(letters, n + 1, weight)
}

/// Number of binary necklaces of length `len`, by the divisor-sum formula.
pub fn binary_necklaces(len: usize) -> usize {
    let phi = |d: usize| (1..=d).filter(|k| gcd(*k, d) == 1).count();
    (1..=len).filter(|d| len.is_multiple_of(*d)).map(|d| phi(d) << (len / d)).sum::<usize>() / len
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}
