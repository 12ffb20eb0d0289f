//! Graded path-algebra arithmetic: words, elements, tensor powers, necklaces.
//!
//! Words read right-to-left. The word with letters `[x_1, …, x_k]` is the
//! composite `x_1 ∘ … ∘ x_k`, nonzero when `s(x_i) = t(x_{i+1})`; its source is
//! `s(x_k)` and its target `t(x_1)`. Elements of `A^{⊗k}` are [`Tensor`]s keyed
//! by `k` words; the `S`-bimodule structure on them is the outer one.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::lin::{Lin, Q};
use crate::quiver::Quiver;
use crate::sign::{koszul_sign, permute, rotation_sign};

/// A generator with its endpoints and degree baked in, so words can be
/// manipulated without a quiver at hand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub id: u32,
    pub source: u32,
    pub target: u32,
    pub degree: i64,
}

/// A path: either an idempotent `e_v` or a composable sequence of letters.
///
/// Words are ordered by length first and then lexicographically by letter id,
/// which is the order used for normal forms and necklace representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    source: u32,
    target: u32,
    degree: i64,
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| {
                let a = self.letters.iter().map(|l| l.id);
                let b = other.letters.iter().map(|l| l.id);
                a.cmp(b)
            })
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.target.cmp(&other.target))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn unit(vertex: u32) -> Word {
        Word { letters: Vec::new(), source: vertex, target: vertex, degree: 0 }
    }

    pub fn letter(l: Letter) -> Word {
        Word { letters: vec![l], source: l.source, target: l.target, degree: l.degree }
    }

    /// A nonempty composable sequence; `None` if some adjacent pair does not compose.
    pub fn from_letters(letters: Vec<Letter>) -> Option<Word> {
        let first = letters.first()?;
        let last = letters.last()?;
        if letters.windows(2).any(|w| w[0].source != w[1].target) {
            return None;
        }
        let (source, target) = (last.source, first.target);
        let degree = letters.iter().map(|l| l.degree).sum();
        Some(Word { letters, source, target, degree })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_unit(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn source(&self) -> u32 {
        self.source
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_closed(&self) -> bool {
        self.source == self.target
    }

    /// The composite `self ∘ other`, if `s(self) = t(other)`.
    pub fn mul(&self, other: &Word) -> Option<Word> {
        if self.source != other.target {
            return None;
        }
        if self.is_unit() {
            return Some(other.clone());
        }
        if other.is_unit() {
            return Some(self.clone());
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Some(Word { letters, source: other.source, target: self.target, degree: self.degree + other.degree })
    }

    /// The first `k` letters (`e_{t}` when `k = 0`).
    pub fn prefix(&self, k: usize) -> Word {
        if k == 0 {
            return Word::unit(self.target);
        }
        Word::from_letters(self.letters[..k].to_vec()).expect("subword of a path")
    }

    /// The letters from position `k` on (`e_{s}` when `k = len`).
    pub fn suffix(&self, k: usize) -> Word {
        if k == self.letters.len() {
            return Word::unit(self.source);
        }
        Word::from_letters(self.letters[k..].to_vec()).expect("subword of a path")
    }

    /// For a closed word `u v` with `|u| = k` letters, the rotation `v u`.
    pub fn rotate(&self, k: usize) -> Word {
        debug_assert!(self.is_closed());
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word::from_letters(letters).unwrap_or_else(|| self.clone())
    }

    pub fn letter_degrees(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.degree).collect()
    }
}

/// An element of the path algebra.
pub type NC = Lin<Word>;

/// An element of `A^{⊗k}`; each key holds `k` words.
pub type Tensor = Lin<Vec<Word>>;

pub fn nc_word(w: Word) -> NC {
    Lin::basis(w)
}

pub fn nc_letter(l: Letter) -> NC {
    Lin::basis(Word::letter(l))
}

pub fn nc_unit(v: u32) -> NC {
    Lin::basis(Word::unit(v))
}

/// The unit `1 = Σ e_i`.
pub fn nc_one(q: &Quiver) -> NC {
    (0..q.num_vertices() as u32).map(|v| (Word::unit(v), Q::one())).collect()
}

pub fn nc_mul(x: &NC, y: &NC) -> NC {
    let mut out = NC::zero();
    for (u, a) in x.iter() {
        for (v, b) in y.iter() {
            if let Some(w) = u.mul(v) {
                out.add_term(w, a * b);
            }
        }
    }
    out
}

/// `e_i x e_j`.
pub fn nc_block(x: &NC, target: u32, source: u32) -> NC {
    x.filter(|w| w.target() == target && w.source() == source)
}

/// The common degree of all terms, if there is one.
pub fn nc_degree(x: &NC) -> Option<i64> {
    let mut it = x.keys().map(Word::degree);
    let first = it.next()?;
    it.all(|d| d == first).then_some(first)
}

pub fn tensor_degree(key: &[Word]) -> i64 {
    key.iter().map(Word::degree).sum()
}

/// `x ⊗ y`.
pub fn tensor2(x: &NC, y: &NC) -> Tensor {
    let mut out = Tensor::zero();
    for (u, a) in x.iter() {
        for (v, b) in y.iter() {
            out.add_term(vec![u.clone(), v.clone()], a * b);
        }
    }
    out
}

/// `t ⊗ x`, appending a factor on the right.
pub fn tensor_append(t: &Tensor, x: &NC) -> Tensor {
    let mut out = Tensor::zero();
    for (k, a) in t.iter() {
        for (v, b) in x.iter() {
            let mut key = k.clone();
            key.push(v.clone());
            out.add_term(key, a * b);
        }
    }
    out
}

/// Outer left action: `w · (t_1 ⊗ … ⊗ t_k) = (w t_1) ⊗ … ⊗ t_k`.
pub fn outer_left(w: &Word, t: &Tensor) -> Tensor {
    t.map_keys(|k| {
        let first = w.mul(&k[0])?;
        let mut key = k.clone();
        key[0] = first;
        Some((key, Q::one()))
    })
}

/// Outer right action: `(t_1 ⊗ … ⊗ t_k) · w = t_1 ⊗ … ⊗ (t_k w)`.
pub fn outer_right(t: &Tensor, w: &Word) -> Tensor {
    t.map_keys(|k| {
        let last = k.last()?.mul(w)?;
        let mut key = k.clone();
        *key.last_mut().expect("nonempty key") = last;
        Some((key, Q::one()))
    })
}

/// Reorder tensor factors with the Koszul sign: the output has
/// `v_{perm[0]} ⊗ … ⊗ v_{perm[k-1]}`.
pub fn permute_tensor(t: &Tensor, perm: &[usize]) -> Tensor {
    t.map_keys(|k| {
        let degs: Vec<i64> = k.iter().map(Word::degree).collect();
        Some((permute(k, perm), Q::from_integer(koszul_sign(&degs, perm).into())))
    })
}

/// `τ(u ⊗ v) = (-1)^{|u||v|} v ⊗ u`.
pub fn tau(t: &Tensor) -> Tensor {
    permute_tensor(t, &[1, 0])
}

/// Multiply all factors in order.
pub fn tensor_mult(t: &Tensor) -> NC {
    t.map_keys(|k| {
        let mut w = k[0].clone();
        for f in &k[1..] {
            w = w.mul(f)?;
        }
        Some((w, Q::one()))
    })
}

/// Split a tensor of arity `k+1` into pairs `(first k factors, last factor)`.
pub fn tensor_split_last(t: &Tensor) -> Vec<(Vec<Word>, Word, Q)> {
    t.iter().map(|(k, c)| (k[..k.len() - 1].to_vec(), k[k.len() - 1].clone(), c.clone())).collect()
}

/// Canonical necklace representative of a word: the minimal rotation and the
/// sign relating the word to it. `None` when the class vanishes, which happens
/// for idempotents, open paths, and words equal to minus a rotation of themselves.
pub fn canonical_necklace(w: &Word) -> Option<(Word, i64)> {
    if w.is_unit() || !w.is_closed() {
        return None;
    }
    let degs = w.letter_degrees();
    let mut best: Option<(Word, i64)> = None;
    let mut conflict = false;
    for k in 0..w.len() {
        let r = w.rotate(k);
        // class(u v) = (-1)^{|u||v|} class(v u) with u the first k letters.
        let s = rotation_sign(&degs, k);
        match &best {
            None => best = Some((r, s)),
            Some((b, bs)) => match r.cmp(b) {
                Ordering::Less => {
                    best = Some((r, s));
                    conflict = false;
                }
                Ordering::Equal => {
                    if s != *bs {
                        conflict = true;
                    }
                }
                Ordering::Greater => {}
            },
        }
    }
    if conflict {
        return None;
    }
    best
}

/// An element of `A_♮ = A / (S + [A, A])`, stored on canonical necklaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cyclic(Lin<Word>);

impl Cyclic {
    pub fn zero() -> Cyclic {
        Cyclic(Lin::zero())
    }

    pub fn from_nc(x: &NC) -> Cyclic {
        Cyclic(x.map_keys(|w| canonical_necklace(w).map(|(r, s)| (r, Q::from_integer(s.into())))))
    }

    pub fn terms(&self) -> &Lin<Word> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// The representative lift `Σ c_k w_k` in `A`.
    pub fn lift(&self) -> NC {
        self.0.clone()
    }

    pub fn add(&self, other: &Cyclic) -> Cyclic {
        Cyclic(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Cyclic) -> Cyclic {
        Cyclic(&self.0 - &other.0)
    }

    pub fn scaled(&self, c: &Q) -> Cyclic {
        Cyclic(self.0.scaled(c))
    }
}

/// The class of `x` in `A_♮`.
pub fn to_cyclic(x: &NC) -> Cyclic {
    Cyclic::from_nc(x)
}

/// All words of exactly `len` letters (units when `len = 0`) over `letters`.
pub fn words_of_length(num_vertices: usize, letters: &[Letter], len: usize) -> Vec<Word> {
    if len == 0 {
        return (0..num_vertices as u32).map(Word::unit).collect();
    }
    let mut current: Vec<Word> = letters.iter().map(|&l| Word::letter(l)).collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for w in &current {
            for &l in letters {
                if let Some(x) = w.mul(&Word::letter(l)) {
                    next.push(x);
                }
            }
        }
        current = next;
    }
    current.sort();
    current
}

/// Whether `x` is zero; convenience for rational coefficients.
pub fn is_zero_q(c: &Q) -> bool {
    c.is_zero()
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::sample::Sampler;
    use crate::sign::swap_sign;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rotation_rule_holds_for_graded_words(seed in 0u64..500, k in 1usize..6) {
            let mut qv = Quiver::new(["0", "1"]).unwrap();
            qv.add_arrow("x", "0", "1", 1).unwrap();
            qv.add_arrow("y", "1", "0", 0).unwrap();
            qv.add_arrow("z", "0", "0", 1).unwrap();
            qv.add_arrow("u", "1", "1", 2).unwrap();
            let mut s = Sampler::new(seed);
            if let Some(word) = s.closed_word(&qv, 6) {
                let k = k % word.len().max(1);
                if k > 0 {
                    let u = word.prefix(k);
                    let v = word.suffix(k);
                    let lhs = to_cyclic(&nc_word(word.clone()));
                    let rhs = to_cyclic(&nc_word(v.mul(&u).unwrap()))
                        .scaled(&Q::from_integer(swap_sign(u.degree(), v.degree()).into()));
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
